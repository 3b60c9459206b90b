#include "gef/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "gef/errors.hpp"
#include "gef/parallel/kernels.hpp"

namespace gef {

double lattice_margin(double nu, double R_max) {
  const double side = 2.0 * std::ceil(R_max) + 1.0;
  return std::pow(std::log(side * side * 1e9), 1.0 / nu);
}

double displacement_modulus(double nu, double u) { return std::pow(-std::log(u), 1.0 / nu); }

std::vector<LatticePoint> sample_perturbed_lattice(const LatticeConfig& config) {
  if (!(config.nu > 0.0)) throw PreconditionError("lattice requires nu > 0");
  if (!(config.R_max >= 0.0 && config.R_max <= 64.0)) throw PreconditionError("lattice requires 0 <= R_max <= 64");
  const double reach = config.R_max + lattice_margin(config.nu, config.R_max);
  const auto extent = static_cast<int>(std::floor(reach));
  CounterStream stream(config.lineage.with_stream(StreamTag::lattice));
  std::vector<LatticePoint> points;
  for (int i = -extent; i <= extent; ++i) {
    for (int j = -extent; j <= extent; ++j) {
      if (std::hypot(i, j) > reach) continue;
      LatticePoint p{static_cast<double>(i), static_cast<double>(j)};
      if (!config.zero_displacement) {
        const double t = displacement_modulus(config.nu, stream.uniform_positive());
        const double theta = 2.0 * std::numbers::pi * stream.uniform();
        p.x += t * std::cos(theta);
        p.y += t * std::sin(theta);
      }
      points.push_back(p);
    }
  }
  return points;
}

int lattice_count(const std::vector<LatticePoint>& points, double R) {
  int n = 0;
  for (const auto& p : points) n += std::hypot(p.x, p.y) <= R ? 1 : 0;
  return n;
}

std::vector<int> lattice_counts(double nu, double R, std::uint64_t seed, std::uint64_t first, std::uint64_t count,
                                int threads) {
  return map_samples<int>(first, count, threads, [&](std::uint64_t idx) {
    LatticeConfig cfg{nu, R, SeedLineage{seed, idx, 0}, false};
    return lattice_count(sample_perturbed_lattice(cfg), R);
  });
}

void write_points_csv(std::ostream& os, const std::vector<LatticePoint>& points) {
  os << "x,y\n";
  char buf[64];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
    os << buf;
  }
}

}  // namespace gef
