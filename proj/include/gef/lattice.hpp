#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gef/rng.hpp"

namespace gef {

// Perturbed lattice {ω + ζ_ω}_{ω∈ℤ²}: |ζ_ω| has tail P{|ζ_ω| > t} = e^{-t^ν},
// the angle is uniform.
struct LatticeConfig {
  double nu = 2.0;
  double R_max = 8.0;
  SeedLineage lineage{};
  bool zero_displacement = false;  // test hook: ζ_ω = 0
};

struct LatticePoint {
  double x = 0.0;
  double y = 0.0;
};

// (log(size · 1e9))^{1/ν}, with size the number of lattice sites in the
// square [-⌈R_max⌉, ⌈R_max⌉]².
double lattice_margin(double nu, double R_max);

// Inverse CDF of the displacement modulus: (-log u)^{1/ν}.
double displacement_modulus(double nu, double u);

// Points for every ω with |ω| ≤ R_max + margin, in row-major order of ω.
// Requires ν > 0 and 0 ≤ R_max ≤ 64.
std::vector<LatticePoint> sample_perturbed_lattice(const LatticeConfig& config);

// #{points with modulus ≤ R}.
int lattice_count(const std::vector<LatticePoint>& points, double R);

// n(R) for samples first..first+count-1.
std::vector<int> lattice_counts(double nu, double R, std::uint64_t seed, std::uint64_t first, std::uint64_t count,
                                int threads = 0);

// "x,y" rows with a header line.
void write_points_csv(std::ostream& os, const std::vector<LatticePoint>& points);

}  // namespace gef
