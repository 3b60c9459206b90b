#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "gef/errors.hpp"
#include "gef/lattice.hpp"
#include "gef/stats.hpp"

using namespace gef;

TEST_SUITE("lattice_baseline") {

TEST_CASE("degenerate lattice") {
  const auto pts = sample_perturbed_lattice({2.0, 3.0, SeedLineage{}, true});
  CHECK(lattice_count(pts, 1.5) == 9);
  CHECK(lattice_count(pts, 1.0) == 5);
  CHECK(lattice_count(pts, 0.0) == 1);
}

TEST_CASE("displacement law") {
  CHECK(displacement_modulus(2.0, 0.5) == doctest::Approx(std::sqrt(std::log(2.0))).epsilon(1e-15));
  CHECK(displacement_modulus(2.0, 0.5) == doctest::Approx(0.8326).epsilon(1e-4));
  const auto pts = sample_perturbed_lattice({64.0, 6.0, SeedLineage{701, 0, 0}, false});
  for (const auto& p : pts) {
    const double dx = p.x - std::round(p.x), dy = p.y - std::round(p.y);
    CHECK(std::hypot(dx, dy) <= 1.1);
  }
  // Median of |ζ| for ν = 2 from many draws.
  std::vector<double> d;
  for (std::uint64_t i = 0; i < 40; ++i) {
    const auto q = sample_perturbed_lattice({2.0, 4.0, SeedLineage{702, i, 0}, false});
    const auto base = sample_perturbed_lattice({2.0, 4.0, SeedLineage{702, i, 0}, true});
    REQUIRE(q.size() == base.size());
    for (std::size_t k = 0; k < q.size(); ++k) d.push_back(std::hypot(q[k].x - base[k].x, q[k].y - base[k].y));
  }
  CHECK(ks_one_sample(d, [](double t) { return t <= 0 ? 0.0 : 1.0 - std::exp(-t * t); }).p_value > 0.01);
  CHECK(lattice_margin(2.0, 8.0) == doctest::Approx(std::sqrt(std::log(17.0 * 17.0 * 1e9))));
  CHECK_THROWS_AS(sample_perturbed_lattice({0.0, 4.0, SeedLineage{}, false}), PreconditionError);
  CHECK_THROWS_AS(sample_perturbed_lattice({2.0, 65.0, SeedLineage{}, false}), PreconditionError);
}

TEST_CASE("determinism and monotone counts") {
  const LatticeConfig cfg{2.0, 8.0, SeedLineage{703, 5, 0}, false};
  const auto a = sample_perturbed_lattice(cfg);
  const auto b = sample_perturbed_lattice(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i].x == b[i].x && a[i].y == b[i].y));
  int prev = 0;
  for (double R = 0.0; R <= 8.0; R += 0.25) {
    const int n = lattice_count(a, R);
    CHECK(n >= prev);
    prev = n;
  }
  std::ostringstream os;
  write_points_csv(os, a);
  CHECK(os.str().rfind("x,y\n", 0) == 0);
}

TEST_CASE("mean and variance growth") {
  const auto c8 = lattice_counts(2.0, 8.0, 704, 0, 10000);
  const Moments m8 = moments(c8);
  CHECK(std::fabs(m8.mean - 64.0 * std::numbers::pi) <= 8.0);
  const auto c4 = lattice_counts(2.0, 4.0, 704, 10000, 10000);
  CHECK(moments(c8).variance / moments(c4).variance < 3.0);
}

}  // TEST_SUITE
