#include <doctest.h>

#include <cmath>

#include "gef/errors.hpp"
#include "gef/profile.hpp"
#include "gef/rng.hpp"
#include "gef/series.hpp"
#include "gef/stats.hpp"

using namespace gef;

TEST_SUITE("gaussian_core") {

TEST_CASE("philox4x32-10 known answers") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxBlock{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxBlock{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxBlock{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("profile values") {
  CHECK(profile_value(VarianceProfile::constant_one(), 7) == 1.0);
  const auto p = VarianceProfile::jlm_banded(10.0, 0.75);
  REQUIRE(p.j_minus().size() == 10);
  REQUIRE(p.j_plus().size() == 10);
  CHECK(p.j_minus().lo >= 80);
  CHECK(p.j_minus().hi <= 90);
  CHECK(p.j_plus().lo >= 110);
  CHECK(p.j_plus().hi <= 120);
  CHECK(profile_value(p, p.j_minus().lo) == doctest::Approx(std::sqrt(1.0 + std::pow(10.0, -0.25))).epsilon(1e-15));
  CHECK(profile_value(p, p.j_minus().lo) == doctest::Approx(1.249936).epsilon(1e-6));
  CHECK(profile_value(p, p.j_plus().hi) == doctest::Approx(std::sqrt(1.0 - std::pow(10.0, -0.25))).epsilon(1e-15));
  CHECK(profile_value(p, 50) == 1.0);
  CHECK(profile_value(p, 100) == 1.0);
  const auto table = VarianceProfile::explicit_table({1.0, 0.5});
  CHECK(profile_value(table, 1) == 0.5);
  CHECK_THROWS_WITH_AS(profile_value(table, 2), "index beyond table", PreconditionError);
  CHECK_THROWS_AS(VarianceProfile::explicit_table({-1.0}), PreconditionError);
  CHECK_THROWS_AS(VarianceProfile::jlm_banded(4.0, 1.2), PreconditionError);
}

TEST_CASE("band placement stays inside the stated windows") {
  for (double R : {2.0, 2.5, 3.7, 4.0, 8.0, 9.9, 16.0}) {
    const auto p = VarianceProfile::jlm_banded(R, 0.75);
    CHECK(p.j_minus().size() == static_cast<std::int64_t>(std::floor(R)));
    CHECK(p.j_minus().lo >= R * R - 2.0 * R);
    CHECK(p.j_minus().hi <= R * R - R);
    CHECK(p.j_plus().lo >= R * R + R);
    CHECK(p.j_plus().hi <= R * R + 2.0 * R);
    for (auto k : p.nonunit_indices()) {
      const double a2 = p.variance(k);
      CHECK((a2 == doctest::Approx(1.0 + p.tilt()) || a2 == doctest::Approx(1.0 - p.tilt())));
    }
  }
}

TEST_CASE("profile json round trip") {
  for (const auto& p : {VarianceProfile::constant_one(), VarianceProfile::jlm_banded(6.0, 0.6),
                        VarianceProfile::explicit_table({0.0, 1.0, 2.5})})
    CHECK(profile_from_json(profile_to_json(p)) == p);
  const auto j = profile_to_json(VarianceProfile::jlm_banded(4.0, 0.75));
  CHECK(j["kind"] == "jlm_banded");
  CHECK(j["j_minus"].size() == 2);
}

TEST_CASE("complex gaussian moments") {
  const int n = 100000;
  std::vector<double> mod2(n), re(n), im(n);
  int tail = 0;
  for (int i = 0; i < n; ++i) {
    const complex z = complex_gaussian_at(SeedLineage{3, static_cast<std::uint64_t>(i), 0}, 5);
    mod2[i] = std::norm(z);
    re[i] = z.real();
    im[i] = z.imag();
    tail += mod2[i] >= 2.0 ? 1 : 0;
  }
  const Moments m = moments(mod2);
  CHECK(std::fabs(m.mean - 1.0) <= 3.0 * m.stderr_mean);
  const double p = std::exp(-2.0);
  CHECK(std::fabs(tail / double(n) - p) <= 3.0 * std::sqrt(p * (1 - p) / n));
  for (const auto* v : {&re, &im}) {
    const Moments mv = moments(*v);
    CHECK(std::fabs(mv.variance - 0.5) <= 4.0 * jackknife_variance_stderr(*v));
  }
  std::vector<double> first(mod2.begin(), mod2.begin() + 10000);
  CHECK(ks_one_sample(first, [](double t) { return t <= 0 ? 0.0 : 1.0 - std::exp(-t); }).p_value > 0.01);
}

TEST_CASE("sampling is a pure function of the lineage") {
  const auto p = VarianceProfile::jlm_banded(5.0, 0.75);
  const SeedLineage l{99, 12345, 0};
  const auto a = sample_coefficients(p, 80, l);
  const auto b = sample_coefficients(p, 80, l);
  CHECK(a.coefficients == b.coefficients);
  const auto c = sample_coefficients(p, 80, l.with_index(12346));
  CHECK(a.coefficients != c.coefficients);
  const auto ones = sample_coefficients(VarianceProfile::constant_one(), 80, l);
  for (int k = 0; k <= 80; ++k)
    CHECK(a.coefficients[k] == ones.coefficients[k] * p.value(k));
  CounterStream s1(l.with_stream(StreamTag::auxiliary)), s2(l.with_stream(StreamTag::auxiliary));
  for (int i = 0; i < 50; ++i) CHECK(s1.next_u64() == s2.next_u64());
}

}  // TEST_SUITE
