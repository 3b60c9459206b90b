#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_complex.hpp>

#include "gef/errors.hpp"
#include "gef/independence.hpp"
#include "gef/series.hpp"
#include "gef/stats.hpp"
#include "gef/translation.hpp"

using namespace gef;
namespace mp = boost::multiprecision;
using big_complex = mp::cpp_complex_50;
using big_real = mp::cpp_bin_float_50;

namespace {

// Σ c_k z^k/√k! with 50 significant digits.
complex reference_sum(const SeriesSample& s, complex z) {
  big_complex acc(0), term(1), bz(z.real(), z.imag());
  for (int k = 0; k <= s.K(); ++k) {
    if (k > 0) term *= bz / mp::sqrt(big_real(k));
    acc += big_complex(s.coefficients[k].real(), s.coefficients[k].imag()) * term;
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

// ⟨T_w e_k, e_n⟩ from the binomial double sum:
// e^{-|w|²/2} √n!/√k! Σ_j C(k,j) w^{k-j} (-w̄)^{n-j}/(n-j)!.
complex reference_translation(complex w, int n, int k) {
  const big_complex bw(w.real(), w.imag()), mwbar(-w.real(), w.imag());
  big_complex acc(0);
  for (int j = 0; j <= std::min(k, n); ++j) {
    big_real c = mp::tgamma(big_real(k + 1)) / (mp::tgamma(big_real(j + 1)) * mp::tgamma(big_real(k - j + 1)));
    acc += c * mp::pow(bw, k - j) * mp::pow(mwbar, n - j) / mp::tgamma(big_real(n - j + 1));
  }
  acc *= mp::exp(-big_real(std::norm(w)) / 2) * mp::sqrt(mp::tgamma(big_real(n + 1)) / mp::tgamma(big_real(k + 1)));
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

// Minimal K ≥ ⌈r²⌉ with S(K, r) below the threshold, by direct summation of the tail.
int reference_order(double r, double eps_amp, double eps_prob) {
  const double threshold = eps_amp / std::sqrt(2.0 * std::log(2.0 / eps_prob));
  for (int K = static_cast<int>(std::ceil(r * r));; ++K) {
    double s = 0.0;
    for (int k = 200000; k > K; --k) s += std::exp(-0.5 * std::pow(std::sqrt(double(k)) - r, 2));
    if (s <= threshold) return K;
  }
}

}  // namespace

TEST_SUITE("series_eval") {

TEST_CASE("truncation planner") {
  const int K4 = truncation_order(4.0, 1e-6, 1e-9);
  CHECK(K4 == reference_order(4.0, 1e-6, 1e-9));
  CHECK(K4 == 96);
  CHECK(truncation_order(6.0, 1e-6, 1e-9) >= K4);
  CHECK(truncation_order(0.0, 1e-6, 1e-9) == truncation_order(1.0, 1e-6, 1e-9));
  CHECK(truncation_order(0.0, 1e-6, 1e-9) < 60);
  for (double r : {1.0, 2.0, 3.0, 8.0})
    CHECK(truncation_order(r, TruncationTargets{}) == reference_order(r, 1e-9, 1e-12));
  CHECK_THROWS_AS(truncation_order(2.0, 0.0, 1e-3), PreconditionError);
  CHECK_THROWS_AS(truncation_order(2.0, 1e-3, 1.5), PreconditionError);
  const int K = truncation_order(5.0);
  CHECK(certified_radius(K) >= 5.0);
  CHECK(truncation_order(certified_radius(K) + 1e-6) > K);
}

TEST_CASE("evaluate basics") {
  auto one = exact_series({1.0}, 10.0);
  CHECK(evaluate(one, {3.0, 4.0}) == complex(1.0));
  auto z = exact_series({0.0, 1.0}, 10.0);
  CHECK(evaluate(z, 2.0) == complex(2.0));
  CHECK_THROWS_WITH_AS(evaluate(z, 11.0), "outside certified radius", PreconditionError);
  const auto s = sample_series(VarianceProfile::constant_one(), 3.0, SeedLineage{5, 0, 0});
  CHECK(evaluate_star(s, 0.0) == doctest::Approx(std::abs(s.coefficients[0])).epsilon(1e-15));
  CHECK_THROWS_AS(evaluate(s, 3.5), PreconditionError);
}

TEST_CASE("evaluation against 50-digit summation") {
  for (double r : {2.0, 6.0, 20.0}) {
    const auto s = sample_series(VarianceProfile::constant_one(), r, SeedLineage{17, 3, 0});
    CounterStream u(SeedLineage{17, 3, static_cast<std::uint32_t>(StreamTag::auxiliary)});
    for (int i = 0; i < 100; ++i) {
      const complex pt = std::polar(r * std::sqrt(u.uniform()), 2 * std::numbers::pi * u.uniform());
      const complex ref = reference_sum(s, pt);
      const double tail_floor = 1e-300;
      CHECK(std::abs(evaluate(s, pt) - ref) <= 1e-10 * std::abs(ref) + tail_floor);
    }
  }
}

TEST_CASE("scaled evaluation far out does not overflow") {
  const auto s = sample_series(VarianceProfile::constant_one(), 30.0, SeedLineage{1, 1, 0});
  const complex pt = std::polar(29.0, 0.3);
  const double star = evaluate_star(s, pt);
  CHECK(std::isfinite(star));
  CHECK(star > 0.0);
  CHECK(star < 10.0);
}

TEST_CASE("f* at a fixed point is standard complex gaussian in modulus") {
  const int n = 10000;
  std::vector<double> a(n), b(n);
  const complex z0(1.5, -0.5), w(2.0, 1.0);
  const int K = truncation_order(3.0);
  for (int i = 0; i < n; ++i) {
    const auto s = sample_coefficients(VarianceProfile::constant_one(), K, SeedLineage{21, std::uint64_t(i), 0});
    a[i] = std::pow(evaluate_star(s, z0), 2);
    b[i] = evaluate_star(s, w);
  }
  CHECK(ks_one_sample(a, [](double t) { return t <= 0 ? 0.0 : 1.0 - std::exp(-t); }).p_value > 0.01);
  std::vector<double> at0(n);
  for (int i = 0; i < n; ++i)
    at0[i] = evaluate_star(sample_coefficients(VarianceProfile::constant_one(), K,
                                               SeedLineage{22, std::uint64_t(i), 0}), 0.0);
  CHECK(ks_two_sample(at0, b).p_value > 0.01);
}

TEST_CASE("covariance kernel") {
  const int n = 100000;
  const int K = truncation_order(2.0);
  std::vector<std::pair<complex, complex>> pairs;
  CounterStream u(SeedLineage{31, 0, static_cast<std::uint32_t>(StreamTag::auxiliary)});
  for (int i = 0; i < 10; ++i)
    pairs.emplace_back(std::polar(2.0 * std::sqrt(u.uniform()), 6.283 * u.uniform()),
                       std::polar(2.0 * std::sqrt(u.uniform()), 6.283 * u.uniform()));
  std::vector<std::vector<double>> re(10, std::vector<double>(n)), im(10, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    const auto s = sample_coefficients(VarianceProfile::constant_one(), K, SeedLineage{32, std::uint64_t(i), 0});
    for (int p = 0; p < 10; ++p) {
      const complex v = evaluate(s, pairs[p].first) * std::conj(evaluate(s, pairs[p].second));
      re[p][i] = v.real();
      im[p][i] = v.imag();
    }
  }
  for (int p = 0; p < 10; ++p) {
    const complex expect = std::exp(pairs[p].first * std::conj(pairs[p].second));
    const Moments mr = moments(re[p]), mi = moments(im[p]);
    CHECK(std::fabs(mr.mean - expect.real()) <= 4.0 * mr.stderr_mean);
    CHECK(std::fabs(mi.mean - expect.imag()) <= 4.0 * mi.stderr_mean);
  }
}

TEST_CASE("planner tail certificate against a 4K reference") {
  const double r = 2.0;
  const int K = truncation_order(r);
  const int n = 10000;
  int exceed = 0;
  for (int i = 0; i < n; ++i) {
    const auto full = sample_coefficients(VarianceProfile::constant_one(), 4 * K, SeedLineage{41, std::uint64_t(i), 0});
    SeriesSample tail = full;
    for (int k = 0; k <= K; ++k) tail.coefficients[k] = 0.0;
    tail.r_valid = 1e9;
    double sup = 0.0;
    for (int j = 0; j < 64; ++j) sup = std::max(sup, evaluate_star(tail, std::polar(r, j * std::numbers::pi / 32)));
    exceed += sup > 1e-9 ? 1 : 0;
  }
  CHECK(exceed == 0);
}

TEST_CASE("translation matrix entries against the binomial double sum") {
  for (complex w : {complex(1.0, 0.0), complex(-0.7, 1.9), complex(3.0, -4.0), complex(0.0, 8.0)}) {
    const auto m = translation_matrix(w, 30, 40);
    for (int n = 0; n <= 40; n += 3)
      for (int k = 0; k <= 30; k += 2) {
        const complex ref = reference_translation(w, n, k);
        CHECK(std::abs(m.at(n, k) - ref) <= 1e-12 + 1e-9 * std::abs(ref));
      }
  }
}

TEST_CASE("translation matrix identity and unitarity") {
  const auto id = translation_matrix(0.0, 5, 8);
  for (int n = 0; n <= 8; ++n)
    for (int k = 0; k <= 5; ++k) CHECK(id.at(n, k) == complex(n == k ? 1.0 : 0.0));
  const int K_out = truncation_order(1.0 + std::sqrt(5.0));
  const auto m = translation_matrix(1.0, 5, K_out);
  for (int k = 0; k <= 5; ++k) {
    CHECK(m.column_norm_squared(k) <= 1.0 + 1e-12);
    CHECK(m.column_norm_squared(k) >= 1.0 - 1e-8);
  }
  for (double d : {0.5, 1.0, 2.0, 3.0})
    CHECK(std::abs(coefficient_covariance(0.0, 0, d, 0)) == doctest::Approx(std::exp(-d * d / 2)).epsilon(1e-10));
}

TEST_CASE("2-D quadrature oracle for the e_0 overlap") {
  // ⟨T_{-0} e_0, T_{-d} e_0⟩ = (1/π)∫ conj(e^{zd - d²/2}) e^{-|z|²} dm(z), by a tensor grid.
  const double d = 1.3;
  const int n = 801;
  const double L = 7.0, h = 2 * L / (n - 1);
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = -L + i * h, y = -L + j * h;
      acc += std::exp(x * d - 0.5 * d * d) * std::cos(y * d) * std::exp(-(x * x + y * y));
    }
  acc *= h * h / std::numbers::pi;
  CHECK(acc == doctest::Approx(std::exp(-d * d / 2)).epsilon(1e-8));
  CHECK(std::abs(coefficient_covariance(0.0, 0, d, 0)) == doctest::Approx(acc).epsilon(1e-8));
}

TEST_CASE("translate_sample") {
  const auto s = sample_series(VarianceProfile::constant_one(), 6.0, SeedLineage{51, 0, 0});
  const auto same = translate_sample(s, 0.0, s.K());
  CHECK(same.coefficients == s.coefficients);
  const complex w(1.5, -2.0);
  const int K_out = truncation_order(3.0);
  const auto t = translate_sample(s, w, K_out);
  CHECK(t.r_valid >= 2.0);
  CounterStream u(SeedLineage{51, 0, static_cast<std::uint32_t>(StreamTag::auxiliary)});
  for (int i = 0; i < 50; ++i) {
    const complex z = std::polar(2.0 * std::sqrt(u.uniform()), 6.283 * u.uniform());
    const complex direct = evaluate(s, w + z) * std::exp(-z * std::conj(w) - 0.5 * std::norm(w));
    CHECK(std::abs(evaluate(t, z) - direct) <= 1e-8 * std::abs(direct) + 1e-8 * std::exp(0.5 * std::norm(z)));
  }
  // T_{-w} T_w = I on the low coefficients.
  const auto big = sample_series(VarianceProfile::constant_one(), 2.0 + std::abs(w) + 1.0, SeedLineage{52, 0, 0});
  const int K_mid = truncation_order(2.0 + std::abs(w) + 1.0);
  const auto there = translate_sample(big, w, K_mid);
  const auto back = translate_sample(there, -w, big.K());
  for (int k = 0; k <= 10; ++k) CHECK(std::abs(back.coefficients[k] - big.coefficients[k]) <= 1e-8);
}

TEST_CASE("translated coefficients are standard complex gaussians") {
  const complex w(1.0, 2.0);
  const int K_in = truncation_order(std::abs(w) + 4.0);
  const auto m = translation_matrix(w, K_in, truncation_order(1.0));
  std::vector<double> mod2(10000);
  for (std::size_t i = 0; i < mod2.size(); ++i) {
    const auto s = sample_coefficients(VarianceProfile::constant_one(), K_in, SeedLineage{61, i, 0});
    mod2[i] = std::norm(translate_sample(s, m).coefficients[5]);
  }
  CHECK(ks_one_sample(mod2, [](double t) { return t <= 0 ? 0.0 : 1.0 - std::exp(-t); }).p_value > 0.01);
}

TEST_CASE("series json round trip") {
  const auto s = sample_series(VarianceProfile::constant_one(), 2.0, SeedLineage{71, 4, 0});
  const auto back = series_from_json(series_to_json(s));
  CHECK(back.coefficients == s.coefficients);
  CHECK(back.r_valid == s.r_valid);
  CHECK(back.lineage == s.lineage);
  const auto j = series_to_json(s);
  CHECK(j["coefficients"][0].size() == 2);
}

}  // TEST_SUITE
