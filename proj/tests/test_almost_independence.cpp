#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "gef/decorrelation.hpp"
#include "gef/errors.hpp"
#include "gef/independence.hpp"
#include "gef/lemma_checks.hpp"
#include "gef/stats.hpp"
#include "gef/translation.hpp"

using namespace gef;

namespace {

ComplexMatrix inverse_sqrt_by_eigen(const ComplexMatrix& g) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
  const Eigen::VectorXd inv = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TEST_SUITE("almost_independence") {

TEST_CASE("coefficient covariance at one center") {
  for (complex w : {complex(0, 0), complex(2.0, -1.0), complex(-5.0, 7.0)}) {
    for (int k : {0, 3, 17}) {
      CHECK(std::abs(coefficient_covariance(w, k, w, k) - 1.0) <= 1e-8);
      CHECK(std::abs(coefficient_covariance(w, k, w, k + 2)) <= 1e-8);
    }
  }
  CHECK_THROWS_AS(coefficient_covariance(0.0, 201, 0.0, 0), PreconditionError);
  CHECK_THROWS_AS(coefficient_covariance(13.0, 0, 0.0, 0), PreconditionError);
}

TEST_CASE("covariance decay") {
  for (auto [k1, k2] : {std::pair{0, 0}, std::pair{4, 9}, std::pair{16, 1}}) {
    const double d = std::sqrt(double(k1)) + std::sqrt(double(k2)) + 4.0;
    const double cov = std::abs(coefficient_covariance(0.0, k1, d, k2));
    CHECK(cov <= 2.0 * std::exp(-2.0));
    CHECK(cov <= covariance_decay_bound(0.0, k1, d, k2));
  }
  CHECK_THROWS_AS(covariance_decay_bound(0.0, 4, 1.0, 4), PreconditionError);
  const auto sweep = covariance_decay_sweep(100, SeedLineage{401, 0, 0});
  CHECK(sweep.violations == 0);
  CHECK(sweep.max_ratio <= 1.0);
}

TEST_CASE("weyl relation between translation matrices") {
  const complex a(1.2, -0.4), b(-0.5, 2.0);
  const int K = 12;
  const int N = truncation_order(std::abs(a) + std::abs(b) + std::sqrt(double(K)) + 1.0);
  const auto Ma = translation_matrix(a, K, N);
  const auto Mb = translation_matrix(b, K, N);
  const auto Mab = translation_matrix(a - b, K, K);
  for (int k = 0; k <= K; k += 3)
    for (int l = 0; l <= K; l += 2) {
      complex ip{};
      for (int n = 0; n <= N; ++n) ip += std::conj(Mb.at(n, l)) * Ma.at(n, k);
      CHECK(std::abs(std::abs(ip) - std::abs(Mab.at(l, k))) <= 1e-10);
    }
}

TEST_CASE("decorrelate identity and rejection") {
  const auto d = decorrelate(CovarianceMatrix::make(ComplexMatrix::Identity(4, 4)));
  CHECK((d.mixing - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  for (double s : d.s) CHECK(s == 0.0);
  ComplexMatrix g = ComplexMatrix::Identity(3, 3);
  g(0, 1) = 0.2;
  g(1, 0) = 0.2;
  g(0, 2) = 0.2;
  g(2, 0) = 0.2;
  CHECK_THROWS_AS(CovarianceMatrix::make(g), PreconditionError);  // δ_0 = 0.4
  g(0, 2) = g(2, 0) = 0.0;
  g(0, 1) = 0.2;
  g(1, 0) = 0.3;
  CHECK_THROWS_AS(CovarianceMatrix::make(g), PreconditionError);  // not Hermitian
  CHECK_THROWS_AS(CovarianceMatrix::make(ComplexMatrix::Identity(2, 2), {0.1}), PreconditionError);
}

TEST_CASE("2x2 against the eigendecomposition") {
  for (complex g12 : {complex(0.2, 0.0), std::polar(0.2, 0.7), std::polar(1.0 / 3.0, -2.0)}) {
    ComplexMatrix g = ComplexMatrix::Identity(2, 2);
    g(0, 1) = g12;
    g(1, 0) = std::conj(g12);
    const auto d = decorrelate(CovarianceMatrix::make(g));
    CHECK((d.mixing - inverse_sqrt_by_eigen(g)).cwiseAbs().maxCoeff() <= 1e-12);
    for (double s : d.s) CHECK(s <= std::abs(g12));
    CHECK(whitening_error(d.mixing, g) <= 1e-12);
  }
}

TEST_CASE("random admissible covariances") {
  const auto sweep = decorrelation_sweep(200, SeedLineage{402, 0, 0});
  CHECK(sweep.violations == 0);
  CHECK(sweep.max_whitening_error <= 1e-10);
  CHECK(sweep.max_s_over_delta <= 1.0);
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto cov = random_admissible_covariance(8, SeedLineage{403, i, 0});
    const auto d = decorrelate(cov);
    for (int k = 0; k < 8; ++k) {
      CHECK(d.s[k] <= d.certified_bound[k]);
      CHECK(d.residual_sd[k] <= d.s[k] + 1e-15);
    }
  }
}

TEST_CASE("whitened samples have identity covariance") {
  const auto cov = random_admissible_covariance(8, SeedLineage{404, 0, 0});
  const auto d = decorrelate(cov);
  const ComplexMatrix L = cov.gamma.llt().matrixL();
  const int n = 100000;
  std::vector<std::vector<double>> re(64, std::vector<double>(n)), im(64, std::vector<double>(n));
  for (int t = 0; t < n; ++t) {
    Eigen::VectorXcd z(8);
    for (int i = 0; i < 8; ++i) z(i) = complex_gaussian_at(SeedLineage{405, std::uint64_t(t), 0}, i);
    const Eigen::VectorXcd zeta = d.mixing * (L * z);
    for (int i = 0; i < 8; ++i)
      for (int j = i; j < 8; ++j) {
        const complex v = zeta(i) * std::conj(zeta(j));
        re[i * 8 + j][t] = v.real();
        im[i * 8 + j][t] = v.imag();
      }
  }
  for (int i = 0; i < 8; ++i)
    for (int j = i; j < 8; ++j) {
      const Moments mr = moments(re[i * 8 + j]);
      CHECK(std::fabs(mr.mean - (i == j ? 1.0 : 0.0)) <= 4.0 * mr.stderr_mean);
      if (i != j) {
        const Moments mi = moments(im[i * 8 + j]);
        CHECK(std::fabs(mi.mean) <= 4.0 * mi.stderr_mean);
      }
    }
}

TEST_CASE("row-sum bound") {
  const auto ok = check_row_sum_bound({0.0, 60.0, complex(0, 60)}, {2.0, 2.0, 2.0}, {1.0, 1.0, 1.0});
  CHECK(ok.hypotheses_hold);
  CHECK(ok.holds);
  const auto close = check_row_sum_bound({0.0, 10.0}, {2.0, 2.0}, {1.0, 1.0});
  CHECK(!close.hypotheses_hold);
}

TEST_CASE("almost independence demo") {
  DemoOptions opt;
  opt.A = 3.0;
  opt.trials = 200;
  const auto single = almost_independence_demo({0.0}, 2.0, 2.0, SeedLineage{406, 0, 0}, opt);
  CHECK(single.max_delta == 0.0);
  CHECK(single.max_sup_h[0] <= single.tail_certificate + 1e-12);
  CHECK(single.exceed_fraction == 0.0);

  opt.trials = 1000;
  const auto two = almost_independence_demo({-15.0, 15.0}, 2.0, 2.0, SeedLineage{407, 0, 0}, opt);
  CHECK(two.exceed_fraction <= two.decomposition_tail + 3.0 * two.exceed_stderr);
  CHECK(two.max_cross_covariance <= two.covariance_decay_bound);
  CHECK(two.decomposition_tail < 1e-20);
  const auto rs = check_row_sum_bound({-15.0, 15.0}, {2.0, 2.0}, {1.0, 1.0});
  CHECK(rs.holds);

  DemoOptions strict;
  CHECK_THROWS_AS(almost_independence_demo({-15.0, 15.0}, 2.0, 2.0, SeedLineage{}, strict), PreconditionError);
  CHECK_THROWS_AS(almost_independence_demo({0.0}, 2.0, 0.5, SeedLineage{}, opt), PreconditionError);
  const auto j = two.to_json();
  CHECK(j["max_sup_h"].size() == 2);
}

}  // TEST_SUITE
