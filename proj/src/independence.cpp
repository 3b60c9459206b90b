#include "gef/independence.hpp"

#include <algorithm>
#include <cmath>

#include "gef/errors.hpp"
#include "gef/parallel/kernels.hpp"
#include "gef/translation.hpp"

namespace gef {

namespace {

int family_rows(double max_abs_w, int k_max, const TruncationTargets& targets) {
  return truncation_order(max_abs_w + std::sqrt(static_cast<double>(k_max)) + 1.0, targets);
}

// max_{0≤x≤r} x^k e^{-x²/2}/√k!
double max_basis_star(int k, double r) {
  if (k == 0) return 1.0;
  const double x = std::min(r, std::sqrt(static_cast<double>(k)));
  return std::exp(k * std::log(x) - 0.5 * x * x - 0.5 * std::lgamma(k + 1.0));
}

}  // namespace

complex coefficient_covariance(complex w1, int k1, complex w2, int k2) {
  if (k1 < 0 || k2 < 0 || k1 > 200 || k2 > 200) throw PreconditionError("degrees must lie in [0, 200]");
  if (std::abs(w1) > 12.0 || std::abs(w2) > 12.0) throw PreconditionError("centers must satisfy |w| <= 12");
  const int N = family_rows(std::max(std::abs(w1), std::abs(w2)), std::max(k1, k2), {});
  const TranslationMatrix a = translation_matrix(-w1, k1, N);
  const TranslationMatrix b = translation_matrix(-w2, k2, N);
  complex s{};
  for (int n = 0; n <= N; ++n) s += std::conj(a.at(n, k1)) * b.at(n, k2);
  return s;
}

double covariance_decay_bound(complex w1, int k1, complex w2, int k2) {
  const double d = std::abs(w1 - w2) - std::sqrt(double(k1)) - std::sqrt(double(k2));
  if (!(d > 0.0)) throw PreconditionError("covariance decay bound needs |w1 - w2| > sqrt(k1) + sqrt(k2)");
  return 2.0 * std::exp(-d * d / 8.0);
}

RowSumReport check_row_sum_bound(const std::vector<complex>& centers, const std::vector<double>& R,
                             const std::vector<double>& sigma) {
  const std::size_t n = centers.size();
  if (R.size() != n || sigma.size() != n) throw PreconditionError("centers, R and sigma must have equal length");
  RowSumReport rep;
  rep.hypotheses_hold = true;
  for (std::size_t j = 0; j < n; ++j) {
    if (R[j] < 1.0 || sigma[j] < std::max(1.0, std::sqrt(std::log(R[j])))) rep.hypotheses_hold = false;
    for (std::size_t i = 0; i < j; ++i)
      if (std::abs(centers[i] - centers[j]) <= R[i] + 8.0 * sigma[i] + R[j] + 8.0 * sigma[j]) rep.hypotheses_hold = false;
  }
  rep.holds = true;
  for (std::size_t i = 0; i < n; ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double D = std::abs(centers[i] - centers[j]) - R[i] - R[j];
      lhs += 2.0 * (1.0 + R[j] * R[j]) * std::exp(-D * D / 8.0);
    }
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(std::exp(-2.0 * sigma[i] * sigma[i]));
    if (lhs > rep.rhs.back()) rep.holds = false;
  }
  return rep;
}

DemoReport almost_independence_demo(const std::vector<complex>& centers, double r, double rho,
                                    const SeedLineage& lineage, const DemoOptions& options) {
  if (centers.empty()) throw PreconditionError("demo needs at least one center");
  if (!(r > 0.0)) throw PreconditionError("demo needs r > 0");
  if (!(rho >= std::max(1.0, std::sqrt(std::max(0.0, std::log(r)))))) throw PreconditionError("demo needs rho >= max(1, sqrt(log r))");
  if (options.trials == 0) throw PreconditionError("demo needs at least one trial");
  const double radius = r + options.A * rho;
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(centers[i] - centers[j]) <= 2.0 * radius) throw PreconditionError("disks D(w_j, r + A rho) must be pairwise disjoint");

  DemoReport rep;
  rep.centers = centers;
  rep.r = r;
  rep.rho = rho;
  rep.A = options.A;
  rep.trials = options.trials;
  rep.K_family = truncation_order(r, options.targets);
  double max_w = 0.0;
  for (complex w : centers) max_w = std::max(max_w, std::abs(w));
  rep.K_sample = family_rows(max_w, rep.K_family, options.targets);

  const int J = static_cast<int>(centers.size());
  const int Kf = rep.K_family + 1;
  const int N = rep.K_sample + 1;
  // Column (j, k) of A holds the coefficients of T_{-w_j} e_k, so ξ = A† c and Γ = A†A.
  ComplexMatrix A(N, J * Kf);
  for (int j = 0; j < J; ++j) {
    const TranslationMatrix m = translation_matrix(-centers[j], rep.K_family, rep.K_sample);
    for (int k = 0; k < Kf; ++k)
      for (int n = 0; n < N; ++n) A(n, j * Kf + k) = m.at(n, k);
  }
  ComplexMatrix gamma = A.adjoint() * A;
  // Unit diagonal up to the certified tail; normalize it exactly.
  Eigen::VectorXd scale = gamma.diagonal().real().cwiseSqrt().cwiseInverse();
  gamma = scale.asDiagonal() * gamma * scale.asDiagonal();
  A = A * scale.asDiagonal();
  for (Eigen::Index i = 0; i < gamma.rows(); ++i) gamma(i, i) = 1.0;

  rep.covariance_decay_bound = 1.0;
  double min_dist = INFINITY;
  for (int i = 0; i < J; ++i)
    for (int j = 0; j < i; ++j) {
      min_dist = std::min(min_dist, std::abs(centers[i] - centers[j]));
      const auto block = gamma.block(i * Kf, j * Kf, Kf, Kf);
      rep.max_cross_covariance = std::max(rep.max_cross_covariance, block.cwiseAbs().maxCoeff());
    }
  if (J > 1) {
    const double D = min_dist - 2.0 * std::sqrt(static_cast<double>(rep.K_family));
    rep.covariance_decay_bound = D > 0.0 ? 2.0 * std::exp(-D * D / 8.0) : 1.0;
  }

  const CovarianceMatrix cov = CovarianceMatrix::make(gamma);
  const Decomposition dec = decorrelate(cov);
  rep.max_delta = *std::max_element(cov.delta.begin(), cov.delta.end());
  rep.max_s = *std::max_element(dec.s.begin(), dec.s.end());
  // h_j = ξ_j - (Γ^{-1/2} ξ)_j = (Δ̃ ξ)_j on the family.
  const ComplexMatrix tilde_At = (ComplexMatrix::Identity(J * Kf, J * Kf) - dec.mixing) * A.adjoint();

  std::vector<double> weights(static_cast<std::size_t>(Kf));
  for (int k = 0; k < Kf; ++k) weights[k] = max_basis_star(k, r);
  rep.tail_certificate = 2.0 * options.targets.eps_amp;
  rep.threshold = std::exp(-rho * rho);
  rep.decomposition_tail = 2.0 * std::exp(-0.5 * std::exp(2.0 * rho * rho));

  const VarianceProfile gef = VarianceProfile::constant_one();
  const auto sups = map_samples<std::vector<double>>(lineage.sample_index, options.trials, options.threads,
                                                     [&](std::uint64_t idx) {
    const SeriesSample f = sample_coefficients(gef, rep.K_sample, lineage.with_index(idx), options.targets);
    const Eigen::Map<const Eigen::VectorXcd> c(f.coefficients.data(), N);
    const Eigen::VectorXcd h = tilde_At * c;
    std::vector<double> out(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) {
      double s = rep.tail_certificate;
      for (int k = 0; k < Kf; ++k) s += std::abs(h(j * Kf + k)) * weights[k];
      out[j] = s;
    }
    return out;
  });
  rep.max_sup_h.assign(static_cast<std::size_t>(J), 0.0);
  std::uint64_t exceed = 0;
  for (const auto& trial : sups) {
    bool any = false;
    for (int j = 0; j < J; ++j) {
      rep.max_sup_h[j] = std::max(rep.max_sup_h[j], trial[j]);
      any = any || trial[j] > rep.threshold;
    }
    exceed += any ? 1 : 0;
  }
  rep.exceed_fraction = static_cast<double>(exceed) / options.trials;
  rep.exceed_stderr = std::sqrt(rep.exceed_fraction * (1.0 - rep.exceed_fraction) / options.trials);
  return rep;
}

nlohmann::json DemoReport::to_json() const {
  nlohmann::json c = nlohmann::json::array();
  for (complex w : centers) c.push_back({w.real(), w.imag()});
  return {{"centers", c},
          {"r", r},
          {"rho", rho},
          {"A", A},
          {"trials", trials},
          {"K_family", K_family},
          {"K_sample", K_sample},
          {"max_delta", max_delta},
          {"max_s", max_s},
          {"max_cross_covariance", max_cross_covariance},
          {"covariance_decay_bound", covariance_decay_bound},
          {"tail_certificate", tail_certificate},
          {"threshold", threshold},
          {"decomposition_tail", decomposition_tail},
          {"max_sup_h", max_sup_h},
          {"exceed_fraction", exceed_fraction},
          {"exceed_stderr", exceed_stderr}};
}

}  // namespace gef
