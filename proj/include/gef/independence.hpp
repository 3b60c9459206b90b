#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "gef/decorrelation.hpp"
#include "gef/rng.hpp"
#include "gef/series.hpp"

namespace gef {

// E ζ_{k1}(w1) conj ζ_{k2}(w2) for ζ_k(w) = ⟨T_w f, e_k⟩, as the dot product of
// columns k1, k2 of the matrices of T_{-w1}, T_{-w2}, truncated at the planner
// order for radius max|w| + √max(k) + 1. Requires k ≤ 200, |w| ≤ 12.
complex coefficient_covariance(complex w1, int k1, complex w2, int k2);

// 2e^{-d²/8} for d = |w1 - w2| - √k1 - √k2; PreconditionError unless d > 0.
double covariance_decay_bound(complex w1, int k1, complex w2, int k2);

struct RowSumReport {
  bool hypotheses_hold = false;
  std::vector<double> lhs;  // 2 Σ_{j≠i} (1 + R_j²) e^{-D_ij²/8}
  std::vector<double> rhs;  // e^{-2σ_i²}
  bool holds = false;
};

// Checks the row-sum inequality for disks D(w_j, R_j); the hypotheses are
// R_j ≥ 1, σ_j ≥ max(1, √log R_j) and pairwise disjoint D(w_j, R_j + 8σ_j).
// `holds` is evaluated whether or not the hypotheses hold.
RowSumReport check_row_sum_bound(const std::vector<complex>& centers, const std::vector<double>& R,
                             const std::vector<double>& sigma);

struct DemoOptions {
  double A = 20.0;
  std::uint64_t trials = 1000;
  int threads = 0;
  TruncationTargets targets{};
};

struct DemoReport {
  std::vector<complex> centers;
  double r = 0.0;
  double rho = 0.0;
  double A = 0.0;
  std::uint64_t trials = 0;
  int K_family = 0;  // ζ_k(w_j) for k ≤ K_family
  int K_sample = 0;  // order of the sampled f
  double max_delta = 0.0;
  double max_s = 0.0;
  double max_cross_covariance = 0.0;
  double covariance_decay_bound = 0.0;     // 2e^{-D²/8}, D = min |w_i - w_j| - 2√K_family
  double tail_certificate = 0.0;   // added to every sup bound
  double threshold = 0.0;          // e^{-ρ²}
  double decomposition_tail = 0.0;         // 2exp(-½ e^{2ρ²})
  std::vector<double> max_sup_h;   // per center, over trials
  double exceed_fraction = 0.0;
  double exceed_stderr = 0.0;

  nlohmann::json to_json() const;
};

// Samples f, forms ξ = (ζ_k(w_j)), whitens with the exact Γ^{-1/2} and splits
// T_{w_j} f = f_j + h_j. The sup of h_j e^{-|z|²/2} over rD is bounded by
// Σ_k |h_jk| max_{|z|≤r} |z|^k e^{-|z|²/2}/√k! plus the truncation certificate;
// a trial exceeds when any center's bound exceeds e^{-ρ²}.
// Preconditions: r > 0, ρ ≥ max(1, √log r), D(w_j, r + Aρ) pairwise disjoint.
DemoReport almost_independence_demo(const std::vector<complex>& centers, double r, double rho,
                                    const SeedLineage& lineage, const DemoOptions& options = {});

}  // namespace gef
