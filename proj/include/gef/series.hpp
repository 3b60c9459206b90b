#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "gef/profile.hpp"
#include "gef/rng.hpp"

namespace gef {

// Tail targets for the truncation planner: the omitted tail of f* exceeds
// eps_amp somewhere on the certified disk with probability at most eps_prob.
struct TruncationTargets {
  double eps_amp = 1e-9;
  double eps_prob = 1e-12;
};

// Radius added to every requested disk so contour retries at R + 1e-6 stay
// inside the certified region.
inline constexpr double kRadiusSlack = 1e-4;

// A truncated Taylor series Σ_{k≤K} c_k e_k(z), e_k(z) = z^k/√k!.
//
// For a sampled series the tail beyond K is certified: sup over |z| ≤ r_valid
// of the omitted part of f* is below eps_amp except with probability eps_prob.
// An exact series (hand-built polynomial) has no tail; eps_amp = eps_prob = 0.
struct SeriesSample {
  std::vector<complex> coefficients;
  double r_valid = 0.0;
  double eps_amp = 0.0;
  double eps_prob = 0.0;
  bool exact = false;
  SeedLineage lineage{};

  int K() const { return static_cast<int>(coefficients.size()) - 1; }
};

// Exact polynomial from coefficients in the e_k basis, certified on |z| ≤ r_valid.
SeriesSample exact_series(std::vector<complex> basis_coefficients, double r_valid);
// Exact polynomial from ordinary monomial coefficients p_k of z^k (c_k = p_k √k!).
SeriesSample exact_polynomial(std::span<const complex> monomial_coefficients, double r_valid);

// S(K, r) = Σ_{k>K} e^{-(√k - r)²/2}.
double tail_envelope_sum(int K, double r);

// Minimal K ≥ ⌈r²⌉ with 2 exp(-(eps_amp / (scale·S(K,r)))²/2) ≤ eps_prob.
// r is clamped to at least 1. `tail_scale` bounds the coefficient standard
// deviations beyond K.
int truncation_order(double r, double eps_amp, double eps_prob, double tail_scale = 1.0);
int truncation_order(double r, const TruncationTargets& targets = {}, double tail_scale = 1.0);

// Largest r (to 1e-9) with truncation_order(r) ≤ K; 0 if no positive radius is certified.
double certified_radius(int K, const TruncationTargets& targets = {}, double tail_scale = 1.0);

// c_k = ζ_k a_k for k = 0..K, ζ_k from the coefficient stream of `lineage`.
// Explicit tables stop at their last entry and yield an exact series.
SeriesSample sample_coefficients(const VarianceProfile& profile, int K, const SeedLineage& lineage,
                                 const TruncationTargets& targets = {});

// Plans K for radius r + kRadiusSlack (covering every non-unit profile index)
// and samples.
SeriesSample sample_series(const VarianceProfile& profile, double r, const SeedLineage& lineage,
                           const TruncationTargets& targets = {});

// K that sample_series would use; lets batch kernels plan once.
int planned_order(const VarianceProfile& profile, double r, const TruncationTargets& targets = {});

// Σ c_k z^k/√k!. Throws PreconditionError("outside certified radius").
complex evaluate(const SeriesSample& sample, complex z);

// f(z)·e^{-log_scale}. Terms below e^{-700} relative to the scale are skipped
// in log space, so large |z| neither underflows nor overflows when the
// scale is close to |z|²/2.
complex evaluate_scaled(const SeriesSample& sample, complex z, double log_scale);

// f*(z) = |f(z)| e^{-|z|²/2}.
double evaluate_star(const SeriesSample& sample, complex z);

// Σ |c_k| ρ^k/√k! · e^{-log_scale} (bound on |f| over |z| ≤ ρ).
double modulus_bound_scaled(const SeriesSample& sample, double rho, double log_scale);
// Σ |c_k| k ρ^{k-1}/√k! · e^{-log_scale} (bound on |f'| over |z| ≤ ρ).
double derivative_bound_scaled(const SeriesSample& sample, double rho, double log_scale);

// Multiply c_k by e^{ikθ}: the sample of f(e^{iθ} z).
SeriesSample rotate_sample(const SeriesSample& sample, double theta);

// 1/√(k+1) for k = 0..n-1 (shared read-only table, n ≤ 65536).
std::span<const double> inverse_sqrt_table(std::size_t n);

nlohmann::json series_to_json(const SeriesSample& sample);
SeriesSample series_from_json(const nlohmann::json& j);

}  // namespace gef
