#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "gef/profile.hpp"
#include "gef/rng.hpp"
#include "gef/stats.hpp"

namespace gef {

// log dγ/dγ_a(η) = Σ_{k: a_k≠1} [log a_k² - |η_k|²(1 - a_k^{-2})].
// Throws PreconditionError("singular measures") when some a_k = 0, and when η
// does not reach the last non-unit index.
double rn_log_weight(const VarianceProfile& profile, std::span<const complex> eta);
double rn_weight(const VarianceProfile& profile, std::span<const complex> eta);

// E = {n(R) ≤ R² - c R^α}
struct DeficitEvent {
  double R = 0.0;
  double alpha = 0.0;
  double c = 0.0;
  double threshold() const;
  bool contains(int count) const;
};

// c₁(R)/2 with c₁(R) the exact mean deficit constant of jlm_banded(R, α).
double default_deficit_c(double R, double alpha);

// One draw under γ_a = jlm_banded(R, α): n(R) by winding and log dγ/dγ_a.
struct TiltedSample {
  int count = 0;
  double log_weight = 0.0;
};

std::vector<TiltedSample> sample_tilted(double R, double alpha, std::uint64_t n_samples, const SeedLineage& lineage,
                                        int threads = 0);

struct TiltedEstimate {
  double p_hat = 0.0;
  double stderr_value = 0.0;
  double ess = 0.0;
  std::uint64_t n_samples = 0;
  DeficitEvent event{};
  double tilted_hit_rate = 0.0;  // unweighted frequency of E under γ_a
  bool low_ess = false;          // ESS < 0.01 n
  // E_{γ_a} w² < ∞ iff 1 - R^{α-1} > 1/2 on J_+; otherwise stderr and the
  // interval are heuristic.
  bool finite_weight_variance = false;
  Interval ci95{};               // p̂ ± 1.96 stderr, clipped to [0, 1]

  nlohmann::json to_json() const;
};

// Self-normalized estimate Σ w 1_E / Σ w of γ(E) with ratio-estimator stderr
// sqrt(Σ w²(1_E - p̂)²)/Σ w and ESS = (Σw)²/Σw².
TiltedEstimate is_estimate(const std::vector<TiltedSample>& samples, const DeficitEvent& event);
TiltedEstimate is_estimate_deficit(double R, double alpha, double c, std::uint64_t n_samples,
                                   const SeedLineage& lineage, int threads = 0);

struct PlainEstimate {
  double p_hat = 0.0;
  double stderr_value = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t n = 0;
  Interval ci95{};  // Clopper–Pearson

  nlohmann::json to_json() const;
};

PlainEstimate plain_estimate(std::uint64_t hits, std::uint64_t n);
PlainEstimate plain_estimate_deficit(std::span<const int> counts, const DeficitEvent& event);

enum class TailSign { excess, deficit, both };
const char* to_string(TailSign sign);

// Frequency of ±(n(R) - R²) > R^α from GEF zero counts.
PlainEstimate tail_from_counts(std::span<const int> counts, double R, double alpha, TailSign sign);
PlainEstimate mc_estimate_tail(double R, double alpha, TailSign sign, std::uint64_t n_samples,
                               const SeedLineage& lineage, int threads = 0);

struct BernsteinDiagnostic {
  double R = 0.0;
  double alpha = 0.0;
  int N = 0;
  std::uint64_t n_samples = 0;
  // X = Σ_{J-}|ζ_k|² - Σ_{J+}|ζ_k|² under γ
  double mean_X = 0.0;
  double mean_X_stderr = 0.0;
  double mean_swapped = 0.0;  // same statistic with the bands exchanged
  std::vector<double> t;
  std::vector<double> empirical;  // P{X ≥ t}
  std::vector<double> bound;      // 2exp(-t²/(16(e+1)N)), clamped to 1
  // Ũ = {X ≥ √R log R} under γ; equals U under γ_a.
  double u_frequency = 0.0;
  double u_stderr = 0.0;
  double u_target = 0.0;  // (c₁/4) R^{-2+α}
  // On U's complement under γ_a: log dγ_a/dγ ≤ R^{α-½} log R - N log(1 - R^{2α-2}).
  double log_density_bound = 0.0;
  double max_log_density_off_u = 0.0;
  bool density_bound_holds = false;
  double asymptotic_log_density = 0.0;  // 2 R^{2α-1}

  nlohmann::json to_json() const;
};

BernsteinDiagnostic bernstein_diagnostic(double R, double alpha, std::uint64_t n_samples, const SeedLineage& lineage,
                                         int threads = 0);

}  // namespace gef
