#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gef/rng.hpp"

namespace gef {

// Probability bounds and the events they control.
//
//   nsv_sum         P{Σ a_k|η_k| > t} ≤ 2e^{-½(t/S)²}, S = Σ a_k.
//                   params: t_over_S > 0; terms (default 20). Simulated with a_k = 1/√k!.
//   bernstein       P{|Σ_{k≤n} ψ_k| > t} ≤ 2exp(-t²/(16Kn)) for 0 < t ≤ 5Kn.
//                   params: K, n, t. Simulated with Laplace ψ (K = 1) or
//                   ψ = |ζ|² - 1 (needs K ≥ e + 1).
//   max_fstar       P{max_{rD} f* ≥ M} ≤ 18r² e^{-M²/32}, r ≥ 1, M ≥ 1.
//   min_max_f       P{max_{rD} |f| ≤ e^{-m r²}} ≤ exp(-(m²/log m) r⁴), r ≥ 1, m ≥ 3.
//   small_on_curve  P{min_γ f* < ε} ≤ 100 r ε √log(1/ε) for a curve γ of length
//                   r ≥ 1 and 0 < ε ≤ 1/4. γ is the arc {e^{iθ}: 0 ≤ θ ≤ r}, r ≤ 2π.
//   arc_delta_tail  P{|δ(f, γ)| ≥ m r²} ≤ 2exp(-m²r⁴/(16B² log m)), r ≥ 1, m ≥ 25B.
//                   params: r, m, B (default 1). γ is the circle rT.
enum class BoundId { nsv_sum, bernstein, max_fstar, min_max_f, small_on_curve, arc_delta_tail };

const char* to_string(BoundId id);
BoundId bound_id_from_string(const std::string& name);

struct BoundSpec {
  BoundId id = BoundId::nsv_sum;
  std::map<std::string, double> params;

  double param(const std::string& name) const;
  double param(const std::string& name, double fallback) const;
};

// Formula value clamped to [0, 1]. Throws PreconditionError naming the failed
// hypothesis.
double bound_value(const BoundSpec& spec);
// Unclamped formula value.
double bound_formula(const BoundSpec& spec);

struct ValidationReport {
  BoundSpec spec;
  double empirical = 0.0;
  double stderr_value = 0.0;
  double bound = 0.0;
  std::uint64_t n = 0;
  bool pass = false;

  nlohmann::json to_json() const;
};

// Simulated statistic whose threshold crossing is the event of the bound.
// Grid points that share everything but the threshold reuse one statistic per trial.
struct TrialStatistic {
  double value = 0.0;
  bool degenerate = false;  // zero on contour etc.; counted as an event
};

TrialStatistic bound_trial(const BoundSpec& spec, const SeedLineage& lineage);
bool bound_event(const BoundSpec& spec, const TrialStatistic& stat);

// pass = empirical ≤ bound + 3·sqrt(p̂(1-p̂)/n).
ValidationReport validate_bound(const BoundSpec& spec, std::uint64_t n_trials, const SeedLineage& lineage,
                                int threads = 0);
std::vector<ValidationReport> validate_bounds(const std::vector<BoundSpec>& specs, std::uint64_t n_trials,
                                              const SeedLineage& lineage, int threads = 0);

// Documented parameter grid for each bound.
std::vector<BoundSpec> bound_grid(BoundId id);

// Smallest B with freq ≤ 2exp(-m²r⁴/(16B² log m)) for every (m, freq) with freq > 0;
// 0 when no event was seen.
double fit_arc_delta_B(double r, const std::vector<std::pair<double, double>>& m_and_freq);

// Empirical frequencies of |δ(f, rT)| ≥ m r² for each m, over n_trials samples.
std::vector<double> arc_delta_tail_frequencies(double r, const std::vector<double>& m_list, std::uint64_t n_trials,
                                               const SeedLineage& lineage, int threads = 0);

}  // namespace gef
