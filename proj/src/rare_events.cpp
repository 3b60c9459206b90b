#include "gef/rare_events.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gef/analytic.hpp"
#include "gef/errors.hpp"
#include "gef/parallel/kernels.hpp"
#include "gef/series.hpp"
#include "gef/zeros.hpp"

namespace gef {

double rn_log_weight(const VarianceProfile& profile, std::span<const complex> eta) {
  KahanSum s;
  for (const auto k : profile.nonunit_indices()) {
    if (k >= static_cast<std::int64_t>(eta.size())) throw PreconditionError("coefficient sequence is too short for the profile");
    const double a2 = profile.variance(k);
    if (a2 == 0.0) throw PreconditionError("singular measures");
    const double e2 = std::norm(eta[static_cast<std::size_t>(k)]);
    s.add(std::log(a2) - e2 * (1.0 - 1.0 / a2));
  }
  return s.value();
}

double rn_weight(const VarianceProfile& profile, std::span<const complex> eta) {
  return std::exp(rn_log_weight(profile, eta));
}

double DeficitEvent::threshold() const { return R * R - c * std::pow(R, alpha); }
bool DeficitEvent::contains(int count) const { return count <= threshold(); }

double default_deficit_c(double R, double alpha) { return 0.5 * deficit_constant(R, alpha); }

std::vector<TiltedSample> sample_tilted(double R, double alpha, std::uint64_t n_samples, const SeedLineage& lineage,
                                        int threads) {
  if (!(R >= 2.0) || !(alpha > 0.5 && alpha < 1.0)) throw PreconditionError("tilted sampling needs R >= 2 and 1/2 < alpha < 1");
  const VarianceProfile profile = VarianceProfile::jlm_banded(R, alpha);
  const int K = planned_order(profile, R);
  return map_samples<TiltedSample>(lineage.sample_index, n_samples, threads, [&](std::uint64_t idx) {
    SeriesSample s = sample_coefficients(profile, K, lineage.with_index(idx));
    s.r_valid = R + kRadiusSlack;
    return TiltedSample{count_zeros_winding(s, R).count, rn_log_weight(profile, s.coefficients)};
  });
}

TiltedEstimate is_estimate(const std::vector<TiltedSample>& samples, const DeficitEvent& event) {
  if (samples.empty()) throw PreconditionError("importance sampling needs samples");
  TiltedEstimate est;
  est.event = event;
  est.n_samples = samples.size();
  KahanSum sw, sw2, swe;
  std::uint64_t hits = 0;
  for (const auto& s : samples) {
    const double w = std::exp(s.log_weight);
    sw.add(w);
    sw2.add(w * w);
    if (event.contains(s.count)) {
      swe.add(w);
      ++hits;
    }
  }
  est.p_hat = std::clamp(swe.value() / sw.value(), 0.0, 1.0);
  KahanSum var;
  for (const auto& s : samples) {
    const double w = std::exp(s.log_weight);
    const double d = (event.contains(s.count) ? 1.0 : 0.0) - est.p_hat;
    var.add(w * w * d * d);
  }
  est.stderr_value = std::sqrt(var.value()) / sw.value();
  est.ess = sw.value() * sw.value() / sw2.value();
  est.low_ess = est.ess < 0.01 * est.n_samples;
  est.tilted_hit_rate = static_cast<double>(hits) / est.n_samples;
  est.finite_weight_variance = std::pow(event.R, event.alpha - 1.0) < 0.5;
  est.ci95 = {std::max(0.0, est.p_hat - 1.96 * est.stderr_value), std::min(1.0, est.p_hat + 1.96 * est.stderr_value)};
  return est;
}

TiltedEstimate is_estimate_deficit(double R, double alpha, double c, std::uint64_t n_samples,
                                   const SeedLineage& lineage, int threads) {
  return is_estimate(sample_tilted(R, alpha, n_samples, lineage, threads), DeficitEvent{R, alpha, c});
}

nlohmann::json TiltedEstimate::to_json() const {
  return {{"R", event.R},       {"alpha", event.alpha}, {"c", event.c},     {"p_hat", p_hat},
          {"stderr", stderr_value}, {"ess", ess},     {"n", n_samples},    {"method", "importance"},
          {"tilted_hit_rate", tilted_hit_rate}, {"low_ess", low_ess},
          {"finite_weight_variance", finite_weight_variance}, {"ci95", {ci95.lo, ci95.hi}}};
}

PlainEstimate plain_estimate(std::uint64_t hits, std::uint64_t n) {
  PlainEstimate e;
  e.hits = hits;
  e.n = n;
  e.p_hat = static_cast<double>(hits) / n;
  e.stderr_value = std::sqrt(e.p_hat * (1.0 - e.p_hat) / n);
  e.ci95 = clopper_pearson(hits, n);
  return e;
}

PlainEstimate plain_estimate_deficit(std::span<const int> counts, const DeficitEvent& event) {
  std::uint64_t hits = 0;
  for (int c : counts) hits += event.contains(c) ? 1 : 0;
  return plain_estimate(hits, counts.size());
}

nlohmann::json PlainEstimate::to_json() const {
  return {{"p_hat", p_hat}, {"stderr", stderr_value}, {"hits", hits}, {"n", n}, {"method", "plain"},
          {"ci95", {ci95.lo, ci95.hi}}};
}

const char* to_string(TailSign sign) {
  switch (sign) {
    case TailSign::excess: return "excess";
    case TailSign::deficit: return "deficit";
    case TailSign::both: return "both";
  }
  return "both";
}

PlainEstimate tail_from_counts(std::span<const int> counts, double R, double alpha, TailSign sign) {
  if (counts.empty()) throw PreconditionError("tail estimate needs samples");
  const double gap = std::pow(R, alpha);
  std::uint64_t hits = 0;
  for (int c : counts) {
    const double d = c - R * R;
    const bool hit = sign == TailSign::excess ? d > gap : sign == TailSign::deficit ? -d > gap : std::fabs(d) > gap;
    hits += hit ? 1 : 0;
  }
  return plain_estimate(hits, counts.size());
}

PlainEstimate mc_estimate_tail(double R, double alpha, TailSign sign, std::uint64_t n_samples,
                               const SeedLineage& lineage, int threads) {
  BatchOptions opt;
  opt.threads = threads;
  const auto counts = zero_counts(VarianceProfile::constant_one(), R, lineage.master_seed, lineage.sample_index,
                                  n_samples, opt);
  return tail_from_counts(counts, R, alpha, sign);
}

BernsteinDiagnostic bernstein_diagnostic(double R, double alpha, std::uint64_t n_samples, const SeedLineage& lineage,
                                         int threads) {
  if (n_samples < 2) throw PreconditionError("diagnostic needs at least 2 samples");
  const VarianceProfile profile = VarianceProfile::jlm_banded(R, alpha);
  BernsteinDiagnostic d;
  d.R = R;
  d.alpha = alpha;
  d.N = static_cast<int>(profile.j_minus().size());
  d.n_samples = n_samples;
  const double tilt = profile.tilt();
  const double u_level = std::sqrt(R) * std::log(R);
  d.log_density_bound = std::pow(R, alpha - 0.5) * std::log(R) - d.N * std::log(1.0 - tilt * tilt);
  d.asymptotic_log_density = 2.0 * std::pow(R, 2.0 * alpha - 1.0);

  struct Draw {
    double x = 0.0;
    double log_density = 0.0;  // log dγ_a/dγ at η = a ζ
  };
  const auto draws = map_samples<Draw>(lineage.sample_index, n_samples, threads, [&](std::uint64_t idx) {
    const SeedLineage l = lineage.with_index(idx).with_stream(StreamTag::coefficients);
    Draw dr;
    std::vector<complex> eta(static_cast<std::size_t>(profile.last_nonunit_index()) + 1);
    for (const auto k : profile.nonunit_indices()) {
      const complex z = complex_gaussian_at(l, static_cast<std::uint32_t>(k));
      dr.x += profile.j_minus().contains(k) ? std::norm(z) : -std::norm(z);
      eta[static_cast<std::size_t>(k)] = z * profile.value(k);
    }
    dr.log_density = -rn_log_weight(profile, eta);
    return dr;
  });

  std::vector<double> xs;
  xs.reserve(draws.size());
  std::uint64_t u_hits = 0;
  d.max_log_density_off_u = -INFINITY;
  for (const auto& dr : draws) {
    xs.push_back(dr.x);
    if (dr.x >= u_level) ++u_hits;
    else d.max_log_density_off_u = std::max(d.max_log_density_off_u, dr.log_density);
  }
  const Moments m = moments(xs);
  d.mean_X = m.mean;
  d.mean_X_stderr = m.stderr_mean;
  d.mean_swapped = -m.mean;
  const double sqrtN = std::sqrt(static_cast<double>(d.N));
  d.t = {0.0, sqrtN, sqrtN * std::log(static_cast<double>(d.N)), static_cast<double>(d.N)};
  for (double t : d.t) {
    std::uint64_t hits = 0;
    for (double x : xs) hits += x >= t ? 1 : 0;
    d.empirical.push_back(static_cast<double>(hits) / n_samples);
    d.bound.push_back(std::min(1.0, 2.0 * std::exp(-t * t / (16.0 * (std::numbers::e + 1.0) * d.N))));
  }
  d.u_frequency = static_cast<double>(u_hits) / n_samples;
  d.u_stderr = std::sqrt(d.u_frequency * (1.0 - d.u_frequency) / n_samples);
  d.u_target = 0.25 * deficit_constant(R, alpha) * std::pow(R, alpha - 2.0);
  d.density_bound_holds = d.max_log_density_off_u <= d.log_density_bound * (1.0 + 1e-12);
  return d;
}

nlohmann::json BernsteinDiagnostic::to_json() const {
  return {{"R", R},
          {"alpha", alpha},
          {"N", N},
          {"n", n_samples},
          {"mean_X", mean_X},
          {"mean_X_stderr", mean_X_stderr},
          {"mean_swapped", mean_swapped},
          {"t", t},
          {"empirical", empirical},
          {"bound", bound},
          {"u_frequency", u_frequency},
          {"u_stderr", u_stderr},
          {"u_target", u_target},
          {"log_density_bound", log_density_bound},
          {"max_log_density_off_u", max_log_density_off_u},
          {"density_bound_holds", density_bound_holds},
          {"asymptotic_log_density", asymptotic_log_density}};
}

}  // namespace gef
