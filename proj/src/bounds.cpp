#include "gef/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gef/errors.hpp"
#include "gef/parallel/kernels.hpp"
#include "gef/series.hpp"
#include "gef/zeros.hpp"

namespace gef {

namespace {

constexpr double kGridStep = 0.05;

void require(bool ok, const char* what) {
  if (!ok) throw PreconditionError(what);
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Parameter that the event threshold is read from; grid points differing only
// in it share one statistic per trial.
const char* threshold_name(BoundId id) {
  switch (id) {
    case BoundId::nsv_sum: return "t_over_S";
    case BoundId::bernstein: return "t";
    case BoundId::max_fstar: return "M";
    case BoundId::min_max_f: return "m";
    case BoundId::small_on_curve: return "";
    case BoundId::arc_delta_tail: return "m";
  }
  return "";
}

std::string statistic_key(const BoundSpec& spec) {
  std::string key = to_string(spec.id);
  const std::string skip = threshold_name(spec.id);
  for (const auto& [k, v] : spec.params) {
    if (k == skip || (spec.id == BoundId::arc_delta_tail && k == "B")) continue;
    key += ";" + k + "=" + std::to_string(v);
  }
  return key;
}

double sup_fstar_on_disk(const SeriesSample& s, double r) {
  double best = std::abs(s.coefficients[0]);
  const int rings = static_cast<int>(std::ceil(r / kGridStep));
  for (int i = 1; i <= rings; ++i) {
    const double rho = r * i / rings;
    const int m = std::max(8, static_cast<int>(std::ceil(2.0 * std::numbers::pi * rho / kGridStep)));
    for (int j = 0; j < m; ++j) {
      const complex z = std::polar(rho, 2.0 * std::numbers::pi * j / m);
      best = std::max(best, std::abs(evaluate_scaled(s, z, 0.5 * rho * rho)));
    }
  }
  return best;
}

double log_max_modulus_on_circle(const SeriesSample& s, double r) {
  const int m = std::max(64, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / kGridStep)));
  double best = 0.0;
  for (int j = 0; j < m; ++j)
    best = std::max(best, std::abs(evaluate_scaled(s, std::polar(r, 2.0 * std::numbers::pi * j / m), 0.5 * r * r)));
  return std::log(best) + 0.5 * r * r;
}

// Decides min_{θ∈[0,len]} f*(e^{iθ}) < eps exactly, up to the depth limit:
// a segment is cleared once |f*(mid)| - L h/2 ≥ eps.
struct CurveDecision {
  bool event = false;
  bool degenerate = false;
};

CurveDecision small_on_unit_arc(const SeriesSample& s, double len, double eps) {
  const double lipschitz = derivative_bound_scaled(s, 1.0, 0.5);
  auto fstar = [&](double t) { return std::abs(evaluate_scaled(s, std::polar(1.0, t), 0.5)); };
  struct Seg {
    double a, b;
    int depth;
  };
  const int pieces = 16 * static_cast<int>(std::ceil(len));
  std::vector<Seg> stack;
  for (int i = pieces - 1; i >= 0; --i) stack.push_back({len * i / pieces, len * (i + 1) / pieces, 0});
  while (!stack.empty()) {
    const Seg seg = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (seg.a + seg.b);
    const double v = fstar(mid);
    if (v < eps) return {true, false};
    if (v - lipschitz * 0.5 * (seg.b - seg.a) >= eps) continue;
    if (seg.depth >= 40) return {true, true};
    stack.push_back({mid, seg.b, seg.depth + 1});
    stack.push_back({seg.a, mid, seg.depth + 1});
  }
  if (fstar(0.0) < eps || fstar(len) < eps) return {true, false};
  return {false, false};
}

}  // namespace

const char* to_string(BoundId id) {
  switch (id) {
    case BoundId::nsv_sum: return "nsv_sum";
    case BoundId::bernstein: return "bernstein";
    case BoundId::max_fstar: return "max_fstar";
    case BoundId::min_max_f: return "min_max_f";
    case BoundId::small_on_curve: return "small_on_curve";
    case BoundId::arc_delta_tail: return "arc_delta_tail";
  }
  return "unknown";
}

BoundId bound_id_from_string(const std::string& name) {
  for (BoundId id : {BoundId::nsv_sum, BoundId::bernstein, BoundId::max_fstar, BoundId::min_max_f,
                     BoundId::small_on_curve, BoundId::arc_delta_tail})
    if (name == to_string(id)) return id;
  throw PreconditionError("unknown bound: " + name);
}

double BoundSpec::param(const std::string& name) const {
  const auto it = params.find(name);
  if (it == params.end()) throw PreconditionError(std::string(to_string(id)) + " needs parameter " + name);
  return it->second;
}

double BoundSpec::param(const std::string& name, double fallback) const {
  const auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

double bound_formula(const BoundSpec& spec) {
  switch (spec.id) {
    case BoundId::nsv_sum: {
      const double x = spec.param("t_over_S");
      require(x > 0.0, "nsv_sum requires t > 0");
      return 2.0 * std::exp(-0.5 * x * x);
    }
    case BoundId::bernstein: {
      const double K = spec.param("K"), n = spec.param("n"), t = spec.param("t");
      require(K > 0.0, "bernstein requires K > 0");
      require(n >= 1.0 && n == std::floor(n), "bernstein requires integer n >= 1");
      require(t > 0.0 && t <= 5.0 * K * n, "bernstein requires 0 < t <= 5Kn");
      return 2.0 * std::exp(-t * t / (16.0 * K * n));
    }
    case BoundId::max_fstar: {
      const double r = spec.param("r"), M = spec.param("M");
      require(r >= 1.0, "max_fstar requires r >= 1");
      require(M >= 1.0, "max_fstar requires M >= 1");
      return 18.0 * r * r * std::exp(-M * M / 32.0);
    }
    case BoundId::min_max_f: {
      const double r = spec.param("r"), m = spec.param("m");
      require(r >= 1.0, "min_max_f requires r >= 1");
      require(m >= 3.0, "min_max_f requires m >= 3");
      return std::exp(-(m * m / std::log(m)) * std::pow(r, 4));
    }
    case BoundId::small_on_curve: {
      const double r = spec.param("r"), eps = spec.param("epsilon");
      require(r >= 1.0, "small_on_curve requires r >= 1");
      require(eps > 0.0 && eps <= 0.25, "small_on_curve requires 0 < epsilon <= 1/4");
      return 100.0 * r * eps * std::sqrt(std::log(1.0 / eps));
    }
    case BoundId::arc_delta_tail: {
      const double r = spec.param("r"), m = spec.param("m"), B = spec.param("B", 1.0);
      require(r >= 1.0, "arc_delta_tail requires r >= 1");
      require(B > 0.0, "arc_delta_tail requires B > 0");
      require(m >= 25.0 * B, "arc_delta_tail requires m >= 25B");
      return 2.0 * std::exp(-m * m * std::pow(r, 4) / (16.0 * B * B * std::log(m)));
    }
  }
  return 1.0;
}

double bound_value(const BoundSpec& spec) { return clamp01(bound_formula(spec)); }

TrialStatistic bound_trial(const BoundSpec& spec, const SeedLineage& lineage) {
  const VarianceProfile gef = VarianceProfile::constant_one();
  switch (spec.id) {
    case BoundId::nsv_sum: {
      const int terms = static_cast<int>(spec.param("terms", 20.0));
      require(terms >= 1, "nsv_sum requires terms >= 1");
      const SeedLineage coeffs = lineage.with_stream(StreamTag::coefficients);
      double sum = 0.0, S = 0.0, a = 1.0;
      for (int k = 0; k < terms; ++k) {
        if (k > 0) a /= std::sqrt(static_cast<double>(k));
        S += a;
        sum += a * std::abs(complex_gaussian_at(coeffs, static_cast<std::uint32_t>(k)));
      }
      return {sum / S, false};
    }
    case BoundId::bernstein: {
      const double K = spec.param("K");
      const int n = static_cast<int>(spec.param("n"));
      require(K >= 1.0, "bernstein simulation needs K >= 1 (Laplace) or K >= e+1 (|zeta|^2 - 1)");
      const bool centered_exp = K >= std::numbers::e + 1.0;
      CounterStream aux(lineage.with_stream(StreamTag::auxiliary));
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        const double e = aux.exponential();
        if (centered_exp) sum += e - 1.0;
        else sum += aux.uniform() < 0.5 ? -e : e;
      }
      return {std::fabs(sum), false};
    }
    case BoundId::max_fstar: {
      const double r = spec.param("r");
      const SeriesSample s = sample_series(gef, r, lineage);
      return {sup_fstar_on_disk(s, r), false};
    }
    case BoundId::min_max_f: {
      const double r = spec.param("r");
      const SeriesSample s = sample_series(gef, r, lineage);
      return {-log_max_modulus_on_circle(s, r) / (r * r), false};
    }
    case BoundId::small_on_curve: {
      const double r = spec.param("r"), eps = spec.param("epsilon");
      require(r <= 2.0 * std::numbers::pi, "small_on_curve simulation uses an arc of the unit circle: r <= 2pi");
      const SeriesSample s = sample_series(gef, 1.0, lineage);
      const CurveDecision d = small_on_unit_arc(s, r, eps);
      return {d.event ? 1.0 : 0.0, d.degenerate};
    }
    case BoundId::arc_delta_tail: {
      const double r = spec.param("r");
      const SeriesSample s = sample_series(gef, r, lineage);
      try {
        const ZeroCountResult z = count_zeros_winding(s, r);
        return {2.0 * std::numbers::pi * std::fabs(z.count - r * r) / (r * r), false};
      } catch (const ZeroOnContourError&) {
        return {0.0, true};
      }
    }
  }
  return {};
}

bool bound_event(const BoundSpec& spec, const TrialStatistic& stat) {
  if (stat.degenerate) return true;
  switch (spec.id) {
    case BoundId::nsv_sum: return stat.value > spec.param("t_over_S");
    case BoundId::bernstein: return stat.value > spec.param("t");
    case BoundId::max_fstar: return stat.value >= spec.param("M");
    case BoundId::min_max_f: return stat.value >= spec.param("m");
    case BoundId::small_on_curve: return stat.value > 0.5;
    case BoundId::arc_delta_tail: return stat.value >= spec.param("m");
  }
  return false;
}

std::vector<ValidationReport> validate_bounds(const std::vector<BoundSpec>& specs, std::uint64_t n_trials,
                                              const SeedLineage& lineage, int threads) {
  if (n_trials == 0) throw PreconditionError("validation needs at least one trial");
  std::vector<ValidationReport> out(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    out[i].spec = specs[i];
    out[i].bound = bound_value(specs[i]);
    out[i].n = n_trials;
  }
  std::vector<bool> done(specs.size(), false);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (done[i]) continue;
    const std::string key = statistic_key(specs[i]);
    const auto stats = map_samples<TrialStatistic>(lineage.sample_index, n_trials, threads, [&](std::uint64_t idx) {
      return bound_trial(specs[i], lineage.with_index(idx));
    });
    for (std::size_t j = i; j < specs.size(); ++j) {
      if (done[j] || statistic_key(specs[j]) != key) continue;
      done[j] = true;
      std::uint64_t hits = 0;
      for (const auto& s : stats) hits += bound_event(specs[j], s) ? 1 : 0;
      auto& rep = out[j];
      rep.empirical = static_cast<double>(hits) / n_trials;
      rep.stderr_value = std::sqrt(rep.empirical * (1.0 - rep.empirical) / n_trials);
      rep.pass = rep.empirical <= rep.bound + 3.0 * rep.stderr_value;
    }
  }
  return out;
}

ValidationReport validate_bound(const BoundSpec& spec, std::uint64_t n_trials, const SeedLineage& lineage,
                                int threads) {
  return validate_bounds({spec}, n_trials, lineage, threads).front();
}

nlohmann::json ValidationReport::to_json() const {
  return {{"bound_id", to_string(spec.id)},
          {"params", spec.params},
          {"empirical", empirical},
          {"stderr", stderr_value},
          {"bound", bound},
          {"n", n},
          {"pass", pass}};
}

std::vector<BoundSpec> bound_grid(BoundId id) {
  std::vector<BoundSpec> g;
  switch (id) {
    case BoundId::nsv_sum:
      for (double x : {1.0, 2.0, 3.0, 4.0}) g.push_back({id, {{"t_over_S", x}, {"terms", 20.0}}});
      break;
    case BoundId::bernstein:
      for (double t : {4.0, 8.0, 16.0, 32.0, 48.0}) g.push_back({id, {{"K", 1.0}, {"n", 16.0}, {"t", t}}});
      for (double t : {8.0, 16.0, 32.0, 64.0})
        g.push_back({id, {{"K", std::numbers::e + 1.0}, {"n", 16.0}, {"t", t}}});
      break;
    case BoundId::max_fstar:
      for (double r : {1.0, 2.0})
        for (double M : {1.0, 2.0, 3.0, 4.0, 8.0, 20.0}) g.push_back({id, {{"r", r}, {"M", M}}});
      break;
    case BoundId::min_max_f:
      for (double r : {1.0, 2.0})
        for (double m : {3.0, 4.0, 6.0}) g.push_back({id, {{"r", r}, {"m", m}}});
      break;
    case BoundId::small_on_curve:
      for (double r : {1.0, 2.0, 4.0})
        for (double eps : {1e-3, 1e-2, 0.05, 0.25}) g.push_back({id, {{"r", r}, {"epsilon", eps}}});
      break;
    case BoundId::arc_delta_tail:
      for (double r : {1.0, 2.0})
        for (double m : {25.0, 30.0}) g.push_back({id, {{"r", r}, {"m", m}, {"B", 1.0}}});
      break;
  }
  return g;
}

double fit_arc_delta_B(double r, const std::vector<std::pair<double, double>>& m_and_freq) {
  double B = 0.0;
  for (const auto& [m, freq] : m_and_freq) {
    if (!(freq > 0.0) || !(m > 1.0)) continue;
    if (freq >= 2.0) throw PreconditionError("frequency must be below 2");
    const double need = m * m * std::pow(r, 4) / (16.0 * std::log(m) * std::log(2.0 / freq));
    B = std::max(B, std::sqrt(need));
  }
  return B;
}

std::vector<double> arc_delta_tail_frequencies(double r, const std::vector<double>& m_list, std::uint64_t n_trials,
                                               const SeedLineage& lineage, int threads) {
  const BoundSpec probe{BoundId::arc_delta_tail, {{"r", r}}};
  const auto stats = map_samples<TrialStatistic>(lineage.sample_index, n_trials, threads, [&](std::uint64_t idx) {
    return bound_trial(probe, lineage.with_index(idx));
  });
  std::vector<double> freq;
  for (double m : m_list) {
    std::uint64_t hits = 0;
    for (const auto& s : stats) hits += (s.degenerate || s.value >= m) ? 1 : 0;
    freq.push_back(static_cast<double>(hits) / n_trials);
  }
  return freq;
}

}  // namespace gef
