#include "gef/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gef/errors.hpp"

namespace gef {

namespace {

constexpr std::size_t kTableSize = 1 << 16;
// Terms whose log-magnitude relative to the requested scale is below this are
// dropped before the linear recurrence starts.
constexpr double kLogFloor = -700.0;

struct RecurrenceTables {
  std::vector<double> inv_sqrt;   // 1/√(k+1)
  std::vector<double> half_log;   // ½ log(k+1)
  RecurrenceTables() : inv_sqrt(kTableSize), half_log(kTableSize) {
    for (std::size_t k = 0; k < kTableSize; ++k) {
      inv_sqrt[k] = 1.0 / std::sqrt(static_cast<double>(k + 1));
      half_log[k] = 0.5 * std::log(static_cast<double>(k + 1));
    }
  }
};

const RecurrenceTables& tables() {
  static const RecurrenceTables t;
  return t;
}

void check_order(int K) {
  if (K < 0 || static_cast<std::size_t>(K) >= kTableSize)
    throw PreconditionError("series order out of supported range");
}

// First index k0 whose term ρ^k/√k!·e^{-s} reaches e^{kLogFloor}, and that
// term's log. Returns k0 = K+1 if none does.
std::pair<int, double> first_significant_term(int K, double log_rho, double s) {
  const auto& t = tables();
  double logt = -s;
  int k = 0;
  while (logt < kLogFloor && k < K) {
    logt += log_rho - t.half_log[static_cast<std::size_t>(k)];
    ++k;
  }
  if (logt < kLogFloor) return {K + 1, logt};
  return {k, logt};
}

void check_targets(double eps_amp, double eps_prob) {
  if (!(eps_amp > 0.0 && eps_amp < 1.0 && eps_prob > 0.0 && eps_prob < 1.0))
    throw PreconditionError("truncation targets must lie in (0, 1)");
}

}  // namespace

std::span<const double> inverse_sqrt_table(std::size_t n) {
  if (n > kTableSize) throw PreconditionError("series order out of supported range");
  return {tables().inv_sqrt.data(), n};
}

SeriesSample exact_series(std::vector<complex> basis_coefficients, double r_valid) {
  if (basis_coefficients.empty()) basis_coefficients.push_back(0.0);
  check_order(static_cast<int>(basis_coefficients.size()) - 1);
  SeriesSample s;
  s.coefficients = std::move(basis_coefficients);
  s.r_valid = r_valid;
  s.exact = true;
  return s;
}

SeriesSample exact_polynomial(std::span<const complex> monomial_coefficients, double r_valid) {
  std::vector<complex> c(monomial_coefficients.begin(), monomial_coefficients.end());
  double sqrt_fact = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k > 0) sqrt_fact *= std::sqrt(static_cast<double>(k));
    c[k] *= sqrt_fact;
  }
  return exact_series(std::move(c), r_valid);
}

double tail_envelope_sum(int K, double r) {
  // Terms are summed from the far end so that small contributions survive.
  const double r_eff = std::max(r, 0.0);
  const int start = K + 1;
  const int stop = std::max(start, static_cast<int>(std::ceil((r_eff + 40.0) * (r_eff + 40.0))));
  double sum = 0.0;
  for (int k = stop; k >= start; --k) {
    const double d = std::sqrt(static_cast<double>(k)) - r_eff;
    sum += std::exp(-0.5 * d * d);
  }
  return sum;
}

int truncation_order(double r, double eps_amp, double eps_prob, double tail_scale) {
  check_targets(eps_amp, eps_prob);
  r = std::max(r, 1.0);
  const double threshold = eps_amp / (tail_scale * std::sqrt(2.0 * std::log(2.0 / eps_prob)));
  const int k_min = static_cast<int>(std::ceil(r * r));
  // terms[i] = e^{-(√k - r)²/2} for k = k_min+1+i; suffix sums give S(K, r).
  const int k_stop = static_cast<int>(std::ceil((r + 40.0) * (r + 40.0)));
  std::vector<double> suffix(static_cast<std::size_t>(k_stop - k_min + 2), 0.0);
  for (int k = k_stop; k > k_min; --k) {
    const double d = std::sqrt(static_cast<double>(k)) - r;
    suffix[static_cast<std::size_t>(k - k_min)] =
        suffix[static_cast<std::size_t>(k - k_min + 1)] + std::exp(-0.5 * d * d);
  }
  for (int K = k_min; K < k_stop; ++K) {
    if (suffix[static_cast<std::size_t>(K - k_min + 1)] <= threshold) return K;
  }
  throw NumericError("truncation planner did not converge");
}

int truncation_order(double r, const TruncationTargets& targets, double tail_scale) {
  return truncation_order(r, targets.eps_amp, targets.eps_prob, tail_scale);
}

double certified_radius(int K, const TruncationTargets& targets, double tail_scale) {
  check_targets(targets.eps_amp, targets.eps_prob);
  if (K < 1) return 0.0;
  const double threshold = targets.eps_amp / (tail_scale * std::sqrt(2.0 * std::log(2.0 / targets.eps_prob)));
  auto ok = [&](double r) { return tail_envelope_sum(K, r) <= threshold; };
  if (!ok(0.0)) return 0.0;
  double lo = 0.0, hi = std::sqrt(static_cast<double>(K));
  if (ok(hi)) return hi;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

SeriesSample sample_coefficients(const VarianceProfile& profile, int K, const SeedLineage& lineage,
                                 const TruncationTargets& targets) {
  if (K < 0) throw PreconditionError("K must be >= 0");
  check_order(K);
  const SeedLineage stream = lineage.with_stream(StreamTag::coefficients);
  SeriesSample s;
  s.lineage = lineage;
  int top = K;
  if (profile.kind() == VarianceProfile::Kind::explicit_table) {
    const int last = static_cast<int>(profile.values().size()) - 1;
    if (last < 0) return exact_series({0.0}, std::numeric_limits<double>::infinity());
    if (K >= last) {
      top = last;
      s.exact = true;
    }
  }
  s.coefficients.resize(static_cast<std::size_t>(top) + 1);
  for (int k = 0; k <= top; ++k)
    s.coefficients[static_cast<std::size_t>(k)] =
        complex_gaussian_at(stream, static_cast<std::uint32_t>(k)) * profile.value(k);
  if (s.exact) {
    s.r_valid = std::numeric_limits<double>::infinity();
  } else {
    s.eps_amp = targets.eps_amp;
    s.eps_prob = targets.eps_prob;
    s.r_valid = certified_radius(K, targets, profile.max_value());
  }
  return s;
}

int planned_order(const VarianceProfile& profile, double r, const TruncationTargets& targets) {
  int K = truncation_order(r + kRadiusSlack, targets, profile.max_value());
  return std::max<int>(K, static_cast<int>(profile.last_nonunit_index()));
}

SeriesSample sample_series(const VarianceProfile& profile, double r, const SeedLineage& lineage,
                           const TruncationTargets& targets) {
  if (!(r >= 0.0)) throw PreconditionError("radius must be >= 0");
  SeriesSample s = sample_coefficients(profile, planned_order(profile, r, targets), lineage, targets);
  if (!s.exact) s.r_valid = std::max(r, 1.0) + kRadiusSlack;
  return s;
}

complex evaluate_scaled(const SeriesSample& sample, complex z, double log_scale) {
  const int K = sample.K();
  const double rho = std::abs(z);
  if (rho == 0.0) return sample.coefficients[0] * std::exp(-log_scale);
  const auto [k0, logt] = first_significant_term(K, std::log(rho), log_scale);
  if (k0 > K) return 0.0;
  const auto& inv_sqrt = tables().inv_sqrt;
  complex term = std::polar(std::exp(logt), static_cast<double>(k0) * std::arg(z));
  complex sum = 0.0;
  for (int k = k0; k <= K; ++k) {
    sum += sample.coefficients[static_cast<std::size_t>(k)] * term;
    term *= z * inv_sqrt[static_cast<std::size_t>(k)];
  }
  return sum;
}

complex evaluate(const SeriesSample& sample, complex z) {
  if (std::abs(z) > sample.r_valid) throw PreconditionError("outside certified radius");
  return evaluate_scaled(sample, z, 0.0);
}

double evaluate_star(const SeriesSample& sample, complex z) {
  if (std::abs(z) > sample.r_valid) throw PreconditionError("outside certified radius");
  return std::abs(evaluate_scaled(sample, z, 0.5 * std::norm(z)));
}

double modulus_bound_scaled(const SeriesSample& sample, double rho, double log_scale) {
  const int K = sample.K();
  if (rho == 0.0) return std::abs(sample.coefficients[0]) * std::exp(-log_scale);
  const auto [k0, logt] = first_significant_term(K, std::log(rho), log_scale);
  if (k0 > K) return 0.0;
  const auto& inv_sqrt = tables().inv_sqrt;
  double term = std::exp(logt), sum = 0.0;
  for (int k = k0; k <= K; ++k) {
    sum += std::abs(sample.coefficients[static_cast<std::size_t>(k)]) * term;
    term *= rho * inv_sqrt[static_cast<std::size_t>(k)];
  }
  return sum;
}

double derivative_bound_scaled(const SeriesSample& sample, double rho, double log_scale) {
  // Σ_{k≥1} |c_k| √k · ρ^{k-1}/√(k-1)!; term_j tracks ρ^j/√j!.
  const int K = sample.K();
  if (K < 1) return 0.0;
  const auto& inv_sqrt = tables().inv_sqrt;
  if (rho == 0.0) return std::abs(sample.coefficients[1]) * std::exp(-log_scale);
  const auto [j0, logt] = first_significant_term(K - 1, std::log(rho), log_scale);
  if (j0 > K - 1) return 0.0;
  double term = std::exp(logt), sum = 0.0;
  for (int j = j0; j <= K - 1; ++j) {
    const auto k = static_cast<std::size_t>(j + 1);
    sum += std::abs(sample.coefficients[k]) * term / inv_sqrt[k - 1];
    term *= rho * inv_sqrt[static_cast<std::size_t>(j)];
  }
  return sum;
}

SeriesSample rotate_sample(const SeriesSample& sample, double theta) {
  SeriesSample out = sample;
  for (std::size_t k = 0; k < out.coefficients.size(); ++k)
    out.coefficients[k] *= std::polar(1.0, static_cast<double>(k) * theta);
  return out;
}

nlohmann::json series_to_json(const SeriesSample& sample) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const complex& c : sample.coefficients) coeffs.push_back({c.real(), c.imag()});
  nlohmann::json j;
  j["K"] = sample.K();
  j["coefficients"] = std::move(coeffs);
  j["r_valid"] = std::isfinite(sample.r_valid) ? nlohmann::json(sample.r_valid) : nlohmann::json(nullptr);
  j["eps_amp"] = sample.eps_amp;
  j["eps_prob"] = sample.eps_prob;
  j["exact"] = sample.exact;
  j["lineage"] = {{"master_seed", sample.lineage.master_seed},
                  {"sample_index", sample.lineage.sample_index},
                  {"stream_tag", sample.lineage.stream_tag}};
  return j;
}

SeriesSample series_from_json(const nlohmann::json& j) {
  SeriesSample s;
  for (const auto& pair : j.at("coefficients")) s.coefficients.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  if (s.coefficients.empty()) throw PreconditionError("series needs at least one coefficient");
  check_order(s.K());
  s.r_valid = j.at("r_valid").is_null() ? std::numeric_limits<double>::infinity() : j.at("r_valid").get<double>();
  s.eps_amp = j.value("eps_amp", 0.0);
  s.eps_prob = j.value("eps_prob", 0.0);
  s.exact = j.value("exact", false);
  if (j.contains("lineage")) {
    const auto& l = j.at("lineage");
    s.lineage = {l.at("master_seed").get<std::uint64_t>(), l.at("sample_index").get<std::uint64_t>(),
                 l.at("stream_tag").get<std::uint32_t>()};
  }
  return s;
}

}  // namespace gef
