#include "gef/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>

#include <Eigen/Dense>

#include "gef/analytic.hpp"
#include "gef/bounds.hpp"
#include "gef/errors.hpp"
#include "gef/independence.hpp"
#include "gef/inequalities.hpp"
#include "gef/lattice.hpp"
#include "gef/lemma_checks.hpp"
#include "gef/parallel/kernels.hpp"
#include "gef/roots.hpp"
#include "gef/series.hpp"

#ifndef GEF_CODE_VERSION
#define GEF_CODE_VERSION "unknown"
#endif

namespace gef {

namespace {

constexpr std::pair<Experiment, const char*> kExperimentNames[] = {
    {Experiment::mean_check, "mean_check"},     {Experiment::variance_scan, "variance_scan"},
    {Experiment::clt_check, "clt_check"},       {Experiment::tail_scan, "tail_scan"},
    {Experiment::jlm_fit, "jlm_fit"},           {Experiment::bounds_suite, "bounds_suite"},
    {Experiment::lemma_suite, "lemma_suite"},   {Experiment::demo_suite, "demo_suite"},
    {Experiment::lattice_scan, "lattice_scan"},
};

// is draws live far above the plain-MC blocks so the two estimates are independent.
constexpr std::uint64_t kImportanceOffset = std::uint64_t{1} << 40;

ResultRow row(const std::string& experiment, nlohmann::json params, const std::string& statistic, double value,
              double stderr_value, std::uint64_t n, std::uint64_t seed, std::uint64_t lo, std::uint64_t hi) {
  ResultRow r;
  r.experiment = experiment;
  r.params = std::move(params);
  r.statistic = statistic;
  r.value = value;
  r.stderr_value = stderr_value;
  r.n = n;
  r.seed = seed;
  r.index_lo = lo;
  r.index_hi = hi;
  return r;
}

std::vector<double> to_doubles(std::span<const int> x) { return {x.begin(), x.end()}; }

std::vector<int> gef_counts(const CampaignConfig& c, double R, std::uint64_t first) {
  BatchOptions opt;
  opt.threads = c.threads;
  return zero_counts(VarianceProfile::constant_one(), R, c.master_seed, first, c.n_samples, opt);
}

}  // namespace

const char* to_string(Experiment e) {
  for (const auto& [id, name] : kExperimentNames)
    if (id == e) return name;
  return "unknown";
}

Experiment experiment_from_string(const std::string& name) {
  std::string key = name;
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "ai_demo") return Experiment::demo_suite;
  if (key == "lattice") return Experiment::lattice_scan;
  for (const auto& [id, n] : kExperimentNames)
    if (key == n) return id;
  throw PreconditionError("unknown experiment: " + name);
}

nlohmann::json CampaignConfig::to_json() const {
  nlohmann::json centers_json = nlohmann::json::array();
  for (complex w : centers) centers_json.push_back({w.real(), w.imag()});
  return {{"experiment", to_string(experiment)},
          {"R_list", R_list},
          {"alpha_list", alpha_list},
          {"n_samples", n_samples},
          {"master_seed", master_seed},
          {"format", format},
          {"K_budget", K_budget},
          {"importance", importance},
          {"nu", nu},
          {"centers", centers_json},
          {"demo_r", demo_r},
          {"demo_rho", demo_rho},
          {"demo_A", demo_A}};
}

CampaignConfig CampaignConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw PreconditionError("config must be a JSON object");
  static const std::set<std::string> known = {"experiment", "R_list", "alpha_list", "n_samples", "master_seed",
                                              "output_path", "format", "threads", "K_budget", "importance",
                                              "nu", "centers", "demo_r", "demo_rho", "demo_A"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.contains(it.key())) throw PreconditionError("unknown config key: " + it.key());
  CampaignConfig c;
  try {
    if (j.contains("experiment")) c.experiment = experiment_from_string(j["experiment"].get<std::string>());
    if (j.contains("R_list")) c.R_list = j["R_list"].get<std::vector<double>>();
    if (j.contains("alpha_list")) c.alpha_list = j["alpha_list"].get<std::vector<double>>();
    if (j.contains("n_samples")) c.n_samples = j["n_samples"].get<std::uint64_t>();
    if (j.contains("master_seed")) c.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("output_path")) c.output_path = j["output_path"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("K_budget")) c.K_budget = j["K_budget"].get<int>();
    if (j.contains("importance")) c.importance = j["importance"].get<bool>();
    if (j.contains("nu")) c.nu = j["nu"].get<double>();
    if (j.contains("centers")) {
      c.centers.clear();
      for (const auto& w : j["centers"]) {
        const auto xy = w.get<std::vector<double>>();
        if (xy.size() != 2) throw PreconditionError("centers must be [x, y] pairs");
        c.centers.emplace_back(xy[0], xy[1]);
      }
    }
    if (j.contains("demo_r")) c.demo_r = j["demo_r"].get<double>();
    if (j.contains("demo_rho")) c.demo_rho = j["demo_rho"].get<double>();
    if (j.contains("demo_A")) c.demo_A = j["demo_A"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("bad config value: ") + e.what());
  }
  return c;
}

void check_campaign(const CampaignConfig& c) {
  if (c.format != "csv" && c.format != "json") throw PreconditionError("format must be csv or json");
  if (c.threads < 0) throw PreconditionError("threads must be >= 0");
  if (c.n_samples == 0) throw PreconditionError("n_samples must be >= 1");
  const bool needs_spread = c.experiment == Experiment::variance_scan || c.experiment == Experiment::clt_check ||
                            c.experiment == Experiment::lattice_scan;
  if (needs_spread && c.n_samples < 2) throw PreconditionError("this experiment needs n_samples >= 2");
  const bool uses_R = c.experiment != Experiment::bounds_suite && c.experiment != Experiment::lemma_suite &&
                      c.experiment != Experiment::demo_suite;
  if (uses_R) {
    if (c.R_list.empty()) throw PreconditionError("R_list is empty");
    for (double R : c.R_list) {
      if (!(R > 0.0) || !std::isfinite(R)) throw PreconditionError("every R must be positive and finite");
      if (c.experiment == Experiment::lattice_scan) {
        if (R > 64.0) throw PreconditionError("lattice radii must be <= 64");
        continue;
      }
      if (certified_radius(c.K_budget) < R + kRadiusSlack)
        throw PreconditionError("R = " + format_double(R) + " exceeds the certified radius for K_budget = " +
                                std::to_string(c.K_budget));
    }
  }
  if (c.experiment == Experiment::tail_scan || c.experiment == Experiment::jlm_fit) {
    if (c.alpha_list.empty()) throw PreconditionError("alpha_list is empty");
    for (double a : c.alpha_list)
      if (!(a > 0.0) || !std::isfinite(a)) throw PreconditionError("every alpha must be positive");
  }
  if (c.experiment == Experiment::jlm_fit) {
    std::set<double> distinct(c.R_list.begin(), c.R_list.end());
    if (distinct.size() < 3) throw PreconditionError("jlm_fit needs at least 3 distinct R");
  }
  if (c.experiment == Experiment::lattice_scan && !(c.nu > 0.0)) throw PreconditionError("nu must be > 0");
  if (c.experiment == Experiment::demo_suite) {
    if (c.centers.empty()) throw PreconditionError("demo needs at least one center");
    if (!(c.demo_r > 0.0) || !(c.demo_A > 0.0)) throw PreconditionError("demo needs r > 0 and A > 0");
    if (!(c.demo_rho >= std::max(1.0, std::sqrt(std::max(0.0, std::log(c.demo_r))))))
      throw PreconditionError("demo needs rho >= max(1, sqrt(log r))");
    const double radius = c.demo_r + c.demo_A * c.demo_rho;
    for (std::size_t i = 0; i < c.centers.size(); ++i)
      for (std::size_t j = i + 1; j < c.centers.size(); ++j)
        if (std::abs(c.centers[i] - c.centers[j]) <= 2.0 * radius)
          throw PreconditionError("disks D(w_j, r + A rho) must be pairwise disjoint");
  }
}

void append_mean_rows(ResultTable& table, double R, std::span<const int> counts, std::uint64_t seed,
                      std::uint64_t first) {
  const Moments m = moments(counts);
  const std::uint64_t n = counts.size();
  const nlohmann::json p = {{"R", R}, {"expected", edelman_kostlan_mean(VarianceProfile::constant_one(), R)}};
  table.append(row("mean_check", p, "mean", m.mean, m.stderr_mean, n, seed, first, first + n));
}

void append_variance_rows(ResultTable& table, const std::vector<double>& R_list,
                          const std::vector<std::vector<int>>& counts, std::uint64_t seed,
                          const std::vector<std::uint64_t>& first) {
  if (R_list.size() != counts.size() || R_list.size() != first.size())
    throw PreconditionError("variance rows need one count vector per R");
  std::vector<std::vector<double>> xs;
  std::vector<double> var, var_se;
  for (std::size_t i = 0; i < R_list.size(); ++i) {
    xs.push_back(to_doubles(counts[i]));
    const Moments m = moments(xs.back());
    const std::uint64_t n = xs.back().size();
    const nlohmann::json p = {{"R", R_list[i]}, {"mean", m.mean}};
    const double se = jackknife_variance_stderr(xs.back());
    table.append(row("variance_scan", p, "variance", m.variance, se, n, seed, first[i], first[i] + n));
    var.push_back(m.variance);
    var_se.push_back(se);
  }
  for (std::size_t i = 0; i + 1 < R_list.size(); ++i) {
    const nlohmann::json p = {{"R_num", R_list[i + 1]}, {"R_den", R_list[i]}};
    const double ratio = var[i + 1] / var[i];
    const double se = ratio_of_variances_stderr(xs[i + 1], xs[i]);
    const std::uint64_t n = xs[i].size() + xs[i + 1].size();
    table.append(row("variance_scan", p, "variance_ratio", ratio, se, n, seed, first[i],
                     first[i + 1] + xs[i + 1].size()));
  }
  if (R_list.size() >= 2) {
    const LinearFit fit = fit_through_origin(R_list, var, var_se);
    const double t = student_t_quantile(0.95, static_cast<double>(R_list.size() - 1));
    const nlohmann::json p = {{"R_list", R_list}};
    std::uint64_t n = 0;
    for (const auto& x : xs) n += x.size();
    const std::uint64_t lo = first.front(), hi = first.back() + xs.back().size();
    table.append(row("variance_scan", p, "slope", fit.slope, fit.slope_stderr, n, seed, lo, hi));
    table.append(row("variance_scan", p, "slope_ci_lo", fit.slope - t * fit.slope_stderr, 0.0, n, seed, lo, hi));
    table.append(row("variance_scan", p, "slope_ci_hi", fit.slope + t * fit.slope_stderr, 0.0, n, seed, lo, hi));
  }
}

CltReport clt_from_counts(double R, std::span<const int> counts, std::uint64_t seed, std::uint64_t first) {
  if (counts.size() < 2) throw PreconditionError("clt check needs at least 2 samples");
  std::vector<double> x(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const SeedLineage l{seed, first + i, static_cast<std::uint32_t>(StreamTag::jitter)};
    const PhiloxBlock b = random_block(l, 0);
    const std::uint64_t bits = (std::uint64_t{b[1]} << 32) | b[0];
    x[i] = counts[i] + uniform_closed_open(bits) - 0.5;
  }
  const Moments m = moments(x);
  CltReport rep;
  rep.R = R;
  rep.n = counts.size();
  rep.mean = m.mean;
  rep.sd = std::sqrt(m.variance);
  if (!(rep.sd > 0.0)) throw NumericError("clt check: zero sample variance");
  for (double& v : x) v = (v - m.mean) / rep.sd;
  rep.ks = ks_one_sample(x, normal_cdf);
  rep.control = ks_one_sample(x, [](double t) { return t <= 0.0 ? 0.0 : 1.0 - std::exp(-t); });
  rep.pass = rep.ks.p_value > 0.01;
  return rep;
}

void append_clt_rows(ResultTable& table, const CltReport& r, std::uint64_t seed, std::uint64_t first) {
  const nlohmann::json p = {{"R", r.R}};
  const std::uint64_t hi = first + r.n;
  table.append(row("clt_check", p, "mean", r.mean, r.sd / std::sqrt(static_cast<double>(r.n)), r.n, seed, first, hi));
  table.append(row("clt_check", p, "sd", r.sd, 0.0, r.n, seed, first, hi));
  table.append(row("clt_check", p, "ks_statistic", r.ks.statistic, 0.0, r.n, seed, first, hi));
  table.append(row("clt_check", p, "ks_p_value", r.ks.p_value, 0.0, r.n, seed, first, hi));
  table.append(row("clt_check", p, "control_ks_p_value", r.control.p_value, 0.0, r.n, seed, first, hi));
  table.append(row("clt_check", p, "pass", r.pass ? 1.0 : 0.0, 0.0, r.n, seed, first, hi));
}

JlmFitReport jlm_fit(const ResultTable& tail_table, const std::string& statistic,
                     const std::vector<double>& required_alphas) {
  std::map<double, std::map<double, double>> cells;  // alpha -> R -> p
  std::set<double> seen_alpha;
  for (const auto& r : tail_table.rows()) {
    if (r.statistic != statistic || !r.params.contains("R") || !r.params.contains("alpha")) continue;
    const double a = r.params["alpha"].get<double>();
    seen_alpha.insert(a);
    if (r.value > 0.0 && r.value < 1.0) cells[a][r.params["R"].get<double>()] = r.value;
  }
  for (double a : required_alphas) seen_alpha.insert(a);
  std::string missing;
  for (double a : seen_alpha) {
    const std::size_t have = cells.contains(a) ? cells[a].size() : 0;
    if (have < 3)
      missing += (missing.empty() ? "" : "; ") + std::string("alpha=") + nlohmann::json(a).dump() + ": " +
                 std::to_string(have) + " usable R (need 3)";
  }
  if (seen_alpha.empty()) missing = "no '" + statistic + "' rows";
  if (!missing.empty()) throw PreconditionError("jlm_fit: insufficient data: " + missing);

  JlmFitReport rep;
  rep.statistic = statistic;
  for (const auto& [a, by_R] : cells) {
    JlmAlphaFit f;
    f.alpha = a;
    std::vector<double> x, y;
    for (const auto& [R, p] : by_R) {
      f.R.push_back(R);
      f.p.push_back(p);
      x.push_back(std::log(R));
      y.push_back(std::log(-std::log(p)));
    }
    f.fit = linear_fit(x, y);
    const double t = student_t_quantile(0.95, static_cast<double>(x.size() - 2));
    f.ci_lo = f.fit.slope - t * f.fit.slope_stderr;
    f.ci_hi = f.fit.slope + t * f.fit.slope_stderr;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) f.local_slopes.push_back((y[i + 1] - y[i]) / (x[i + 1] - x[i]));
    std::vector<std::size_t> use;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] > 0.0) use.push_back(i);
    if (use.size() >= 4) {
      Eigen::MatrixXd X(use.size(), 3);
      Eigen::VectorXd Y(use.size());
      for (std::size_t r = 0; r < use.size(); ++r) {
        const double xi = x[use[r]];
        X(r, 0) = 1.0;
        X(r, 1) = xi;
        X(r, 2) = std::log(xi);
        Y(r) = y[use[r]];
      }
      const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(Y);
      const double dof = static_cast<double>(use.size()) - 3.0;
      const double s2 = (Y - X * beta).squaredNorm() / dof;
      const Eigen::MatrixXd cov = s2 * (X.transpose() * X).inverse();
      f.log_correction = beta(2);
      f.log_correction_stderr = std::sqrt(std::max(cov(2, 2), 0.0));
      const double tq = student_t_quantile(0.95, dof);
      f.super_polynomial = f.log_correction > std::max(tq * f.log_correction_stderr, 1e-8);
    }
    rep.fits.push_back(std::move(f));
  }
  return rep;
}

nlohmann::json JlmFitReport::to_json() const {
  nlohmann::json fits_json = nlohmann::json::array();
  for (const auto& f : fits)
    fits_json.push_back({{"alpha", f.alpha},
                         {"R", f.R},
                         {"p", f.p},
                         {"slope", f.fit.slope},
                         {"slope_stderr", f.fit.slope_stderr},
                         {"ci95", {f.ci_lo, f.ci_hi}},
                         {"local_slopes", f.local_slopes},
                         {"log_correction", f.log_correction},
                         {"log_correction_stderr", f.log_correction_stderr},
                         {"super_polynomial", f.super_polynomial}});
  return {{"label", label}, {"statistic", statistic}, {"fits", fits_json}};
}

void append_jlm_rows(ResultTable& table, const JlmFitReport& report) {
  for (const auto& f : report.fits) {
    const nlohmann::json p = {{"alpha", f.alpha}, {"R_list", f.R}, {"label", report.label},
                              {"statistic", report.statistic}};
    const auto n = static_cast<std::uint64_t>(f.R.size());
    table.append(row("jlm_fit", p, "effective_exponent", f.fit.slope, f.fit.slope_stderr, n, 0, 0, 0));
    table.append(row("jlm_fit", p, "effective_exponent_ci_lo", f.ci_lo, 0.0, n, 0, 0, 0));
    table.append(row("jlm_fit", p, "effective_exponent_ci_hi", f.ci_hi, 0.0, n, 0, 0, 0));
    table.append(row("jlm_fit", p, "super_polynomial", f.super_polynomial ? 1.0 : 0.0, 0.0, n, 0, 0, 0));
  }
}

void run_mean_check(const CampaignConfig& c, ResultTable& table) {
  for (std::size_t i = 0; i < c.R_list.size(); ++i) {
    const std::uint64_t first = block_start(i, c.n_samples);
    append_mean_rows(table, c.R_list[i], gef_counts(c, c.R_list[i], first), c.master_seed, first);
  }
}

void run_variance_scan(const CampaignConfig& c, ResultTable& table) {
  std::vector<std::vector<int>> counts;
  std::vector<std::uint64_t> first;
  for (std::size_t i = 0; i < c.R_list.size(); ++i) {
    first.push_back(block_start(i, c.n_samples));
    counts.push_back(gef_counts(c, c.R_list[i], first.back()));
  }
  append_variance_rows(table, c.R_list, counts, c.master_seed, first);
}

void run_clt_check(const CampaignConfig& c, ResultTable& table) {
  for (std::size_t i = 0; i < c.R_list.size(); ++i) {
    const std::uint64_t first = block_start(i, c.n_samples);
    const auto counts = gef_counts(c, c.R_list[i], first);
    append_clt_rows(table, clt_from_counts(c.R_list[i], counts, c.master_seed, first), c.master_seed, first);
  }
}

void run_tail_scan(const CampaignConfig& c, ResultTable& table) {
  for (std::size_t i = 0; i < c.R_list.size(); ++i) {
    const double R = c.R_list[i];
    const std::uint64_t first = block_start(i, c.n_samples);
    const auto counts = gef_counts(c, R, first);
    const std::uint64_t n = counts.size();
    for (double a : c.alpha_list) {
      const nlohmann::json p = {{"R", R}, {"alpha", a}};
      for (TailSign s : {TailSign::excess, TailSign::deficit, TailSign::both}) {
        const PlainEstimate e = tail_from_counts(counts, R, a, s);
        table.append(row("tail_scan", p, std::string("p_") + to_string(s), e.p_hat, e.stderr_value, n,
                         c.master_seed, first, first + n));
      }
      if (!c.importance || R < 2.0 || !(a > 0.5 && a < 1.0)) continue;
      const DeficitEvent ev{R, a, default_deficit_c(R, a)};
      const nlohmann::json pc = {{"R", R}, {"alpha", a}, {"c", ev.c}};
      const PlainEstimate plain = plain_estimate_deficit(counts, ev);
      table.append(row("tail_scan", pc, "p_deficit_c", plain.p_hat, plain.stderr_value, n, c.master_seed, first,
                       first + n));
      const std::uint64_t is_first = kImportanceOffset + first;
      const TiltedEstimate is =
          is_estimate(sample_tilted(R, a, c.n_samples, SeedLineage{c.master_seed, is_first, 0}, c.threads), ev);
      table.append(row("tail_scan", pc, "p_deficit_c_is", is.p_hat, is.stderr_value, n, c.master_seed, is_first,
                       is_first + n));
      table.append(row("tail_scan", pc, "ess", is.ess, 0.0, n, c.master_seed, is_first, is_first + n));
      table.append(row("tail_scan", pc, "tilted_hit_rate", is.tilted_hit_rate, 0.0, n, c.master_seed, is_first,
                       is_first + n));
    }
  }
}

void run_jlm_fit(const CampaignConfig& c, ResultTable& table) {
  CampaignConfig plain = c;
  plain.importance = false;
  run_tail_scan(plain, table);
  append_jlm_rows(table, jlm_fit(table, "p_both", c.alpha_list));
}

void run_bounds_suite(const CampaignConfig& c, ResultTable& table) {
  const SeedLineage lineage{c.master_seed, 0, 0};
  for (BoundId id : {BoundId::nsv_sum, BoundId::bernstein, BoundId::max_fstar, BoundId::min_max_f,
                     BoundId::small_on_curve, BoundId::arc_delta_tail}) {
    for (const auto& rep : validate_bounds(bound_grid(id), c.n_samples, lineage, c.threads)) {
      nlohmann::json p = rep.spec.params;
      p["bound"] = to_string(id);
      table.append(row("bounds_suite", p, "empirical", rep.empirical, rep.stderr_value, rep.n, c.master_seed, 0, rep.n));
      table.append(row("bounds_suite", p, "bound", rep.bound, 0.0, rep.n, c.master_seed, 0, rep.n));
      table.append(row("bounds_suite", p, "pass", rep.pass ? 1.0 : 0.0, 0.0, rep.n, c.master_seed, 0, rep.n));
    }
  }
}

void run_lemma_suite(const CampaignConfig& c, ResultTable& table) {
  const std::uint64_t n = c.n_samples;
  const std::uint64_t seed = c.master_seed;
  const InequalityReport ineq = check_elementary_inequalities();
  table.append(row("lemma_suite", {{"check", "log_power"}}, "min_slack", ineq.min_slack_log_power, 0.0,
                   ineq.points_log_power, seed, 0, 0));
  table.append(row("lemma_suite", {{"check", "gamma_tail"}}, "min_log_slack", ineq.min_log_slack_gamma_tail, 0.0,
                   ineq.points_gamma_tail, seed, 0, 0));
  table.append(row("lemma_suite", {{"check", "elementary"}}, "violations",
                   static_cast<double>(ineq.violations.size()), 0.0, ineq.points_log_power + ineq.points_gamma_tail,
                   seed, 0, 0));

  const SeedLineage lineage{seed, 0, 0};
  const CovarianceDecaySweep cov = covariance_decay_sweep(n, lineage, c.threads);
  table.append(row("lemma_suite", {{"check", "covariance_decay"}}, "max_ratio", cov.max_ratio, 0.0, n, seed, 0, n));
  table.append(row("lemma_suite", {{"check", "covariance_decay"}}, "violations", cov.violations, 0.0, n, seed, 0, n));

  const DecorrelationSweep dec = decorrelation_sweep(n, lineage, c.threads);
  table.append(row("lemma_suite", {{"check", "decorrelation"}}, "max_whitening_error", dec.max_whitening_error, 0.0,
                   n, seed, 0, n));
  table.append(row("lemma_suite", {{"check", "decorrelation"}}, "s_over_delta_max", dec.max_s_over_delta, 0.0, n,
                   seed, 0, n));
  table.append(row("lemma_suite", {{"check", "decorrelation"}}, "violations", dec.violations, 0.0, n, seed, 0, n));

  const SeparationSweep sep = separation_sweep(n, lineage, c.threads);
  table.append(row("lemma_suite", {{"check", "separation"}}, "max_mass_ratio", sep.max_mass_ratio, 0.0, n, seed, 0,
                   n));
  table.append(row("lemma_suite", {{"check", "separation"}}, "violations", sep.violations, 0.0, n, seed, 0, n));
}

void run_demo_suite(const CampaignConfig& c, ResultTable& table) {
  DemoOptions opt;
  opt.A = c.demo_A;
  opt.trials = c.n_samples;
  opt.threads = c.threads;
  const DemoReport rep = almost_independence_demo(c.centers, c.demo_r, c.demo_rho, SeedLineage{c.master_seed, 0, 0}, opt);
  const nlohmann::json j = rep.to_json();
  const nlohmann::json p = {{"centers", j["centers"]}, {"r", rep.r}, {"rho", rep.rho}, {"A", rep.A}};
  const std::uint64_t n = rep.trials;
  const auto add = [&](const char* stat, double v, double se = 0.0) {
    table.append(row("demo_suite", p, stat, v, se, n, c.master_seed, 0, n));
  };
  add("max_delta", rep.max_delta);
  add("max_s", rep.max_s);
  add("max_cross_covariance", rep.max_cross_covariance);
  add("covariance_decay_bound", rep.covariance_decay_bound);
  add("tail_certificate", rep.tail_certificate);
  add("threshold", rep.threshold);
  add("decomposition_tail", rep.decomposition_tail);
  for (std::size_t k = 0; k < rep.max_sup_h.size(); ++k) {
    nlohmann::json pk = p;
    pk["center_index"] = k;
    table.append(row("demo_suite", pk, "max_sup_h", rep.max_sup_h[k], 0.0, n, c.master_seed, 0, n));
  }
  add("exceed_fraction", rep.exceed_fraction, rep.exceed_stderr);
}

void run_lattice_scan(const CampaignConfig& c, ResultTable& table) {
  std::vector<std::vector<double>> xs;
  std::vector<std::uint64_t> first;
  for (std::size_t i = 0; i < c.R_list.size(); ++i) {
    const double R = c.R_list[i];
    first.push_back(block_start(i, c.n_samples));
    xs.push_back(to_doubles(lattice_counts(c.nu, R, c.master_seed, first.back(), c.n_samples, c.threads)));
    const Moments m = moments(xs.back());
    const nlohmann::json p = {{"R", R}, {"nu", c.nu}};
    const std::uint64_t n = xs.back().size();
    table.append(row("lattice_scan", p, "mean", m.mean, m.stderr_mean, n, c.master_seed, first.back(), first.back() + n));
    table.append(row("lattice_scan", p, "area", std::numbers::pi * R * R, 0.0, 0, c.master_seed, first.back(),
                     first.back()));
    table.append(row("lattice_scan", p, "variance", m.variance, jackknife_variance_stderr(xs.back()), n,
                     c.master_seed, first.back(), first.back() + n));
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const nlohmann::json p = {{"R_num", c.R_list[i + 1]}, {"R_den", c.R_list[i]}, {"nu", c.nu}};
    const double ratio = moments(xs[i + 1]).variance / moments(xs[i]).variance;
    table.append(row("lattice_scan", p, "variance_ratio", ratio, ratio_of_variances_stderr(xs[i + 1], xs[i]),
                     xs[i].size() + xs[i + 1].size(), c.master_seed, first[i], first[i + 1] + xs[i + 1].size()));
  }
}

std::string code_version() { return GEF_CODE_VERSION; }

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw PreconditionError("cannot write " + path.string());
  os << text;
}

}  // namespace

CampaignOutcome run_campaign(const CampaignConfig& config) {
  CampaignOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    check_campaign(config);
    switch (config.experiment) {
      case Experiment::mean_check: run_mean_check(config, out.table); break;
      case Experiment::variance_scan: run_variance_scan(config, out.table); break;
      case Experiment::clt_check: run_clt_check(config, out.table); break;
      case Experiment::tail_scan: run_tail_scan(config, out.table); break;
      case Experiment::jlm_fit: run_jlm_fit(config, out.table); break;
      case Experiment::bounds_suite: run_bounds_suite(config, out.table); break;
      case Experiment::lemma_suite: run_lemma_suite(config, out.table); break;
      case Experiment::demo_suite: run_demo_suite(config, out.table); break;
      case Experiment::lattice_scan: run_lattice_scan(config, out.table); break;
    }
  } catch (const PreconditionError& e) {
    out.status = 2;
    out.message = e.what();
  } catch (const std::exception& e) {
    out.status = 3;
    out.message = e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const nlohmann::json cfg = config.to_json();
  out.manifest = {{"config", cfg},
                  {"config_hash", config_hash(cfg)},
                  {"code_version", code_version()},
                  {"wall_time_s", wall},
                  {"status", out.status == 0 ? "ok" : "error"},
                  {"exit_code", out.status},
                  {"message", out.message},
                  {"rows", out.table.size()},
                  {"format_version", ResultTable::format_version}};
  if (!config.output_path.empty()) {
    try {
      std::filesystem::path path(config.output_path);
      std::filesystem::path stem = path;
      stem.replace_extension();
      const std::string csv = out.table.to_csv();
      const std::string json = out.table.to_json().dump(2) + "\n";
      if (config.format == "json") {
        write_file(path, json);
        write_file(stem.string() + ".csv", csv);
      } else {
        write_file(path, csv);
        write_file(stem.string() + ".json", json);
      }
      write_file(stem.string() + ".manifest.json", out.manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
      if (out.status == 0) {
        out.status = 2;
        out.message = e.what();
        out.manifest["status"] = "error";
        out.manifest["exit_code"] = 2;
        out.manifest["message"] = out.message;
      }
    }
  }
  return out;
}

ResultTable count_table(const VarianceProfile& profile, double R, std::uint64_t seed, std::uint64_t first,
                        std::uint64_t n, CountMethod method, int threads) {
  if (!(R > 0.0)) throw PreconditionError("R must be > 0");
  const int K = planned_order(profile, R);
  const auto results = map_samples<ZeroCountResult>(first, n, threads, [&](std::uint64_t i) {
    SeriesSample s = sample_coefficients(profile, K, SeedLineage{seed, i, 0});
    s.r_valid = std::max(R, 1.0) + kRadiusSlack;
    return method == CountMethod::winding ? count_zeros_winding(s, R) : count_zeros_roots(s, R);
  });
  ResultTable t;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto& r = results[i];
    nlohmann::json p = {{"R", R}, {"method", to_string(method)}, {"profile", profile_to_json(profile)}};
    if (method == CountMethod::roots) p["near_contour"] = r.near_contour;
    t.append(row("count", p, "count", r.count, 0.0, 1, seed, first + i, first + i + 1));
  }
  return t;
}

}  // namespace gef
