#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gef/profile.hpp"
#include "gef/rare_events.hpp"
#include "gef/result_table.hpp"
#include "gef/stats.hpp"
#include "gef/zeros.hpp"

namespace gef {

enum class Experiment {
  mean_check,
  variance_scan,
  clt_check,
  tail_scan,
  jlm_fit,
  bounds_suite,
  lemma_suite,
  demo_suite,
  lattice_scan,
};

const char* to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

struct CampaignConfig {
  Experiment experiment = Experiment::mean_check;
  std::vector<double> R_list{1.0, 2.0, 3.0};
  std::vector<double> alpha_list{0.75};
  std::uint64_t n_samples = 10000;
  std::uint64_t master_seed = 1;
  std::string output_path;  // empty: nothing is written
  std::string format = "csv";
  int threads = 0;
  // Largest truncation order a campaign may plan; radii needing more are rejected.
  int K_budget = 2000;
  // tail_scan / jlm_fit: also estimate the deficit tail under γ_a.
  bool importance = true;
  // lattice_scan
  double nu = 2.0;
  // demo_suite
  std::vector<complex> centers{{0.0, 0.0}, {30.0, 0.0}};
  double demo_r = 1.0;
  double demo_rho = 1.0;
  double demo_A = 3.0;

  // Everything that determines the rows (threads and output location excluded).
  nlohmann::json to_json() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static CampaignConfig from_json(const nlohmann::json& j);
};

// Rejects bad parameters before any sampling starts.
void check_campaign(const CampaignConfig& config);

// Block of sample indices used for the i-th radius of a list: [i·n, (i+1)·n).
inline std::uint64_t block_start(std::size_t position, std::uint64_t n) { return position * n; }

// One "mean" row per R; params carry the exact mean R².
void append_mean_rows(ResultTable& table, double R, std::span<const int> counts, std::uint64_t seed,
                      std::uint64_t first);

// One "variance" row per R (params carry the mean), "variance_ratio" for
// consecutive radii, and a weighted fit Var ≈ slope·R ("slope",
// "slope_ci_lo", "slope_ci_hi") when there are two or more radii.
void append_variance_rows(ResultTable& table, const std::vector<double>& R_list,
                          const std::vector<std::vector<int>>& counts, std::uint64_t seed,
                          const std::vector<std::uint64_t>& first);

struct CltReport {
  double R = 0.0;
  std::uint64_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  KsResult ks{};
  KsResult control{};  // same data against Exp(1)
  bool pass = false;   // ks.p_value > 0.01
};

// Counts are spread by a uniform jitter U_i - ½ (jitter stream of sample
// first + i), standardized by the sample mean and sd, and compared with N(0, 1).
CltReport clt_from_counts(double R, std::span<const int> counts, std::uint64_t seed, std::uint64_t first);
void append_clt_rows(ResultTable& table, const CltReport& report, std::uint64_t seed, std::uint64_t first);

struct JlmAlphaFit {
  double alpha = 0.0;
  std::vector<double> R;
  std::vector<double> p;
  LinearFit fit{};
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::vector<double> local_slopes;
  // y = b + s·log R + c·log log R refit on the points with R > 1 (needs 4):
  // c > 0 beyond its 95% interval means -log p outgrows every fixed power of R
  // at the fitted slope.
  double log_correction = 0.0;
  double log_correction_stderr = 0.0;
  bool super_polynomial = false;
};

struct JlmFitReport {
  std::string label = "finite-R effective exponent — not an asymptotic verification";
  std::string statistic;
  std::vector<JlmAlphaFit> fits;
  nlohmann::json to_json() const;
};

// Fits log(-log p) against log R for every α in the table's `statistic` rows
// (params carry R and alpha). Needs 3 distinct R with 0 < p < 1 per α; every α
// in `required_alphas` must be present. Throws PreconditionError listing the
// incomplete cells.
JlmFitReport jlm_fit(const ResultTable& tail_table, const std::string& statistic = "p_both",
                     const std::vector<double>& required_alphas = {});
void append_jlm_rows(ResultTable& table, const JlmFitReport& report);

// Single-experiment drivers; rows are appended as they are computed.
void run_mean_check(const CampaignConfig& config, ResultTable& table);
void run_variance_scan(const CampaignConfig& config, ResultTable& table);
void run_clt_check(const CampaignConfig& config, ResultTable& table);
void run_tail_scan(const CampaignConfig& config, ResultTable& table);
void run_jlm_fit(const CampaignConfig& config, ResultTable& table);
void run_bounds_suite(const CampaignConfig& config, ResultTable& table);
void run_lemma_suite(const CampaignConfig& config, ResultTable& table);
void run_demo_suite(const CampaignConfig& config, ResultTable& table);
void run_lattice_scan(const CampaignConfig& config, ResultTable& table);

struct CampaignOutcome {
  int status = 0;  // 0 ok, 2 precondition, 3 numeric failure
  std::string message;
  ResultTable table;
  nlohmann::json manifest;
};

// Checks the config, runs the experiment and, when output_path is set, writes
// the table in `format` to output_path, the other format next to it, and
// <stem>.manifest.json {config_hash, code_version, wall_time_s, status, rows}.
// A failing module leaves the rows computed so far and a manifest with the error.
CampaignOutcome run_campaign(const CampaignConfig& config);

std::string code_version();

// Per-sample n(R) rows ("count") by winding or by polynomial roots.
ResultTable count_table(const VarianceProfile& profile, double R, std::uint64_t seed, std::uint64_t first,
                        std::uint64_t n, CountMethod method, int threads = 0);

}  // namespace gef
