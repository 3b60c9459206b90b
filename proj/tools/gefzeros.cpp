#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gef/errors.hpp"
#include "gef/experiments.hpp"
#include "gef/lattice.hpp"
#include "gef/series.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kPrecondition = 2;
constexpr int kNumeric = 3;

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::vector<double> R;
  std::vector<double> alpha;
  std::string out;
  std::string format;
  int threads = 0;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "JSON campaign config; flags override it");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--samples", f.samples, "samples (or trials) per cell");
  sub->add_option("--R", f.R, "radii")->delimiter(',');
  sub->add_option("--alpha", f.alpha, "exponents α")->delimiter(',');
  sub->add_option("--out", f.out, "output file; the other format and a manifest are written next to it");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", f.threads, "OpenMP threads (0: default)")->check(CLI::NonNegativeNumber);
}

gef::CampaignConfig load_config(CLI::App* sub, const CommonFlags& f, gef::Experiment experiment) {
  gef::CampaignConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw gef::PreconditionError("cannot read config " + f.config_path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw gef::PreconditionError(std::string("config is not valid JSON: ") + e.what());
    }
    c = gef::CampaignConfig::from_json(j);
  }
  c.experiment = experiment;
  if (sub->count("--seed")) c.master_seed = f.seed;
  if (sub->count("--samples")) c.n_samples = f.samples;
  if (sub->count("--R")) c.R_list = f.R;
  if (sub->count("--alpha")) c.alpha_list = f.alpha;
  if (sub->count("--out")) c.output_path = f.out;
  if (sub->count("--format")) c.format = f.format;
  if (sub->count("--threads")) c.threads = f.threads;
  return c;
}

bool given(CLI::App* sub, const std::string& name) {
  const CLI::Option* o = sub->get_option_no_throw(name);
  return o != nullptr && o->count() > 0;
}

void emit(const gef::ResultTable& table, const std::string& format) {
  if (format == "json")
    std::cout << table.to_json().dump(2) << "\n";
  else
    std::cout << table.to_csv();
}

int run(const gef::CampaignConfig& c) {
  const gef::CampaignOutcome outcome = gef::run_campaign(c);
  if (c.output_path.empty()) emit(outcome.table, c.format);
  if (outcome.status != 0) std::cerr << "error: " << outcome.message << "\n";
  return outcome.status;
}

gef::VarianceProfile make_profile(const std::string& name, double R, const std::vector<double>& alpha) {
  if (name == "constant") return gef::VarianceProfile::constant_one();
  if (name == "jlm") {
    if (alpha.size() != 1) throw gef::PreconditionError("the jlm profile needs exactly one --alpha");
    return gef::VarianceProfile::jlm_banded(R, alpha.front());
  }
  throw gef::PreconditionError("unknown profile " + name);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw gef::PreconditionError("cannot write " + path);
  os << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero statistics of Gaussian entire functions"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string profile_name = "constant";
  std::uint64_t index = 0;
  std::string method = "winding";
  std::string table_path;
  double nu = 2.0;
  std::string points_path;
  double demo_r = 1.0, demo_rho = 1.0, demo_A = 3.0;
  std::vector<double> centers_xy;
  bool no_importance = false;

  auto* sample = app.add_subcommand("sample", "draw one truncated series as JSON");
  add_common(sample, flags);
  sample->add_option("--index", index, "sample index");
  sample->add_option("--profile", profile_name, "constant or jlm")->check(CLI::IsMember({"constant", "jlm"}));

  auto* count = app.add_subcommand("count", "n(R) per sample");
  add_common(count, flags);
  count->add_option("--index", index, "first sample index");
  count->add_option("--profile", profile_name, "constant or jlm")->check(CLI::IsMember({"constant", "jlm"}));
  count->add_option("--method", method, "winding or roots")->check(CLI::IsMember({"winding", "roots"}));

  struct Campaign {
    CLI::App* app;
    gef::Experiment experiment;
  };
  std::vector<Campaign> campaigns = {
      {app.add_subcommand("mean-check", "Monte Carlo mean of n(R) against R²"), gef::Experiment::mean_check},
      {app.add_subcommand("variance-scan", "variance of n(R) and its growth in R"), gef::Experiment::variance_scan},
      {app.add_subcommand("clt-check", "KS test of standardized n(R)"), gef::Experiment::clt_check},
      {app.add_subcommand("tail-scan", "tail frequencies of |n(R) - R²| > R^α"), gef::Experiment::tail_scan},
      {app.add_subcommand("jlm-fit", "finite-R effective tail exponents"), gef::Experiment::jlm_fit},
      {app.add_subcommand("bounds-suite", "probability bounds against simulation"), gef::Experiment::bounds_suite},
      {app.add_subcommand("lemma-suite", "inequality, decay, decorrelation and separation checks"), gef::Experiment::lemma_suite},
      {app.add_subcommand("ai-demo", "almost-independence decomposition"), gef::Experiment::demo_suite},
      {app.add_subcommand("lattice", "perturbed-lattice counts"), gef::Experiment::lattice_scan},
  };
  for (auto& c : campaigns) add_common(c.app, flags);
  for (auto& c : campaigns) {
    if (c.experiment == gef::Experiment::jlm_fit)
      c.app->add_option("--table", table_path, "fit an existing tail_scan table (CSV or JSON) instead of sampling");
    if (c.experiment == gef::Experiment::tail_scan || c.experiment == gef::Experiment::jlm_fit)
      c.app->add_flag("--no-importance", no_importance, "skip the importance-sampled deficit estimate");
    if (c.experiment == gef::Experiment::lattice_scan) {
      c.app->add_option("--nu", nu, "displacement tail exponent")->check(CLI::PositiveNumber);
      c.app->add_option("--points", points_path, "write the points of the first sample as CSV");
    }
    if (c.experiment == gef::Experiment::demo_suite) {
      c.app->add_option("--r", demo_r, "disk radius r");
      c.app->add_option("--rho", demo_rho, "ρ");
      c.app->add_option("--A", demo_A, "separation constant A");
      c.app->add_option("--centers", centers_xy, "x1,y1,x2,y2,...")->delimiter(',');
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kPrecondition;
  }

  try {
    if (*sample) {
      const double R = flags.R.empty() ? 1.0 : flags.R.front();
      const auto profile = make_profile(profile_name, R, flags.alpha);
      const gef::SeriesSample s = gef::sample_series(profile, R, gef::SeedLineage{flags.seed, index, 0});
      write_text(flags.out, gef::series_to_json(s).dump(2) + "\n");
      return kOk;
    }
    if (*count) {
      if (flags.R.size() != 1) throw gef::PreconditionError("count needs exactly one --R");
      const auto profile = make_profile(profile_name, flags.R.front(), flags.alpha);
      const std::uint64_t n = count->count("--samples") ? flags.samples : 1;
      const auto table = gef::count_table(profile, flags.R.front(), flags.seed, index, n,
                                          method == "roots" ? gef::CountMethod::roots : gef::CountMethod::winding,
                                          flags.threads);
      const std::string fmt = flags.format.empty() ? "csv" : flags.format;
      write_text(flags.out, fmt == "json" ? table.to_json().dump(2) + "\n" : table.to_csv());
      return kOk;
    }
    for (auto& c : campaigns) {
      if (!*c.app) continue;
      gef::CampaignConfig cfg = load_config(c.app, flags, c.experiment);
      if (given(c.app, "--no-importance")) cfg.importance = !no_importance;
      if (given(c.app, "--nu")) cfg.nu = nu;
      if (given(c.app, "--r")) cfg.demo_r = demo_r;
      if (given(c.app, "--rho")) cfg.demo_rho = demo_rho;
      if (given(c.app, "--A")) cfg.demo_A = demo_A;
      if (given(c.app, "--centers")) {
        if (centers_xy.size() % 2 != 0) throw gef::PreconditionError("--centers needs x,y pairs");
        cfg.centers.clear();
        for (std::size_t i = 0; i < centers_xy.size(); i += 2) cfg.centers.emplace_back(centers_xy[i], centers_xy[i + 1]);
      }
      if (c.experiment == gef::Experiment::jlm_fit && !table_path.empty()) {
        std::ifstream in(table_path);
        if (!in) throw gef::PreconditionError("cannot read " + table_path);
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        const bool is_json = !text.empty() && text.front() == '{';
        const auto tail = is_json ? gef::ResultTable::from_json(nlohmann::json::parse(text))
                                  : gef::ResultTable::from_csv(text);
        gef::ResultTable out;
        gef::append_jlm_rows(out, gef::jlm_fit(tail, "p_both", c.app->count("--alpha") ? cfg.alpha_list
                                                                                         : std::vector<double>{}));
        const std::string fmt = cfg.format;
        write_text(cfg.output_path, fmt == "json" ? out.to_json().dump(2) + "\n" : out.to_csv());
        return kOk;
      }
      if (c.experiment == gef::Experiment::lattice_scan && !points_path.empty()) {
        gef::check_campaign(cfg);
        double R_max = 0.0;
        for (double R : cfg.R_list) R_max = std::max(R_max, R);
        const auto points =
            gef::sample_perturbed_lattice({cfg.nu, R_max, gef::SeedLineage{cfg.master_seed, 0, 0}, false});
        std::ofstream os(points_path, std::ios::binary);
        if (!os) throw gef::PreconditionError("cannot write " + points_path);
        gef::write_points_csv(os, points);
      }
      return run(cfg);
    }
  } catch (const gef::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  }
  return kOk;
}
