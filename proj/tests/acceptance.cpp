// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gef/analytic.hpp"
#include "gef/bounds.hpp"
#include "gef/decorrelation.hpp"
#include "gef/errors.hpp"
#include "gef/experiments.hpp"
#include "gef/inequalities.hpp"
#include "gef/lemma_checks.hpp"
#include "gef/parallel/kernels.hpp"
#include "gef/rare_events.hpp"
#include "gef/roots.hpp"
#include "gef/stats.hpp"
#include "gef/translation.hpp"
#include "gef/zeros.hpp"

using namespace gef;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 6.283185307179586476925;
int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail, double seconds) {
  std::printf("[%s] %2d %-28s %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, name, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class F>
void criterion(int id, const char* name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("error: ") + e.what();
  }
  report(id, name, pass, detail, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double sample_variance(const std::vector<int>& x) {
  std::vector<double> d(x.begin(), x.end());
  return moments(std::span<const double>(d)).variance;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  const auto gef_profile = VarianceProfile::constant_one();
  std::vector<int> counts4, counts8;  // 2·10⁴ plain samples at R = 4 and R = 8

  criterion(1, "mean consistency", [&](std::string& d) {
    bool ok = true;
    for (double R : {1.0, 2.0, 3.0, 4.0}) {
      const auto c = zero_counts(gef_profile, R, 1001, 0, 10000);
      const auto m = moments(std::span<const int>(c));
      const double z = (m.mean - R * R) / m.stderr_mean;
      const double ek = std::fabs(edelman_kostlan_mean(gef_profile, R) - R * R);
      ok = ok && std::fabs(z) <= 3.0 && ek <= 1e-12;
      d += fmt("R=%g z=%+.2f ", R, z);
    }
    return ok;
  });

  criterion(2, "variance growth", [&](std::string& d) {
    counts4 = zero_counts(gef_profile, 4.0, 1002, 0, 20000);
    counts8 = zero_counts(gef_profile, 8.0, 1002, 20000, 20000);
    const double ratio = sample_variance(counts8) / sample_variance(counts4);
    d = fmt("Var(8)/Var(4)=%.4f", ratio);
    return ratio >= 1.6 && ratio <= 2.4;
  });

  criterion(3, "clt at R=8", [&](std::string& d) {
    const std::vector<int> first(counts8.begin(), counts8.begin() + 10000);
    const auto rep = clt_from_counts(8.0, first, 1002, 20000);
    d = fmt("KS p=%.4f D=%.4f control p=%.2e", rep.ks.p_value, rep.ks.statistic, rep.control.p_value);
    return rep.ks.p_value > 0.01;
  });

  criterion(4, "winding vs roots", [&](std::string& d) {
    const auto res = map_samples<std::pair<int, int>>(0, 1000, 0, [&](std::uint64_t i) {
      const auto s = sample_series(gef_profile, 3.0, SeedLineage{1004, i, 0});
      const auto w = count_zeros_winding(s, 3.0);
      const auto r = count_zeros_roots(s, 3.0);
      const bool flagged = r.near_contour || w.min_modulus_seen < 1e-6;
      return std::pair<int, int>{w.count == r.count ? 1 : 0, w.count != r.count && !flagged ? 1 : 0};
    });
    int agree = 0, unflagged = 0;
    for (const auto& [a, u] : res) {
      agree += a;
      unflagged += u;
    }
    d = fmt("agree=%g/1000 unflagged disagreements=%g", agree, unflagged);
    return agree >= 999 && unflagged == 0;
  });

  double c1 = 0.0;
  criterion(5, "mean deficit constant", [&](std::string& d) {
    const auto fit = fit_deficit_constant({4.0, 8.0, 16.0}, 0.75);
    c1 = fit.c1;
    bool ok = c1 > 0.0;
    for (double R : fit.R) {
      const double ek = edelman_kostlan_mean(VarianceProfile::jlm_banded(R, 0.75), R);
      ok = ok && ek <= R * R - c1 * std::pow(R, 0.75) + 1e-12;
    }
    d = fmt("c1=%.5f per R %.5f %.5f %.5f", c1, fit.per_R[0], fit.per_R[1], fit.per_R[2]);
    return ok;
  });

  std::vector<TiltedSample> tilted4, tilted8;
  criterion(6, "deficit under tilted law", [&](std::string& d) {
    if (!(c1 > 0.0)) throw NumericError("no c1 from criterion 5");
    tilted4 = sample_tilted(4.0, 0.75, 10000, SeedLineage{1006, 0, 0});
    tilted8 = sample_tilted(8.0, 0.75, 10000, SeedLineage{1006, 10000, 0});
    bool ok = true;
    for (const auto* batch : {&tilted4, &tilted8}) {
      const double R = batch == &tilted4 ? 4.0 : 8.0;
      const DeficitEvent ev{R, 0.75, c1 / 2.0};
      std::uint64_t hits = 0;
      for (const auto& s : *batch) hits += ev.contains(s.count) ? 1 : 0;
      const double n = static_cast<double>(batch->size());
      const double f = static_cast<double>(hits) / n;
      const double se = std::sqrt(f * (1.0 - f) / n);
      const double target = (c1 / 2.0) * std::pow(R, -2.0 + 0.75);
      ok = ok && f >= target - 3.0 * se;
      d += fmt("R=%g freq=%.4f target=%.4f ", R, f, target);
    }
    return ok;
  });

  criterion(7, "importance vs plain", [&](std::string& d) {
    struct Config {
      double R, alpha, c;
    };
    const std::vector<Config> configs{{4.0, 0.6, default_deficit_c(4.0, 0.6)},
                                      {4.0, 0.75, default_deficit_c(4.0, 0.75)},
                                      {4.0, 0.9, default_deficit_c(4.0, 0.9)},
                                      {8.0, 0.75, default_deficit_c(8.0, 0.75)},
                                      {4.0, 0.75, 1.4}};
    bool ok = true;
    for (const auto& cf : configs) {
      const DeficitEvent ev{cf.R, cf.alpha, cf.c};
      std::vector<TiltedSample> batch;
      if (cf.alpha == 0.75) batch = cf.R == 4.0 ? tilted4 : tilted8;
      else batch = sample_tilted(cf.R, cf.alpha, 10000, SeedLineage{1007, 0, 0});
      const auto is = is_estimate(batch, ev);
      const auto plain = plain_estimate_deficit(cf.R == 4.0 ? counts4 : counts8, ev);
      const bool overlap = is.ci95.lo <= plain.ci95.hi && plain.ci95.lo <= is.ci95.hi;
      ok = ok && overlap && plain.p_hat >= 1e-3;
      d += fmt("[R=%g a=%g IS=%.4f MC=%.4f] ", cf.R, cf.alpha, is.p_hat, plain.p_hat);
    }
    return ok;
  });

  criterion(8, "bounds suite", [&](std::string& d) {
    int total = 0, passed = 0;
    for (BoundId id : {BoundId::nsv_sum, BoundId::bernstein, BoundId::max_fstar, BoundId::min_max_f,
                       BoundId::small_on_curve, BoundId::arc_delta_tail}) {
      for (const auto& rep : validate_bounds(bound_grid(id), 10000, SeedLineage{1008, 0, 0})) {
        ++total;
        passed += rep.pass ? 1 : 0;
        if (!rep.pass) d += std::string(to_string(id)) + fmt(" emp=%.4g bound=%.4g; ", rep.empirical, rep.bound);
      }
    }
    d += fmt("%g/%g grid points pass", passed, total);
    return total > 0 && passed == total;
  });

  criterion(9, "separation selection", [&](std::string& d) {
    const auto s = separation_sweep(100000, SeedLineage{1009, 0, 0});
    d = fmt("n=%g violations=%g max mass ratio=%.4f", static_cast<double>(s.n), s.violations, s.max_mass_ratio);
    return s.n == 100000 && s.violations == 0 && s.max_mass_ratio <= 1.0;
  });

  criterion(10, "decorrelation", [&](std::string& d) {
    const auto s = decorrelation_sweep(1000, SeedLineage{1010, 0, 0});
    double oracle_err = 0.0;
    CounterStream u(SeedLineage{1010, 0, static_cast<std::uint32_t>(StreamTag::auxiliary)});
    for (int t = 0; t < 200; ++t) {
      const complex g = std::polar(u.uniform() / 3.0, kTwoPi * u.uniform());
      ComplexMatrix G(2, 2);
      G << 1.0, g, std::conj(g), 1.0;
      const auto dec = decorrelate(CovarianceMatrix::make(G));
      // Γ = I + |g|P with P² = I: Γ^{-1/2} = a I + b P, eigenvalues 1 ± |g|.
      const double m = std::abs(g);
      const double a = 0.5 * (1.0 / std::sqrt(1.0 + m) + 1.0 / std::sqrt(1.0 - m));
      const double b = 0.5 * (1.0 / std::sqrt(1.0 + m) - 1.0 / std::sqrt(1.0 - m));
      const complex p = m > 0.0 ? g / m : complex{};
      ComplexMatrix ref(2, 2);
      ref << a, b * p, b * std::conj(p), a;
      oracle_err = std::max(oracle_err, (dec.mixing - ref).cwiseAbs().maxCoeff());
    }
    d = fmt("violations=%g max whitening err=%.2e max s/delta=%.3f 2x2 err=%.2e", s.violations,
            s.max_whitening_error, s.max_s_over_delta, oracle_err);
    return s.violations == 0 && s.max_whitening_error <= 1e-10 && s.max_s_over_delta <= 1.0 && oracle_err <= 1e-12;
  });

  criterion(11, "elementary inequalities", [&](std::string& d) {
    const auto ineq = check_elementary_inequalities();
    const auto cov = covariance_decay_sweep(1000, SeedLineage{1011, 0, 0});
    d = fmt("grid points %g+%g violations=%g; decay configs violations=%g", static_cast<double>(ineq.points_log_power),
            static_cast<double>(ineq.points_gamma_tail), static_cast<double>(ineq.violations.size()), cov.violations);
    return ineq.ok() && ineq.points_log_power > 0 && cov.n == 1000 && cov.violations == 0;
  });

  criterion(12, "translation unitarity", [&](std::string& d) {
    double lo = 2.0, hi = 0.0;
    const int K_out = truncation_order(8.0 + 8.0 + 1.0);
    for (int ri = 0; ri <= 16; ++ri)
      for (int ai = 0; ai < 8; ++ai) {
        const complex w = std::polar(0.5 * ri, kTwoPi * ai / 8.0);
        const auto m = translation_matrix(w, 64, K_out);
        for (int k = 0; k <= 64; ++k) {
          lo = std::min(lo, m.column_norm_squared(k));
          hi = std::max(hi, m.column_norm_squared(k));
        }
      }
    const auto errs = map_samples<double>(0, 100, 0, [&](std::uint64_t i) {
      CounterStream u(SeedLineage{1012, i, static_cast<std::uint32_t>(StreamTag::auxiliary)});
      const double R = 1.0 + 3.0 * u.uniform();
      const double t0 = kTwoPi * u.uniform();
      const Arc arc{R, t0, t0 + 0.1 + (kTwoPi - 0.1) * u.uniform()};
      const auto s = sample_series(gef_profile, 3.0 * R + 1.0, SeedLineage{1012, i, 0});
      const complex w = arc.center();
      const auto t = translate_sample(s, w, truncation_order(2.0 * R + 1.0));
      return std::fabs(arc_delta(s, arc) - translated_arc_delta(t, arc, w));
    });
    double worst = 0.0;
    for (double e : errs) worst = std::max(worst, e);
    // Exact sums are ≤ 1; a computed sum of K_out + 1 rounded squares may exceed it by γ_n.
    const double n_terms = K_out + 1.0;
    const double eps = std::numeric_limits<double>::epsilon() / 2.0;
    const double rounding = (n_terms + 2.0) * eps / (1.0 - (n_terms + 2.0) * eps);
    d = fmt("column norm^2 - 1 in [%.3e, %.3e] (rounding allowance %.1e) max arc err=%.2e", lo - 1.0, hi - 1.0,
            rounding, worst);
    return lo >= 1.0 - 1e-8 && hi <= 1.0 + rounding && worst <= 1e-6;
  });

  criterion(13, "reproducibility", [&](std::string& d) {
    const fs::path dir = fs::temp_directory_path() / "gef_acceptance";
    fs::create_directories(dir);
    bool ok = true;
    int runs = 0;
    for (Experiment e : {Experiment::mean_check, Experiment::variance_scan, Experiment::tail_scan,
                         Experiment::lemma_suite, Experiment::lattice_scan}) {
      CampaignConfig c;
      c.experiment = e;
      c.R_list = {2.0, 3.0, 4.0};
      c.alpha_list = {0.75};
      c.n_samples = 300;
      c.master_seed = 1013;
      std::string reference_csv, reference_json;
      for (int threads : {1, 2, 4, 1}) {
        c.threads = threads;
        c.output_path = (dir / (std::string(to_string(e)) + ".csv")).string();
        const auto out = run_campaign(c);
        ok = ok && out.status == 0;
        const std::string csv = slurp(c.output_path);
        const std::string json = slurp(dir / (std::string(to_string(e)) + ".json"));
        if (reference_csv.empty()) {
          reference_csv = csv;
          reference_json = json;
        }
        ok = ok && !csv.empty() && csv == reference_csv && json == reference_json;
        ++runs;
      }
    }
    d = fmt("%g runs over 5 campaigns and thread counts {1,2,4}", runs);
    return ok;
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
