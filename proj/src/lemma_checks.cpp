#include "gef/lemma_checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gef/decorrelation.hpp"
#include "gef/errors.hpp"
#include "gef/independence.hpp"
#include "gef/parallel/kernels.hpp"
#include "gef/separation.hpp"

namespace gef {

namespace {

complex uniform_in_disk(CounterStream& s, double radius) {
  const double rho = radius * std::sqrt(s.uniform());
  return std::polar(rho, 2.0 * std::numbers::pi * s.uniform());
}

int uniform_int(CounterStream& s, int lo, int hi) {
  return lo + static_cast<int>(s.uniform() * (hi - lo + 1));
}

}  // namespace

CovarianceDecaySweep covariance_decay_sweep(std::uint64_t n, const SeedLineage& lineage, int threads) {
  struct One {
    double ratio = 0.0;
    bool violation = false;
  };
  const auto results = map_samples<One>(0, n, threads, [&](std::uint64_t i) {
    CounterStream s(lineage.with_index(i).with_stream(StreamTag::auxiliary));
    for (;;) {
      const complex w1 = uniform_in_disk(s, 8.0), w2 = uniform_in_disk(s, 8.0);
      const int k1 = uniform_int(s, 0, 24), k2 = uniform_int(s, 0, 24);
      if (!(std::abs(w1 - w2) - std::sqrt(k1) - std::sqrt(k2) > 0.0)) continue;
      const double cov = std::abs(coefficient_covariance(w1, k1, w2, k2));
      const double bound = covariance_decay_bound(w1, k1, w2, k2);
      return One{cov / bound, cov > bound + 1e-12};
    }
  });
  CovarianceDecaySweep out;
  out.n = n;
  for (const auto& r : results) {
    out.max_ratio = std::max(out.max_ratio, r.ratio);
    out.violations += r.violation ? 1 : 0;
  }
  return out;
}

DecorrelationSweep decorrelation_sweep(std::uint64_t n, const SeedLineage& lineage, int threads) {
  struct One {
    double error = 0.0;
    double s_over_delta = 0.0;
    bool violation = false;
  };
  const auto results = map_samples<One>(0, n, threads, [&](std::uint64_t i) {
    const SeedLineage l = lineage.with_index(i);
    CounterStream s(l.with_stream(StreamTag::auxiliary));
    const int size = uniform_int(s, 1, 16);
    const CovarianceMatrix cov = random_admissible_covariance(size, l);
    One r;
    try {
      const Decomposition d = decorrelate(cov);
      r.error = whitening_error(d.mixing, cov.gamma);
      for (int k = 0; k < size; ++k) {
        if (cov.delta[k] > 0.0) r.s_over_delta = std::max(r.s_over_delta, d.s[k] / cov.delta[k]);
        if (d.s[k] > cov.delta[k]) r.violation = true;
      }
      if (r.error > 1e-10) r.violation = true;
    } catch (const NumericError&) {
      r.violation = true;
    }
    return r;
  });
  DecorrelationSweep out;
  out.n = n;
  for (const auto& r : results) {
    out.max_whitening_error = std::max(out.max_whitening_error, r.error);
    out.max_s_over_delta = std::max(out.max_s_over_delta, r.s_over_delta);
    out.violations += r.violation ? 1 : 0;
  }
  return out;
}

SeparationSweep separation_sweep(std::uint64_t n, const SeedLineage& lineage, int threads) {
  struct One {
    double mass_ratio = 0.0;
    bool violation = false;
  };
  const auto results = map_samples<One>(0, n, threads, [&](std::uint64_t i) {
    CounterStream s(lineage.with_index(i).with_stream(StreamTag::auxiliary));
    SeparationInstance inst;
    inst.m.resize(static_cast<std::size_t>(uniform_int(s, 1, 64)));
    for (auto& m : inst.m) m = uniform_int(s, 0, 32);
    inst.Q = uniform_int(s, 1, 3);
    const SeparationResult res = select_separated(inst);
    const bool certified = res.certificate.separation_ok && res.certificate.mass_ratio <= 1.0;
    return One{res.certificate.mass_ratio, !certified || !verify_selection(inst, res.J_prime)};
  });
  SeparationSweep out;
  out.n = n;
  for (const auto& r : results) {
    out.max_mass_ratio = std::max(out.max_mass_ratio, r.mass_ratio);
    out.violations += r.violation ? 1 : 0;
  }
  return out;
}

}  // namespace gef
