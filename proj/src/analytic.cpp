#include "gef/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "gef/errors.hpp"
#include "gef/stats.hpp"

namespace gef {

double edelman_kostlan_mean(const VarianceProfile& profile, double r) {
  if (!(r >= 0.0)) throw PreconditionError("radius must be >= 0");
  if (r == 0.0) return 0.0;
  const double r2 = r * r;
  const double lr2 = std::log(r2);
  switch (profile.kind()) {
    case VarianceProfile::Kind::constant_one:
      return r2;
    case VarianceProfile::Kind::jlm_banded: {
      KahanSum num, den;
      den.add(1.0);
      for (const auto k : profile.nonunit_indices()) {
        const double t = std::exp(k * lr2 - r2 - std::lgamma(k + 1.0));
        const double excess = profile.variance(k) - 1.0;
        num.add(excess * (k - r2) * t);
        den.add(excess * t);
      }
      return r2 + num.value() / den.value();
    }
    case VarianceProfile::Kind::explicit_table: {
      const auto& a = profile.values();
      std::vector<double> logw(a.size(), -INFINITY);
      double top = -INFINITY;
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == 0.0) continue;
        logw[k] = 2.0 * std::log(a[k]) + k * lr2 - std::lgamma(k + 1.0);
        top = std::max(top, logw[k]);
      }
      if (!std::isfinite(top)) throw PreconditionError("profile has no non-zero coefficient");
      KahanSum num, den;
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (!std::isfinite(logw[k])) continue;
        const double w = std::exp(logw[k] - top);
        num.add(k * w);
        den.add(w);
      }
      return num.value() / den.value();
    }
  }
  return r2;
}

double deficit_constant(double R, double alpha) {
  const VarianceProfile p = VarianceProfile::jlm_banded(R, alpha);
  return (R * R - edelman_kostlan_mean(p, R)) / std::pow(R, alpha);
}

DeficitFit fit_deficit_constant(const std::vector<double>& R_list, double alpha) {
  if (R_list.empty()) throw PreconditionError("R list is empty");
  DeficitFit fit;
  fit.R = R_list;
  for (double R : R_list) fit.per_R.push_back(deficit_constant(R, alpha));
  fit.c1 = *std::min_element(fit.per_R.begin(), fit.per_R.end());
  return fit;
}

}  // namespace gef
