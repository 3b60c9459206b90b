#include "gef/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gef/errors.hpp"

namespace gef {

double log_power_slack(double k, double t) {
  if (!(k > 0.0 && t > 0.0)) throw PreconditionError("log-power inequality needs k, t > 0");
  const double lhs = k * std::log(t) - t;
  const double d = std::sqrt(t) - std::sqrt(k);
  const double rhs = k * std::log(k) - k - d * d;
  return rhs - lhs;
}

double log_gamma_tail(int k, double u) {
  if (k < 1 || !(u >= k)) throw PreconditionError("gamma tail needs k >= 1 and u >= k");
  // t = u + s; the integrand relative to its value at s = 0 decreases in s.
  const double phi0 = k * std::log(u) - u - std::lgamma(k + 1.0);
  auto rel = [&](double s) { return std::exp(k * std::log1p(s / u) - s); };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      rel, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
  return phi0 + std::log(integral);
}

InequalityReport check_elementary_inequalities(const InequalityGrid& grid) {
  InequalityReport rep;
  rep.min_slack_log_power = std::numeric_limits<double>::infinity();
  rep.min_log_slack_gamma_tail = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= grid.k_max; ++k) {
    std::vector<double> ts{static_cast<double>(k)};
    for (int i = 0; i < grid.t_points; ++i)
      ts.push_back(grid.t_min * std::pow(grid.t_max / grid.t_min, i / (grid.t_points - 1.0)));
    for (double t : ts) {
      const double slack = log_power_slack(k, t);
      const double scale = std::fabs(k * std::log(t)) + t + 1.0;
      ++rep.points_log_power;
      rep.min_slack_log_power = std::min(rep.min_slack_log_power, slack);
      if (slack < -1e-12 * scale) {
        const double lhs = k * std::log(t) - t;
        rep.violations.push_back({"log_power", double(k), t, lhs, lhs + slack});
      }
    }
    for (int i = 1; i <= grid.d_points; ++i) {
      const double d = grid.d_max * i / grid.d_points;
      const double u = (std::sqrt(double(k)) + d) * (std::sqrt(double(k)) + d);
      const double lhs = log_gamma_tail(k, u);
      const double rhs = -d * d;
      ++rep.points_gamma_tail;
      rep.min_log_slack_gamma_tail = std::min(rep.min_log_slack_gamma_tail, rhs - lhs);
      if (lhs - rhs > 1e-12 * (1.0 + std::fabs(rhs))) rep.violations.push_back({"gamma_tail", double(k), d, lhs, rhs});
    }
  }
  return rep;
}

}  // namespace gef
