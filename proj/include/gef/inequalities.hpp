#pragma once

#include <string>
#include <vector>

namespace gef {

// k log t - t ≤ k log k - k - (√t - √k)²; returns rhs - lhs.
double log_power_slack(double k, double t);

// log ∫_u^∞ t^k e^{-t}/k! dt by adaptive Gauss–Kronrod quadrature, for u ≥ k.
double log_gamma_tail(int k, double u);

struct InequalityGrid {
  int k_max = 200;
  int t_points = 200;   // log-spaced t in [t_min, t_max], plus t = k
  double t_min = 1e-3;
  double t_max = 1e4;
  int d_points = 100;   // d = d_max·i/d_points
  double d_max = 10.0;
};

struct InequalityWitness {
  std::string inequality;
  double k = 0.0;
  double x = 0.0;  // t for the log-power inequality, d for the tail bound
  double lhs = 0.0;
  double rhs = 0.0;
};

struct InequalityReport {
  std::size_t points_log_power = 0;
  std::size_t points_gamma_tail = 0;
  double min_slack_log_power = 0.0;
  double min_log_slack_gamma_tail = 0.0;  // min of -d² - log tail
  std::vector<InequalityWitness> violations;
  bool ok() const { return violations.empty(); }
};

// Pointwise check on the grid; a point fails only if the inequality is
// violated by more than 1e-12 relative to the magnitudes involved.
InequalityReport check_elementary_inequalities(const InequalityGrid& grid = {});

}  // namespace gef
