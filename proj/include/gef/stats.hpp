#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gef {

// Neumaier-compensated running sum.
class KahanSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double stderr_mean = 0.0;
};

Moments moments(std::span<const double> x);
Moments moments(std::span<const int> x);

// Jackknife standard error of the unbiased sample variance.
double jackknife_variance_stderr(std::span<const double> x);

// Jackknife standard error of Var(x)/Var(y) for independent samples.
double ratio_of_variances_stderr(std::span<const double> x, std::span<const double> y);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// Q_KS(λ) = 2 Σ_{j≥1} (-1)^{j-1} e^{-2 j² λ²}.
double kolmogorov_survival(double lambda);

// One-sample KS against a continuous CDF; p from Q_KS((√n + 0.12 + 0.11/√n) D).
KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);
// Two-sample KS with effective size n m/(n+m).
KsResult ks_two_sample(std::vector<double> x, std::vector<double> y);

double normal_cdf(double x);

// Exact binomial interval for k successes in n trials.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};
Interval clopper_pearson(std::uint64_t k, std::uint64_t n, double level = 0.95);

// y ≈ intercept + slope·x by ordinary least squares.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  std::size_t n = 0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);
// y ≈ slope·x, weighted by 1/σ².
LinearFit fit_through_origin(std::span<const double> x, std::span<const double> y, std::span<const double> sigma);

// Two-sided Student t quantile for a (1-level) interval.
double student_t_quantile(double level, double dof);

}  // namespace gef
