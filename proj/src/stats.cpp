#include "gef/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "gef/errors.hpp"

namespace gef {

void KahanSum::add(double x) {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) comp_ += (sum_ - t) + x;
  else comp_ += (x - t) + sum_;
  sum_ = t;
}

Moments moments(std::span<const double> x) {
  Moments m;
  m.n = x.size();
  if (x.empty()) return m;
  KahanSum s;
  for (double v : x) s.add(v);
  m.mean = s.value() / m.n;
  if (m.n < 2) return m;
  KahanSum q;
  for (double v : x) q.add((v - m.mean) * (v - m.mean));
  m.variance = q.value() / (m.n - 1);
  m.stderr_mean = std::sqrt(m.variance / m.n);
  return m;
}

Moments moments(std::span<const int> x) {
  std::vector<double> d(x.begin(), x.end());
  return moments(d);
}

namespace {

// Leave-one-out unbiased variances, from running sums about the full mean.
std::vector<double> leave_one_out_variances(std::span<const double> x) {
  const std::size_t n = x.size();
  const Moments m = moments(x);
  const double ss = m.variance * (n - 1);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - m.mean;
    // Σ_{j≠i} (x_j - mean_{-i})² = ss - d² n/(n-1)
    out[i] = (ss - d * d * n / (n - 1.0)) / (n - 2.0);
  }
  return out;
}

double jackknife_stderr(std::span<const double> replicates) {
  const std::size_t n = replicates.size();
  const Moments m = moments(replicates);
  return std::sqrt(m.variance * (n - 1) * (n - 1) / n);
}

}  // namespace

double jackknife_variance_stderr(std::span<const double> x) {
  if (x.size() < 3) throw PreconditionError("jackknife needs at least 3 samples");
  const auto loo = leave_one_out_variances(x);
  return jackknife_stderr(loo);
}

double ratio_of_variances_stderr(std::span<const double> x, std::span<const double> y) {
  const double vx = moments(x).variance, vy = moments(y).variance;
  const double ex = jackknife_variance_stderr(x) / vx;
  const double ey = jackknife_variance_stderr(y) / vy;
  return vx / vy * std::sqrt(ex * ex + ey * ey);
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw PreconditionError("KS test needs data");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

KsResult ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) throw PreconditionError("KS test needs data");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = x.size(), m = y.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(i / n - j / m));
  }
  const double ne = std::sqrt(n * m / (n + m));
  return {d, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

Interval clopper_pearson(std::uint64_t k, std::uint64_t n, double level) {
  if (n == 0 || k > n) throw PreconditionError("clopper_pearson requires 0 <= k <= n, n > 0");
  const double a = 0.5 * (1.0 - level);
  Interval ci;
  ci.lo = k == 0 ? 0.0 : boost::math::quantile(boost::math::beta_distribution<>(k, n - k + 1.0), a);
  ci.hi = k == n ? 1.0 : boost::math::quantile(boost::math::beta_distribution<>(k + 1.0, n - k), 1.0 - a);
  return ci;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("linear fit needs at least 2 points");
  const std::size_t n = x.size();
  const double mx = moments(x).mean, my = moments(y).mean;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw PreconditionError("linear fit needs distinct x values");
  LinearFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    const double s2 = rss / (n - 2);
    f.slope_stderr = std::sqrt(s2 / sxx);
    f.intercept_stderr = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return f;
}

LinearFit fit_through_origin(std::span<const double> x, std::span<const double> y, std::span<const double> sigma) {
  if (x.size() != y.size() || x.size() != sigma.size() || x.empty())
    throw PreconditionError("fit needs matching non-empty inputs");
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (sigma[i] * sigma[i]);
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  LinearFit f;
  f.n = x.size();
  f.slope = sxy / sxx;
  f.slope_stderr = std::sqrt(1.0 / sxx);
  return f;
}

double student_t_quantile(double level, double dof) {
  return boost::math::quantile(boost::math::students_t_distribution<>(dof), 0.5 + 0.5 * level);
}

}  // namespace gef
