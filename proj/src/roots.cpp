#include "gef/roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "gef/errors.hpp"

namespace gef {

namespace {

// Newton correction p(z)/p'(z), evaluated on the reversed polynomial when
// |z| > 1 so that z^n never overflows.
complex newton_correction(std::span<const complex> p, complex z) {
  const int n = static_cast<int>(p.size()) - 1;
  if (std::abs(z) <= 1.0) {
    complex v = p[n], d = 0.0;
    for (int k = n - 1; k >= 0; --k) {
      d = d * z + v;
      v = v * z + p[k];
    }
    return v / d;
  }
  const complex y = 1.0 / z;
  complex q = p[0], dq = 0.0;
  for (int k = 1; k <= n; ++k) {
    dq = dq * y + q;
    q = q * y + p[k];
  }
  // p(z) = z^n q(y), p'(z) = z^{n-1} (n q - y q'(y))
  return z * q / (static_cast<double>(n) * q - y * dq);
}

double backward_error(std::span<const complex> p, complex z) {
  const int n = static_cast<int>(p.size()) - 1;
  if (std::abs(z) <= 1.0) {
    complex v = p[n];
    double m = std::abs(p[n]);
    const double az = std::abs(z);
    for (int k = n - 1; k >= 0; --k) {
      v = v * z + p[k];
      m = m * az + std::abs(p[k]);
    }
    return m > 0.0 ? std::abs(v) / m : 0.0;
  }
  const complex y = 1.0 / z;
  const double ay = std::abs(y);
  complex q = p[0];
  double m = std::abs(p[0]);
  for (int k = 1; k <= n; ++k) {
    q = q * y + p[k];
    m = m * ay + std::abs(p[k]);
  }
  return m > 0.0 ? std::abs(q) / m : 0.0;
}

// Radii from the upper convex hull of (k, log|p_k|): between hull vertices
// i < j there are j - i roots of modulus about (|p_i|/|p_j|)^{1/(j-i)}.
std::vector<complex> initial_guesses(std::span<const complex> p, double jitter) {
  const int n = static_cast<int>(p.size()) - 1;
  std::vector<int> hull;
  std::vector<double> lp(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k)
    lp[k] = p[k] == complex{} ? -std::numeric_limits<double>::infinity() : std::log(std::abs(p[k]));
  for (int k = 0; k <= n; ++k) {
    if (!std::isfinite(lp[k])) continue;
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2], b = hull.back();
      if ((lp[b] - lp[a]) * (k - a) <= (lp[k] - lp[a]) * (b - a)) hull.pop_back();
      else break;
    }
    hull.push_back(k);
  }
  std::vector<complex> z;
  z.reserve(static_cast<std::size_t>(n));
  for (std::size_t h = 1; h < hull.size(); ++h) {
    const int i = hull[h - 1], j = hull[h];
    const int count = j - i;
    const double radius = std::exp((lp[i] - lp[j]) / count);
    for (int t = 0; t < count; ++t) {
      const double angle = 2.0 * std::numbers::pi * t / count + 2.0 * std::numbers::pi * i / n + 0.4 + jitter * (t + 1);
      z.push_back(std::polar(radius, angle));
    }
  }
  return z;
}

}  // namespace

RootsResult aberth_roots(std::span<const complex> coefficients, const AberthOptions& options) {
  RootsResult result;
  std::size_t lo = 0, hi = coefficients.size();
  while (hi > 0 && coefficients[hi - 1] == complex{}) --hi;
  if (hi == 0) throw PreconditionError("zero polynomial has no isolated roots");
  while (coefficients[lo] == complex{}) ++lo;
  result.roots.assign(lo, complex{});
  const std::span<const complex> p = coefficients.subspan(lo, hi - lo);
  const int n = static_cast<int>(p.size()) - 1;
  if (n == 0) return result;
  if (n == 1) {
    result.roots.push_back(-p[0] / p[1]);
    return result;
  }

  std::vector<complex> z = initial_guesses(p, options.angular_jitter);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  int remaining = n;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 1; it <= options.max_iterations && remaining > 0; ++it) {
    result.iterations = it;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const complex ratio = newton_correction(p, z[i]);
      complex repulsion = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      const complex step = ratio / (1.0 - ratio * repulsion);
      z[i] -= step;
      const bool small_step = std::abs(step) <= options.tolerance * std::abs(z[i]);
      if (small_step || backward_error(p, z[i]) <= 16.0 * n * eps) {
        done[i] = 1;
        --remaining;
      }
    }
  }
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, backward_error(p, z[i]));
  result.max_backward_error = worst;
  if (remaining > 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "Aberth iteration did not converge: %d of %d roots unsettled, worst backward error %.3g",
                  remaining, n, worst);
    throw NumericError(buf);
  }
  result.roots.insert(result.roots.end(), z.begin(), z.end());
  return result;
}

RootsResult series_roots(const SeriesSample& sample, double scale, const AberthOptions& options) {
  if (!(scale > 0.0)) throw PreconditionError("scale must be > 0");
  if (sample.K() > 400) throw PreconditionError("count_zeros_roots requires K <= 400");
  // p_k = c_k scale^k / √k!, built in log space.
  std::vector<complex> p(sample.coefficients.size());
  const double ls = std::log(scale);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const complex c = sample.coefficients[k];
    p[k] = c == complex{} ? complex{} : c * std::exp(k * ls - 0.5 * std::lgamma(k + 1.0));
  }
  RootsResult r = aberth_roots(p, options);
  for (complex& z : r.roots) z *= scale;
  return r;
}

ZeroCountResult count_zeros_roots(const SeriesSample& sample, double R, const AberthOptions& options) {
  if (!(R > 0.0)) throw PreconditionError("R must be > 0");
  if (R > sample.r_valid) throw PreconditionError("outside certified radius");
  const RootsResult roots = series_roots(sample, R, options);
  ZeroCountResult res;
  res.method = CountMethod::roots;
  res.subdivisions = roots.iterations;
  res.radius = R;
  res.contour_distance = std::numeric_limits<double>::infinity();
  for (const complex& z : roots.roots) {
    const double m = std::abs(z);
    if (m < R) ++res.count;
    res.contour_distance = std::min(res.contour_distance, std::fabs(m - R));
  }
  res.near_contour = res.contour_distance < 1e-7;
  res.min_modulus_seen = res.contour_distance;
  res.backward_error = roots.max_backward_error;
  return res;
}

}  // namespace gef
