#include "gef/translation.hpp"

#include <algorithm>
#include <cmath>

#include "gef/errors.hpp"

namespace gef {

double TranslationMatrix::column_norm_squared(int k) const {
  double s = 0.0;
  for (int n = 0; n <= K_out; ++n) s += std::norm(at(n, k));
  return s;
}

TranslationMatrix translation_matrix(complex w, int K_in, int K_out) {
  if (K_in < 0 || K_out < 0) throw PreconditionError("translation orders must be >= 0");
  TranslationMatrix m;
  m.w = w;
  m.K_in = K_in;
  m.K_out = K_out;
  m.entries.assign(static_cast<std::size_t>(K_out + 1) * (K_in + 1), complex{});
  auto set = [&](int n, int k, complex v) { m.entries[static_cast<std::size_t>(n) * (K_in + 1) + k] = v; };

  const long double x = std::norm(w);
  if (x == 0.0L) {
    for (int k = 0; k <= std::min(K_in, K_out); ++k) set(k, k, 1.0);
    return m;
  }
  const int top = K_in + K_out;
  std::vector<long double> lg(static_cast<std::size_t>(top) + 2);
  for (int i = 0; i <= top + 1; ++i) lg[static_cast<std::size_t>(i)] = std::lgamma(static_cast<long double>(i) + 1.0L);
  const long double log_abs_w = 0.5L * std::log(x);
  const double phase_lower = std::arg(-std::conj(w));  // n > k
  const double phase_upper = std::arg(w);              // n < k
  constexpr long double kBig = 1e300L;
  const long double log_big = std::log(kBig);

  const int max_offset = std::max(K_in, K_out);
  for (int a = 0; a <= max_offset; ++a) {
    // j runs over the smaller index; the larger one is j + a.
    const bool below = a <= K_out;  // entries (j+a, j)
    const bool above = a > 0 && a <= K_in;  // entries (j, j+a)
    if (!below && !above) continue;
    const int j_max = std::max(below ? std::min(K_in, K_out - a) : -1, above ? std::min(K_out, K_in - a) : -1);
    const long double base = a * log_abs_w - 0.5L * x;
    const complex ph_lo = std::polar(1.0, a * phase_lower);
    const complex ph_up = std::polar(1.0, a * phase_upper);
    long double prev = 0.0L, cur = 1.0L, log_scale = 0.0L;
    for (int j = 0; j <= j_max; ++j) {
      if (j == 1) {
        prev = cur;
        cur = 1.0L + a - x;
      } else if (j >= 2) {
        const long double next = ((2.0L * (j - 1) + 1.0L + a - x) * cur - ((j - 1) + a) * prev) / j;
        prev = cur;
        cur = next;
      }
      if (std::fabs(cur) > kBig) {
        cur /= kBig;
        prev /= kBig;
        log_scale += log_big;
      }
      const long double logmag = log_scale + base + 0.5L * (lg[static_cast<std::size_t>(j)] - lg[static_cast<std::size_t>(j + a)]);
      const double v = static_cast<double>(std::exp(logmag) * cur);
      if (below && j <= K_in && j + a <= K_out) set(j + a, j, v * ph_lo);
      if (above && j <= K_out && j + a <= K_in) set(j, j + a, v * ph_up);
    }
  }
  return m;
}

SeriesSample translate_sample(const SeriesSample& sample, const TranslationMatrix& matrix,
                              const TruncationTargets& targets) {
  if (matrix.K_in != sample.K()) throw PreconditionError("translation matrix does not match sample order");
  SeriesSample out;
  out.lineage = sample.lineage;
  out.coefficients.assign(static_cast<std::size_t>(matrix.K_out) + 1, complex{});
  for (int n = 0; n <= matrix.K_out; ++n) {
    complex s{};
    for (int k = 0; k <= matrix.K_in; ++k) s += matrix.at(n, k) * sample.coefficients[static_cast<std::size_t>(k)];
    out.coefficients[static_cast<std::size_t>(n)] = s;
  }
  out.r_valid = std::min(sample.r_valid - std::abs(matrix.w), certified_radius(matrix.K_out, targets));
  if (!(out.r_valid > 0.0)) throw PreconditionError("translated sample has no certified disk");
  out.eps_amp = sample.eps_amp + targets.eps_amp;
  out.eps_prob = sample.eps_prob + targets.eps_prob;
  return out;
}

SeriesSample translate_sample(const SeriesSample& sample, complex w, int K_out, const TruncationTargets& targets) {
  if (w == complex{}) {
    SeriesSample out = sample;
    out.coefficients.resize(static_cast<std::size_t>(K_out) + 1, complex{});
    if (K_out < sample.K()) out.r_valid = std::min(sample.r_valid, certified_radius(K_out, targets));
    return out;
  }
  return translate_sample(sample, translation_matrix(w, sample.K(), K_out), targets);
}

}  // namespace gef
