#include "gef/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gef/errors.hpp"

namespace gef {

namespace {

struct ArcWalker {
  const SeriesSample& sample;
  const CircularArc& arc;
  const WindingOptions& options;
  double log_scale;    // ρ_max²/2
  double lipschitz;    // bound on |f'| e^{-log_scale} over |z| ≤ ρ_max
  bool centered;       // arc on a circle about 0: one global bound suffices
  ArcIncrementResult result;

  double local_lipschitz(double theta, double h) const {
    if (centered) return lipschitz;
    const double rho = std::abs(arc.point(theta)) + 0.5 * h;
    return rho >= std::abs(arc.origin) + arc.radius ? lipschitz : derivative_bound_scaled(sample, rho, log_scale);
  }

  complex eval(double theta) {
    const complex z = arc.point(theta);
    const complex g = evaluate_scaled(sample, z, log_scale);
    // f*(z) = |g| e^{log_scale - |z|²/2}
    const double star = std::abs(g) * std::exp(log_scale - 0.5 * std::norm(z));
    ++result.evaluations;
    result.min_modulus_seen = std::min(result.min_modulus_seen, star);
    if (!(star >= options.zero_floor)) throw ZeroOnContourError("zero on contour");
    return g;
  }

  void segment(double ta, complex ga, double tb, complex gb, int depth) {
    const double tm = 0.5 * (ta + tb);
    const complex gm = eval(tm);
    const double h = arc.radius * (tb - ta);
    if (local_lipschitz(tm, h) * h * 0.5 < 0.9 * std::abs(gm)) {
      result.increment += std::arg(gb / gm) + std::arg(gm / ga);
      return;
    }
    if (depth >= options.max_depth) throw ZeroOnContourError("zero on contour");
    ++result.subdivisions;
    segment(ta, ga, tm, gm, depth + 1);
    segment(tm, gm, tb, gb, depth + 1);
  }
};

}  // namespace

complex Arc::center() const { return std::polar(R, 0.5 * (theta_start + theta_end)); }

const char* to_string(CountMethod method) { return method == CountMethod::winding ? "winding" : "roots"; }

ArcIncrementResult argument_increment(const SeriesSample& sample, const CircularArc& arc,
                                      const WindingOptions& options) {
  const double span = arc.theta_end - arc.theta_start;
  if (!(arc.radius > 0.0)) throw PreconditionError("arc radius must be > 0");
  if (!(span > 0.0 && span <= 2.0 * std::numbers::pi + 1e-12))
    throw PreconditionError("arc must satisfy 0 < theta_end - theta_start <= 2pi");
  const double rho_max = std::abs(arc.origin) + arc.radius;
  if (rho_max > sample.r_valid) throw PreconditionError("outside certified radius");

  ArcWalker walker{sample, arc, options, 0.5 * rho_max * rho_max, 0.0, arc.origin == complex{}, {}};
  walker.lipschitz = derivative_bound_scaled(sample, rho_max, walker.log_scale);
  walker.result.min_modulus_seen = std::numeric_limits<double>::infinity();

  // Initial partition sized so an O(1) modulus would already be certified.
  const double length = arc.radius * span;
  const int pieces = std::clamp(static_cast<int>(std::ceil(length * walker.lipschitz / 1.8)), 4, 1 << 16);
  const double step = span / pieces;
  double ta = arc.theta_start;
  complex ga = walker.eval(ta);
  for (int i = 1; i <= pieces; ++i) {
    const double tb = i == pieces ? arc.theta_end : arc.theta_start + i * step;
    const complex gb = walker.eval(tb);
    walker.segment(ta, ga, tb, gb, 0);
    ta = tb;
    ga = gb;
  }
  return walker.result;
}

double arc_argument_increment(const SeriesSample& sample, const Arc& arc, const WindingOptions& options) {
  return argument_increment(sample, CircularArc{0.0, arc.R, arc.theta_start, arc.theta_end}, options).increment;
}

ZeroCountResult count_zeros_winding(const SeriesSample& sample, double R, const WindingOptions& options) {
  if (!(R > 0.0)) throw PreconditionError("R must be > 0");
  if (R > sample.r_valid) throw PreconditionError("outside certified radius");
  for (int attempt = 0;; ++attempt) {
    const double radius = R + attempt * options.retry_step;
    try {
      const auto inc = argument_increment(sample, CircularArc{0.0, radius, 0.0, 2.0 * std::numbers::pi}, options);
      const double turns = inc.increment / (2.0 * std::numbers::pi);
      const double rounded = std::round(turns);
      if (std::fabs(turns - rounded) > 1e-6) throw NumericError("winding number is not an integer");
      ZeroCountResult r;
      r.count = static_cast<int>(rounded);
      r.method = CountMethod::winding;
      r.subdivisions = inc.subdivisions;
      r.min_modulus_seen = inc.min_modulus_seen;
      r.radius = radius;
      r.retries = attempt;
      return r;
    } catch (const ZeroOnContourError&) {
      if (attempt >= options.max_retries) throw;
    } catch (const PreconditionError&) {
      if (attempt == 0) throw;
      throw ZeroOnContourError("zero on contour");
    }
  }
}

double arc_delta(const SeriesSample& sample, const Arc& arc, const WindingOptions& options) {
  return arc_argument_increment(sample, arc, options) - arc.length() * arc.R;
}

double translated_arc_delta(const SeriesSample& translated, const Arc& arc, complex w, const WindingOptions& options) {
  const CircularArc shifted{-w, arc.R, arc.theta_start, arc.theta_end};
  const double inc = argument_increment(translated, shifted, options).increment;
  const complex zs = shifted.point(arc.theta_start);
  const complex ze = shifted.point(arc.theta_end);
  const complex wc = std::conj(w);
  return inc + (ze * wc).imag() - (zs * wc).imag() - arc.length() * arc.R;
}

}  // namespace gef
