#pragma once

#include "gef/series.hpp"

namespace gef {

// Counterclockwise arc of the circle R𝕋 from theta_start to theta_end.
struct Arc {
  double R = 1.0;
  double theta_start = 0.0;
  double theta_end = 2.0 * 3.14159265358979323846;

  // R·e^{i(θs+θe)/2}
  complex center() const;
  // |I| = R·(θe - θs)
  double length() const { return R * (theta_end - theta_start); }
  complex start_point() const { return std::polar(R, theta_start); }
  complex end_point() const { return std::polar(R, theta_end); }
};

// Counterclockwise arc of the circle {origin + radius·e^{iθ}}.
struct CircularArc {
  complex origin{};
  double radius = 1.0;
  double theta_start = 0.0;
  double theta_end = 2.0 * 3.14159265358979323846;

  complex point(double theta) const { return origin + std::polar(radius, theta); }
};

struct WindingOptions {
  int max_depth = 48;
  // f* below this on an evaluated point counts as a zero on the contour.
  double zero_floor = 1e-10;
  int max_retries = 8;
  double retry_step = 1e-6;
};

struct ArcIncrementResult {
  double increment = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
  // Smallest |f(z)| e^{-|z|²/2} over evaluated points.
  double min_modulus_seen = 0.0;
};

enum class CountMethod { winding, roots };

struct ZeroCountResult {
  int count = 0;
  CountMethod method = CountMethod::winding;
  // Bisections for winding; Aberth iterations for roots.
  int subdivisions = 0;
  // winding: smallest f* over evaluated points; roots: same as contour_distance.
  double min_modulus_seen = 0.0;
  // Radius actually used after zero-on-contour retries.
  double radius = 0.0;
  int retries = 0;
  // roots: smallest ||root| - R|; winding: not set.
  double contour_distance = 0.0;
  bool near_contour = false;
  // roots: worst relative backward error of the computed roots.
  double backward_error = 0.0;
};

const char* to_string(CountMethod method);

// Δ arg f along the arc, certified segment by segment: on a segment of arc
// length h with midpoint m, L·h/2 < 0.9|f(m)| where L bounds |f'| on the disk
// containing the arc. Then f has no zero on the segment and each half turns by
// less than π/2, so principal-branch phase differences add up exactly.
// Throws ZeroOnContourError when a point has f* < zero_floor or the depth
// limit is reached.
ArcIncrementResult argument_increment(const SeriesSample& sample, const CircularArc& arc,
                                      const WindingOptions& options = {});

double arc_argument_increment(const SeriesSample& sample, const Arc& arc,
                              const WindingOptions& options = {});

// n(R) = Δ_{R𝕋} arg f / 2π, retrying at R + k·retry_step on a zero on the contour.
ZeroCountResult count_zeros_winding(const SeriesSample& sample, double R, const WindingOptions& options = {});

// δ(f, I) = Δ_I arg f - |I|·R.
double arc_delta(const SeriesSample& sample, const Arc& arc, const WindingOptions& options = {});

// δ(T_w f, I - w) for `translated` = T_w f: the increment of T_w f along I - w,
// plus Im(z_e w̄) - Im(z_s w̄) for the endpoints of I - w, minus |I|·R.
// Equals δ(f, I).
double translated_arc_delta(const SeriesSample& translated, const Arc& arc, complex w,
                            const WindingOptions& options = {});

}  // namespace gef
