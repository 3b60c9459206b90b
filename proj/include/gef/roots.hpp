#pragma once

#include <span>
#include <vector>

#include "gef/series.hpp"
#include "gef/zeros.hpp"

namespace gef {

struct AberthOptions {
  int max_iterations = 200;
  double tolerance = 1e-12;  // relative Newton-correction size
  double angular_jitter = 1e-3;
};

struct RootsResult {
  std::vector<complex> roots;
  int iterations = 0;
  // max over roots of |p(z)| / Σ|p_k||z|^k
  double max_backward_error = 0.0;
};

// All roots of Σ p_k z^k (ordinary monomial coefficients) by Aberth–Ehrlich
// iteration. Zero leading/trailing coefficients are stripped first (roots at
// the origin are returned exactly). Initial guesses lie on circles whose radii
// come from the upper convex hull of log|p_k|, rotated by a small jitter.
// Throws NumericError after max_iterations with the worst backward error.
RootsResult aberth_roots(std::span<const complex> monomial_coefficients, const AberthOptions& options = {});

// Roots of the truncated series Σ c_k z^k/√k!, found for the variable u = z/scale
// and mapped back.
RootsResult series_roots(const SeriesSample& sample, double scale, const AberthOptions& options = {});

// Number of roots with |z| < R. Roots within 1e-7 of |z| = R set near_contour.
ZeroCountResult count_zeros_roots(const SeriesSample& sample, double R, const AberthOptions& options = {});

}  // namespace gef
