#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gef/rng.hpp"

namespace gef {

// Inclusive index range [lo, hi].
struct IndexBand {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  bool contains(std::int64_t k) const { return k >= lo && k <= hi; }
  std::int64_t size() const { return hi >= lo ? hi - lo + 1 : 0; }
  friend bool operator==(const IndexBand&, const IndexBand&) = default;
};

// Standard deviations a_k of the coefficients of Σ ζ_k a_k z^k/√k!.
//
//   constant_one   a_k = 1: the Gaussian entire function itself.
//   jlm_banded     a_k² = 1 + R^{α-1} on J_-, 1 - R^{α-1} on J_+, 1 elsewhere,
//                  where J_- holds N = ⌊R⌋ consecutive integers in [R²-2R, R²-R]
//                  and J_+ holds N consecutive integers in [R²+R, R²+2R].
//   explicit_table a_k = values[k] for k < values.size(); a polynomial profile.
class VarianceProfile {
 public:
  enum class Kind { constant_one, jlm_banded, explicit_table };

  static VarianceProfile constant_one();
  // Default bands: J_- starts at ⌊R²-2R⌋+1, J_+ at ⌊R²+R⌋+1.
  static VarianceProfile jlm_banded(double R, double alpha);
  static VarianceProfile jlm_banded(double R, double alpha, IndexBand j_minus, IndexBand j_plus);
  static VarianceProfile explicit_table(std::vector<double> values);

  Kind kind() const { return kind_; }
  double R() const { return R_; }
  double alpha() const { return alpha_; }
  const IndexBand& j_minus() const { return j_minus_; }
  const IndexBand& j_plus() const { return j_plus_; }
  const std::vector<double>& values() const { return values_; }

  // R^{α-1}, the relative variance shift on the bands (0 for other kinds).
  double tilt() const;

  // a_k. Throws PreconditionError("index beyond table") past an explicit table.
  double value(std::int64_t k) const;
  double variance(std::int64_t k) const { const double a = value(k); return a * a; }

  // Largest index whose a_k differs from 1 (bands), or the last table index;
  // -1 for constant_one.
  std::int64_t last_nonunit_index() const;
  // Indices with a_k != 1, ascending. Empty for constant_one; the whole table
  // for explicit_table.
  std::vector<std::int64_t> nonunit_indices() const;
  double max_value() const;

  friend bool operator==(const VarianceProfile&, const VarianceProfile&) = default;

 private:
  Kind kind_ = Kind::constant_one;
  double R_ = 0.0;
  double alpha_ = 0.0;
  IndexBand j_minus_{};
  IndexBand j_plus_{};
  std::vector<double> values_{};
};

double profile_value(const VarianceProfile& profile, std::int64_t k);

std::string to_string(VarianceProfile::Kind kind);

// {kind, R, alpha, j_minus:[lo,hi], j_plus:[lo,hi]} or {kind, values:[...]}.
nlohmann::json profile_to_json(const VarianceProfile& profile);
VarianceProfile profile_from_json(const nlohmann::json& j);

}  // namespace gef
