#include "gef/profile.hpp"

#include <algorithm>
#include <cmath>

#include "gef/errors.hpp"

namespace gef {

VarianceProfile VarianceProfile::constant_one() { return VarianceProfile{}; }

VarianceProfile VarianceProfile::jlm_banded(double R, double alpha) {
  if (!(R >= 2.0)) throw PreconditionError("jlm_banded requires R >= 2");
  const auto n = static_cast<std::int64_t>(std::floor(R));
  const auto minus_lo = static_cast<std::int64_t>(std::floor(R * R - 2.0 * R)) + 1;
  const auto plus_lo = static_cast<std::int64_t>(std::floor(R * R + R)) + 1;
  return jlm_banded(R, alpha, {minus_lo, minus_lo + n - 1}, {plus_lo, plus_lo + n - 1});
}

VarianceProfile VarianceProfile::jlm_banded(double R, double alpha, IndexBand j_minus,
                                            IndexBand j_plus) {
  if (!(R > 1.0)) throw PreconditionError("jlm_banded requires R > 1");
  if (!(alpha > 0.5 && alpha < 1.0)) throw PreconditionError("jlm_banded requires 1/2 < alpha < 1");
  if (j_minus.size() <= 0 || j_plus.size() <= 0 || j_minus.lo < 0)
    throw PreconditionError("jlm_banded bands must be non-empty index ranges");
  if (j_minus.hi >= j_plus.lo) throw PreconditionError("jlm_banded requires J_- below J_+");
  VarianceProfile p;
  p.kind_ = Kind::jlm_banded;
  p.R_ = R;
  p.alpha_ = alpha;
  p.j_minus_ = j_minus;
  p.j_plus_ = j_plus;
  return p;
}

VarianceProfile VarianceProfile::explicit_table(std::vector<double> values) {
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw PreconditionError("profile values must be finite and >= 0");
  VarianceProfile p;
  p.kind_ = Kind::explicit_table;
  p.values_ = std::move(values);
  return p;
}

double VarianceProfile::tilt() const {
  return kind_ == Kind::jlm_banded ? std::pow(R_, alpha_ - 1.0) : 0.0;
}

double VarianceProfile::value(std::int64_t k) const {
  if (k < 0) throw PreconditionError("profile index must be >= 0");
  switch (kind_) {
    case Kind::constant_one:
      return 1.0;
    case Kind::jlm_banded:
      if (j_minus_.contains(k)) return std::sqrt(1.0 + tilt());
      if (j_plus_.contains(k)) return std::sqrt(1.0 - tilt());
      return 1.0;
    case Kind::explicit_table:
      if (k >= static_cast<std::int64_t>(values_.size())) throw PreconditionError("index beyond table");
      return values_[static_cast<std::size_t>(k)];
  }
  return 1.0;
}

std::int64_t VarianceProfile::last_nonunit_index() const {
  switch (kind_) {
    case Kind::constant_one:
      return -1;
    case Kind::jlm_banded:
      return j_plus_.hi;
    case Kind::explicit_table:
      return static_cast<std::int64_t>(values_.size()) - 1;
  }
  return -1;
}

std::vector<std::int64_t> VarianceProfile::nonunit_indices() const {
  std::vector<std::int64_t> out;
  if (kind_ == Kind::jlm_banded) {
    for (auto k = j_minus_.lo; k <= j_minus_.hi; ++k) out.push_back(k);
    for (auto k = j_plus_.lo; k <= j_plus_.hi; ++k) out.push_back(k);
  } else if (kind_ == Kind::explicit_table) {
    for (std::size_t k = 0; k < values_.size(); ++k) out.push_back(static_cast<std::int64_t>(k));
  }
  return out;
}

double VarianceProfile::max_value() const {
  switch (kind_) {
    case Kind::constant_one:
      return 1.0;
    case Kind::jlm_banded:
      return std::sqrt(1.0 + tilt());
    case Kind::explicit_table:
      return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
  }
  return 1.0;
}

double profile_value(const VarianceProfile& profile, std::int64_t k) { return profile.value(k); }

std::string to_string(VarianceProfile::Kind kind) {
  switch (kind) {
    case VarianceProfile::Kind::constant_one:
      return "constant_one";
    case VarianceProfile::Kind::jlm_banded:
      return "jlm_banded";
    case VarianceProfile::Kind::explicit_table:
      return "explicit_table";
  }
  return "unknown";
}

nlohmann::json profile_to_json(const VarianceProfile& profile) {
  nlohmann::json j;
  j["kind"] = to_string(profile.kind());
  if (profile.kind() == VarianceProfile::Kind::jlm_banded) {
    j["R"] = profile.R();
    j["alpha"] = profile.alpha();
    j["j_minus"] = {profile.j_minus().lo, profile.j_minus().hi};
    j["j_plus"] = {profile.j_plus().lo, profile.j_plus().hi};
  } else if (profile.kind() == VarianceProfile::Kind::explicit_table) {
    j["values"] = profile.values();
  }
  return j;
}

VarianceProfile profile_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant_one") return VarianceProfile::constant_one();
  if (kind == "explicit_table") return VarianceProfile::explicit_table(j.at("values").get<std::vector<double>>());
  if (kind == "jlm_banded") {
    const double R = j.at("R").get<double>();
    const double alpha = j.at("alpha").get<double>();
    if (!j.contains("j_minus")) return VarianceProfile::jlm_banded(R, alpha);
    const auto jm = j.at("j_minus").get<std::vector<std::int64_t>>();
    const auto jp = j.at("j_plus").get<std::vector<std::int64_t>>();
    if (jm.size() != 2 || jp.size() != 2) throw PreconditionError("bands must be [lo, hi] pairs");
    return VarianceProfile::jlm_banded(R, alpha, {jm[0], jm[1]}, {jp[0], jp[1]});
  }
  throw PreconditionError("unknown profile kind: " + kind);
}

}  // namespace gef
