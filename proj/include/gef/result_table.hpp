#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace gef {

// One emitted statistic. `params` is compact JSON of the row's parameters;
// (seed, index_lo, index_hi) name the sample indices [index_lo, index_hi) it
// was computed from.
struct ResultRow {
  std::string experiment;
  nlohmann::json params = nlohmann::json::object();
  std::string statistic;
  double value = 0.0;
  double stderr_value = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t index_lo = 0;
  std::uint64_t index_hi = 0;
};

// Append-only table.
//
// CSV columns (fixed): experiment,params,statistic,value,stderr,n,seed,index_lo,index_hi
// with reals printed as %.17g and params as quoted compact JSON.
// JSON: {"format_version": 1, "rows": [{...same keys...}]}.
class ResultTable {
 public:
  static constexpr int format_version = 1;

  void append(ResultRow row) { rows_.push_back(std::move(row)); }
  void append(const ResultTable& other);
  const std::vector<ResultRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  // First row with this experiment/statistic (and params subset, if given).
  const ResultRow* find(const std::string& statistic, const nlohmann::json& params = nullptr) const;

  std::string to_csv() const;
  nlohmann::json to_json() const;
  static ResultTable from_json(const nlohmann::json& j);
  static ResultTable from_csv(const std::string& text);

 private:
  std::vector<ResultRow> rows_;
};

std::string format_double(double v);

// FNV-1a 64-bit of the canonical (sorted-key, compact) JSON dump, as hex.
std::string config_hash(const nlohmann::json& config);

}  // namespace gef
