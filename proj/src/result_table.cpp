#include "gef/result_table.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gef/errors.hpp"

namespace gef {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  return std::stod(j.get<std::string>());
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void ResultTable::append(const ResultTable& other) {
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

const ResultRow* ResultTable::find(const std::string& statistic, const nlohmann::json& params) const {
  for (const auto& r : rows_) {
    if (r.statistic != statistic) continue;
    bool match = true;
    if (params.is_object())
      for (auto it = params.begin(); it != params.end(); ++it)
        if (!r.params.contains(it.key()) || r.params.at(it.key()) != it.value()) match = false;
    if (match) return &r;
  }
  return nullptr;
}

std::string ResultTable::to_csv() const {
  std::string out = "experiment,params,statistic,value,stderr,n,seed,index_lo,index_hi\n";
  for (const auto& r : rows_) {
    out += r.experiment + ',' + csv_quote(r.params.dump()) + ',' + r.statistic + ',' + format_double(r.value) + ',' +
           format_double(r.stderr_value) + ',' + std::to_string(r.n) + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.index_lo) + ',' + std::to_string(r.index_hi) + '\n';
  }
  return out;
}

nlohmann::json ResultTable::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rows_) {
    rows.push_back({{"experiment", r.experiment},
                    {"params", r.params},
                    {"statistic", r.statistic},
                    {"value", json_number(r.value)},
                    {"stderr", json_number(r.stderr_value)},
                    {"n", r.n},
                    {"seed", r.seed},
                    {"index_lo", r.index_lo},
                    {"index_hi", r.index_hi}});
  }
  return {{"format_version", format_version}, {"rows", rows}};
}

ResultTable ResultTable::from_json(const nlohmann::json& j) {
  if (j.value("format_version", 0) != format_version) throw PreconditionError("unsupported result table format");
  ResultTable t;
  for (const auto& r : j.at("rows")) {
    ResultRow row;
    row.experiment = r.at("experiment").get<std::string>();
    row.params = r.at("params");
    row.statistic = r.at("statistic").get<std::string>();
    row.value = number_from_json(r.at("value"));
    row.stderr_value = number_from_json(r.at("stderr"));
    row.n = r.at("n").get<std::uint64_t>();
    row.seed = r.at("seed").get<std::uint64_t>();
    row.index_lo = r.at("index_lo").get<std::uint64_t>();
    row.index_hi = r.at("index_hi").get<std::uint64_t>();
    t.append(std::move(row));
  }
  return t;
}

ResultTable ResultTable::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("experiment,params,statistic", 0) != 0)
    throw PreconditionError("not a result table CSV");
  ResultTable t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 9) throw PreconditionError("malformed result table row");
    ResultRow row;
    row.experiment = f[0];
    row.params = nlohmann::json::parse(f[1]);
    row.statistic = f[2];
    row.value = std::stod(f[3]);
    row.stderr_value = std::stod(f[4]);
    row.n = std::stoull(f[5]);
    row.seed = std::stoull(f[6]);
    row.index_lo = std::stoull(f[7]);
    row.index_hi = std::stoull(f[8]);
    t.append(std::move(row));
  }
  return t;
}

std::string config_hash(const nlohmann::json& config) {
  const std::string s = config.dump();  // nlohmann objects iterate in sorted key order
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gef
