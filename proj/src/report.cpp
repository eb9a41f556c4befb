#include "ltlab/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ltlab/errors.hpp"

namespace ltlab::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size()) throw ConfigError("CSV row width differs from the header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  auto cell = [](const Cell& c) -> std::string {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
  out += "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell(row[i]);
    out += "\n";
  }
  return out;
}

json assertion_json(const Assertion& a) {
  json j{{"name", a.name}, {"pass", a.pass}};
  j["value"] = a.value ? json(*a.value) : json(nullptr);
  j["tolerance"] = a.tolerance ? json(*a.tolerance) : json(nullptr);
  if (!a.detail.empty()) j["detail"] = a.detail;
  return j;
}

json make_report(const std::string& command, std::uint64_t seed, json config, json results,
                 json tolerances, const std::vector<Assertion>& assertions, json metadata) {
  json list = json::array();
  for (const auto& a : assertions) list.push_back(assertion_json(a));
  return json{{"tool", "ltlab"},
              {"version", kVersion},
              {"command", command},
              {"seed", seed},
              {"config", std::move(config)},
              {"results", std::move(results)},
              {"tolerances", std::move(tolerances)},
              {"assertions", std::move(list)},
              {"metadata", std::move(metadata)}};
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ResourceError("cannot write " + path);
  out << content;
  if (!out) throw ResourceError("short write to " + path);
}

std::string plot_data(const std::string& title, const std::vector<double>& x,
                      const std::vector<double>& y) {
  if (x.size() != y.size()) throw ConfigError("plot columns differ in length");
  std::string out = "# " + title + "\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    out += format_double(x[i]) + " " + format_double(y[i]) + "\n";
  return out;
}

}  // namespace ltlab::cli
