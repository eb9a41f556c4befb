#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace ltlab::cli {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

class CsvTable {
 public:
  using Cell = std::variant<double, long long, std::string>;
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<Cell> row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

struct Assertion {
  std::string name;
  std::optional<double> value;
  std::optional<double> tolerance;
  bool pass = false;
  std::string detail;
};

json assertion_json(const Assertion& a);

/// Report layout documented by schemas/report.schema.json. Carries no wall
/// time so that identical inputs give identical bytes.
json make_report(const std::string& command, std::uint64_t seed, json config, json results,
                 json tolerances, const std::vector<Assertion>& assertions, json metadata);

std::string dump_report(const json& report);

/// Creates parent directories as needed; ResourceError on I/O failure.
void write_text(const std::string& path, const std::string& content);

/// Plain two-column plot data ("x y" per line, '#' header comment).
std::string plot_data(const std::string& title, const std::vector<double>& x,
                      const std::vector<double>& y);

}  // namespace ltlab::cli
