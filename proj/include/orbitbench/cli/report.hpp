#pragma once

// Run report: config echo, check records, result data and timing,
// serialized as versioned JSON. Optional CSV tables ride along.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "orbitbench/cli/config.hpp"

namespace orbitbench::cli {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct Check {
  std::string name;
  nlohmann::json expected;
  nlohmann::json observed;
  nlohmann::json tolerance;  // number, or a string such as "exact"
  bool pass = false;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

struct Report {
  std::string command;
  Config config;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  nlohmann::json data = nlohmann::json::object();
  double seconds = 0;
  CsvTable csv;

  // Overall pass: at least one check and every check passes.
  bool pass() const;
  const Check* find(const std::string& name) const;

  // |observed - expected| <= tol * |expected|
  Check& relative(const std::string& name, double expected, double observed, double tol);
  Check& absolute(const std::string& name, double expected, double observed, double tol);
  Check& exact(const std::string& name, const nlohmann::json& expected, const nlohmann::json& observed);
  // observed <= bound (strict: observed < bound)
  Check& at_most(const std::string& name, double bound, double observed, bool strict = false);
  Check& flag(const std::string& name, bool observed);

  nlohmann::json to_json() const;
  std::string csv_text() const;
};

std::string fmt(double v);

}  // namespace orbitbench::cli
