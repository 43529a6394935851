#include "orbitbench/cli/report.hpp"

#include <cmath>
#include <sstream>

namespace orbitbench::cli {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

bool Report::pass() const {
  if (checks.empty()) return false;
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Check& Report::relative(const std::string& name, double expected, double observed, double tol) {
  const bool ok = std::isfinite(observed) && std::abs(observed - expected) <= tol * std::abs(expected);
  checks.push_back({name, expected, observed, tol, ok});
  return checks.back();
}

Check& Report::absolute(const std::string& name, double expected, double observed, double tol) {
  const bool ok = std::isfinite(observed) && std::abs(observed - expected) <= tol;
  checks.push_back({name, expected, observed, tol, ok});
  return checks.back();
}

Check& Report::exact(const std::string& name, const nlohmann::json& expected, const nlohmann::json& observed) {
  checks.push_back({name, expected, observed, "exact", expected == observed});
  return checks.back();
}

Check& Report::at_most(const std::string& name, double bound, double observed, bool strict) {
  const bool ok = std::isfinite(observed) && (strict ? observed < bound : observed <= bound);
  checks.push_back({name, (strict ? "< " : "<= ") + fmt(bound), observed, "exact", ok});
  return checks.back();
}

Check& Report::flag(const std::string& name, bool observed) {
  checks.push_back({name, true, observed, "exact", observed});
  return checks.back();
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = "orbitbench";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = config.values();
  j["seed"] = seed;
  auto& arr = j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"expected", c.expected},
                   {"observed", c.observed},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass}});
  }
  j["data"] = data;
  j["timing"] = {{"seconds", seconds}};
  j["pass"] = pass();
  return j;
}

std::string Report::csv_text() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(csv.header);
  for (const auto& r : csv.rows) line(r);
  return os.str();
}

}  // namespace orbitbench::cli
