#include "orbitbench/cli/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace orbitbench::cli {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    for (char ch : key) {
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) {
        throw ConfigError(where + ": bad key '" + key + "'");
      }
    }
    if (cfg.has(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse(in, path);
}

Config Config::resolve(const Schema& schema) const {
  std::set<std::string> known;
  for (const auto& k : schema) known.insert(k.name);
  for (const auto& [key, value] : values_) {
    if (!known.count(key)) {
      std::string list;
      for (const auto& k : schema) list += (list.empty() ? "" : ", ") + k.name;
      throw ConfigError("unknown key '" + key + "' (accepted: " + list + ")");
    }
  }
  Config out;
  for (const auto& k : schema) {
    auto it = values_.find(k.name);
    out.values_[k.name] = it == values_.end() ? k.fallback : it->second;
  }
  return out;
}

std::string Config::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

namespace {

double parse_real(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("key '" + key + "': '" + s + "' is not a number");
  }
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("key '" + key + "': '" + s + "' is not an integer");
  }
  return v;
}

}  // namespace

double Config::real(const std::string& key) const { return parse_real(key, str(key)); }
std::int64_t Config::integer(const std::string& key) const { return parse_int(key, str(key)); }

bool Config::boolean(const std::string& key) const {
  const std::string v = str(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& part : split(str(key), ',')) out.push_back(parse_real(key, part));
  return out;
}

std::vector<std::int64_t> Config::integers(const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const auto& part : split(str(key), ',')) out.push_back(parse_int(key, part));
  return out;
}

std::vector<std::vector<std::int64_t>> Config::rows(const std::string& key) const {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& row : split(str(key), ';')) {
    std::vector<std::int64_t> r;
    for (const auto& part : split(row, ',')) r.push_back(parse_int(key, part));
    out.push_back(std::move(r));
  }
  return out;
}

IntMatrix Config::matrix(const std::string& key) const {
  const auto r = rows(key);
  for (const auto& row : r) {
    if (row.size() != r.size()) throw ConfigError("key '" + key + "': matrix must be square");
  }
  try {
    return IntMatrix::from_rows(r);
  } catch (const std::exception& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

}  // namespace orbitbench::cli
