#pragma once

// Plain-text run configuration: one `key = value` per line, `#` starts a
// comment, blank lines ignored. Values stay strings until a command reads
// them against its schema.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitbench/group.hpp"
#include "orbitbench/matrix.hpp"

namespace orbitbench::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeySpec {
  std::string name;
  std::string fallback;
  std::string help;
};

using Schema = std::vector<KeySpec>;

class Config {
 public:
  Config() = default;
  Config(std::initializer_list<std::pair<const std::string, std::string>> kv) : values_(kv) {}

  // Throws ConfigError with the line number on malformed input or
  // duplicate keys.
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  // Rejects keys outside the schema and fills in defaults.
  Config resolve(const Schema& schema) const;

  std::string str(const std::string& key) const;
  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  // "a,b,c"
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::int64_t> integers(const std::string& key) const;
  // Rows separated by ';', entries by ','.
  std::vector<std::vector<std::int64_t>> rows(const std::string& key) const;
  IntMatrix matrix(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

}  // namespace orbitbench::cli
