#pragma once

// Experiment commands. Each reads a resolved Config, runs one construction
// end to end and records its hard assertions as checks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitbench/cli/config.hpp"
#include "orbitbench/cli/report.hpp"

namespace orbitbench::cli {

struct Command {
  std::string name;
  std::string summary;
  Schema schema;
  Report (*run)(const Config& cfg);
};

const std::vector<Command>& commands();
// nullptr for unknown names.
const Command* find_command(const std::string& name);

// Applies the seed override, resolves against the schema (throws
// ConfigError), runs and times the command.
Report run_command(const std::string& name, Config cfg, std::optional<std::uint64_t> seed = {});

Report cmd_abramov(const Config& cfg);
Report cmd_theorem_a(const Config& cfg);
Report cmd_derandomize(const Config& cfg);
Report cmd_geometry(const Config& cfg);
Report cmd_skeleton(const Config& cfg);
Report cmd_furman(const Config& cfg);
Report cmd_graphing(const Config& cfg);

}  // namespace orbitbench::cli
