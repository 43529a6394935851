#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "orbitbench/cli/commands.hpp"
#include "orbitbench/errors.hpp"

using namespace orbitbench::cli;

// Exit codes: 0 pass, 1 some check failed, 2 bad config or usage, 3 runtime error.
int main(int argc, char** argv) {
  CLI::App app{"orbitbench: seeded experiments on orbit equivalence and entropy"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path;
  std::optional<std::uint64_t> seed;
  for (const auto& cmd : commands()) {
    std::string help = cmd.summary + "\nkeys:";
    for (const auto& k : cmd.schema) {
      help += "\n  " + k.name + " = " + (k.fallback.empty() ? "\"\"" : k.fallback) + "  (" + k.help + ")";
    }
    auto* sub = app.add_subcommand(cmd.name, help);
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out", out_path, "write the JSON report here (default stdout)");
    sub->add_option("--csv", csv_path, "write the CSV table here");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  Report report;
  try {
    const Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
    report = run_command(name, cfg, seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }

  const std::string text = report.to_json().dump(2);
  if (out_path.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream(out_path) << text << '\n';
  }
  if (!csv_path.empty()) std::ofstream(csv_path) << report.csv_text();
  for (const auto& c : report.checks) {
    std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << "  observed " << c.observed.dump() << "  expected "
              << c.expected.dump() << '\n';
  }
  std::cerr << name << ": " << (report.pass() ? "PASS" : "FAIL") << " in " << report.seconds << " s\n";
  return report.pass() ? 0 : 1;
}
