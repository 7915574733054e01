// vht-lab: runs the clock experiments from a scenario file.
//
//   vht-lab <command> --config <path> [--seed N] [--out DIR] [--check]
//
// Exit status: 0 success (and every check passed), 1 a check failed,
// 2 configuration or output error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vht/config.hpp"
#include "vht/experiments.hpp"

namespace {

int write_outputs(const vht::CommandResult& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "vht-lab: cannot create output directory '" << dir.string() << "': " << ec.message() << '\n';
    return 2;
  }
  for (const auto& [name, contents] : r.files) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << contents;
    if (!out) {
      std::cerr << "vht-lab: cannot write '" << path.string() << "'\n";
      return 2;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clock-synchronization experiments for virtual high-resolution time"};
  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool check = false;

  std::string commands;
  for (const auto& c : vht::command_names()) commands += (commands.empty() ? "" : ", ") + c;
  app.add_option("command", command, "One of: " + commands)->required();
  app.add_option("--config", config_path, "Scenario file")->required();
  auto* seed_opt = app.add_option("--seed", seed, "Override [scenario] seed");
  app.add_option("--out", out_dir, "Directory for CSV output");
  app.add_flag("--check", check, "Print PASS/FAIL lines and reflect them in the exit status");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  vht::CommandResult result;
  try {
    vht::ScenarioConfig cfg = vht::load_scenario_file(config_path);
    if (*seed_opt) cfg.seed = seed;
    result = vht::run_command(command, cfg);
  } catch (const vht::ConfigError& e) {
    std::cerr << "vht-lab: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "vht-lab: " << command << " failed: " << e.what() << '\n';
    return 2;
  }

  if (const int rc = write_outputs(result, out_dir); rc != 0) return rc;
  for (const auto& line : result.summary) std::cout << line << '\n';
  if (!check) return 0;
  for (const auto& c : result.checks) std::cout << c.str() << '\n';
  return result.all_pass() ? 0 : 1;
}
