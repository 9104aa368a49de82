// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wmr/scenario/config.hpp"
#include "wmr/scenario/presets.hpp"
#include "wmr/scenario/run.hpp"
#include "wmr/scenario/snapshot.hpp"

namespace {

using namespace wmr;
using namespace wmr::scenario;

struct RunArgs {
  std::string config;
  std::string out;
  std::string preset;
  std::vector<std::string> overrides;
  std::string scheme;
  std::optional<long long> seed;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("config", a.config, "Scenario config file (omit when --preset is given)");
  cmd->add_option("--out", a.out, "Output directory (default: output.dir)");
  cmd->add_option("--preset", a.preset, "Start from a shipped preset; the config file, if any, is layered on top");
  cmd->add_option("--override", a.overrides, "key=value applied after the config, repeatable")->take_all();
  cmd->add_option("--derivative-scheme", a.scheme, "galerkin or oracle")->check(CLI::IsMember({"galerkin", "oracle"}));
  cmd->add_option("--seed", a.seed, "Seed for the stability power iteration")->check(CLI::NonNegativeNumber);
}

int run_command(const RunArgs& a, std::optional<Mode> forced_mode) {
  Scenario s;
  try {
    // With a preset, the preset text is the base and the config file's lines are layered
    // on top like overrides, so restating a preset key is not a duplicate.
    std::string base;
    std::vector<std::string> extra;
    if (!a.preset.empty()) {
      base = std::string(find_preset(a.preset).text);
      if (!a.config.empty()) {
        std::istringstream lines(read_file(a.config));
        for (std::string line; std::getline(lines, line);) extra.push_back(line);
      }
    } else if (!a.config.empty()) {
      base = read_file(a.config);
    } else {
      throw ConfigError({"give a config file or --preset NAME"});
    }
    extra.insert(extra.end(), a.overrides.begin(), a.overrides.end());
    if (!a.scheme.empty()) extra.push_back("solver.scheme = " + a.scheme);
    if (a.seed) extra.push_back("solver.seed = " + std::to_string(*a.seed));
    if (forced_mode) extra.push_back(std::string("mode = ") + to_string(*forced_mode));
    s = parse_config(base, extra);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code_for(e.kind());
  }

  std::optional<std::filesystem::path> out;
  if (!a.out.empty()) out = a.out;
  const auto r = run_scenario(s, out);
  if (r.exit_code != kExitSuccess) {
    std::cerr << "run failed (exit " << r.exit_code << "): " << r.error << '\n';
    std::cerr << "partial outputs in " << r.directory.string() << '\n';
    return r.exit_code;
  }
  std::cout << "scenario " << s.name << " complete in " << r.directory.string() << '\n';
  std::cout << "  regime  " << r.summary.value("regime", std::string("?")) << '\n';
  std::cout << "  purity  " << r.summary.value("purity", 0.0) << '\n';
  if (r.summary.contains("steady")) {
    std::cout << "  residual " << r.summary["steady"].value("residual", 0.0) << " ("
              << r.summary["steady"].value("method", std::string()) << ")\n";
  }
  for (const auto& w : r.summary["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wigner phase-space dynamics on a Daubechies multiresolution basis"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run a scenario (evolution or steady state, as configured)");
  add_run_options(run, run_args);

  RunArgs steady_args;
  auto* steady = app.add_subcommand("steady", "Run a scenario in steady-state mode");
  add_run_options(steady, steady_args);

  auto* probe = app.add_subcommand("probe", "Post-process a finished run");
  probe->require_subcommand(1);
  std::string probe_dir;
  auto* fringe = probe->add_subcommand("fringe", "Fit the cat-state fringe decay rate from stored snapshots");
  fringe->add_option("rundir", probe_dir, "Run directory")->required();

  auto* presets_cmd = app.add_subcommand("presets", "Shipped presets");
  presets_cmd->require_subcommand(1);
  auto* list = presets_cmd->add_subcommand("list", "List preset names");
  std::string show_name;
  auto* show = presets_cmd->add_subcommand("show", "Print a preset's config text");
  show->add_option("name", show_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) return run_command(run_args, std::nullopt);
  if (*steady) return run_command(steady_args, Mode::steady_state);
  if (*fringe) {
    try {
      const auto f = probe_fringe_run(probe_dir);
      std::printf("rate %.6g\nreference %.6g\npoints %zu\n", f.rate, f.reference_rate, f.amplitudes.size());
      return kExitSuccess;
    } catch (const Error& e) {
      std::cerr << e.what() << '\n';
      return exit_code_for(e.kind());
    }
  }
  if (*list) {
    for (const auto& p : presets()) std::printf("%-22s %s\n", std::string(p.name).c_str(), std::string(p.summary).c_str());
    return kExitSuccess;
  }
  if (*show) {
    try {
      std::cout << find_preset(show_name).text;
      return kExitSuccess;
    } catch (const Error& e) {
      std::cerr << e.what() << '\n';
      return kExitConfig;
    }
  }
  return kExitConfig;
}
