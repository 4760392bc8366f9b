// tlab: command-line runner for the experiments in include/tlab/harness.
//
//   tlab list [--json]
//   tlab <experiment> [--config FILE] [--seed N] [--workers N] [--out DIR]
//                     [--set key=value ...] [--json-errors]

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tlab/harness/run.hpp"

namespace {

using tlab::harness::ExperimentConfig;

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string out;
  std::vector<std::string> sets;
};

void print_catalog(bool json) {
  if (json) {
    std::cout << tlab::harness::catalog_json().dump(2) << "\n";
    return;
  }
  for (const auto& e : tlab::harness::experiments()) {
    std::printf("%-14s [%s] %s\n", e.name.c_str(), e.anchor.c_str(), e.description.c_str());
    for (const auto& p : e.params)
      std::printf("    %-14s %-12s %s%s\n", p.name.c_str(), tlab::harness::type_name(p.type),
                  p.description.c_str(), p.default_value.empty() ? "" : (" (default " + p.default_value + ")").c_str());
  }
}

ExperimentConfig assemble(const std::string& name, const Common& c, CLI::App& sub) {
  ExperimentConfig cfg;
  if (!c.config.empty()) cfg = tlab::harness::load_config(c.config);
  if (!cfg.experiment.empty() && cfg.experiment != name)
    tlab::fail(tlab::ErrorKind::validation, "config is for '" + cfg.experiment + "', not '" + name + "'");
  cfg.experiment = name;
  if (sub.count("--seed")) cfg.seed = c.seed;
  if (sub.count("--workers")) cfg.workers = c.workers;
  if (sub.count("--out")) cfg.out = c.out;
  for (const auto& kv : c.sets) {
    const auto eq = kv.find('=');
    tlab::require(eq != std::string::npos && eq > 0, tlab::ErrorKind::validation, "--set expects key=value, got '" + kv + "'");
    cfg.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tlab: fast-slow averaging and energy-exchange experiments"};
  app.require_subcommand(1);
  bool json_errors = false;
  app.add_flag("--json-errors", json_errors, "machine-readable errors on stderr")->trigger_on_parse();

  bool list_json = false;
  auto* list = app.add_subcommand("list", "print the experiment catalog");
  list->add_flag("--json", list_json, "JSON output");

  Common common;
  std::map<std::string, CLI::App*> subs;
  for (const auto& e : tlab::harness::experiments()) {
    auto* s = app.add_subcommand(e.name, e.description + " [" + e.anchor + "]");
    s->add_option("--config", common.config, "INI or JSON config file");
    s->add_option("--seed", common.seed, "root seed");
    s->add_option("--workers", common.workers, "worker threads")->check(CLI::Range(1u, 1024u));
    s->add_option("--out", common.out, "output directory");
    s->add_option("--set", common.sets, "parameter override key=value")->take_all();
    s->add_flag("--json-errors", json_errors, "machine-readable errors on stderr");
    subs[e.name] = s;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    if (json_errors) {
      std::cerr << nlohmann::json{{"error", "validation-error"}, {"message", e.what()}, {"exit_code", 2}}.dump() << "\n";
      return 2;
    }
    app.exit(e);
    return 2;
  }

  try {
    if (*list) {
      print_catalog(list_json);
      return 0;
    }
    for (const auto& [name, sub] : subs) {
      if (!*sub) continue;
      const auto cfg = assemble(name, common, *sub);
      const auto result = tlab::harness::run(cfg);
      std::cout << nlohmann::json{{"experiment", result.experiment}, {"summary", result.summary}}.dump(2) << "\n";
      return 0;
    }
  } catch (const tlab::Error& e) {
    if (json_errors)
      std::cerr << tlab::harness::error_json(e).dump() << "\n";
    else
      std::cerr << "tlab: " << e.what() << "\n";
    return tlab::harness::exit_code(e.kind());
  } catch (const std::exception& e) {
    if (json_errors)
      std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}, {"exit_code", 1}}.dump() << "\n";
    else
      std::cerr << "tlab: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
