#pragma once

#include <chrono>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "tlab/error.hpp"
#include "tlab/harness/config.hpp"
#include "tlab/harness/output.hpp"
#include "tlab/harness/registry.hpp"

namespace tlab::harness {

inline constexpr std::uint64_t default_seed = 20240611;

/// 2 validation, 3 budget, 4 numerical failure inside a module.
inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::validation:
    case ErrorKind::invalid_params: return 2;
    case ErrorKind::budget_exceeded: return 3;
    default: return 4;
  }
}

inline nlohmann::json error_json(const Error& e) {
  return {{"error", to_string(e.kind())}, {"message", e.what()}, {"exit_code", exit_code(e.kind())}};
}

/// Validates everything up front, runs, and (if `out` is set) persists.
/// Nothing touches the file system before validation has passed.
inline ResultSet run(const ExperimentConfig& cfg) {
  require(!cfg.experiment.empty(), ErrorKind::validation, "config names no experiment");
  const Experiment& ex = find_experiment(cfg.experiment);
  const Params params = Params::validate(ex.params, cfg.params);
  RunContext ctx;
  ctx.seed = cfg.seed.value_or(default_seed);
  ctx.workers = cfg.workers.value_or(1);
  const auto t0 = std::chrono::steady_clock::now();
  ResultSet r;
  try {
    r = ex.run(params, ctx);
  } catch (const Error& e) {
    // preset-level parameter errors surface only once the module sees them
    if (e.kind() == ErrorKind::invalid_params) fail(ErrorKind::validation, e.what());
    throw;
  }
  r.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.experiment = ex.name;
  r.config = {{"experiment", ex.name}, {"seed", ctx.seed}, {"workers", ctx.workers}, {"params", params.to_json()}};
  if (cfg.out) persist(r, *cfg.out);
  return r;
}

}  // namespace tlab::harness
