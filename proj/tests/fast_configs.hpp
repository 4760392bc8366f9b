#pragma once

#include <map>
#include <string>
#include <vector>

#include "tlab/harness/config.hpp"

namespace tlab::testing {

/// Small parameter sets, one per experiment, that finish in well under a second.
inline std::vector<harness::ExperimentConfig> fast_configs() {
  const std::map<std::string, std::map<std::string, std::string>> p = {
      {"simulate-map", {{"T", "0.1"}, {"record_every", "10"}}},
      {"srb-profile", {{"nodes", "16"}, {"resolution", "256"}}},
      {"green-kubo", {{"resolution", "1024"}}},
      {"average", {{"nodes", "16"}, {"resolution", "256"}, {"dt", "1e-3"}, {"points", "11"}}},
      {"fluctuations", {{"epsilon", "1e-3"}, {"K", "100"}, {"times", "0.5"}, {"nodes", "16"}, {"resolution", "256"}}},
      {"wf-compare", {{"epsilon", "1e-2"}, {"K", "100"}, {"t", "0.5"}, {"nodes", "16"}, {"resolution", "256"}}},
      {"decay", {{"samples", "500"}, {"lag_max", "20"}, {"tail_length", "2000"}}},
      {"metastability", {{"epsilon", "0.05"}, {"steps", "100000"}, {"nodes", "64"}, {"resolution", "256"}}},
      {"lattice-sde", {{"L", "4"}, {"T", "0.1"}, {"K", "20"}, {"dt", "1e-3"}}},
      {"jump", {{"L", "4"}, {"T", "5"}, {"K", "10"}}},
      {"gap-probe", {{"sizes", "4,5,6,8"}, {"samples", "4000"}, {"lag_max", "20"}}},
      {"kappa-m", {{"L", "8"}, {"K", "4"}, {"T", "1"}, {"max_lag", "0.5"}}},
      {"hydro", {{"L", "16"}, {"K", "4"}, {"times", "0,0.01"}, {"bins", "4"}}},
      {"heat-ref", {}},
  };
  std::vector<harness::ExperimentConfig> out;
  for (const auto& [name, params] : p) {
    harness::ExperimentConfig c;
    c.experiment = name;
    c.seed = 1234;
    c.params = params;
    out.push_back(c);
  }
  return out;
}

}  // namespace tlab::testing
