#pragma once

#include <cmath>
#include <vector>

#include "tlab/dynamics/trajectory.hpp"
#include "tlab/transfer/profile.hpp"

namespace tlab::averaging {

struct Zero {
  double z;
  double slope;  ///< drift'(z): < 0 sink, > 0 source
};

/// Zeros of a periodic drift by dense sign scan plus bisection.
inline std::vector<Zero> drift_zeros(const transfer::SlowCoefficients& c, int scan = 4096) {
  std::vector<Zero> out;
  for (int k = 0; k < scan; ++k) {
    double lo = static_cast<double>(k) / scan, hi = static_cast<double>(k + 1) / scan;
    double flo = c.drift(lo), fhi = c.drift(hi);
    if (flo == 0) {
      out.push_back({lo, c.drift_prime(lo)});
      continue;
    }
    if ((flo < 0) == (fhi < 0) || fhi == 0) continue;
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi), fm = c.drift(mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    const double z = 0.5 * (lo + hi);
    out.push_back({dynamics::wrap01(z), c.drift_prime(z)});
  }
  return out;
}

struct MetastabilityStats {
  double epsilon = 0;
  std::vector<double> sinks;
  std::vector<double> sources;                   ///< basin separators
  std::vector<std::vector<double>> residence;    ///< completed residence times per sink (macroscopic time)
  std::vector<std::vector<int>> transitions;     ///< transitions[i][j]: from sink i to sink j
  std::uint64_t steps = 0;

  int total_transitions() const {
    int s = 0;
    for (const auto& r : transitions)
      for (int v : r) s += v;
    return s;
  }

  double mean_residence() const {
    double s = 0;
    std::size_t n = 0;
    for (const auto& r : residence)
      for (double v : r) {
        s += v;
        ++n;
      }
    return n ? s / static_cast<double>(n) : std::nan("");
  }
};

struct ResidenceOptions {
  /// A transition into basin j is registered when the orbit enters the core
  /// |theta - z_j| < core_fraction * (distance from z_j to its nearest separator).
  double core_fraction = 0.5;
  dynamics::TrajectoryOptions trajectory;
};

/// Partitions the slow circle into sink basins and records residence times
/// along one long trajectory started at the first sink.
inline MetastabilityStats residence_statistics(const dynamics::FastSlowSystem& sys,
                                               const transfer::SlowCoefficients& coeffs, std::uint64_t run_length,
                                               std::uint64_t seed, const ResidenceOptions& opt = {}) {
  MetastabilityStats st;
  st.epsilon = sys.epsilon;
  for (const auto& z : drift_zeros(coeffs)) {
    if (z.slope < 0)
      st.sinks.push_back(z.z);
    else if (z.slope > 0)
      st.sources.push_back(z.z);
  }
  require(!st.sinks.empty(), ErrorKind::no_sinks, "residence_statistics: averaged drift has no stable zero");
  const std::size_t ns = st.sinks.size();
  st.residence.assign(ns, {});
  st.transitions.assign(ns, std::vector<int>(ns, 0));
  st.steps = run_length;
  std::vector<double> core(ns, 0.25);
  for (std::size_t i = 0; i < ns; ++i) {
    double dmin = 0.5;
    for (double s : st.sources) dmin = std::min(dmin, dynamics::distance(dynamics::CircleValue(s), dynamics::CircleValue(st.sinks[i])));
    core[i] = opt.core_fraction * dmin;
  }
  if (ns == 1) return st;

  stats::RngStream rng(seed, 0);
  dynamics::ProductState s0{dynamics::CircleValue(rng.uniform()), dynamics::CircleValue(st.sinks[0])};
  std::size_t current = 0;
  double entered = 0;
  bool censored = true;  // the first residence starts at an artificial time
  dynamics::iterate(sys, s0, run_length, rng, [&](std::uint64_t n, double, double th) {
    const dynamics::CircleValue z(th);
    for (std::size_t j = 0; j < ns; ++j) {
      if (j == current) continue;
      if (dynamics::distance(z, dynamics::CircleValue(st.sinks[j])) < core[j]) {
        const double t = sys.epsilon * static_cast<double>(n);
        if (!censored) st.residence[current].push_back(t - entered);
        censored = false;
        ++st.transitions[current][j];
        current = j;
        entered = t;
        break;
      }
    }
  }, opt.trajectory);
  return st;
}

}  // namespace tlab::averaging
