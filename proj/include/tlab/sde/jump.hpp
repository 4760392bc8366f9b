#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "tlab/error.hpp"
#include "tlab/sde/lattice.hpp"
#include "tlab/stats/rng.hpp"

namespace tlab::sde {

/// Bonds ring at rate 1 each; a ringing bond rotates (sqrt E_x, sqrt E_y) by theta ~ rho.
struct JumpModel {
  std::function<double(stats::RngStream&)> angle;  ///< empty: uniform on [-pi, pi]

  double sample_angle(stats::RngStream& rng) const {
    if (angle) return angle(rng);
    return rng.uniform(-std::numbers::pi, std::numbers::pi);
  }
};

/// Clockwise rotation by theta of the square-root coordinates of bond (x, y).
inline void apply_rotation(EnergyConfig& c, std::uint32_t x, std::uint32_t y, double theta) {
  const double sx = std::sqrt(c.E[x]), sy = std::sqrt(c.E[y]);
  const double total = c.E[x] + c.E[y];
  const double ct = std::cos(theta), st = std::sin(theta);
  const double nx = ct * sx + st * sy;
  const double ex = std::min(nx * nx, total);
  c.E[x] = ex;
  c.E[y] = total - ex;
}

struct JumpEvent {
  double elapsed = 0;
  std::size_t bond = 0;
  double theta = 0;
};

inline JumpEvent jump_step(const LatticeGraph& g, EnergyConfig& c, const JumpModel& m, stats::RngStream& rng) {
  require(!g.bonds.empty(), ErrorKind::invalid_params, "jump_step: graph has no bonds");
  JumpEvent ev;
  ev.elapsed = rng.exponential(static_cast<double>(g.bonds.size()));
  ev.bond = static_cast<std::size_t>(rng.below(g.bonds.size()));
  ev.theta = m.sample_angle(rng);
  apply_rotation(c, g.bonds[ev.bond].first, g.bonds[ev.bond].second, ev.theta);
  return ev;
}

}  // namespace tlab::sde
