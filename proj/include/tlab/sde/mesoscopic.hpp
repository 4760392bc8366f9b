#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tlab/error.hpp"
#include "tlab/sde/coefficients.hpp"
#include "tlab/sde/lattice.hpp"
#include "tlab/stats/rng.hpp"

namespace tlab::sde {

/// Independent Gamma(shape, beta) site energies: the product law h_beta.
inline EnergyConfig equilibrium_sample(const LatticeGraph& g, const CoefficientFamily& fam, double beta,
                                       stats::RngStream& rng) {
  require(beta > 0, ErrorKind::invalid_params, "equilibrium_sample: beta must be > 0");
  EnergyConfig c;
  c.E.resize(g.sites());
  for (auto& e : c.E) e = rng.gamma(fam.shape(), beta);
  return c;
}

inline EnergyConfig equilibrium_sample(const LatticeGraph& g, const CoefficientFamily& fam, double beta,
                                       std::uint64_t seed) {
  stats::RngStream rng(seed, 0);
  return equilibrium_sample(g, fam, beta, rng);
}

struct StepLog {
  std::uint64_t steps = 0;
  std::uint64_t halvings = 0;   ///< rejected attempts that were split in two
  int deepest = 0;
};

/// Euler scheme for the bond SDE
///   dE_x = sum_y [a(E_x,E_y) dt + sqrt(2 b^2(E_x,E_y)) dB_{xy}],  B_{xy} = -B_{yx}.
/// Bond increments are evaluated on the pre-step configuration and applied
/// together. An attempt that pushes a site below `floor` is discarded and the
/// interval is covered by two half-steps with fresh noise.
class MesoscopicSde {
 public:
  MesoscopicSde(LatticeGraph g, CoefficientFamily fam, double beta, double floor = 1e-12, int max_halvings = 40)
      : graph_(std::move(g)), fam_(std::move(fam)), beta_(beta), floor_(floor), max_halvings_(max_halvings) {
    drift_ = checked_reversible_drift(fam_, beta_);
    delta_.resize(graph_.bonds.size());
  }

  const LatticeGraph& graph() const { return graph_; }
  const CoefficientFamily& family() const { return fam_; }
  const BondFn& drift() const { return drift_; }
  double beta() const { return beta_; }
  const StepLog& log() const { return log_; }

  void step(EnergyConfig& c, double dt, stats::RngStream& rng) {
    require(dt > 0, ErrorKind::invalid_params, "lattice step: dt must be > 0");
    require(c.E.size() == graph_.sites(), ErrorKind::invalid_params, "lattice step: config size mismatch");
    advance(c, dt, rng, 0);
    ++log_.steps;
  }

  void run(EnergyConfig& c, double T, double dt, stats::RngStream& rng) {
    const auto n = static_cast<std::uint64_t>(std::llround(T / dt));
    for (std::uint64_t k = 0; k < n; ++k) step(c, dt, rng);
  }

 private:
  void advance(EnergyConfig& c, double dt, stats::RngStream& rng, int depth) {
    const double sdt = std::sqrt(dt);
    for (std::size_t k = 0; k < graph_.bonds.size(); ++k) {
      const auto [x, y] = graph_.bonds[k];
      const double u = c.E[x], v = c.E[y];
      const double b2 = std::max(fam_.b2(u, v), 0.0);
      delta_[k] = drift_(u, v) * dt + std::sqrt(2 * b2) * sdt * rng.normal();
    }
    trial_ = c.E;
    for (std::size_t k = 0; k < graph_.bonds.size(); ++k) {
      const auto [x, y] = graph_.bonds[k];
      trial_[x] += delta_[k];
      trial_[y] -= delta_[k];
    }
    bool ok = true;
    for (double e : trial_)
      if (!(e >= floor_)) {
        ok = false;
        break;
      }
    if (ok) {
      c.E.swap(trial_);
      return;
    }
    if (depth >= max_halvings_)
      fail(ErrorKind::positivity_failure, "lattice step: positivity lost after " + std::to_string(max_halvings_) +
                                              " halvings");
    ++log_.halvings;
    log_.deepest = std::max(log_.deepest, depth + 1);
    advance(c, dt / 2, rng, depth + 1);
    advance(c, dt / 2, rng, depth + 1);
  }

  LatticeGraph graph_;
  CoefficientFamily fam_;
  BondFn drift_;
  double beta_, floor_;
  int max_halvings_;
  StepLog log_;
  std::vector<double> delta_, trial_;
};

/// One step from a fresh integrator; see MesoscopicSde for repeated use.
inline EnergyConfig lattice_sde_step(const LatticeGraph& g, EnergyConfig c, const CoefficientFamily& fam, double beta,
                                     double dt, stats::RngStream& rng) {
  MesoscopicSde sde(g, fam, beta);
  sde.step(c, dt, rng);
  return c;
}

}  // namespace tlab::sde
