#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "tlab/error.hpp"
#include "tlab/parallel.hpp"
#include "tlab/sde/jump.hpp"
#include "tlab/sde/lattice.hpp"
#include "tlab/stats/fit.hpp"
#include "tlab/stats/rng.hpp"
#include "tlab/stats/series.hpp"

namespace tlab::sde {

struct RelaxationTime {
  double tau = 0;          ///< 0 when the first lag is already inside the noise
  bool resolved = false;
  std::size_t lags_used = 0;
  stats::FitResult fit;
};

/// Exponential fit log rho(k) = c - k*dt/tau over the leading lags with
/// rho > max(floor, 3 SE). Stops at the first lag that fails.
inline RelaxationTime relaxation_time(std::span<const double> series, double dt, int lag_max = 100,
                                      double floor = 0.05) {
  require(dt > 0, ErrorKind::invalid_params, "relaxation_time: dt must be > 0");
  const auto ac = stats::autocorrelation(series, lag_max);
  std::vector<double> t, lr;
  for (int k = 1; k <= lag_max; ++k) {
    const double r = ac.rho[static_cast<std::size_t>(k)];
    if (!(r > floor && r > 3 * ac.std_error[static_cast<std::size_t>(k)])) break;
    t.push_back(k * dt);
    lr.push_back(std::log(r));
  }
  RelaxationTime out;
  out.lags_used = t.size();
  if (t.empty()) return out;
  out.resolved = true;
  if (t.size() == 1) {
    out.tau = -dt / lr[0];
    return out;
  }
  out.fit = stats::linear_fit(t, lr, 0, t.size());
  require(out.fit.slope < 0, ErrorKind::fit_failure, "relaxation_time: autocorrelation does not decay");
  out.tau = -1 / out.fit.slope;
  return out;
}

/// Slowest Fourier energy mode along the first axis.
inline double slow_mode(const LatticeGraph& g, const EnergyConfig& c) {
  const std::size_t L = static_cast<std::size_t>(g.side);
  double m = 0;
  for (std::size_t s = 0; s < c.E.size(); ++s)
    m += std::cos(2 * std::numbers::pi * static_cast<double>(s % L) / static_cast<double>(L)) * c.E[s];
  return m;
}

struct GapProbeOptions {
  std::size_t samples = 100000;
  int lag_max = 100;
  double burn_in_relaxations = 20;  ///< burn-in in units of L^2
  unsigned workers = 1;
  /// sampling interval as a function of L
  double interval(int L) const { return std::max(0.1, L * L / 200.0); }
};

struct GapProbe {
  std::vector<int> sizes;
  std::vector<double> interval;
  std::vector<RelaxationTime> relaxation;
  stats::FitResult exponent_fit;
  double exponent() const { return exponent_fit.slope; }
};

/// Relaxation time of the slow mode for each L in a periodic 1-d jump chain,
/// started from the Gamma(1/2) product law, and the log-log slope in L.
inline GapProbe spectral_gap_probe(const std::vector<int>& Ls, const JumpModel& model, std::uint64_t seed,
                                   const GapProbeOptions& opt = {}) {
  require(Ls.size() >= 4, ErrorKind::invalid_params, "spectral_gap_probe: need at least 4 sizes");
  for (int L : Ls) require(L >= 2, ErrorKind::invalid_params, "spectral_gap_probe: L < 2 has no bonds");
  GapProbe out;
  out.sizes = Ls;
  const stats::RngStream base(seed, 0);
  auto series_for = [&](std::size_t i) {
    const int L = Ls[i];
    const auto g = LatticeGraph::chain(L);
    stats::RngStream rng = base.substream(i);
    EnergyConfig c;
    c.E.resize(g.sites());
    for (auto& e : c.E) e = rng.gamma(0.5, 1.0);
    const double dt = opt.interval(L);
    double clock = 0;
    const double burn = opt.burn_in_relaxations * L * L;
    while (clock < burn) clock += jump_step(g, c, model, rng).elapsed;
    // jumps that land beyond the next sampling time belong to the next interval
    std::vector<double> m(opt.samples);
    double next = clock;
    JumpEvent pending{};
    bool have_pending = false;
    for (std::size_t k = 0; k < opt.samples; ++k) {
      next += dt;
      for (;;) {
        if (!have_pending) {
          pending.elapsed = rng.exponential(static_cast<double>(g.bonds.size()));
          pending.bond = static_cast<std::size_t>(rng.below(g.bonds.size()));
          pending.theta = model.sample_angle(rng);
          have_pending = true;
        }
        if (clock + pending.elapsed > next) break;
        clock += pending.elapsed;
        apply_rotation(c, g.bonds[pending.bond].first, g.bonds[pending.bond].second, pending.theta);
        have_pending = false;
      }
      m[k] = slow_mode(g, c);
      pending.elapsed -= next - clock;
      clock = next;
    }
    return relaxation_time(m, dt, opt.lag_max);
  };
  out.relaxation = parallel_map(Ls.size(), opt.workers, series_for);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    out.interval.push_back(opt.interval(Ls[i]));
    require(out.relaxation[i].resolved, ErrorKind::fit_failure,
            "spectral_gap_probe: relaxation unresolved at L=" + std::to_string(Ls[i]));
    xs.push_back(Ls[i]);
    ys.push_back(out.relaxation[i].tau);
  }
  out.exponent_fit = stats::loglog_slope(xs, ys);
  return out;
}

}  // namespace tlab::sde
