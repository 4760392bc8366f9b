#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "tlab/error.hpp"
#include "tlab/stats/rng.hpp"

namespace tlab::sde {

/// dX = drift(X) dt + noise_scale * diffusion(X) dB
struct ScalarSde {
  std::function<double(double)> drift;
  std::function<double(double)> diffusion;
  double noise_scale = 1.0;
  double drift_slope_bound = 0;  ///< sup|drift'| if known; 0 disables the step-size check
  double range = 1e12;           ///< |X| beyond this is a blow-up
};

struct EulerOptions {
  bool record_path = true;
  std::size_t record_every = 1;
};

struct SdePath {
  double dt = 0;
  std::vector<double> times;
  std::vector<double> values;
  double endpoint = 0;
};

inline std::size_t euler_steps(double T, double dt) {
  require(T >= 0 && dt > 0, ErrorKind::invalid_params, "euler_maruyama: need T >= 0, dt > 0");
  return static_cast<std::size_t>(std::llround(std::ceil(T / dt - 1e-9)));
}

inline void check_step(const ScalarSde& sde, double dt) {
  if (sde.drift_slope_bound > 0)
    require(dt <= 1e-3 * std::max(1.0, 1.0 / sde.drift_slope_bound) + 1e-15, ErrorKind::invalid_params,
            "euler_maruyama: dt exceeds 1e-3 * max(1, 1/sup|drift'|)");
}

/// Euler-Maruyama with Gaussian increments drawn from `rng`.
inline SdePath euler_maruyama(const ScalarSde& sde, double x0, double T, double dt, stats::RngStream& rng,
                              const EulerOptions& opt = {}) {
  check_step(sde, dt);
  const std::size_t n = euler_steps(T, dt);
  const double sq = std::sqrt(dt);
  SdePath p;
  p.dt = dt;
  double x = x0;
  if (opt.record_path) {
    p.times.push_back(0);
    p.values.push_back(x);
  }
  for (std::size_t k = 1; k <= n; ++k) {
    const double g = rng.normal();
    x += sde.drift(x) * dt + sde.noise_scale * sde.diffusion(x) * sq * g;
    if (!(std::abs(x) <= sde.range)) fail(ErrorKind::blow_up, "euler_maruyama: state left certified range");
    if (opt.record_path && k % opt.record_every == 0) {
      p.times.push_back(static_cast<double>(k) * dt);
      p.values.push_back(x);
    }
  }
  p.endpoint = x;
  return p;
}

inline SdePath euler_maruyama(const ScalarSde& sde, double x0, double T, double dt, std::uint64_t seed,
                              const EulerOptions& opt = {}) {
  stats::RngStream rng(seed, 0);
  return euler_maruyama(sde, x0, T, dt, rng, opt);
}

}  // namespace tlab::sde
