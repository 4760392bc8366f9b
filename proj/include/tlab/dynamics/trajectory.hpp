#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tlab/dynamics/initial_law.hpp"
#include "tlab/dynamics/system.hpp"
#include "tlab/stats/rng.hpp"

namespace tlab::dynamics {

struct TrajectoryOptions {
  /// Amplitude of the uniform perturbation added to the fast coordinate each
  /// step. Floating-point orbits of expanding maps collapse (2x mod 1 reaches
  /// 0 within 53 steps) or cycle; refreshing the low-order bits keeps the
  /// orbit statistically faithful to Lebesgue-typical initial data.
  double dither = 0x1.0p-44;
  std::uint64_t max_steps = 2'000'000'000ull;
};

/// Number of map iterations covering macroscopic time T.
inline std::uint64_t steps_for_horizon(double epsilon, double T, const TrajectoryOptions& opt = {}) {
  require(T > 0, ErrorKind::invalid_params, "horizon must be positive");
  require(epsilon > 0, ErrorKind::invalid_params, "epsilon must be positive for a horizon");
  const double n = std::ceil(T / epsilon - 1e-9);
  require(n <= static_cast<double>(opt.max_steps), ErrorKind::budget_exceeded,
          "iteration count " + std::to_string(n) + " exceeds cap");
  return static_cast<std::uint64_t>(n);
}

/// Iterates the system from s, calling visit(n, x, theta_unwrapped) for
/// n = 0..steps. The slow coordinate is accumulated on the real line.
template <class Visitor>
void iterate(const FastSlowSystem& sys, ProductState s, std::uint64_t steps, stats::RngStream& rng,
             Visitor&& visit, const TrajectoryOptions& opt = {}) {
  double x = s.x.value();
  double theta = s.theta.value();
  visit(std::uint64_t{0}, x, theta);
  for (std::uint64_t n = 1; n <= steps; ++n) {
    const double z = wrap01(theta);
    const double fx = sys.fast_lift(x, z);
    theta += sys.epsilon * sys.drift(x, z);
    x = opt.dither > 0 ? wrap01(fx + opt.dither * rng.uniform()) : wrap01(fx);
    visit(n, x, theta);
  }
}

/// Piecewise-linear slow path theta_eps(t) on t = eps * n.
struct SlowPath {
  double epsilon = 0;
  std::vector<double> times;
  std::vector<double> values;  ///< unwrapped slow coordinate

  /// Linear interpolation between theta_floor(t/eps) and the next iterate.
  double at(double t) const {
    if (values.size() == 1 || epsilon == 0) return values.front();
    const double u = t / epsilon;
    auto k = static_cast<std::size_t>(std::floor(u));
    if (k >= values.size() - 1) return values.back();
    const double frac = u - static_cast<double>(k);
    return values[k] + frac * (values[k + 1] - values[k]);
  }
};

inline SlowPath simulate_slow_path(const FastSlowSystem& sys, const InitialLaw& law, double T, std::uint64_t seed,
                                   const TrajectoryOptions& opt = {}) {
  const std::uint64_t n = steps_for_horizon(sys.epsilon, T, opt);
  stats::RngStream rng(seed, 0);
  SlowPath path;
  path.epsilon = sys.epsilon;
  path.times.reserve(n + 1);
  path.values.reserve(n + 1);
  const ProductState s0 = sample_initial(law, rng);
  iterate(sys, s0, n, rng, [&](std::uint64_t k, double, double th) {
    path.times.push_back(sys.epsilon * static_cast<double>(k));
    path.values.push_back(th);
  }, opt);
  return path;
}

}  // namespace tlab::dynamics
