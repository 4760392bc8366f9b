#pragma once

#include <cmath>
#include <vector>

#include "tlab/error.hpp"
#include "tlab/transfer/profile.hpp"

namespace tlab::averaging {

using transfer::SlowCoefficients;

/// Solution of Theta' = drift_bar(Theta) on a uniform grid with cubic
/// Hermite dense output. Values live on the real line (unwrapped).
struct AveragedSolution {
  double theta0 = 0;
  double dt = 0;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> slopes;  ///< drift_bar(Theta) at the nodes
  SlowCoefficients coefficients;

  double horizon() const { return times.back(); }

  double at(double t) const { return hermite(t, false); }
  double derivative_at(double t) const { return hermite(t, true); }

  /// max |Theta'(t) - drift_bar(Theta(t))| at the grid midpoints.
  double midpoint_residual() const {
    double r = 0;
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
      const double t = 0.5 * (times[k] + times[k + 1]);
      r = std::max(r, std::abs(derivative_at(t) - coefficients.drift(at(t))));
    }
    return r;
  }

 private:
  double hermite(double t, bool deriv) const {
    if (times.size() == 1) return deriv ? slopes[0] : values[0];
    auto k = static_cast<std::size_t>(std::floor(t / dt));
    if (k >= times.size() - 1) k = times.size() - 2;
    const double h = times[k + 1] - times[k];
    const double s = (t - times[k]) / h;
    const double y0 = values[k], y1 = values[k + 1], m0 = slopes[k] * h, m1 = slopes[k + 1] * h;
    if (!deriv) {
      const double s2 = s * s, s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * m1;
    }
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * y1 + (3 * s2 - 2 * s) * m1) / h;
  }
};

/// Classical RK4 on Theta' = drift_bar(Theta).
inline AveragedSolution solve_averaged(const SlowCoefficients& c, double theta0, double T, double dt = 1e-4) {
  require(dt > 0 && dt <= 1e-2, ErrorKind::invalid_params, "solve_averaged: need 0 < dt <= 1e-2");
  require(T >= 0, ErrorKind::invalid_params, "solve_averaged: T must be >= 0");
  const auto n = static_cast<std::size_t>(std::llround(std::ceil(T / dt - 1e-9)));
  AveragedSolution sol;
  sol.theta0 = theta0;
  sol.dt = dt;
  sol.coefficients = c;
  auto f = [&](double z) {
    if (!c.in_range(z)) fail(ErrorKind::step_rejection, "solve_averaged: drift evaluated outside certified range");
    return c.drift(z);
  };
  double y = theta0;
  sol.times.reserve(n + 1);
  sol.values.reserve(n + 1);
  sol.slopes.reserve(n + 1);
  sol.times.push_back(0);
  sol.values.push_back(y);
  double k1 = f(y);
  sol.slopes.push_back(k1);
  for (std::size_t i = 1; i <= n; ++i) {
    const double k2 = f(y + 0.5 * dt * k1);
    const double k3 = f(y + 0.5 * dt * k2);
    const double k4 = f(y + dt * k3);
    y += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    sol.times.push_back(static_cast<double>(i) * dt);
    sol.values.push_back(y);
    k1 = f(y);
    sol.slopes.push_back(k1);
  }
  return sol;
}

/// Sigma_t^2 sampled at requested times.
struct VarianceCurve {
  std::vector<double> times;
  std::vector<double> values;
};

/// Sigma_t^2 = int_0^t exp(2 int_s^t drift'(Theta(r)) dr) b^2(Theta(s)) ds.
/// Composite Simpson on each ODE interval (node, midpoint, node), carried
/// forward recursively so no exponential ever overflows.
inline VarianceCurve theoretical_variance(const AveragedSolution& sol, const std::vector<double>& times) {
  const auto& c = sol.coefficients;
  const std::size_t n = sol.times.size() - 1;
  std::vector<double> sigma(n + 1, 0.0);
  auto a = [&](double t) { return c.drift_prime(sol.at(t)); };
  auto b2 = [&](double t) { return c.gk_variance(sol.at(t)); };
  for (std::size_t k = 0; k < n; ++k) {
    const double t0 = sol.times[k], t1 = sol.times[k + 1], h = t1 - t0, tm = 0.5 * (t0 + t1);
    const double a0 = a(t0), am = a(tm), a1 = a(t1);
    // G(t1) - G(s) for s = t0, tm, t1 from the quadratic through (a0, am, a1)
    const double full = h / 6 * (a0 + 4 * am + a1);
    const double first_half = h * (5 * a0 + 8 * am - a1) / 24;
    const double from_mid = full - first_half;
    const double inc = h / 6 * (std::exp(2 * full) * b2(t0) + 4 * std::exp(2 * from_mid) * b2(tm) + b2(t1));
    sigma[k + 1] = std::exp(2 * full) * sigma[k] + inc;
    if (!std::isfinite(sigma[k + 1])) fail(ErrorKind::quadrature_failure, "theoretical_variance: non-finite");
  }
  VarianceCurve vc;
  for (double t : times) {
    require(t >= 0 && t <= sol.horizon() + 1e-12, ErrorKind::invalid_params, "variance time outside ODE horizon");
    double v;
    if (t == 0) {
      v = 0;
    } else {
      const double u = t / sol.dt;
      auto k = static_cast<std::size_t>(std::floor(u));
      if (k >= n) {
        v = sigma[n];
      } else {
        const double w = u - static_cast<double>(k);
        v = (1 - w) * sigma[k] + w * sigma[k + 1];
      }
    }
    vc.times.push_back(t);
    vc.values.push_back(v);
  }
  return vc;
}

inline VarianceCurve theoretical_variance(const SlowCoefficients& c, double theta0, const std::vector<double>& times,
                                          double dt = 1e-4) {
  double tmax = 0;
  for (double t : times) tmax = std::max(tmax, t);
  return theoretical_variance(solve_averaged(c, theta0, std::max(tmax, dt), dt), times);
}

}  // namespace tlab::averaging
