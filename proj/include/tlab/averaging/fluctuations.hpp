#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tlab/averaging/ode.hpp"
#include "tlab/dynamics/trajectory.hpp"
#include "tlab/parallel.hpp"
#include "tlab/sde/scalar.hpp"
#include "tlab/stats/distance.hpp"
#include "tlab/stats/series.hpp"

namespace tlab::averaging {

struct EnsembleOptions {
  unsigned workers = 1;
  double ode_dt = 1e-4;
  dynamics::TrajectoryOptions trajectory;
};

/// Samples theta_eps at the requested macroscopic times for one trajectory:
/// linear interpolation between theta_floor(t/eps) and the next iterate.
inline std::vector<double> sample_slow_path(const dynamics::FastSlowSystem& sys, const dynamics::InitialLaw& law,
                                            const std::vector<double>& times, stats::RngStream rng,
                                            const dynamics::TrajectoryOptions& opt = {}) {
  double tmax = 0;
  for (double t : times) tmax = std::max(tmax, t);
  const std::uint64_t steps = dynamics::steps_for_horizon(sys.epsilon, std::max(tmax, sys.epsilon), opt);
  std::vector<double> out(times.size(), 0.0);
  std::vector<std::size_t> order(times.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });
  std::size_t next = 0;
  double prev = 0;
  const auto s0 = dynamics::sample_initial(law, rng);
  dynamics::iterate(sys, s0, steps, rng, [&](std::uint64_t n, double, double th) {
    while (next < order.size()) {
      double u = times[order[next]] / sys.epsilon;
      if (const double r = std::round(u); std::abs(u - r) < 1e-9 * std::max(1.0, u)) u = r;
      const double fl = std::floor(u);
      const double frac = u - fl;
      const auto k = static_cast<std::uint64_t>(fl);
      if (n == k && frac == 0) {
        out[order[next++]] = th;
      } else if (n == k + 1) {
        out[order[next++]] = prev + frac * (th - prev);
      } else {
        break;
      }
    }
    prev = th;
  }, opt);
  return out;
}

/// zeta_eps(t) = eps^{-1/2} (theta_eps(t) - Theta(t)) for K trajectories.
struct FluctuationEnsemble {
  double epsilon = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> samples;  ///< samples[k][i] = zeta of path k at times[i]

  std::size_t size() const { return samples.size(); }

  std::vector<double> at_time_index(std::size_t i) const {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples) v.push_back(s[i]);
    return v;
  }
};

inline FluctuationEnsemble fluctuation_ensemble(const dynamics::FastSlowSystem& sys, const dynamics::InitialLaw& law,
                                                const SlowCoefficients& coeffs, const std::vector<double>& times,
                                                std::size_t K, std::uint64_t seed, const EnsembleOptions& opt = {}) {
  require(K >= 100, ErrorKind::invalid_params, "fluctuation_ensemble: K must be >= 100");
  require(sys.epsilon > 0, ErrorKind::invalid_params, "fluctuation_ensemble: epsilon must be > 0");
  double tmax = 0;
  for (double t : times) tmax = std::max(tmax, t);
  const auto ode = solve_averaged(coeffs, dynamics::wrap01(law.theta0()), std::max(tmax, opt.ode_dt), opt.ode_dt);
  const double scale = 1 / std::sqrt(sys.epsilon);
  const stats::RngStream root(seed, 0);
  FluctuationEnsemble e;
  e.epsilon = sys.epsilon;
  e.times = times;
  e.samples = parallel_map(K, opt.workers, [&](std::size_t k) {
    auto th = sample_slow_path(sys, law, times, root.substream(k), opt.trajectory);
    for (std::size_t i = 0; i < times.size(); ++i) th[i] = times[i] == 0 ? 0.0 : scale * (th[i] - ode.at(times[i]));
    return th;
  });
  return e;
}

struct CltComparison {
  double ks = 0;
  double p_value = 1;  ///< asymptotic Kolmogorov p-value
  double empirical_variance = 0;
  double theoretical_variance = 0;
  bool degenerate = false;  ///< both laws are the point mass at 0
};

/// Asymptotic Kolmogorov survival P(sqrt(n) D > lambda).
inline double kolmogorov_survival(double lambda) {
  if (lambda < 0.2) return 1.0;
  double s = 0;
  for (int k = 1; k <= 100; ++k) s += 2 * ((k % 2) ? 1 : -1) * std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(s, 0.0, 1.0);
}

inline CltComparison clt_compare(const std::vector<double>& zeta, double sigma2) {
  CltComparison r;
  r.theoretical_variance = sigma2;
  r.empirical_variance = stats::variance(zeta);
  if (sigma2 < 1e-12) {
    double m2 = 0;
    for (double z : zeta) m2 += z * z;
    m2 /= static_cast<double>(zeta.size());
    require(m2 <= 1e-6, ErrorKind::degenerate_variance, "clt_compare: Sigma^2 ~ 0 but ensemble has spread");
    r.degenerate = true;
    return r;
  }
  const double sd = std::sqrt(sigma2);
  r.ks = stats::ks_distance(zeta, [sd](double x) { return stats::normal_cdf(x / sd); });
  r.p_value = kolmogorov_survival(std::sqrt(static_cast<double>(zeta.size())) * r.ks);
  return r;
}

inline CltComparison clt_compare(const FluctuationEnsemble& e, const VarianceCurve& curve, double t) {
  auto find = [t](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (std::abs(v[i] - t) < 1e-12) return i;
    fail(ErrorKind::invalid_params, "clt_compare: t not on the grid");
  };
  const auto i = find(e.times);
  const auto j = find(curve.times);
  return clt_compare(e.at_time_index(i), curve.values[j]);
}

/// sup over the map steps in [0, T] of |theta_eps - Theta| for K trajectories.
inline std::vector<double> averaging_sup_errors(const dynamics::FastSlowSystem& sys, const dynamics::InitialLaw& law,
                                                const SlowCoefficients& coeffs, double T, std::size_t K,
                                                std::uint64_t seed, const EnsembleOptions& opt = {}) {
  const auto ode = solve_averaged(coeffs, dynamics::wrap01(law.theta0()), T, opt.ode_dt);
  const std::uint64_t steps = dynamics::steps_for_horizon(sys.epsilon, T, opt.trajectory);
  const stats::RngStream root(seed, 0);
  return parallel_map(K, opt.workers, [&](std::size_t k) {
    auto rng = root.substream(k);
    const auto s0 = dynamics::sample_initial(law, rng);
    double sup = 0;
    dynamics::iterate(sys, s0, steps, rng, [&](std::uint64_t n, double, double th) {
      const double t = sys.epsilon * static_cast<double>(n);
      if (t <= T) sup = std::max(sup, std::abs(th - ode.at(t)));
    }, opt.trajectory);
    return sup;
  });
}

struct WfComparison {
  double ks = 0;
  std::vector<double> map_endpoints;
  std::vector<double> sde_endpoints;
};

/// Wentzell-Freidlin SDE dTheta = drift dt + sqrt(eps) b dB from coefficients.
inline sde::ScalarSde wf_sde(const SlowCoefficients& c, double epsilon) {
  sde::ScalarSde s;
  s.drift = c.drift;
  s.diffusion = [c](double z) { return std::sqrt(std::max(0.0, c.gk_variance(z))); };
  s.noise_scale = std::sqrt(epsilon);
  return s;
}

/// Marginal-law comparison of theta_eps(t) against the WF SDE at time t.
/// bin_width > 0 snaps both samples to a lattice first (point-mass limits).
inline WfComparison wf_distributional_distance(const dynamics::FastSlowSystem& sys, const dynamics::InitialLaw& law,
                                               const SlowCoefficients& coeffs, double t, std::size_t K, double dt,
                                               std::uint64_t seed, const EnsembleOptions& opt = {},
                                               double bin_width = 0) {
  const stats::RngStream root(seed, 0);
  const stats::RngStream map_root = root.substream(0), sde_root = root.substream(1);
  const double theta0 = dynamics::wrap01(law.theta0());
  WfComparison r;
  r.map_endpoints = parallel_map(K, opt.workers, [&](std::size_t k) {
    return sample_slow_path(sys, law, {t}, map_root.substream(k), opt.trajectory)[0];
  });
  const auto sde = wf_sde(coeffs, sys.epsilon);
  sde::EulerOptions eo;
  eo.record_path = false;
  r.sde_endpoints = parallel_map(K, opt.workers, [&](std::size_t k) {
    auto rng = sde_root.substream(k);
    return sde::euler_maruyama(sde, theta0, t, dt, rng, eo).endpoint;
  });
  if (bin_width > 0) {
    for (auto* v : {&r.map_endpoints, &r.sde_endpoints})
      for (double& x : *v) x = std::round(x / bin_width) * bin_width;
  }
  r.ks = stats::ks_distance_two_sample(r.map_endpoints, r.sde_endpoints);
  return r;
}

}  // namespace tlab::averaging
