#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "tlab/dynamics/system.hpp"
#include "tlab/parallel.hpp"
#include "tlab/transfer/spline.hpp"
#include "tlab/transfer/ulam.hpp"

namespace tlab::transfer {

/// Slow-variable coefficients consumed by the averaged ODE and the SDEs:
/// averaged drift, its derivative and the Green-Kubo variance. Periodic
/// coefficients are evaluated mod 1; non-periodic ones are only certified on
/// [range_lo, range_hi].
struct SlowCoefficients {
  std::function<double(double)> drift;
  std::function<double(double)> drift_prime;
  std::function<double(double)> gk_variance;
  bool periodic = true;
  double range_lo = -std::numeric_limits<double>::infinity();
  double range_hi = std::numeric_limits<double>::infinity();

  bool in_range(double z) const { return periodic || (z >= range_lo && z <= range_hi); }
};

/// Coefficients given in closed form (tests and exploration).
inline SlowCoefficients synthetic_coefficients(std::function<double(double)> drift,
                                               std::function<double(double)> drift_prime,
                                               std::function<double(double)> variance, bool periodic = false) {
  return {std::move(drift), std::move(drift_prime), std::move(variance), periodic};
}

struct ProfileOptions {
  int nodes = 64;          ///< M
  int resolution = 4096;   ///< N
  int m_max = 64;
  double tail_tol = 1e-10;
  double node_tol = 1e-5;  ///< verification fails above 10 * node_tol
  bool verify = true;
  unsigned workers = 1;
};

struct SrbProfile {
  std::vector<double> z_grid;
  std::vector<double> drift_bar;
  std::vector<double> gk_variance;
  std::vector<int> truncation_m;
  std::vector<double> last_term;
  std::vector<bool> tail_converged;
  PeriodicSpline drift_spline;
  PeriodicSpline variance_spline;
  ProfileOptions options;
  double verify_drift_error = 0;
  double verify_variance_error = 0;

  double drift(double z) const { return drift_spline(z); }
  double drift_prime(double z) const { return drift_spline.derivative(z); }
  /// Clamped at zero: the spline may undershoot slightly where the variance vanishes.
  double variance(double z) const { return std::max(0.0, variance_spline(z)); }

  SlowCoefficients coefficients() const {
    auto d = std::make_shared<const PeriodicSpline>(drift_spline);
    auto v = std::make_shared<const PeriodicSpline>(variance_spline);
    return {[d](double z) { return (*d)(z); }, [d](double z) { return d->derivative(z); },
            [v](double z) { return std::max(0.0, (*v)(z)); }, true};
  }
};

namespace detail {

struct NodeValue {
  double drift = 0;
  GreenKuboResult gk;
};

inline NodeValue evaluate_node(const dynamics::FastSlowSystem& sys, double z, const ProfileOptions& opt,
                               const UlamOperator* shared_op, const SrbDensity* shared_h) {
  std::optional<UlamOperator> op;
  std::optional<SrbDensity> h;
  if (!shared_op) {
    op = ulam_matrix(sys, z, opt.resolution);
    h = srb_density(*op);
    shared_op = &*op;
    shared_h = &*h;
  }
  NodeValue v;
  v.gk = green_kubo_variance(sys, z, *shared_op, *shared_h, opt.m_max, opt.tail_tol);
  v.drift = v.gk.drift_bar;
  return v;
}

}  // namespace detail

/// Tabulates averaged drift and Green-Kubo variance on M equispaced slow
/// values and fits periodic cubic splines through them.
inline SrbProfile build_profile(const dynamics::FastSlowSystem& sys, const ProfileOptions& opt = {}) {
  require(opt.nodes >= 16, ErrorKind::invalid_params, "profile needs M >= 16 nodes");
  std::optional<UlamOperator> op;
  std::optional<SrbDensity> h;
  if (!sys.fast_depends_on_slow) {
    op = ulam_matrix(sys, 0.0, opt.resolution);
    h = srb_density(*op);
  }
  const UlamOperator* sop = op ? &*op : nullptr;
  const SrbDensity* sh = h ? &*h : nullptr;

  const auto m = static_cast<std::size_t>(opt.nodes);
  auto nodes = parallel_map(m, opt.workers, [&](std::size_t k) {
    return detail::evaluate_node(sys, static_cast<double>(k) / static_cast<double>(m), opt, sop, sh);
  });
  SrbProfile p;
  p.options = opt;
  for (std::size_t k = 0; k < m; ++k) {
    p.z_grid.push_back(static_cast<double>(k) / static_cast<double>(m));
    p.drift_bar.push_back(nodes[k].drift);
    p.gk_variance.push_back(nodes[k].gk.value);
    p.truncation_m.push_back(nodes[k].gk.truncation_m);
    p.last_term.push_back(nodes[k].gk.last_term);
    p.tail_converged.push_back(nodes[k].gk.converged);
  }
  p.drift_spline = PeriodicSpline(p.drift_bar);
  p.variance_spline = PeriodicSpline(p.gk_variance);

  if (opt.verify) {
    auto stag = parallel_map(m, opt.workers, [&](std::size_t k) {
      return detail::evaluate_node(sys, (static_cast<double>(k) + 0.5) / static_cast<double>(m), opt, sop, sh);
    });
    for (std::size_t k = 0; k < m; ++k) {
      const double z = (static_cast<double>(k) + 0.5) / static_cast<double>(m);
      p.verify_drift_error = std::max(p.verify_drift_error, std::abs(p.drift_spline(z) - stag[k].drift));
      p.verify_variance_error = std::max(p.verify_variance_error, std::abs(p.variance_spline(z) - stag[k].gk.value));
    }
    require(std::max(p.verify_drift_error, p.verify_variance_error) <= 10 * opt.node_tol, ErrorKind::verification_error,
            "spline vs direct error on staggered grid exceeds 10x node tolerance");
  }
  return p;
}

/// Sign changes of the tabulated drift around the circle.
inline int drift_sign_changes(const std::vector<double>& drift_bar) {
  int c = 0;
  const std::size_t m = drift_bar.size();
  for (std::size_t k = 0; k < m; ++k)
    if ((drift_bar[k] > 0) != (drift_bar[(k + 1) % m] > 0)) ++c;
  return c;
}

}  // namespace tlab::transfer
