#pragma once

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "tlab/error.hpp"
#include "tlab/sde/lattice.hpp"
#include "tlab/stats/rng.hpp"

namespace tlab::hydro {

using sde::LatticeGraph;

/// Velocities p_x in R^{n_*} on the sites of a lattice, stored site-major.
struct VelocityLattice {
  LatticeGraph graph;
  int n_star = 3;
  std::vector<double> p;

  VelocityLattice() = default;
  VelocityLattice(LatticeGraph g, int n) : graph(std::move(g)), n_star(n), p(graph.sites() * static_cast<std::size_t>(n), 0.0) {
    require(n >= 2, ErrorKind::invalid_params, "velocity lattice: n_* >= 2");
  }

  double* site(std::size_t x) { return p.data() + x * static_cast<std::size_t>(n_star); }
  const double* site(std::size_t x) const { return p.data() + x * static_cast<std::size_t>(n_star); }

  double speed2(std::size_t x) const {
    const double* v = site(x);
    double s = 0;
    for (int i = 0; i < n_star; ++i) s += v[i] * v[i];
    return s;
  }
  /// u_x = p_x^2 / 2
  double energy(std::size_t x) const { return 0.5 * speed2(x); }
  double total_energy() const {
    double s = 0;
    for (double v : p) s += v * v;
    return 0.5 * s;
  }
};

/// j_{x,y} = p_y^2 - p_x^2
inline double current(const VelocityLattice& lat, std::size_t x, std::size_t y) {
  return lat.speed2(y) - lat.speed2(x);
}

/// L^{-d} sum_x phi(x / L) u_x with x / L the site's coordinate vector.
inline double empirical_pairing(const VelocityLattice& lat, const std::function<double(const std::vector<double>&)>& phi) {
  const auto& g = lat.graph;
  const std::size_t L = static_cast<std::size_t>(g.side);
  std::vector<double> y(static_cast<std::size_t>(g.dimension));
  double s = 0;
  for (std::size_t x = 0; x < g.sites(); ++x) {
    std::size_t r = x;
    for (int k = 0; k < g.dimension; ++k) {
      y[static_cast<std::size_t>(k)] = static_cast<double>(r % L) / static_cast<double>(L);
      r /= L;
    }
    s += phi(y) * lat.energy(x);
  }
  return s / static_cast<double>(g.sites());
}

inline double empirical_pairing(const VelocityLattice& lat, const std::function<double(double)>& phi) {
  return empirical_pairing(lat, std::function<double(const std::vector<double>&)>(
                                    [&](const std::vector<double>& y) { return phi(y[0]); }));
}

/// nu = 1 noise: per bond, exp(theta X_{xy}) with theta ~ N(0, bond_rate dt)
/// rotating every component plane (p_x^i, p_y^i); per site, rotations of p_x
/// in each coordinate plane (e_i, e_j) with angle ~ N(0, site_rate dt).
/// Bonds are visited in a fixed random order drawn once at construction.
class ExchangeNoise {
 public:
  ExchangeNoise(const LatticeGraph& g, stats::RngStream& order_rng, double bond_rate = 1.0, double site_rate = 1.0)
      : order_(g.bonds.size()), bond_rate_(bond_rate), site_rate_(site_rate) {
    require(bond_rate >= 0 && site_rate >= 0, ErrorKind::invalid_params, "exchange noise: rates must be >= 0");
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    for (std::size_t i = order_.size(); i > 1; --i) std::swap(order_[i - 1], order_[order_rng.below(i)]);
  }

  const std::vector<std::size_t>& order() const { return order_; }

  void step(VelocityLattice& lat, double dt, stats::RngStream& rng) const {
    require(dt > 0 && dt <= 0.01, ErrorKind::invalid_params, "exchange noise: need 0 < dt <= 0.01");
    const int n = lat.n_star;
    const double sb = std::sqrt(bond_rate_ * dt), ss = std::sqrt(site_rate_ * dt);
    if (bond_rate_ > 0)
      for (std::size_t b : order_) {
        const auto [x, y] = lat.graph.bonds[b];
        const double th = sb * rng.normal();
        const double c = std::cos(th), s = std::sin(th);
        double* px = lat.site(x);
        double* py = lat.site(y);
        for (int i = 0; i < n; ++i) {
          const double a = px[i], d = py[i];
          px[i] = c * a + s * d;
          py[i] = -s * a + c * d;
        }
      }
    if (site_rate_ > 0)
      for (std::size_t x = 0; x < lat.graph.sites(); ++x) {
        double* v = lat.site(x);
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) {
            const double th = ss * rng.normal();
            const double c = std::cos(th), s = std::sin(th);
            const double a = v[i], d = v[j];
            v[i] = c * a + s * d;
            v[j] = -s * a + c * d;
          }
      }
  }

 private:
  std::vector<std::size_t> order_;
  double bond_rate_, site_rate_;
};

/// Sets |p_x| = sqrt(2 u(x)) with a uniformly random direction.
inline VelocityLattice velocities_from_energies(const LatticeGraph& g, int n_star, const std::vector<double>& u,
                                                stats::RngStream& rng) {
  require(u.size() == g.sites(), ErrorKind::invalid_params, "velocities: energy vector size mismatch");
  VelocityLattice lat(g, n_star);
  for (std::size_t x = 0; x < g.sites(); ++x) {
    require(u[x] >= 0, ErrorKind::invalid_params, "velocities: negative energy");
    double* v = lat.site(x);
    double r2 = 0;
    do {
      r2 = 0;
      for (int i = 0; i < n_star; ++i) {
        v[i] = rng.normal();
        r2 += v[i] * v[i];
      }
    } while (r2 < 1e-300);
    const double f = std::sqrt(2 * u[x] / r2);
    for (int i = 0; i < n_star; ++i) v[i] *= f;
  }
  return lat;
}

}  // namespace tlab::hydro
