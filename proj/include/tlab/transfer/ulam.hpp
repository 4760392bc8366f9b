#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tlab/dynamics/system.hpp"
#include "tlab/error.hpp"

namespace tlab::transfer {

/// Ulam discretization of the transfer operator of x -> f(x, z) on N equal
/// cells. Entry (i, j) is the Lebesgue fraction of cell j mapped into cell i;
/// stored column-wise since each column has only ~ceil(sup f') entries.
struct UlamOperator {
  struct Entry {
    std::uint32_t row;
    double weight;
  };
  int resolution = 0;
  std::vector<std::vector<Entry>> columns;

  double entry(int i, int j) const {
    double s = 0;
    for (const auto& e : columns[static_cast<std::size_t>(j)])
      if (e.row == static_cast<std::uint32_t>(i)) s += e.weight;
    return s;
  }

  double column_sum(int j) const {
    double s = 0;
    for (const auto& e : columns[static_cast<std::size_t>(j)]) s += e.weight;
    return s;
  }

  /// out_i = sum_j P_ij v_j, i.e. push a cell-density forward.
  void apply(const std::vector<double>& v, std::vector<double>& out) const {
    out.assign(v.size(), 0.0);
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const double vj = v[j];
      for (const auto& e : columns[j]) out[e.row] += e.weight * vj;
    }
  }
};

namespace detail {

/// Solves F(x) = target for increasing F on [lo, hi] by safeguarded Newton.
inline double invert_monotone(const dynamics::FastSlowSystem& sys, double z, double target, double lo, double hi,
                              int depth_cap) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < depth_cap; ++it) {
    const double fx = sys.fast_lift(x, z) - target;
    if (fx > 0)
      hi = x;
    else
      lo = x;
    const double d = sys.fast_dx(x, z);
    double nx = x - fx / d;
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (std::abs(nx - x) <= 1e-16 || hi - lo <= 1e-16) return nx;
    x = nx;
  }
  fail(ErrorKind::resolution_failure, "preimage subdivision exceeded depth cap");
}

}  // namespace detail

/// Builds the Ulam matrix by locating the exact preimages of the cell
/// boundaries inside every source cell, so the assignment of mass to target
/// cells is resolved to root-finding precision (~1e-16), well below 1e-10.
inline UlamOperator ulam_matrix(const dynamics::FastSlowSystem& sys, double z, int N, int depth_cap = 200) {
  require(N >= 64 && N <= (1 << 16) && (N & (N - 1)) == 0, ErrorKind::invalid_params,
          "Ulam resolution must be a power of two in [2^6, 2^16]");
  z = dynamics::wrap01(z);
  UlamOperator op;
  op.resolution = N;
  op.columns.resize(static_cast<std::size_t>(N));
  std::vector<double> cuts;
  for (int j = 0; j < N; ++j) {
    const double a = static_cast<double>(j) / N, b = static_cast<double>(j + 1) / N;
    const double Fa = sys.fast_lift(a, z), Fb = sys.fast_lift(b, z);
    require(Fb > Fa, ErrorKind::resolution_failure, "fast map lift is not increasing on a cell");
    cuts.clear();
    cuts.push_back(a);
    // grid levels k/N strictly inside (Fa, Fb)
    const double kfirst = std::floor(Fa * N) + 1;
    for (double k = kfirst; k / N < Fb; k += 1) cuts.push_back(detail::invert_monotone(sys, z, k / N, a, b, depth_cap));
    cuts.push_back(b);
    auto& col = op.columns[static_cast<std::size_t>(j)];
    for (std::size_t m = 0; m + 1 < cuts.size(); ++m) {
      const double len = cuts[m + 1] - cuts[m];
      if (len <= 0) continue;
      const double level = std::floor(Fa * N) + static_cast<double>(m);
      const auto row = static_cast<std::uint32_t>(static_cast<long long>(level) % N + N) % static_cast<std::uint32_t>(N);
      col.push_back({row, len * N});
    }
  }
  return op;
}

struct SrbDensity {
  int resolution = 0;
  std::vector<double> weights;  ///< piecewise-constant density, unit mean
  int iterations = 0;
};

/// Leading fixed vector of the Ulam operator by power iteration.
inline SrbDensity srb_density(const UlamOperator& op, double tol = 1e-13, int max_iter = 10000) {
  require(tol >= 1e-13, ErrorKind::invalid_params, "srb_density tolerance must be >= 1e-13");
  const auto n = static_cast<std::size_t>(op.resolution);
  std::vector<double> h(n, 1.0), next;
  for (int it = 1; it <= max_iter; ++it) {
    op.apply(h, next);
    double mass = 0;
    for (double v : next) mass += v;
    const double scale = static_cast<double>(n) / mass;
    double diff = 0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = std::max(0.0, next[i] * scale);
      diff += std::abs(next[i] - h[i]);
    }
    h.swap(next);
    if (diff / static_cast<double>(n) < tol) return {op.resolution, std::move(h), it};
  }
  fail(ErrorKind::no_convergence, "power iteration did not converge (spectral gap too small?)");
}

/// Midpoint quadrature of obs(x) against the density.
template <class Obs>
double integrate(const SrbDensity& h, Obs&& obs) {
  const auto n = static_cast<std::size_t>(h.resolution);
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += h.weights[i] * obs((static_cast<double>(i) + 0.5) / static_cast<double>(n));
  return s / static_cast<double>(n);
}

inline double averaged_drift(const dynamics::FastSlowSystem& sys, double z, const SrbDensity& h) {
  z = dynamics::wrap01(z);
  return integrate(h, [&](double x) { return sys.drift(x, z); });
}

inline double averaged_drift(const dynamics::FastSlowSystem& sys, double z, int N) {
  return averaged_drift(sys, z, srb_density(ulam_matrix(sys, z, N)));
}

struct GreenKuboResult {
  double value = 0;
  int truncation_m = 0;
  double last_term = 0;
  bool converged = true;  ///< false: tail-not-converged warning
  double drift_bar = 0;
};

/// Green-Kubo variance sum of the centered drift at slow value z, using
/// correlations obtained by pushing the signed measure w_hat * h forward.
inline GreenKuboResult green_kubo_variance(const dynamics::FastSlowSystem& sys, double z, const UlamOperator& op,
                                           const SrbDensity& h, int m_max = 64, double tail_tol = 1e-10) {
  require(m_max >= 1, ErrorKind::invalid_params, "m_max must be >= 1");
  z = dynamics::wrap01(z);
  const auto n = static_cast<std::size_t>(op.resolution);
  std::vector<double> w(n), v(n), next;
  for (std::size_t i = 0; i < n; ++i) w[i] = sys.drift((static_cast<double>(i) + 0.5) / static_cast<double>(n), z);
  double bar = 0;
  for (std::size_t i = 0; i < n; ++i) bar += w[i] * h.weights[i];
  bar /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] -= bar;
    v[i] = w[i] * h.weights[i];
  }
  auto pair = [&](const std::vector<double>& u) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * u[i];
    return s / static_cast<double>(n);
  };
  GreenKuboResult r;
  r.drift_bar = bar;
  r.value = pair(v);
  double term = 0;
  for (int m = 1; m <= m_max; ++m) {
    op.apply(v, next);
    v.swap(next);
    term = pair(v);
    r.value += 2 * term;
    r.truncation_m = m;
    r.last_term = term;
    if (std::abs(term) < tail_tol) return r;
  }
  r.converged = std::abs(term) < tail_tol;
  return r;
}

inline GreenKuboResult green_kubo_variance(const dynamics::FastSlowSystem& sys, double z, int N, int m_max = 64,
                                           double tail_tol = 1e-10) {
  const auto op = ulam_matrix(sys, z, N);
  return green_kubo_variance(sys, z, op, srb_density(op), m_max, tail_tol);
}

}  // namespace tlab::transfer
