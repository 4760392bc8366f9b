#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <numeric>
#include <vector>

#include "tlab/error.hpp"

namespace tlab::hydro {

/// Solution of u_t = kappa u_yy on the periodic unit interval by exact
/// evolution of the discrete Fourier coefficients of u0 sampled on N nodes.
struct HeatReference {
  int N = 0;
  double kappa = 0;
  std::vector<double> times;
  std::vector<double> grid;                 ///< y_j = j / N
  std::vector<std::vector<double>> values;  ///< values[t][j]
  std::vector<std::vector<std::complex<double>>> modes;  ///< modes[t][k], k = -N/2+1..N/2 stored by offset

  /// Trigonometric interpolant at arbitrary y for time index ti.
  double at(std::size_t ti, double y) const {
    double s = 0;
    const int kmin = -N / 2 + 1;
    for (int idx = 0; idx < N; ++idx) {
      const auto& c = modes[ti][static_cast<std::size_t>(idx)];
      const double ph = 2 * std::numbers::pi * (kmin + idx) * y;
      s += c.real() * std::cos(ph) - c.imag() * std::sin(ph);
    }
    return s;
  }

  double mass(std::size_t ti) const {
    double m = 0;
    for (double v : values[ti]) m += v;
    return m / N;
  }
};

inline HeatReference heat_reference_solve(const std::function<double(double)>& u0, double kappa,
                                          const std::vector<double>& times, int N = 256,
                                          double tol = 1e-9) {
  require(N >= 256, ErrorKind::invalid_params, "heat reference: grid N must be >= 256");
  require(N % 2 == 0, ErrorKind::invalid_params, "heat reference: grid N must be even");
  require(kappa >= 0, ErrorKind::invalid_params, "heat reference: kappa must be >= 0");
  for (double t : times) require(t >= 0, ErrorKind::invalid_params, "heat reference: negative time");
  HeatReference ref;
  ref.N = N;
  ref.kappa = kappa;
  ref.times = times;
  std::vector<double> f(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) {
    ref.grid.push_back(static_cast<double>(j) / N);
    f[static_cast<std::size_t>(j)] = u0(ref.grid.back());
  }
  const double lo = *std::min_element(f.begin(), f.end()), hi = *std::max_element(f.begin(), f.end());
  const int kmin = -N / 2 + 1;
  std::vector<std::complex<double>> c0(static_cast<std::size_t>(N));
  for (int idx = 0; idx < N; ++idx) {
    const int k = kmin + idx;
    std::complex<double> s = 0;
    for (int j = 0; j < N; ++j)
      s += f[static_cast<std::size_t>(j)] * std::polar(1.0, -2 * std::numbers::pi * k * j / N);
    c0[static_cast<std::size_t>(idx)] = s / static_cast<double>(N);
  }
  const double m0 = std::accumulate(f.begin(), f.end(), 0.0) / N;
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  for (double t : times) {
    auto c = c0;
    for (int idx = 0; idx < N; ++idx) {
      const int k = kmin + idx;
      c[static_cast<std::size_t>(idx)] *= std::exp(-kappa * 4 * std::numbers::pi * std::numbers::pi * k * k * t);
    }
    std::vector<double> u(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
      std::complex<double> s = 0;
      for (int idx = 0; idx < N; ++idx)
        s += c[static_cast<std::size_t>(idx)] * std::polar(1.0, 2 * std::numbers::pi * (kmin + idx) * j / N);
      u[static_cast<std::size_t>(j)] = s.real();
    }
    ref.values.push_back(std::move(u));
    ref.modes.push_back(std::move(c));
    const auto& v = ref.values.back();
    require(std::abs(ref.mass(ref.values.size() - 1) - m0) <= tol * scale, ErrorKind::instability_detected,
            "heat reference: mass not conserved");
    for (double x : v)
      require(x >= lo - tol * scale && x <= hi + tol * scale, ErrorKind::instability_detected,
              "heat reference: maximum principle violated");
  }
  return ref;
}

}  // namespace tlab::hydro
