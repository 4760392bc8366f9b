#pragma once

#include <cmath>
#include <vector>

#include "tlab/dynamics/circle.hpp"
#include "tlab/error.hpp"

namespace tlab::transfer {

/// Periodic cubic spline on M equispaced nodes z_k = k/M of the unit circle.
class PeriodicSpline {
 public:
  PeriodicSpline() = default;

  explicit PeriodicSpline(std::vector<double> values) : y_(std::move(values)) {
    const std::size_t m = y_.size();
    require(m >= 4, ErrorKind::invalid_params, "periodic spline needs >= 4 nodes");
    h_ = 1.0 / static_cast<double>(m);
    // Second derivatives M_k solve the cyclic system
    // M_{k-1} + 4 M_k + M_{k+1} = 6 (y_{k-1} - 2 y_k + y_{k+1}) / h^2.
    std::vector<double> rhs(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double ym = y_[(k + m - 1) % m], yp = y_[(k + 1) % m];
      rhs[k] = 6 * (ym - 2 * y_[k] + yp) / (h_ * h_);
    }
    m2_ = solve_cyclic(rhs);
  }

  std::size_t size() const { return y_.size(); }
  const std::vector<double>& nodes() const { return y_; }

  double operator()(double z) const { return eval(z, 0); }
  double derivative(double z) const { return eval(z, 1); }

 private:
  double eval(double z, int order) const {
    const std::size_t m = y_.size();
    const double u = dynamics::wrap01(z) / h_;
    auto k = static_cast<std::size_t>(std::floor(u));
    if (k >= m) k = m - 1;
    const double t = u - static_cast<double>(k);
    const std::size_t k1 = (k + 1) % m;
    const double a = 1 - t, b = t;
    const double y0 = y_[k], y1 = y_[k1], m0 = m2_[k], m1 = m2_[k1];
    if (order == 0)
      return a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h_ * h_ / 6;
    return (y1 - y0) / h_ + ((-3 * a * a + 1) * m0 + (3 * b * b - 1) * m1) * h_ / 6;
  }

  // Sherman-Morrison on the cyclic tridiagonal matrix with diagonal 4, off-diagonals 1.
  static std::vector<double> solve_cyclic(const std::vector<double>& r) {
    const std::size_t n = r.size();
    const double gamma = -4.0;
    std::vector<double> diag(n, 4.0);
    diag[0] -= gamma;
    diag[n - 1] -= 1.0 / gamma;
    auto thomas = [&](std::vector<double> d) {
      std::vector<double> b = diag;
      for (std::size_t i = 1; i < n; ++i) {
        const double w = 1.0 / b[i - 1];
        b[i] -= w;
        d[i] -= w * d[i - 1];
      }
      std::vector<double> x(n);
      x[n - 1] = d[n - 1] / b[n - 1];
      for (std::size_t i = n - 1; i-- > 0;) x[i] = (d[i] - x[i + 1]) / b[i];
      return x;
    };
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = 1.0;
    const auto x = thomas(r);
    const auto q = thomas(u);
    const double fac = (x[0] + x[n - 1] / gamma) / (1 + q[0] + q[n - 1] / gamma);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - fac * q[i];
    return out;
  }

  std::vector<double> y_;
  std::vector<double> m2_;
  double h_ = 0;
};

}  // namespace tlab::transfer
