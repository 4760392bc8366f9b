#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "tlab/dynamics/circle.hpp"
#include "tlab/error.hpp"
#include "tlab/stats/rng.hpp"

namespace tlab::dynamics {

/// Initial law: x ~ rho(x) dx on the circle, theta fixed at theta0.
/// Sampling inverts a tabulated CDF (trapezoid rule on `table_size` cells,
/// linear interpolation inside a cell).
class InitialLaw {
 public:
  static InitialLaw uniform(double theta0) {
    InitialLaw law;
    law.theta0_ = theta0;
    law.density_ = [](double) { return 1.0; };
    law.uniform_ = true;
    return law;
  }

  static InitialLaw create(std::function<double(double)> density, double theta0, int table_size = 1 << 14) {
    require(table_size >= 16, ErrorKind::invalid_params, "initial law table too small");
    auto cdf = std::make_shared<std::vector<double>>(static_cast<std::size_t>(table_size) + 1, 0.0);
    const double h = 1.0 / table_size;
    double prev = density(0.0);
    require(prev >= 0, ErrorKind::invalid_params, "density must be nonnegative");
    for (int k = 1; k <= table_size; ++k) {
      const double cur = density(k * h);
      require(cur >= 0 && std::isfinite(cur), ErrorKind::invalid_params, "density must be nonnegative");
      (*cdf)[static_cast<std::size_t>(k)] = (*cdf)[static_cast<std::size_t>(k) - 1] + 0.5 * h * (prev + cur);
      prev = cur;
    }
    const double mass = cdf->back();
    require(std::abs(mass - 1) <= 1e-10, ErrorKind::invalid_params,
            "density must integrate to 1 (got " + std::to_string(mass) + ")");
    for (auto& c : *cdf) c /= mass;
    InitialLaw law;
    law.theta0_ = theta0;
    law.density_ = std::move(density);
    law.cdf_ = std::move(cdf);
    return law;
  }

  double theta0() const { return theta0_; }
  double density(double x) const { return density_(x); }

  /// Map a uniform variate to x.
  double quantile(double u) const {
    if (uniform_) return u;
    const auto& c = *cdf_;
    const auto it = std::upper_bound(c.begin(), c.end(), u);
    std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - c.begin(), 1)) - 1;
    k = std::min(k, c.size() - 2);
    const double w = c[k + 1] - c[k];
    const double frac = w > 0 ? (u - c[k]) / w : 0.0;
    return wrap01((static_cast<double>(k) + frac) / static_cast<double>(c.size() - 1));
  }

 private:
  InitialLaw() = default;
  double theta0_ = 0;
  std::function<double(double)> density_;
  std::shared_ptr<const std::vector<double>> cdf_;
  bool uniform_ = false;
};

inline ProductState sample_initial(const InitialLaw& law, stats::RngStream& rng) {
  return {CircleValue(law.quantile(rng.uniform())), CircleValue(law.theta0())};
}

inline ProductState sample_initial(const InitialLaw& law, std::uint64_t seed) {
  stats::RngStream rng(seed, 0);
  return sample_initial(law, rng);
}

}  // namespace tlab::dynamics
