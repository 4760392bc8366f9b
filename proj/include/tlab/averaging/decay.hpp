#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "tlab/dynamics/trajectory.hpp"
#include "tlab/parallel.hpp"
#include "tlab/stats/fit.hpp"

namespace tlab::averaging {

using Observable = std::function<double(double x, double theta)>;

struct DecayOptions {
  int lag_max = 200;
  std::size_t samples = 100000;
  std::uint64_t burn_in = 100000;
  std::size_t tail_chains = 8;
  std::uint64_t tail_length = 100000;
  double noise_factor = 3.0;
  unsigned workers = 1;
  dynamics::TrajectoryOptions trajectory;
};

struct DecayEstimate {
  double epsilon = 0;
  std::vector<int> lags;
  /// Cov_Leb(A, B o F^n) = Leb(A_c * B o F^n) with A_c = A - Leb(A); used for the fit.
  std::vector<double> correlation;
  std::vector<double> std_error;
  /// Leb(A * B o F^n) - Leb(A) mu_eps(B), the form in the decay bound.
  std::vector<double> lebesgue_minus_srb;
  double mu_B = 0;
  double rate = 0;  ///< fitted c_eps: |C(n)| ~ exp(-rate * n)
  stats::FitResult fit;
  bool below_noise = false;  ///< no lag >= 1 rises above the noise floor
};

/// Estimates decay of correlations of F_eps from Lebesgue-distributed
/// starting points on the two-torus.
inline DecayEstimate correlation_decay(const dynamics::FastSlowSystem& sys, const Observable& A, const Observable& B,
                                       std::uint64_t seed, const DecayOptions& opt = {}) {
  require(opt.lag_max >= 1, ErrorKind::invalid_params, "correlation_decay: lag_max >= 1");
  const stats::RngStream root(seed, 0);
  const auto L = static_cast<std::size_t>(opt.lag_max);
  struct Sample {
    double a = 0;
    std::vector<double> b;
  };
  auto paths = parallel_map(opt.samples, opt.workers, [&](std::size_t k) {
    auto rng = root.substream(k);
    const double x0 = rng.uniform(), th0 = rng.uniform();
    Sample s;
    s.a = A(x0, th0);
    s.b.reserve(L + 1);
    dynamics::iterate(sys, {dynamics::CircleValue(x0), dynamics::CircleValue(th0)}, L, rng,
                      [&](std::uint64_t, double x, double th) { s.b.push_back(B(x, dynamics::wrap01(th))); },
                      opt.trajectory);
    return s;
  });
  const stats::RngStream tail_root = root.substream(~0ull);
  auto tails = parallel_map(opt.tail_chains, opt.workers, [&](std::size_t c) {
    auto rng = tail_root.substream(c);
    double acc = 0;
    dynamics::iterate(sys, {dynamics::CircleValue(rng.uniform()), dynamics::CircleValue(rng.uniform())},
                      opt.burn_in + opt.tail_length, rng, [&](std::uint64_t n, double x, double th) {
                        if (n > opt.burn_in) acc += B(x, dynamics::wrap01(th));
                      }, opt.trajectory);
    return acc / static_cast<double>(opt.tail_length);
  });

  DecayEstimate d;
  d.epsilon = sys.epsilon;
  for (double m : tails) d.mu_B += m;
  d.mu_B /= static_cast<double>(tails.size());
  const double K = static_cast<double>(paths.size());
  double mean_a = 0;
  for (const auto& p : paths) mean_a += p.a;
  mean_a /= K;
  for (std::size_t n = 0; n <= L; ++n) {
    double s = 0, s2 = 0, sb = 0;
    for (const auto& p : paths) {
      const double v = (p.a - mean_a) * p.b[n];
      s += v;
      s2 += v * v;
      sb += p.b[n];
    }
    const double m = s / K;
    d.lags.push_back(static_cast<int>(n));
    d.correlation.push_back(m);
    d.std_error.push_back(std::sqrt(std::max(0.0, s2 / K - m * m) / (K - 1)));
    d.lebesgue_minus_srb.push_back(m + mean_a * (sb / K - d.mu_B));
  }
  std::size_t last = 1;
  while (last <= L && std::abs(d.correlation[last]) > opt.noise_factor * d.std_error[last] &&
         std::abs(d.correlation[last]) > 0)
    ++last;
  const std::size_t usable = last - 1;
  if (usable == 0) {
    d.below_noise = true;
    return d;
  }
  require(usable >= 5, ErrorKind::window_too_short,
          "correlation_decay: only " + std::to_string(usable) + " lags above the noise floor");
  std::vector<double> xs, ys;
  for (std::size_t n = 0; n <= L; ++n) {
    xs.push_back(static_cast<double>(n));
    ys.push_back(std::log(std::max(std::abs(d.correlation[n]), 1e-300)));
  }
  d.fit = stats::linear_fit(xs, ys, 1, last);
  d.rate = -d.fit.slope;
  return d;
}

}  // namespace tlab::averaging
