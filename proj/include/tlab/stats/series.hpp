#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "tlab/error.hpp"

namespace tlab::stats {

inline double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Unbiased sample variance.
inline double variance(std::span<const double> x) {
  const double m = mean(x);
  double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

inline double median(std::vector<double> x) {
  const auto mid = x.begin() + static_cast<std::ptrdiff_t>(x.size() / 2);
  std::nth_element(x.begin(), mid, x.end());
  if (x.size() % 2 == 1) return *mid;
  const double hi = *mid;
  return 0.5 * (hi + *std::max_element(x.begin(), mid));
}

struct Autocorrelation {
  std::vector<double> rho;     ///< rho[0] == 1
  std::vector<double> std_error;  ///< batch-means standard errors per lag
  double variance = 0;         ///< biased (1/n) variance of the series
};

namespace detail {
inline std::vector<double> acf_raw(std::span<const double> x, int lag_max, double& var_out) {
  const std::size_t n = x.size();
  const double m = mean(x);
  double c0 = 0;
  for (double v : x) c0 += (v - m) * (v - m);
  c0 /= static_cast<double>(n);
  var_out = c0;
  std::vector<double> rho(static_cast<std::size_t>(lag_max) + 1, 0.0);
  if (c0 <= 0) {
    rho[0] = 1;
    return rho;
  }
  for (int k = 0; k <= lag_max; ++k) {
    double c = 0;
    for (std::size_t i = 0; i + static_cast<std::size_t>(k) < n; ++i) c += (x[i] - m) * (x[i + k] - m);
    rho[static_cast<std::size_t>(k)] = c / static_cast<double>(n) / c0;
  }
  return rho;
}
}  // namespace detail

/// Biased-normalization autocorrelation with 20-batch-means standard errors.
inline Autocorrelation autocorrelation(std::span<const double> series, int lag_max, int batches = 20) {
  require(lag_max >= 0 && series.size() >= 10 * static_cast<std::size_t>(std::max(lag_max, 1)),
          ErrorKind::series_too_short, "autocorrelation: series shorter than 10*lag_max");
  Autocorrelation out;
  out.rho = detail::acf_raw(series, lag_max, out.variance);
  out.std_error.assign(out.rho.size(), 0.0);
  const std::size_t blen = series.size() / static_cast<std::size_t>(batches);
  if (blen <= static_cast<std::size_t>(lag_max) + 1) return out;
  std::vector<std::vector<double>> per(static_cast<std::size_t>(batches));
  for (int b = 0; b < batches; ++b) {
    double v;
    per[static_cast<std::size_t>(b)] = detail::acf_raw(series.subspan(static_cast<std::size_t>(b) * blen, blen), lag_max, v);
  }
  for (std::size_t k = 0; k < out.rho.size(); ++k) {
    double m = 0, s = 0;
    for (const auto& r : per) m += r[k];
    m /= batches;
    for (const auto& r : per) s += (r[k] - m) * (r[k] - m);
    out.std_error[k] = std::sqrt(s / (batches - 1) / batches);
  }
  return out;
}

}  // namespace tlab::stats
