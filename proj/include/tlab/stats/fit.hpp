#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "tlab/error.hpp"

namespace tlab::stats {

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  double intercept_stderr = 0;
  double r_squared = 0;
  std::pair<std::size_t, std::size_t> window{0, 0};  ///< [first, last) indices used
};

/// Ordinary least squares y = intercept + slope * x over [first, last).
inline FitResult linear_fit(std::span<const double> xs, std::span<const double> ys, std::size_t first,
                            std::size_t last) {
  require(xs.size() == ys.size(), ErrorKind::fit_failure, "linear_fit: size mismatch");
  require(last <= xs.size() && last >= first + 2, ErrorKind::fit_failure, "linear_fit: window needs >= 2 points");
  const double n = static_cast<double>(last - first);
  double mx = 0, my = 0;
  for (std::size_t i = first; i < last; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = first; i < last; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  require(sxx > 0, ErrorKind::fit_failure, "linear_fit: degenerate abscissae");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = first; i < last; ++i) {
    const double r = ys[i] - f.intercept - f.slope * xs[i];
    sse += r * r;
  }
  f.r_squared = syy > 0 ? std::max(0.0, std::min(1.0, 1 - sse / syy)) : 1.0;
  if (n > 2) {
    const double s2 = sse / (n - 2);
    f.slope_stderr = std::sqrt(s2 / sxx);
    f.intercept_stderr = std::sqrt(s2 * (1 / n + mx * mx / sxx));
  }
  f.window = {first, last};
  return f;
}

/// Least squares on (log x, log y).
inline FitResult loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() == ys.size() && xs.size() >= 2, ErrorKind::fit_failure, "loglog_slope: need >= 2 points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(xs[i] > 0 && ys[i] > 0, ErrorKind::nonpositive_input, "loglog_slope: nonpositive input");
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  return linear_fit(lx, ly, 0, lx.size());
}

}  // namespace tlab::stats
