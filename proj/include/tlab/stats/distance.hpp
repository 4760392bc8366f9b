#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "tlab/error.hpp"

namespace tlab::stats {

/// One-sample Kolmogorov-Smirnov distance sup|F_n - F|.
inline double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf) {
  require(!sample.empty(), ErrorKind::insufficient_sample, "ks_distance: empty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov distance between empirical laws.
inline double ks_distance_two_sample(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), ErrorKind::insufficient_sample, "ks two-sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Asymptotic standard deviation of the KS statistic under the null
/// (the Kolmogorov law has standard deviation ~0.2603 in sqrt(n_eff) units).
inline double ks_null_stddev(double n_eff) { return 0.26033 / std::sqrt(n_eff); }

/// Upper tail Q(k/2, x/2) of the chi-squared law.
inline double chi2_survival(double statistic, double dof) {
  return boost::math::gamma_q(dof / 2, statistic / 2);
}

struct Chi2Result {
  double statistic = 0;
  double p_value = 0;
  int bins = 0;  ///< after merging
  int dof = 0;
};

/// Pearson goodness of fit. `edges` are interior cut points; bins are
/// (-inf,e0], (e0,e1], ..., (e_last, inf). Adjacent bins are merged until
/// every expected count is at least 5.
inline Chi2Result chi2_test(std::span<const double> sample, const std::function<double(double)>& cdf,
                            std::span<const double> edges) {
  require(!sample.empty(), ErrorKind::insufficient_sample, "chi2_test: empty sample");
  const std::size_t nb = edges.size() + 1;
  std::vector<double> prob(nb), count(nb, 0.0);
  double prev = 0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double c = cdf(edges[k]);
    prob[k] = c - prev;
    prev = c;
  }
  prob[nb - 1] = 1 - prev;
  for (double v : sample) {
    const auto k = static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), v) - edges.begin());
    count[k] += 1;
  }
  const double n = static_cast<double>(sample.size());
  std::vector<double> mp, mc;
  double ap = 0, ac = 0;
  for (std::size_t k = 0; k < nb; ++k) {
    ap += prob[k];
    ac += count[k];
    if (ap * n >= 5) {
      mp.push_back(ap);
      mc.push_back(ac);
      ap = ac = 0;
    }
  }
  if (ap > 0 || ac > 0) {
    if (mp.empty()) {
      mp.push_back(ap);
      mc.push_back(ac);
    } else {
      mp.back() += ap;
      mc.back() += ac;
    }
  }
  require(mp.size() >= 2, ErrorKind::insufficient_sample, "chi2_test: fewer than two bins after merging");
  Chi2Result r;
  for (std::size_t k = 0; k < mp.size(); ++k) {
    const double e = mp[k] * n;
    r.statistic += (mc[k] - e) * (mc[k] - e) / e;
  }
  r.bins = static_cast<int>(mp.size());
  r.dof = r.bins - 1;
  r.p_value = chi2_survival(r.statistic, r.dof);
  return r;
}

/// Cut points giving `bins` equiprobable bins under the quantile function.
inline std::vector<double> equiprobable_edges(const std::function<double(double)>& quantile, int bins) {
  std::vector<double> e;
  for (int k = 1; k < bins; ++k) e.push_back(quantile(static_cast<double>(k) / bins));
  return e;
}

}  // namespace tlab::stats
