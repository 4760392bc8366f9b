#pragma once

#include <cmath>
#include <tuple>
#include <utility>
#include <vector>

#include "tlab/error.hpp"
#include "tlab/parallel.hpp"
#include "tlab/sde/mesoscopic.hpp"
#include "tlab/stats/rng.hpp"

namespace tlab::sde {

struct KappaOptions {
  double T = 20;              ///< trajectory length per replica
  double dt = 1e-3;
  double sample_every = 0.05;
  double max_lag = 5;         ///< longest correlation time considered
  unsigned workers = 1;
};

struct KappaEstimate {
  double kappa = 0;
  double static_term = 0, static_stderr = 0;
  double dynamic_term = 0, dynamic_stderr = 0;
  std::vector<double> lag_times, integrand, integrand_stderr;  ///< spatially summed correlation
  std::size_t truncation_lag = 0;  ///< index of the first lag inside 3 SE
  int spatial_cutoff = 0;
  double spatial_tail = 0;        ///< time integral of the |x| = cutoff shell
  bool tail_converged = false;
  std::uint64_t halvings = 0;
};

/// kappa_M = E[b^2(E_0,E_1)] + sum_{|x| <= L/4} int_0^inf E[a_0(0) a_x(s)] ds on a
/// periodic chain, a_x = a(E_x, E_{x+1}). Static term from the initial
/// equilibrium draws; time correlations from K independent trajectories.
inline KappaEstimate kappa_M_estimate(int L, const CoefficientFamily& fam, double beta, int K, std::uint64_t seed,
                                      const KappaOptions& opt = {}) {
  require(L >= 4, ErrorKind::invalid_params, "kappa_M: chain needs L >= 4");
  require(K >= 2, ErrorKind::invalid_params, "kappa_M: need K >= 2 replicas");
  require(opt.sample_every >= opt.dt && opt.T > opt.max_lag, ErrorKind::invalid_params, "kappa_M: bad time grid");
  const auto g = LatticeGraph::chain(L);
  const int R = L / 4;
  const auto every = static_cast<std::size_t>(std::llround(opt.sample_every / opt.dt));
  const auto samples = static_cast<std::size_t>(std::llround(opt.T / opt.sample_every)) + 1;
  const auto lags = static_cast<std::size_t>(std::llround(opt.max_lag / opt.sample_every)) + 1;
  const stats::RngStream base(seed, 0);

  struct Replica {
    double b2_mean = 0;
    std::vector<double> S;      ///< spatially summed correlation per lag
    std::vector<double> shell;  ///< |x| = R contribution per lag
    std::uint64_t halvings = 0;
  };
  auto run = [&](std::size_t k) {
    stats::RngStream rng = base.substream(k);
    MesoscopicSde sde(g, fam, beta);
    auto c = equilibrium_sample(g, fam, beta, rng);
    const auto& a = sde.drift();
    Replica out;
    for (int x = 0; x < L; ++x) out.b2_mean += fam.b2(c.E[x], c.E[(x + 1) % L]);
    out.b2_mean /= L;
    std::vector<std::vector<double>> cur(samples, std::vector<double>(static_cast<std::size_t>(L)));
    for (std::size_t j = 0; j < samples; ++j) {
      if (j > 0)
        for (std::size_t s = 0; s < every; ++s) sde.step(c, opt.dt, rng);
      for (int x = 0; x < L; ++x) cur[j][static_cast<std::size_t>(x)] = a(c.E[x], c.E[(x + 1) % L]);
    }
    out.S.assign(lags, 0.0);
    out.shell.assign(lags, 0.0);
    for (std::size_t l = 0; l < lags; ++l) {
      double acc = 0, sh = 0;
      const std::size_t origins = samples - l;
      for (std::size_t j = 0; j < origins; ++j)
        for (int x = 0; x < L; ++x) {
          const double a0 = cur[j][static_cast<std::size_t>(x)];
          for (int r = -R; r <= R; ++r) {
            const double p = a0 * cur[j + l][static_cast<std::size_t>(((x + r) % L + L) % L)];
            acc += p;
            if (r == R || r == -R) sh += p;
          }
        }
      out.S[l] = acc / static_cast<double>(origins * static_cast<std::size_t>(L));
      out.shell[l] = sh / static_cast<double>(origins * static_cast<std::size_t>(L));
    }
    out.halvings = sde.log().halvings;
    return out;
  };
  const auto reps = parallel_map(static_cast<std::size_t>(K), opt.workers, run);

  KappaEstimate est;
  est.spatial_cutoff = R;
  auto mean_se = [&](auto get) {
    double m = 0, s = 0;
    for (const auto& r : reps) m += get(r);
    m /= K;
    for (const auto& r : reps) s += (get(r) - m) * (get(r) - m);
    return std::pair{m, std::sqrt(s / (K - 1) / K)};
  };
  std::tie(est.static_term, est.static_stderr) = mean_se([](const Replica& r) { return r.b2_mean; });
  for (const auto& r : reps) est.halvings += r.halvings;
  est.truncation_lag = lags;
  for (std::size_t l = 0; l < lags; ++l) {
    const auto [m, se] = mean_se([l](const Replica& r) { return r.S[l]; });
    est.lag_times.push_back(static_cast<double>(l) * opt.sample_every);
    est.integrand.push_back(m);
    est.integrand_stderr.push_back(se);
    if (est.truncation_lag == lags && l > 0 && std::abs(m) <= 3 * se) est.truncation_lag = l;
  }
  est.tail_converged = est.truncation_lag < lags;
  // trapezoid up to and including the truncation lag, shifted per replica for the error bar
  const std::size_t stop = std::min(est.truncation_lag, lags - 1);
  auto integrate = [&](const std::vector<double>& f) {
    double s = 0;
    for (std::size_t l = 0; l < stop; ++l) s += 0.5 * (f[l] + f[l + 1]) * opt.sample_every;
    return s;
  };
  std::tie(est.dynamic_term, est.dynamic_stderr) = mean_se([&](const Replica& r) { return integrate(r.S); });
  est.spatial_tail = mean_se([&](const Replica& r) { return integrate(r.shell); }).first;
  est.kappa = est.static_term + est.dynamic_term;
  return est;
}

}  // namespace tlab::sde
