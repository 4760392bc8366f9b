#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "tlab/error.hpp"
#include "tlab/hydro/heat.hpp"
#include "tlab/hydro/velocity_lattice.hpp"
#include "tlab/parallel.hpp"
#include "tlab/stats/rng.hpp"

namespace tlab::hydro {

struct HydroOptions {
  int n_star = 3;
  double dt = 0.01;
  int bins = 32;
  unsigned workers = 1;
  double max_site_steps = 2e11;  ///< budget on L * steps * K
};

struct HydroProfiles {
  int L = 0;
  int K = 0;
  int bins = 0;
  std::vector<double> t_macro;
  std::vector<double> t_micro;                      ///< steps * dt actually run
  std::vector<std::vector<double>> site_mean;       ///< [t][x], ensemble mean of u_x
  std::vector<std::vector<double>> bin_mean;        ///< [t][bin]
  std::vector<std::vector<double>> bin_stderr;      ///< [t][bin], across replicas
  std::vector<double> bin_center;
};

/// Periodic chain of L sites started from |p_x|^2 / 2 = u0(x / L) with random
/// directions, run under exchange noise to microscopic times L^2 t.
inline HydroProfiles diffusive_experiment(int L, const std::function<double(double)>& u0,
                                          const std::vector<double>& t_macro, int K, std::uint64_t seed,
                                          const HydroOptions& opt = {}) {
  require(L >= 2 && K >= 2, ErrorKind::invalid_params, "hydro: need L >= 2, K >= 2");
  require(opt.bins >= 1 && L % opt.bins == 0, ErrorKind::invalid_params, "hydro: bins must divide L");
  require(!t_macro.empty(), ErrorKind::invalid_params, "hydro: empty time list");
  std::vector<long long> steps;
  for (std::size_t i = 0; i < t_macro.size(); ++i) {
    require(t_macro[i] >= 0 && (i == 0 || t_macro[i] >= t_macro[i - 1]), ErrorKind::invalid_params,
            "hydro: times must be nonnegative and sorted");
    steps.push_back(std::llround(t_macro[i] * L * L / opt.dt));
  }
  const double work = static_cast<double>(L) * static_cast<double>(steps.back()) * K;
  require(work <= opt.max_site_steps, ErrorKind::budget_exceeded, "hydro: run exceeds site-step budget");

  const auto g = LatticeGraph::chain(L);
  std::vector<double> u(static_cast<std::size_t>(L));
  for (int x = 0; x < L; ++x) u[static_cast<std::size_t>(x)] = u0(static_cast<double>(x) / L);
  const stats::RngStream base(seed, 0);
  const int B = opt.bins, per = L / B;

  auto run = [&](std::size_t k) {
    stats::RngStream rng = base.substream(k);
    auto lat = velocities_from_energies(g, opt.n_star, u, rng);
    const ExchangeNoise noise(g, rng);
    std::vector<std::vector<double>> snap;
    long long done = 0;
    for (long long target : steps) {
      for (; done < target; ++done) noise.step(lat, opt.dt, rng);
      std::vector<double> e(static_cast<std::size_t>(L));
      for (int x = 0; x < L; ++x) e[static_cast<std::size_t>(x)] = lat.energy(static_cast<std::size_t>(x));
      snap.push_back(std::move(e));
    }
    return snap;
  };
  const auto reps = parallel_map(static_cast<std::size_t>(K), opt.workers, run);

  HydroProfiles out;
  out.L = L;
  out.K = K;
  out.bins = B;
  out.t_macro = t_macro;
  for (int b = 0; b < B; ++b) out.bin_center.push_back((b * per + 0.5 * (per - 1)) / L);
  for (std::size_t ti = 0; ti < t_macro.size(); ++ti) {
    out.t_micro.push_back(static_cast<double>(steps[ti]) * opt.dt);
    std::vector<double> sm(static_cast<std::size_t>(L), 0.0), bm(static_cast<std::size_t>(B), 0.0),
        bs(static_cast<std::size_t>(B), 0.0);
    for (const auto& r : reps)
      for (int x = 0; x < L; ++x) sm[static_cast<std::size_t>(x)] += r[ti][static_cast<std::size_t>(x)];
    for (auto& v : sm) v /= K;
    for (int b = 0; b < B; ++b) {
      std::vector<double> per_rep;
      for (const auto& r : reps) {
        double s = 0;
        for (int x = b * per; x < (b + 1) * per; ++x) s += r[ti][static_cast<std::size_t>(x)];
        per_rep.push_back(s / per);
      }
      double m = 0, v = 0;
      for (double q : per_rep) m += q;
      m /= K;
      for (double q : per_rep) v += (q - m) * (q - m);
      bm[static_cast<std::size_t>(b)] = m;
      bs[static_cast<std::size_t>(b)] = std::sqrt(v / (K - 1) / K);
    }
    out.site_mean.push_back(std::move(sm));
    out.bin_mean.push_back(std::move(bm));
    out.bin_stderr.push_back(std::move(bs));
  }
  return out;
}

/// (2/L) sum_x cos(2 pi x / L) v_x
inline double cos_mode(const std::vector<double>& v) {
  const double L = static_cast<double>(v.size());
  double s = 0;
  for (std::size_t x = 0; x < v.size(); ++x) s += std::cos(2 * std::numbers::pi * static_cast<double>(x) / L) * v[x];
  return 2 * s / L;
}

/// kappa from a(t) = a(0) exp(-4 pi^2 kappa t): least squares through the
/// origin on the positive times with a positive amplitude ratio.
inline double fit_kappa(const HydroProfiles& p) {
  require(p.t_macro.front() == 0.0, ErrorKind::fit_failure, "fit_kappa: first time must be 0");
  const double a0 = cos_mode(p.site_mean.front());
  require(a0 != 0, ErrorKind::fit_failure, "fit_kappa: initial profile has no cosine mode");
  double stt = 0, sty = 0;
  for (std::size_t i = 1; i < p.t_macro.size(); ++i) {
    const double r = cos_mode(p.site_mean[i]) / a0;
    if (!(r > 0)) continue;
    stt += p.t_macro[i] * p.t_macro[i];
    sty += p.t_macro[i] * std::log(r);
  }
  require(stt > 0, ErrorKind::fit_failure, "fit_kappa: no usable positive times");
  return -sty / (stt * 4 * std::numbers::pi * std::numbers::pi);
}

/// Relative L^2 distance between the binned profile at time index ti and the
/// heat reference sampled at the same sites and binned the same way.
inline double profile_l2_error(const HydroProfiles& p, const HeatReference& ref, std::size_t ti,
                               std::size_t ref_ti) {
  const int per = p.L / p.bins;
  double num = 0, den = 0;
  for (int b = 0; b < p.bins; ++b) {
    double r = 0;
    for (int x = b * per; x < (b + 1) * per; ++x) r += ref.at(ref_ti, static_cast<double>(x) / p.L);
    r /= per;
    const double d = p.bin_mean[ti][static_cast<std::size_t>(b)] - r;
    num += d * d;
    den += r * r;
  }
  return std::sqrt(num / den);
}

}  // namespace tlab::hydro
