#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "tlab/parallel.hpp"
#include "tlab/sde/mesoscopic.hpp"
#include "tlab/stats/distance.hpp"

namespace tlab::sde {

/// Chi-squared of pooled site energies against Gamma(shape, beta), equiprobable bins.
inline stats::Chi2Result marginal_chi2(const std::vector<double>& energies, double shape, double beta, int bins = 50) {
  const auto edges = stats::equiprobable_edges(
      [shape, beta](double p) { return boost::math::gamma_p_inv(shape, p) / beta; }, bins);
  return stats::chi2_test(
      energies, [shape, beta](double x) { return x <= 0 ? 0.0 : boost::math::gamma_p(shape, beta * x); }, edges);
}

/// E[f(E(0)) g(E(t))] - E[g(E(0)) f(E(t))] for one (f, g, t).
struct SymmetryCheck {
  std::string f, g;
  double t = 0;
  double mean = 0;
  double std_error = 0;
  double z() const { return std_error > 0 ? mean / std_error : 0.0; }
};

struct EquilibriumRun {
  std::vector<std::vector<double>> final_energies;  ///< per replica
  std::vector<SymmetryCheck> symmetry;
  double max_relative_drift = 0;  ///< max over replicas of |sum E(T) - sum E(0)| / sum E(0)
  std::uint64_t halvings = 0;
  std::uint64_t steps = 0;
};

/// K equilibrium-started replicas of the lattice SDE run to time T. The
/// symmetry statistics use f, g in {E_0, E_0^2, E_0 E_1} at each check time.
inline EquilibriumRun equilibrium_run(const LatticeGraph& g, const CoefficientFamily& fam, double beta, double dt,
                                      double T, std::size_t K, std::uint64_t seed,
                                      const std::vector<double>& check_times = {0.1, 1.0}, unsigned workers = 1) {
  require(g.sites() >= 2, ErrorKind::invalid_params, "equilibrium_run: need at least two sites");
  double prev = 0;
  for (double t : check_times) {
    require(t > prev && t <= T, ErrorKind::invalid_params, "equilibrium_run: check times must increase within (0, T]");
    prev = t;
  }
  constexpr int nf = 3;
  static const char* names[nf] = {"E0", "E0^2", "E0*E1"};
  auto obs = [](const std::vector<double>& E, int i) {
    return i == 0 ? E[0] : i == 1 ? E[0] * E[0] : E[0] * E[1];
  };
  const stats::RngStream root(seed, 0);
  struct Rep {
    std::vector<double> final_E;
    std::vector<double> sym;
    double drift = 0;
    std::uint64_t halvings = 0, steps = 0;
  };
  auto reps = parallel_map(K, workers, [&](std::size_t k) {
    auto rng = root.substream(k);
    MesoscopicSde sde(g, fam, beta);
    auto c = equilibrium_sample(g, fam, beta, rng);
    const auto c0 = c;
    const double e0 = c.total();
    Rep r;
    double t = 0;
    for (double tc : check_times) {
      sde.run(c, tc - t, dt, rng);
      t = tc;
      for (int i = 0; i < nf; ++i)
        for (int j = i + 1; j < nf; ++j) r.sym.push_back(obs(c0.E, i) * obs(c.E, j) - obs(c0.E, j) * obs(c.E, i));
    }
    if (T > t) sde.run(c, T - t, dt, rng);
    r.drift = std::abs(c.total() - e0) / e0;
    r.final_E = std::move(c.E);
    r.halvings = sde.log().halvings;
    r.steps = sde.log().steps;
    return r;
  });
  EquilibriumRun out;
  for (auto& r : reps) {
    out.max_relative_drift = std::max(out.max_relative_drift, r.drift);
    out.halvings += r.halvings;
    out.steps += r.steps;
  }
  std::size_t q = 0;
  for (double tc : check_times)
    for (int i = 0; i < nf; ++i)
      for (int j = i + 1; j < nf; ++j, ++q) {
        SymmetryCheck s{names[i], names[j], tc};
        for (const auto& r : reps) s.mean += r.sym[q];
        s.mean /= static_cast<double>(K);
        double v = 0;
        for (const auto& r : reps) v += (r.sym[q] - s.mean) * (r.sym[q] - s.mean);
        s.std_error = std::sqrt(v / static_cast<double>(K - 1) / static_cast<double>(K));
        out.symmetry.push_back(s);
      }
  for (auto& r : reps) out.final_energies.push_back(std::move(r.final_E));
  return out;
}

inline std::vector<double> pooled(const std::vector<std::vector<double>>& per_replica) {
  std::vector<double> all;
  for (const auto& v : per_replica) all.insert(all.end(), v.begin(), v.end());
  return all;
}

}  // namespace tlab::sde
