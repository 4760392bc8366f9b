#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tlab/averaging/decay.hpp"
#include "tlab/averaging/fluctuations.hpp"
#include "tlab/averaging/metastability.hpp"
#include "tlab/averaging/ode.hpp"
#include "tlab/dynamics/system.hpp"
#include "tlab/dynamics/trajectory.hpp"
#include "tlab/harness/config.hpp"
#include "tlab/harness/output.hpp"
#include "tlab/hydro/experiment.hpp"
#include "tlab/hydro/heat.hpp"
#include "tlab/sde/gap.hpp"
#include "tlab/sde/invariance.hpp"
#include "tlab/sde/jump.hpp"
#include "tlab/sde/kappa.hpp"
#include "tlab/transfer/profile.hpp"
#include "tlab/transfer/ulam.hpp"

namespace tlab::harness {

struct RunContext {
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

using Runner = std::function<ResultSet(const Params&, const RunContext&)>;

struct Experiment {
  std::string name;
  std::string anchor;  ///< label of the equation or section exercised
  std::string description;
  std::vector<ParamSpec> params;
  Runner run;
};

namespace detail {

constexpr double two_pi = 2 * std::numbers::pi;

inline std::vector<ParamSpec> system_params(const std::string& preset, const std::string& eps) {
  return {choice_param("preset", preset, "fast-slow preset",
                       {"doubling-pure", "single-sink", "double-sink", "zero-average"}),
          positive("epsilon", eps, "time-scale separation"),
          optional_real("a", "fast map perturbation amplitude"),
          optional_real("offset", "single-sink drift offset"),
          optional_real("strength", "double-sink drift strength"),
          optional_real("noise", "double-sink noise amplitude"),
          optional_real("g_amplitude", "zero-average slow modulation")};
}

inline std::vector<ParamSpec> profile_params() {
  return {int_param("nodes", "64", "spline nodes M", 8, 4096),
          int_param("resolution", "4096", "Ulam cells N (power of 2)", 64, 65536)};
}

inline std::vector<ParamSpec> family_params() {
  return {choice_param("family", "anharmonic-LO12", "bond coefficient family", {"anharmonic-LO12", "geodesic-DL11"}),
          positive("A", "1", "coefficient amplitude"), int_param("n_star", "3", "DL11 dimension n_*", 3, 64),
          real_param("shape", "1", "LO12 invariant Gamma shape", 1, INFINITY), positive("beta", "1", "inverse temperature")};
}

template <class... V>
std::vector<ParamSpec> join(std::vector<ParamSpec> a, const V&... rest) {
  (a.insert(a.end(), rest.begin(), rest.end()), ...);
  return a;
}

inline dynamics::FastSlowSystem system_from(const Params& p) {
  std::map<std::string, double> extra;
  for (const char* k : {"a", "offset", "strength", "noise", "g_amplitude"})
    if (p.has(k)) extra[k] = p.real(k);
  extra["epsilon"] = p.real("epsilon");
  try {
    return dynamics::make_preset(dynamics::parse_preset(p.text("preset")), extra);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::invalid_params) fail(ErrorKind::validation, e.what());
    throw;
  }
}

inline transfer::SrbProfile profile_from(const dynamics::FastSlowSystem& sys, const Params& p, unsigned workers) {
  transfer::ProfileOptions o;
  o.nodes = static_cast<int>(p.integer("nodes"));
  o.resolution = static_cast<int>(p.integer("resolution"));
  o.workers = workers;
  return transfer::build_profile(sys, o);
}

inline sde::CoefficientFamily family_from(const Params& p) {
  if (sde::parse_family(p.text("family")) == sde::FamilyId::geodesic_dl11)
    return sde::CoefficientFamily::dl11(p.real("A"), static_cast<int>(p.integer("n_star")));
  return sde::CoefficientFamily::lo12(p.real("A"), p.real("shape"));
}

inline ResultSet simulate_map(const Params& p, const RunContext& ctx) {
  const auto sys = system_from(p);
  const auto law = dynamics::InitialLaw::uniform(p.real("theta0"));
  const auto path = dynamics::simulate_slow_path(sys, law, p.real("T"), ctx.seed);
  const auto every = static_cast<std::size_t>(p.integer("record_every"));
  ResultSet r;
  CsvTable t{"path.csv", 1, {"n", "t", "theta"}, {}};
  for (std::size_t n = 0; n < path.values.size(); n += every) t.add(n, path.times[n], path.values[n]);
  r.tables.push_back(std::move(t));
  r.summary["steps"] = path.values.size() - 1;
  r.summary["theta_final"] = path.values.back();
  return r;
}

inline ResultSet srb_profile(const Params& p, const RunContext& ctx) {
  const auto sys = system_from(p);
  transfer::ProfileOptions o;
  o.nodes = static_cast<int>(p.integer("nodes"));
  o.resolution = static_cast<int>(p.integer("resolution"));
  o.m_max = static_cast<int>(p.integer("m_max"));
  o.tail_tol = p.real("tail_tol");
  o.workers = ctx.workers;
  const auto prof = transfer::build_profile(sys, o);
  ResultSet r;
  CsvTable t{"profile.csv", 1, {"z", "drift_bar", "gk_variance", "truncation_m", "last_term", "tail_converged"}, {}};
  int unconverged = 0;
  for (std::size_t i = 0; i < prof.z_grid.size(); ++i) {
    t.add(prof.z_grid[i], prof.drift_bar[i], prof.gk_variance[i], prof.truncation_m[i], prof.last_term[i],
          static_cast<bool>(prof.tail_converged[i]));
    unconverged += prof.tail_converged[i] ? 0 : 1;
  }
  r.tables.push_back(std::move(t));
  CsvTable z{"zeros.csv", 1, {"z", "slope", "kind"}, {}};
  for (const auto& zr : averaging::drift_zeros(prof.coefficients()))
    z.add(zr.z, zr.slope, zr.slope < 0 ? "sink" : "source");
  r.summary["sign_changes"] = transfer::drift_sign_changes(prof.drift_bar);
  r.summary["zeros"] = z.rows.size();
  r.tables.push_back(std::move(z));
  r.summary["verify_drift_error"] = prof.verify_drift_error;
  r.summary["verify_variance_error"] = prof.verify_variance_error;
  r.logs["tail_not_converged_nodes"] = unconverged;
  return r;
}

inline ResultSet green_kubo(const Params& p, const RunContext&) {
  const auto sys = system_from(p);
  const double z = p.real("z");
  const auto g = transfer::green_kubo_variance(sys, z, static_cast<int>(p.integer("resolution")),
                                               static_cast<int>(p.integer("m_max")), p.real("tail_tol"));
  ResultSet r;
  CsvTable t{"green_kubo.csv", 1, {"z", "value", "drift_bar", "truncation_m", "last_term", "converged"}, {}};
  t.add(z, g.value, g.drift_bar, g.truncation_m, g.last_term, g.converged);
  r.tables.push_back(std::move(t));
  r.summary["value"] = g.value;
  r.summary["drift_bar"] = g.drift_bar;
  r.logs["tail_converged"] = g.converged;
  r.logs["truncation_m"] = g.truncation_m;
  return r;
}

inline ResultSet average(const Params& p, const RunContext& ctx) {
  const auto sys = system_from(p);
  const auto prof = profile_from(sys, p, ctx.workers);
  const double T = p.real("T"), th0 = p.real("theta0");
  const auto sol = averaging::solve_averaged(prof.coefficients(), th0, T, p.real("dt"));
  const int n = static_cast<int>(p.integer("points"));
  std::vector<double> ts;
  for (int i = 0; i < n; ++i) ts.push_back(T * i / (n - 1));
  const auto var = averaging::theoretical_variance(sol, ts);
  ResultSet r;
  CsvTable t{"averaged.csv", 1, {"t", "theta_bar", "drift_bar", "sigma2"}, {}};
  for (int i = 0; i < n; ++i)
    t.add(ts[static_cast<std::size_t>(i)], sol.at(ts[static_cast<std::size_t>(i)]),
          sol.derivative_at(ts[static_cast<std::size_t>(i)]), var.values[static_cast<std::size_t>(i)]);
  r.tables.push_back(std::move(t));
  r.summary["theta_bar_T"] = sol.at(T);
  r.summary["sigma2_T"] = var.values.back();
  r.summary["midpoint_residual"] = sol.midpoint_residual();
  return r;
}

inline ResultSet fluctuations(const Params& p, const RunContext& ctx) {
  const auto sys = system_from(p);
  const auto prof = profile_from(sys, p, ctx.workers);
  const auto law = dynamics::InitialLaw::uniform(p.real("theta0"));
  const auto times = p.reals("times");
  averaging::EnsembleOptions eo;
  eo.workers = ctx.workers;
  const auto coeffs = prof.coefficients();
  const auto ens = averaging::fluctuation_ensemble(sys, law, coeffs, times,
                                                   static_cast<std::size_t>(p.integer("K")), ctx.seed, eo);
  const auto curve = averaging::theoretical_variance(coeffs, p.real("theta0"), times, eo.ode_dt);
  ResultSet r;
  CsvTable z{"zeta.csv", 1, {"replica", "t", "zeta"}, {}};
  for (std::size_t k = 0; k < ens.size(); ++k)
    for (std::size_t i = 0; i < times.size(); ++i) z.add(k, times[i], ens.samples[k][i]);
  CsvTable c{"clt.csv", 1, {"t", "ks", "p_value", "empirical_variance", "sigma2"}, {}};
  auto arr = nlohmann::json::array();
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] == 0) continue;
    const auto cmp = averaging::clt_compare(ens.at_time_index(i), curve.values[i]);
    c.add(times[i], cmp.ks, cmp.p_value, cmp.empirical_variance, cmp.theoretical_variance);
    arr.push_back({{"t", times[i]}, {"ks", cmp.ks}, {"variance_ratio", cmp.empirical_variance / cmp.theoretical_variance}});
  }
  r.tables.push_back(std::move(z));
  r.tables.push_back(std::move(c));
  r.summary["clt"] = arr;
  return r;
}

inline ResultSet wf_compare(const Params& p, const RunContext& ctx) {
  const auto sys = system_from(p);
  const auto prof = profile_from(sys, p, ctx.workers);
  const auto law = dynamics::InitialLaw::uniform(p.real("theta0"));
  averaging::EnsembleOptions eo;
  eo.workers = ctx.workers;
  const auto w = averaging::wf_distributional_distance(sys, law, prof.coefficients(), p.real("t"),
                                                       static_cast<std::size_t>(p.integer("K")), p.real("dt"),
                                                       ctx.seed, eo);
  ResultSet r;
  CsvTable t{"endpoints.csv", 1, {"replica", "map", "sde"}, {}};
  for (std::size_t k = 0; k < w.map_endpoints.size(); ++k) t.add(k, w.map_endpoints[k], w.sde_endpoints[k]);
  r.tables.push_back(std::move(t));
  r.summary["ks"] = w.ks;
  return r;
}

inline ResultSet decay(const Params& p, const RunContext& ctx) {
  const auto sys = system_from(p);
  averaging::DecayOptions o;
  o.lag_max = static_cast<int>(p.integer("lag_max"));
  o.samples = static_cast<std::size_t>(p.integer("samples"));
  o.tail_length = static_cast<std::uint64_t>(p.integer("tail_length"));
  o.workers = ctx.workers;
  const averaging::Observable obs = [](double, double th) { return std::cos(two_pi * th); };
  const auto d = averaging::correlation_decay(sys, obs, obs, ctx.seed, o);
  ResultSet r;
  CsvTable t{"decay.csv", 1, {"lag", "correlation", "std_error", "lebesgue_minus_srb"}, {}};
  for (std::size_t i = 0; i < d.lags.size(); ++i) t.add(d.lags[i], d.correlation[i], d.std_error[i], d.lebesgue_minus_srb[i]);
  r.tables.push_back(std::move(t));
  r.summary["rate"] = d.rate;
  r.summary["mu_B"] = d.mu_B;
  r.summary["fit_window"] = {d.fit.window.first, d.fit.window.second};
  r.summary["fit_r_squared"] = d.fit.r_squared;
  r.logs["below_noise"] = d.below_noise;
  return r;
}

inline ResultSet metastability(const Params& p, const RunContext& ctx) {
  const auto sys = system_from(p);
  const auto prof = profile_from(sys, p, ctx.workers);
  averaging::ResidenceOptions o;
  o.core_fraction = p.real("core_fraction");
  const auto st = averaging::residence_statistics(sys, prof.coefficients(),
                                                  static_cast<std::uint64_t>(p.integer("steps")), ctx.seed, o);
  ResultSet r;
  CsvTable res{"residence.csv", 1, {"sink", "z", "residence"}, {}};
  for (std::size_t i = 0; i < st.residence.size(); ++i)
    for (double v : st.residence[i]) res.add(i, st.sinks[i], v);
  CsvTable tr{"transitions.csv", 1, {"from", "to", "count"}, {}};
  for (std::size_t i = 0; i < st.transitions.size(); ++i)
    for (std::size_t j = 0; j < st.transitions.size(); ++j) tr.add(i, j, st.transitions[i][j]);
  r.tables.push_back(std::move(res));
  r.tables.push_back(std::move(tr));
  r.summary["sinks"] = st.sinks;
  r.summary["sources"] = st.sources;
  r.summary["total_transitions"] = st.total_transitions();
  const double mr = st.mean_residence();
  r.summary["mean_residence"] = std::isfinite(mr) ? nlohmann::json(mr) : nlohmann::json(nullptr);
  return r;
}

inline ResultSet lattice_sde(const Params& p, const RunContext& ctx) {
  const auto fam = family_from(p);
  const double beta = p.real("beta");
  const auto g = sde::LatticeGraph::make(static_cast<int>(p.integer("d")), static_cast<int>(p.integer("L")),
                                         p.boolean("periodic"));
  std::vector<double> checks;
  for (double t : {0.1, 1.0})
    if (t <= p.real("T")) checks.push_back(t);
  const auto run = sde::equilibrium_run(g, fam, beta, p.real("dt"), p.real("T"),
                                        static_cast<std::size_t>(p.integer("K")), ctx.seed, checks, ctx.workers);
  ResultSet r;
  CsvTable e{"energies.csv", 1, {"replica", "site", "energy"}, {}};
  for (std::size_t k = 0; k < run.final_energies.size(); ++k)
    for (std::size_t x = 0; x < run.final_energies[k].size(); ++x) e.add(k, x, run.final_energies[k][x]);
  CsvTable s{"symmetry.csv", 1, {"f", "g", "t", "mean", "std_error"}, {}};
  for (const auto& c : run.symmetry) s.add(c.f, c.g, c.t, c.mean, c.std_error);
  r.tables.push_back(std::move(e));
  r.tables.push_back(std::move(s));
  const auto chi = sde::marginal_chi2(sde::pooled(run.final_energies), fam.shape(), beta);
  r.summary["chi2_p_value"] = chi.p_value;
  r.summary["chi2_dof"] = chi.dof;
  r.summary["max_relative_energy_drift"] = run.max_relative_drift;
  r.logs["positivity_halvings"] = run.halvings;
  r.logs["steps"] = run.steps;
  return r;
}

inline ResultSet jump(const Params& p, const RunContext& ctx) {
  const auto g = sde::LatticeGraph::make(static_cast<int>(p.integer("d")), static_cast<int>(p.integer("L")),
                                         p.boolean("periodic"));
  const double T = p.real("T"), shape = p.real("init_shape");
  const sde::JumpModel model;
  const stats::RngStream root(ctx.seed, 0);
  struct Rep {
    std::vector<double> E;
    std::uint64_t jumps = 0;
    double worst_bond = 0, total_drift = 0;
  };
  auto reps = parallel_map(static_cast<std::size_t>(p.integer("K")), ctx.workers, [&](std::size_t k) {
    auto rng = root.substream(k);
    sde::EnergyConfig c;
    c.E.resize(g.sites());
    for (auto& e : c.E) e = rng.gamma(shape, 1.0);
    const double e0 = c.total();
    Rep rep;
    double clock = 0;
    for (;;) {
      const auto before = c;
      const auto ev = sde::jump_step(g, c, model, rng);
      clock += ev.elapsed;
      if (clock > T) {
        c = before;
        break;
      }
      const auto [x, y] = g.bonds[ev.bond];
      const double s0 = before.E[x] + before.E[y], s1 = c.E[x] + c.E[y];
      if (s0 > 0) rep.worst_bond = std::max(rep.worst_bond, std::abs(s1 - s0) / s0);
      ++rep.jumps;
    }
    rep.total_drift = std::abs(c.total() - e0) / e0;
    rep.E = std::move(c.E);
    return rep;
  });
  ResultSet r;
  CsvTable e{"energies.csv", 1, {"replica", "site", "energy"}, {}};
  std::uint64_t jumps = 0;
  double wb = 0, td = 0;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    for (std::size_t x = 0; x < reps[k].E.size(); ++x) e.add(k, x, reps[k].E[x]);
    jumps += reps[k].jumps;
    wb = std::max(wb, reps[k].worst_bond);
    td = std::max(td, reps[k].total_drift);
  }
  r.tables.push_back(std::move(e));
  r.summary["jumps"] = jumps;
  r.summary["max_bond_relative_error"] = wb;
  r.summary["max_total_relative_drift"] = td;
  return r;
}

inline ResultSet gap_probe(const Params& p, const RunContext& ctx) {
  std::vector<int> Ls;
  for (auto v : p.integers("sizes")) Ls.push_back(static_cast<int>(v));
  sde::GapProbeOptions o;
  o.samples = static_cast<std::size_t>(p.integer("samples"));
  o.lag_max = static_cast<int>(p.integer("lag_max"));
  o.workers = ctx.workers;
  const auto g = sde::spectral_gap_probe(Ls, sde::JumpModel{}, ctx.seed, o);
  ResultSet r;
  CsvTable t{"gap.csv", 1, {"L", "interval", "tau", "lags_used", "tau_exact"}, {}};
  for (std::size_t i = 0; i < Ls.size(); ++i)
    t.add(Ls[i], g.interval[i], g.relaxation[i].tau, g.relaxation[i].lags_used,
          1 / (1 - std::cos(two_pi / Ls[i])));
  r.tables.push_back(std::move(t));
  r.summary["exponent"] = g.exponent();
  r.summary["exponent_stderr"] = g.exponent_fit.slope_stderr;
  return r;
}

inline ResultSet kappa_m(const Params& p, const RunContext& ctx) {
  const auto fam = family_from(p);
  sde::KappaOptions o;
  o.T = p.real("T");
  o.dt = p.real("dt");
  o.sample_every = p.real("sample_every");
  o.max_lag = p.real("max_lag");
  o.workers = ctx.workers;
  const auto k = sde::kappa_M_estimate(static_cast<int>(p.integer("L")), fam, p.real("beta"),
                                       static_cast<int>(p.integer("K")), ctx.seed, o);
  ResultSet r;
  CsvTable t{"kappa_integrand.csv", 1, {"s", "integrand", "std_error"}, {}};
  for (std::size_t i = 0; i < k.lag_times.size(); ++i) t.add(k.lag_times[i], k.integrand[i], k.integrand_stderr[i]);
  r.tables.push_back(std::move(t));
  r.summary["kappa_M"] = k.kappa;
  r.summary["static_term"] = k.static_term;
  r.summary["static_stderr"] = k.static_stderr;
  r.summary["dynamic_term"] = k.dynamic_term;
  r.summary["dynamic_stderr"] = k.dynamic_stderr;
  r.logs["truncation_lag"] = k.truncation_lag;
  r.logs["spatial_cutoff"] = k.spatial_cutoff;
  r.logs["spatial_tail"] = k.spatial_tail;
  r.logs["tail_converged"] = k.tail_converged;
  r.logs["positivity_halvings"] = k.halvings;
  return r;
}

inline ResultSet hydro_run(const Params& p, const RunContext& ctx) {
  const double amp = p.real("amplitude");
  const auto u0 = [amp](double y) { return 1 + amp * std::cos(two_pi * y); };
  hydro::HydroOptions o;
  o.n_star = static_cast<int>(p.integer("n_star"));
  o.dt = p.real("dt");
  o.bins = static_cast<int>(p.integer("bins"));
  o.workers = ctx.workers;
  const auto times = p.reals("times");
  const auto prof = hydro::diffusive_experiment(static_cast<int>(p.integer("L")), u0, times,
                                                static_cast<int>(p.integer("K")), ctx.seed, o);
  ResultSet r;
  CsvTable t{"profile.csv", 1, {"t_macro", "bin", "y", "value", "std_error"}, {}};
  for (std::size_t i = 0; i < times.size(); ++i)
    for (int b = 0; b < prof.bins; ++b)
      t.add(times[i], b, prof.bin_center[static_cast<std::size_t>(b)], prof.bin_mean[i][static_cast<std::size_t>(b)],
            prof.bin_stderr[i][static_cast<std::size_t>(b)]);
  r.tables.push_back(std::move(t));
  if (times.front() == 0 && times.size() >= 2 && amp != 0) {
    const double kap = hydro::fit_kappa(prof);
    const auto ref = hydro::heat_reference_solve(u0, std::max(kap, 0.0), times);
    auto errs = nlohmann::json::array();
    for (std::size_t i = 0; i < times.size(); ++i) errs.push_back(hydro::profile_l2_error(prof, ref, i, i));
    r.summary["kappa_fit"] = kap;
    r.summary["relative_l2_error"] = errs;
  }
  return r;
}

inline ResultSet heat_ref(const Params& p, const RunContext&) {
  const double amp = p.real("amplitude");
  const std::string shape = p.text("profile");
  const std::function<double(double)> u0 = shape == "cosine"
      ? std::function<double(double)>([amp](double y) { return 1 + amp * std::cos(two_pi * y); })
      : std::function<double(double)>([amp](double y) { return y < 0.5 ? 1 + amp : 1 - amp; });
  const double kap = p.real("kappa");
  const auto times = p.reals("times");
  const auto ref = hydro::heat_reference_solve(u0, kap, times, static_cast<int>(p.integer("N")));
  ResultSet r;
  CsvTable t{"heat.csv", 1, {"t", "y", "u"}, {}};
  double mass_err = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t j = 0; j < ref.grid.size(); ++j) t.add(times[i], ref.grid[j], ref.values[i][j]);
    mass_err = std::max(mass_err, std::abs(ref.mass(i) - ref.mass(0)));
  }
  r.tables.push_back(std::move(t));
  r.summary["mass_error"] = mass_err;
  if (shape == "cosine") {
    double e = 0;
    for (std::size_t i = 0; i < times.size(); ++i)
      for (std::size_t j = 0; j < ref.grid.size(); ++j)
        e = std::max(e, std::abs(ref.values[i][j] - (1 + amp * std::exp(-kap * two_pi * two_pi * times[i]) *
                                                              std::cos(two_pi * ref.grid[j]))));
    r.summary["max_error_vs_closed_form"] = e;
  }
  return r;
}

}  // namespace detail

inline const std::vector<Experiment>& experiments() {
  using namespace detail;
  static const std::vector<Experiment> list = {
      {"simulate-map", "eq:simpled", "iterate the fast-slow map from a point-mass slow start",
       join(system_params("single-sink", "0.0009765625"),
            std::vector<ParamSpec>{real_param("theta0", "0.2", "initial slow value"), positive("T", "1", "macroscopic horizon"),
                                   int_param("record_every", "1", "keep every k-th iterate", 1)}),
       simulate_map},
      {"srb-profile", "eq:gk1", "SRB drift and Green-Kubo variance profiles on the slow circle",
       join(system_params("single-sink", "0.0009765625"), profile_params(),
            std::vector<ParamSpec>{int_param("m_max", "64", "Green-Kubo truncation cap", 1, 10000),
                                   positive("tail_tol", "1e-10", "Green-Kubo tail tolerance")}),
       srb_profile},
      {"green-kubo", "eq:gk1", "Green-Kubo variance of the slow drift at one slow value",
       join(system_params("doubling-pure", "0.0009765625"),
            std::vector<ParamSpec>{real_param("z", "0", "slow value"),
                                   int_param("resolution", "4096", "Ulam cells N (power of 2)", 64, 65536),
                                   int_param("m_max", "20", "truncation cap", 1, 10000),
                                   positive("tail_tol", "1e-10", "tail tolerance")}),
       green_kubo},
      {"average", "thm:lclt", "averaged ODE and its linearised variance curve",
       join(system_params("single-sink", "0.0009765625"), profile_params(),
            std::vector<ParamSpec>{real_param("theta0", "0.2", "initial slow value"), positive("T", "1", "horizon"),
                                   real_param("dt", "1e-4", "RK4 step", 0, 1e-2, true),
                                   int_param("points", "101", "output points", 2, 1000000)}),
       average},
      {"fluctuations", "eq:dolgo-av", "CLT fluctuation ensemble against N(0, Sigma_t^2)",
       join(system_params("single-sink", "1e-4"), profile_params(),
            std::vector<ParamSpec>{real_param("theta0", "0.2", "initial slow value"),
                                   list_param("times", ParamType::real_list, "0.5,1", "macroscopic times", 0),
                                   int_param("K", "1000", "replicas", 100)}),
       fluctuations},
      {"wf-compare", "eq:wfeq", "map endpoint law against the small-noise SDE",
       join(system_params("single-sink", "1e-3"), profile_params(),
            std::vector<ParamSpec>{real_param("theta0", "0.2", "initial slow value"), positive("t", "2", "time"),
                                   int_param("K", "1000", "replicas", 2), positive("dt", "1e-3", "SDE step")}),
       wf_compare},
      {"decay", "cor:third-step", "decay of correlations of the skew product",
       join(system_params("single-sink", "0.04"),
            std::vector<ParamSpec>{int_param("lag_max", "150", "largest lag", 1, 100000),
                                   int_param("samples", "20000", "Lebesgue starting points", 100),
                                   int_param("tail_length", "100000", "SRB chain length", 1000)}),
       decay},
      {"metastability", "cor:third-step", "residence times between sinks of the averaged drift",
       join(system_params("double-sink", "0.025"), profile_params(),
            std::vector<ParamSpec>{int_param("steps", "20000000", "map iterations", 1),
                                   real_param("core_fraction", "0.5", "basin core fraction", 0, 1, true)}),
       metastability},
      {"lattice-sde", "eq:gen-meso", "mesoscopic bond SDE from the product equilibrium",
       join(family_params(),
            std::vector<ParamSpec>{int_param("L", "8", "side", 2, 4096), int_param("d", "1", "dimension", 1, 3),
                                   bool_param("periodic", "true", "periodic boundary"), positive("T", "10", "horizon"),
                                   positive("dt", "5e-4", "step"), int_param("K", "1000", "replicas", 2)}),
       lattice_sde},
      {"jump", "eq:makiko", "energy rotation jump process",
       std::vector<ParamSpec>{int_param("L", "8", "side", 2, 4096), int_param("d", "1", "dimension", 1, 3),
                              bool_param("periodic", "true", "periodic boundary"), positive("T", "100", "horizon"),
                              int_param("K", "100", "replicas", 1), positive("init_shape", "0.5", "Gamma shape of start")},
       jump},
      {"gap-probe", "sec:hard", "relaxation time of the slow energy mode versus L",
       std::vector<ParamSpec>{list_param("sizes", ParamType::int_list, "4,8,16,32", "chain lengths", 2),
                              int_param("samples", "100000", "series length", 1000),
                              int_param("lag_max", "100", "autocorrelation lags", 2, 10000)},
       gap_probe},
      {"kappa-m", "eq:dolgo", "static plus time-integrated current term of kappa_M",
       join(family_params(),
            std::vector<ParamSpec>{int_param("L", "64", "chain length", 4, 4096), int_param("K", "16", "replicas", 2),
                                   positive("T", "20", "trajectory length"), positive("dt", "1e-3", "step"),
                                   positive("sample_every", "0.05", "sampling interval"),
                                   positive("max_lag", "5", "longest correlation time")}),
       kappa_m},
      {"hydro", "eq:hydro", "diffusive scaling of the velocity-exchange chain",
       std::vector<ParamSpec>{int_param("L", "64", "chain length", 2, 4096), int_param("K", "200", "replicas", 2),
                              list_param("times", ParamType::real_list, "0,0.01,0.02,0.03,0.04,0.05", "macroscopic times", 0),
                              int_param("bins", "32", "profile bins", 1, 4096), real_param("dt", "0.01", "step", 0, 0.01, true),
                              int_param("n_star", "3", "velocity dimension", 2, 64),
                              real_param("amplitude", "1", "cosine amplitude", -1, 1)},
       hydro_run},
      {"heat-ref", "eq:heate", "periodic heat equation reference solution",
       std::vector<ParamSpec>{real_param("kappa", "1", "diffusivity", 0),
                              list_param("times", ParamType::real_list, "0,0.01,0.05", "times", 0),
                              int_param("N", "256", "grid points", 256, 8192),
                              choice_param("profile", "cosine", "initial profile", {"cosine", "step"}),
                              real_param("amplitude", "1", "profile amplitude", -1, 1)},
       heat_ref},
  };
  return list;
}

inline const Experiment& find_experiment(const std::string& name) {
  for (const auto& e : experiments())
    if (e.name == name) return e;
  fail(ErrorKind::validation, "unknown experiment '" + name + "'");
}

inline nlohmann::json catalog_json() {
  auto arr = nlohmann::json::array();
  for (const auto& e : experiments()) {
    auto ps = nlohmann::json::array();
    for (const auto& p : e.params) {
      nlohmann::json j{{"name", p.name}, {"type", type_name(p.type)}, {"description", p.description}};
      if (!p.default_value.empty()) j["default"] = p.default_value;
      if (p.optional) j["optional"] = true;
      if (std::isfinite(p.lo)) j[p.lo_open ? "exclusive_min" : "min"] = p.lo;
      if (std::isfinite(p.hi)) j["max"] = p.hi;
      if (!p.choices.empty()) j["choices"] = p.choices;
      ps.push_back(j);
    }
    arr.push_back({{"name", e.name}, {"anchor", e.anchor}, {"description", e.description}, {"params", ps}});
  }
  return arr;
}

}  // namespace tlab::harness
