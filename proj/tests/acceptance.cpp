// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fast_configs.hpp"
#include "tlab/averaging/decay.hpp"
#include "tlab/averaging/fluctuations.hpp"
#include "tlab/averaging/metastability.hpp"
#include "tlab/harness/run.hpp"
#include "tlab/hydro/experiment.hpp"
#include "tlab/hydro/heat.hpp"
#include "tlab/sde/gap.hpp"
#include "tlab/sde/invariance.hpp"
#include "tlab/sde/jump.hpp"
#include "tlab/stats/fit.hpp"
#include "tlab/transfer/profile.hpp"
#include "tlab/transfer/ulam.hpp"

using namespace tlab;
namespace fs = std::filesystem;

namespace {

constexpr double tau = 2 * std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

std::string fmt(const char* f, auto... v) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

dynamics::FastSlowSystem doubling_with(std::function<double(double, double)> w, double bound) {
  return dynamics::make_system([](double x, double) { return 2 * x; }, [](double, double) { return 2.0; },
                               std::move(w), 1e-3, bound, false);
}

transfer::SlowCoefficients profile_coefficients(const dynamics::FastSlowSystem& s) {
  transfer::ProfileOptions o;
  o.workers = workers();
  return transfer::build_profile(s, o).coefficients();
}

Outcome green_kubo_value() {
  Outcome o;
  const auto d = dynamics::make_preset(dynamics::Preset::doubling_pure);
  const auto gk = transfer::green_kubo_variance(d, 0.0, 4096, 20);
  o.check(std::abs(gk.value - 0.5) <= 0.005, fmt("GK = %.6f (0.5 +- 0.005)", gk.value));
  const auto cob = doubling_with([](double x, double) { return std::sin(tau * x) - std::sin(2 * tau * x); }, 2.0);
  const auto c = transfer::green_kubo_variance(cob, 0.0, 4096, 20);
  o.check(std::abs(c.value) <= 0.01, fmt("coboundary |GK| = %.2e (<= 0.01)", std::abs(c.value)));
  return o;
}

Outcome srb_equivalence() {
  Outcome o;
  const auto s = dynamics::make_preset(dynamics::Preset::single_sink).with_epsilon(0);
  const int N = 4096;
  const auto h = transfer::srb_density(transfer::ulam_matrix(s, 0.0, N));
  std::vector<double> counts(N, 0.0);
  stats::RngStream rng(2, 0);
  const std::uint64_t steps = 100000000;
  dynamics::iterate(s, {dynamics::CircleValue(rng.uniform()), dynamics::CircleValue(0)}, steps, rng,
                    [&](std::uint64_t n, double x, double) {
                      if (n) counts[static_cast<std::size_t>(std::min(N - 1, static_cast<int>(x * N)))] += 1;
                    });
  double l1 = 0;
  for (int i = 0; i < N; ++i)
    l1 += std::abs(counts[static_cast<std::size_t>(i)] / static_cast<double>(steps) - h.weights[static_cast<std::size_t>(i)] / N);
  o.check(l1 <= 0.01, fmt("L1(Ulam N=4096, 1e8-step histogram) = %.5f (<= 0.01)", l1));
  return o;
}

Outcome averaging_order() {
  Outcome o;
  const auto s = dynamics::make_preset(dynamics::Preset::single_sink);
  const auto c = profile_coefficients(s);
  const auto law = dynamics::InitialLaw::uniform(0.2);
  averaging::EnsembleOptions eo;
  eo.workers = workers();
  std::vector<double> eps, med;
  for (int p = 6; p <= 12; ++p) {
    const double e = std::ldexp(1.0, -p);
    eps.push_back(e);
    med.push_back(stats::median(averaging::averaging_sup_errors(s.with_epsilon(e), law, c, 1.0, 1000, 7, eo)));
  }
  const auto f = stats::loglog_slope(eps, med);
  o.check(f.slope >= 0.35 && f.slope <= 0.65, fmt("exponent p = %.4f (in [0.35, 0.65])", f.slope));
  return o;
}

Outcome clt() {
  Outcome o;
  const auto law = dynamics::InitialLaw::uniform(0.2);
  averaging::EnsembleOptions eo;
  eo.workers = workers();
  for (auto preset : {dynamics::Preset::single_sink, dynamics::Preset::doubling_pure}) {
    const auto s = dynamics::make_preset(preset).with_epsilon(1e-4);
    const auto c = profile_coefficients(s);
    const auto e = averaging::fluctuation_ensemble(s, law, c, {1.0}, 10000, 11, eo);
    const auto r = averaging::clt_compare(e, averaging::theoretical_variance(c, 0.2, {1.0}), 1.0);
    const double rel = r.empirical_variance / r.theoretical_variance - 1;
    o.check(r.ks <= 0.05 && std::abs(rel) <= 0.1,
            fmt("%s KS = %.4f (<= 0.05), var/Sigma^2 - 1 = %+.4f (|.| <= 0.1)", dynamics::preset_name(preset).c_str(),
                r.ks, rel));
  }
  return o;
}

Outcome wf_closeness() {
  Outcome o;
  const auto s = dynamics::make_preset(dynamics::Preset::single_sink);
  const auto c = profile_coefficients(s);
  const auto law = dynamics::InitialLaw::uniform(0.2);
  averaging::EnsembleOptions eo;
  eo.workers = workers();
  const std::size_t K = 10000;
  const double a = averaging::wf_distributional_distance(s.with_epsilon(1e-3), law, c, 2.0, K, 1e-3, 100, eo).ks;
  const double b = averaging::wf_distributional_distance(s.with_epsilon(5e-4), law, c, 2.0, K, 1e-3, 101, eo).ks;
  // sd of a two-sample KS statistic, n = m = K: 0.26 sqrt(2 / K)
  const double se = 0.26 * std::sqrt(2.0 / K);
  o.check(a <= 0.05, fmt("KS(eps=1e-3) = %.4f (<= 0.05)", a));
  o.check(b <= a + 2 * std::sqrt(2.0) * se, fmt("KS(eps=5e-4) = %.4f (<= %.4f + 2 SE)", b, a));
  return o;
}

Outcome decay_trend() {
  Outcome o;
  const auto s = dynamics::make_preset(dynamics::Preset::single_sink);
  averaging::Observable A = [](double, double th) { return std::cos(tau * th); };
  averaging::DecayOptions d;
  d.samples = 20000;
  d.lag_max = 150;
  d.workers = workers();
  std::vector<double> rates;
  for (double e : {0.02, 0.04, 0.08}) rates.push_back(averaging::correlation_decay(s.with_epsilon(e), A, A, 5, d).rate);
  o.check(rates[0] < rates[1] && rates[1] < rates[2],
          fmt("c_eps = %.4f, %.4f, %.4f (increasing)", rates[0], rates[1], rates[2]));
  const auto ds = dynamics::make_preset(dynamics::Preset::double_sink);
  const auto c = profile_coefficients(ds);
  std::vector<double> res;
  for (double e : {0.05, 0.025, 0.0125})
    res.push_back(averaging::residence_statistics(ds.with_epsilon(e), c, 20000000, 3).mean_residence());
  o.check(res[0] < res[1] && res[1] < res[2],
          fmt("mean residence = %.2f, %.2f, %.2f (increasing as eps falls)", res[0], res[1], res[2]));
  return o;
}

Outcome mesoscopic_invariance() {
  Outcome o;
  const auto g = sde::LatticeGraph::chain(8);
  struct Case {
    sde::CoefficientFamily fam;
    double dt;
  };
  for (const auto& [fam, dt] : {Case{sde::CoefficientFamily::lo12(1), 5e-4}, Case{sde::CoefficientFamily::dl11(1, 4), 2e-3}}) {
    const auto r = sde::equilibrium_run(g, fam, 1.0, dt, 10.0, 12500, 77, {0.1, 1.0}, workers());
    const auto chi = sde::marginal_chi2(sde::pooled(r.final_energies), fam.shape(), 1.0, 50);
    double zmax = 0;
    for (const auto& s : r.symmetry) zmax = std::max(zmax, std::abs(s.z()));
    const auto name = sde::family_name(fam.id);
    o.check(chi.p_value > 0.01, fmt("%s chi2 p = %.3f (> 0.01)", name.c_str(), chi.p_value));
    o.check(zmax <= 3, fmt("%s max |symmetry z| = %.2f (<= 3)", name.c_str(), zmax));
    o.check(r.max_relative_drift <= 1e-10, fmt("%s energy drift = %.1e (<= 1e-10)", name.c_str(), r.max_relative_drift));
  }
  return o;
}

Outcome dl11_asymptotics() {
  Outcome o;
  const auto fam = sde::CoefficientFamily::dl11(1.7, 5);
  const auto a = sde::reversible_drift(fam, 1.0);
  double worst_b = 0, worst_a = 0;
  for (double v : {0.5, 1.0, 4.0}) {
    const double u = 1e-4 * v;
    worst_b = std::max(worst_b, std::abs(fam.b2(u, v) / (fam.A * u / std::sqrt(2 * v)) - 1));
    worst_a = std::max(worst_a, std::abs(a(u, v) / (fam.A * fam.n_star / (2 * std::sqrt(2 * v))) - 1));
  }
  o.check(worst_b <= 0.01, fmt("max |b^2 ratio - 1| = %.2e", worst_b));
  o.check(worst_a <= 0.01, fmt("max |a ratio - 1| = %.2e", worst_a));
  return o;
}

Outcome gap_scaling() {
  Outcome o;
  sde::GapProbeOptions g;
  g.workers = workers();
  const auto p = sde::spectral_gap_probe({4, 8, 16, 32}, {}, 2024, g);
  std::string taus;
  for (const auto& r : p.relaxation) taus += fmt("%.3f ", r.tau);
  o.check(p.exponent() >= 1.8 && p.exponent() <= 2.2,
          fmt("exponent = %.4f (2 +- 0.2); tau = %s", p.exponent(), taus.c_str()));
  return o;
}

std::vector<double> semigroup_apply(int L, double t, const std::vector<double>& u) {
  // eigen-decomposition of the periodic discrete Laplacian
  std::vector<double> out(static_cast<std::size_t>(L), 0.0);
  for (int k = 0; k < L; ++k) {
    double re = 0, im = 0;
    for (int y = 0; y < L; ++y) {
      re += u[static_cast<std::size_t>(y)] * std::cos(tau * k * y / L);
      im -= u[static_cast<std::size_t>(y)] * std::sin(tau * k * y / L);
    }
    const double damp = std::exp(t * (2 * std::cos(tau * k / L) - 2));
    for (int x = 0; x < L; ++x)
      out[static_cast<std::size_t>(x)] += damp * (re * std::cos(tau * k * x / L) - im * std::sin(tau * k * x / L)) / L;
  }
  return out;
}

Outcome hydro_limit() {
  Outcome o;
  auto u0 = [](double y) { return 1 + std::cos(tau * y); };
  const std::vector<double> times{0, 0.01, 0.02, 0.03, 0.04, 0.05};
  hydro::HydroOptions h;
  h.workers = workers();
  std::vector<double> errs, kappas;
  for (int L : {64, 128}) {
    const auto p = hydro::diffusive_experiment(L, u0, times, 200, 500 + L, h);
    const double k = hydro::fit_kappa(p);
    const auto ref = hydro::heat_reference_solve(u0, k, {times.back()}, 256);
    kappas.push_back(k);
    errs.push_back(hydro::profile_l2_error(p, ref, times.size() - 1, 0));
  }
  o.check(errs[1] <= 0.05, fmt("L=128 rel L2 = %.4f (<= 0.05, kappa %.4f)", errs[1], kappas[1]));
  o.check(errs[1] < errs[0], fmt("L=64 rel L2 = %.4f (larger, kappa %.4f)", errs[0], kappas[0]));

  // L = 8: ensemble mean against exp(t Laplacian) u0
  const int L = 8, K = 4000;
  const double dt = 1e-3, t = 1.0;
  const auto g = sde::LatticeGraph::chain(L);
  std::vector<double> start{3, 0.5, 0.2, 1, 2, 0.1, 0.1, 1.5};
  const stats::RngStream root(88, 0);
  auto reps = parallel_map(static_cast<std::size_t>(K), workers(), [&](std::size_t k) {
    auto r = root.substream(k);
    auto lat = hydro::velocities_from_energies(g, 3, start, r);
    const hydro::ExchangeNoise noise(g, r);
    for (int s = 0; s < static_cast<int>(std::lround(t / dt)); ++s) noise.step(lat, dt, r);
    std::vector<double> e(L);
    for (std::size_t x = 0; x < L; ++x) e[x] = lat.energy(x);
    return e;
  });
  const auto ref = semigroup_apply(L, t, start);
  double zmax = 0;
  for (std::size_t x = 0; x < L; ++x) {
    double m = 0, m2 = 0;
    for (const auto& e : reps) {
      m += e[x];
      m2 += e[x] * e[x];
    }
    m /= K;
    const double se = std::sqrt((m2 / K - m * m) / K);
    zmax = std::max(zmax, std::abs(m - ref[x]) / se);
  }
  o.check(zmax <= 3.5, fmt("L=8 max |mean - exp(t Lap) u0| / SE = %.2f (<= 3.5)", zmax));
  return o;
}

Outcome conservation() {
  Outcome o;
  const auto g = sde::LatticeGraph::chain(32);
  stats::RngStream r(11, 0);
  const auto half = sde::CoefficientFamily::custom([](double, double) { return 0.0; }, [](double, double) { return 0.0; }, 0.5);
  auto c = sde::equilibrium_sample(g, half, 1.0, r);
  const sde::JumpModel m;
  double worst = 0;
  for (int k = 0; k < 1000000; ++k) {
    const auto [x, y] = g.bonds[static_cast<std::size_t>(r.below(g.bonds.size()))];
    const double before = c.E[x] + c.E[y];
    sde::apply_rotation(c, x, y, m.sample_angle(r));
    if (before > 0) worst = std::max(worst, std::abs(c.E[x] + c.E[y] - before) / before);
  }
  o.check(worst <= 1e-14, fmt("jump bond energy max rel change = %.1e (<= 1e-14)", worst));

  const auto chain = sde::LatticeGraph::chain(64);
  std::vector<double> u(64);
  for (int x = 0; x < 64; ++x) u[static_cast<std::size_t>(x)] = 1 + std::cos(tau * x / 64);
  auto lat = hydro::velocities_from_energies(chain, 3, u, r);
  const double e0 = lat.total_energy();
  const hydro::ExchangeNoise noise(chain, r);
  for (int k = 0; k < 100000; ++k) noise.step(lat, 0.01, r);
  const double rel = std::abs(lat.total_energy() - e0) / e0;
  o.check(rel <= 1e-12, fmt("exchange noise rel drift over 1e5 steps = %.1e (<= 1e-12)", rel));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const auto root = fs::temp_directory_path() / "tlab_acceptance_determinism";
  int compared = 0, differing = 0;
  for (auto c : tlab::testing::fast_configs()) {
    std::vector<fs::path> dirs;
    for (unsigned w : {1u, 4u, 1u}) {
      const auto dir = root / (c.experiment + "_" + std::to_string(dirs.size()));
      fs::remove_all(dir);
      c.workers = w;
      c.out = dir.string();
      const auto r = harness::run(c);
      dirs.push_back(dir);
      for (const auto& f : r.files) {
        if (dirs.size() == 1) continue;
        ++compared;
        differing += slurp(dir / f.name) != slurp(dirs.front() / f.name);
      }
    }
  }
  fs::remove_all(root);
  o.check(compared > 0 && differing == 0,
          fmt("%d data files rerun at workers 4 and 1, %d differ from the workers=1 run", compared, differing));
  return o;
}

struct Criterion {
  const char* name;
  Outcome (*run)();
};

const Criterion criteria[] = {
    {"Green-Kubo analytic value", green_kubo_value},
    {"SRB oracle equivalence", srb_equivalence},
    {"averaging order", averaging_order},
    {"CLT", clt},
    {"WF closeness proxy", wf_closeness},
    {"decay and metastability trends", decay_trend},
    {"mesoscopic SDE invariance and reversibility", mesoscopic_invariance},
    {"DL11 asymptotics", dl11_asymptotics},
    {"spectral gap scaling", gap_scaling},
    {"hydrodynamic limit", hydro_limit},
    {"conservation suite", conservation},
    {"determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-12)")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);
  int failed = 0;
  for (int i = 1; i <= 12; ++i) {
    if (only && i != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i - 1].run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", i, criteria[i - 1].name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !out.pass;
  }
  return failed ? 1 : 0;
}
