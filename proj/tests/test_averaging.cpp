#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "tlab/averaging/decay.hpp"
#include "tlab/averaging/fluctuations.hpp"
#include "tlab/averaging/metastability.hpp"
#include "tlab/averaging/ode.hpp"
#include "tlab/dynamics/initial_law.hpp"
#include "tlab/dynamics/system.hpp"
#include "tlab/transfer/profile.hpp"

using namespace tlab;
using namespace tlab::averaging;
using Catch::Approx;

namespace {
constexpr double tau = 2 * std::numbers::pi;

dynamics::FastSlowSystem doubling_with(std::function<double(double, double)> w, double bound, double eps) {
  return dynamics::make_system([](double x, double) { return 2 * x; }, [](double, double) { return 2.0; },
                               std::move(w), eps, bound, false);
}

transfer::SlowCoefficients constant(double drift, double slope, double var) {
  return transfer::synthetic_coefficients([=](double z) { return drift + slope * z; }, [=](double) { return slope; },
                                          [=](double) { return var; });
}
}  // namespace

TEST_CASE("averaged ode") {
  const auto lin = solve_averaged(constant(1, 0, 0), 0.2, 3, 1e-3);
  for (double t : {0.0, 0.5, 1.2345, 3.0}) CHECK(lin.at(t) == Approx(0.2 + t).margin(1e-12));

  const auto ex = solve_averaged(constant(0, -1, 0), 0.4, 2, 1e-3);
  for (double t : {0.25, 1.0, 1.9995, 2.0}) CHECK(ex.at(t) == Approx(0.4 * std::exp(-t)).margin(1e-10));
  CHECK(ex.midpoint_residual() < 1e-9);

  const auto fine = solve_averaged(constant(0, -1, 0), 0.4, 2, 5e-4);
  CHECK(std::abs(fine.at(2) - ex.at(2)) < 1e-9);

  CHECK_THROWS_AS(solve_averaged(constant(1, 0, 0), 0, 1, 0.02), Error);
  auto narrow = constant(1, 0, 0);
  narrow.range_lo = 0;
  narrow.range_hi = 0.5;
  try {
    solve_averaged(narrow, 0.1, 1, 1e-3);
    FAIL("expected step rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::step_rejection);
  }
}

TEST_CASE("averaged ode relaxes to the single-sink zero") {
  const auto sys = dynamics::make_preset(dynamics::Preset::single_sink);
  const auto p = transfer::build_profile(sys);
  const auto c = p.coefficients();
  const auto zeros = drift_zeros(c);
  REQUIRE(zeros.size() == 2);
  double sink = -1;
  for (const auto& z : zeros)
    if (z.slope < 0) sink = z.z;
  REQUIRE(sink >= 0);
  CHECK(std::abs(c.drift(sink)) < 1e-6);
  const auto sol = solve_averaged(c, 0.5, 10, 1e-3);
  CHECK(dynamics::distance(dynamics::CircleValue(sol.at(10)), dynamics::CircleValue(sink)) < 1e-4);
}

TEST_CASE("theoretical variance") {
  const double g = 1.5, s2 = 0.7;
  const auto ou = theoretical_variance(constant(0, -g, s2), 0, {0, 0.3, 1, 2});
  CHECK(ou.values[0] == 0.0);
  for (std::size_t i = 1; i < ou.times.size(); ++i)
    CHECK(ou.values[i] == Approx(s2 * (1 - std::exp(-2 * g * ou.times[i])) / (2 * g)).margin(1e-8));
  const auto bm = theoretical_variance(constant(0.1, 0, s2), 0.3, {0.5, 1});
  CHECK(bm.values[0] == Approx(0.5 * s2).margin(1e-10));
  CHECK(bm.values[1] == Approx(s2).margin(1e-10));
  // attracted case: nondecreasing
  const auto v = theoretical_variance(constant(0, -3, 1), 0.1, {0.1, 0.2, 0.5, 1, 2});
  for (std::size_t i = 1; i < v.values.size(); ++i) CHECK(v.values[i] >= v.values[i - 1]);
}

TEST_CASE("fluctuation ensemble") {
  const auto law = dynamics::InitialLaw::uniform(0.3);
  SECTION("constant drift has no fluctuations") {
    const double eps = 1e-3;
    const auto sys = doubling_with([](double, double) { return 0.4; }, 0.4, eps);
    const auto e = fluctuation_ensemble(sys, law, constant(0.4, 0, 0), {0, 0.5, 1}, 100, 5);
    for (const auto& s : e.samples) {
      CHECK(s[0] == 0.0);
      CHECK(std::abs(s[1]) <= std::sqrt(eps) * 0.4);
      CHECK(std::abs(s[2]) <= std::sqrt(eps) * 0.4);
    }
    const auto cmp = clt_compare(e.at_time_index(2), 0.0);
    CHECK(cmp.degenerate);
  }
  SECTION("doubling map variance is the Green-Kubo value") {
    const auto sys = dynamics::make_preset(dynamics::Preset::doubling_pure).with_epsilon(1e-4);
    const auto e = fluctuation_ensemble(sys, law, constant(0, 0, 0.5), {0, 1}, 2000, 9);
    const auto z = e.at_time_index(1);
    CHECK(stats::variance(z) == Approx(0.5).epsilon(0.1));
    for (double v : e.at_time_index(0)) CHECK(v == 0.0);
    CHECK(clt_compare(z, 0.5).ks < 0.05);
  }
  CHECK_THROWS_AS(fluctuation_ensemble(dynamics::make_preset(dynamics::Preset::doubling_pure).with_epsilon(1e-3), law,
                                       constant(0, 0, 0.5), {1}, 50, 1),
                  Error);
}

TEST_CASE("clt compare") {
  stats::RngStream r(4, 0);
  int pass = 0;
  const std::size_t K = 2000;
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<double> z(K);
    for (auto& v : z) v = std::sqrt(0.8) * r.normal();
    pass += clt_compare(z, 0.8).ks < 1.36 / std::sqrt(static_cast<double>(K));
  }
  CHECK(pass >= 34);
  std::vector<double> spread{0.1, -0.2, 0.3};
  try {
    clt_compare(spread, 0.0);
    FAIL("expected degenerate variance");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_variance);
  }
}

TEST_CASE("wentzell-freidlin comparison in the deterministic limit") {
  const double eps = 1e-3;
  const auto sys = doubling_with([](double, double) { return 0.25; }, 0.25, eps);
  const auto law = dynamics::InitialLaw::uniform(0.1);
  const auto w = wf_distributional_distance(sys, law, constant(0.25, 0, 0), 1.0, 200, 1e-3, 3, {}, 1e-2);
  CHECK(w.ks == 0.0);
  CHECK(w.map_endpoints.front() == Approx(0.35).margin(1e-9));
}

TEST_CASE("correlation decay") {
  const auto d = dynamics::make_preset(dynamics::Preset::doubling_pure).with_epsilon(0);
  DecayOptions o;
  o.lag_max = 20;
  o.samples = 20000;
  o.burn_in = 1000;
  o.tail_chains = 2;
  o.tail_length = 10000;
  auto cosx = [](double x, double) { return std::cos(tau * x); };
  const auto e = correlation_decay(d, cosx, cosx, 8, o);
  CHECK(e.below_noise);
  CHECK(e.correlation[0] == Approx(0.5).margin(0.02));
  for (std::size_t n = 1; n < e.correlation.size(); ++n) CHECK(std::abs(e.correlation[n]) < 4 * e.std_error[n] + 1e-12);

  const auto c = correlation_decay(d, [](double, double) { return 2.0; }, cosx, 8, o);
  for (double v : c.correlation) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("metastability") {
  const auto sinus = transfer::synthetic_coefficients([](double z) { return std::sin(tau * z); },
                                                      [](double z) { return tau * std::cos(tau * z); },
                                                      [](double) { return 0.0; }, true);
  const auto zs = drift_zeros(sinus);
  REQUIRE(zs.size() == 2);
  for (const auto& z : zs) {
    if (z.slope < 0) {
      CHECK(z.z == Approx(0.5).margin(1e-12));
      CHECK(z.slope == Approx(-tau));
    } else {
      CHECK(std::min(z.z, 1 - z.z) < 1e-12);
    }
  }

  const auto ss = dynamics::make_preset(dynamics::Preset::single_sink).with_epsilon(0.01);
  const auto st = residence_statistics(ss, transfer::build_profile(ss).coefficients(), 10000, 1);
  CHECK(st.sinks.size() == 1);
  CHECK(st.total_transitions() == 0);

  try {
    residence_statistics(ss, transfer::synthetic_coefficients([](double) { return 1.0; }, [](double) { return 0.0; },
                                                              [](double) { return 0.0; }, true),
                         100, 1);
    FAIL("expected no sinks");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_sinks);
  }
}

TEST_CASE("double-sink residence") {
  const auto ds = dynamics::make_preset(dynamics::Preset::double_sink).with_epsilon(0.05);
  const auto c = transfer::build_profile(ds).coefficients();
  const auto st = residence_statistics(ds, c, 2000000, 17);
  CHECK(st.sinks.size() == 2);
  CHECK(st.sources.size() == 2);
  CHECK(st.total_transitions() > 0);
  for (std::size_t i = 0; i < 2; ++i) CHECK(st.transitions[i][i] == 0);
}
