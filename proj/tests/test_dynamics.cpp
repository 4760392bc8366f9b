#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "tlab/dynamics/initial_law.hpp"
#include "tlab/dynamics/system.hpp"
#include "tlab/dynamics/trajectory.hpp"
#include "tlab/stats/distance.hpp"

using namespace tlab;
using namespace tlab::dynamics;
using Catch::Approx;

namespace {
constexpr double tau = 2 * std::numbers::pi;

FastSlowSystem doubling_constant_drift(double eps, double w) {
  return make_system([](double x, double) { return 2 * x; }, [](double, double) { return 2.0; },
                     [w](double, double) { return w; }, eps, std::abs(w));
}

bool kind_is(const Error& e, ErrorKind k) { return e.kind() == k; }
}  // namespace

TEST_CASE("step: doubling with unit drift") {
  const auto sys = doubling_constant_drift(0.5, 1.0);
  const auto r = step(sys, {CircleValue(0.3), CircleValue(0.1)});
  CHECK(r.state.x.value() == Approx(0.6).margin(1e-15));
  CHECK(r.state.theta.value() == Approx(0.6).margin(1e-15));
  CHECK(r.slow_increment == Approx(0.5).margin(1e-15));
}

TEST_CASE("step: single-sink preset against direct formula evaluation") {
  const auto sys = make_preset(Preset::single_sink);
  REQUIRE(sys.epsilon == 0x1p-10);
  auto r = step(sys, {CircleValue(0.2), CircleValue(0.0)});
  // values from an independent double-precision evaluation of the preset formulas
  CHECK(r.state.x.value() == Approx(0.4475528258147577).margin(1e-15));
  CHECK(r.state.theta.value() == Approx(0.00029296875).margin(1e-16));
  r = step(sys, {CircleValue(0.7), CircleValue(0.35)});
  CHECK(r.state.x.value() == Approx(0.3524471741852422).margin(1e-15));
  CHECK(r.state.theta.value() == Approx(0.34962498340393067).margin(1e-15));
}

TEST_CASE("epsilon = 0 freezes the slow variable") {
  for (auto p : {Preset::doubling_pure, Preset::single_sink, Preset::double_sink, Preset::zero_average}) {
    const auto sys = make_preset(p).with_epsilon(0.0);
    stats::RngStream rng(4, 0);
    bool frozen = true;
    iterate(sys, {CircleValue(0.123), CircleValue(0.77)}, 5000, rng,
            [&](std::uint64_t, double, double th) { frozen = frozen && th == 0.77; });
    CHECK(frozen);
  }
}

TEST_CASE("slow increments are bounded by eps sup|omega|") {
  for (auto p : {Preset::single_sink, Preset::double_sink, Preset::zero_average}) {
    const auto sys = make_preset(p, {{"epsilon", 0.01}});
    stats::RngStream rng(5, 0);
    double prev = 0.4, worst = 0;
    iterate(sys, {CircleValue(0.31), CircleValue(0.4)}, 20000, rng, [&](std::uint64_t n, double, double th) {
      if (n) worst = std::max(worst, std::abs(th - prev));
      prev = th;
    });
    CHECK(worst <= sys.epsilon * sys.drift_bound * (1 + 1e-12));
  }
}

TEST_CASE("presets and expansion certificate") {
  const auto d = make_preset(Preset::doubling_pure);
  CHECK(d.expansion_lambda == Approx(2.0));
  CHECK(d.fast_map(0.3, 0.9) == Approx(0.6));
  CHECK(d.fast_map(0.3, 0.1) == Approx(0.6));
  CHECK(d.drift(0.25, 0.5) == Approx(std::cos(tau * 0.25)).margin(1e-15));

  const auto s = make_preset(Preset::single_sink);
  CHECK(s.expansion_lambda == Approx(2 - 0.1 * std::numbers::pi).epsilon(1e-4));
  CHECK(s.expansion_lambda > 1);

  CHECK_THROWS_MATCHES(make_preset(Preset::single_sink, {{"a", 0.3}}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return kind_is(e, ErrorKind::invalid_params); }));
  CHECK_THROWS_AS(make_preset(Preset::single_sink, {{"bogus", 1.0}}), Error);
  CHECK(parse_preset("double-sink") == Preset::double_sink);
  CHECK_THROWS_AS(parse_preset("nope"), Error);
}

TEST_CASE("slow paths") {
  const auto zero = doubling_constant_drift(0.01, 0.0);
  const auto p0 = simulate_slow_path(zero, InitialLaw::uniform(0.3), 1.0, 1);
  for (double v : p0.values) REQUIRE(v == 0.3);

  const auto one = doubling_constant_drift(0.01, 1.0);
  const auto p1 = simulate_slow_path(one, InitialLaw::uniform(0.3), 1.0, 1);
  CHECK(std::abs(p1.at(1.0) - 1.3) <= 0.01);
  CHECK(p1.values.back() > 1);  // unwrapped

  // reference loop for the single-sink preset
  const auto sys = make_preset(Preset::single_sink, {{"epsilon", 0x1p-8}});
  const auto path = simulate_slow_path(sys, InitialLaw::uniform(0.2), 1.0, 77);
  stats::RngStream rng(77, 0);
  double x = rng.uniform(), th = 0.2;
  for (int n = 0; n < 256; ++n) {
    const double z = th - std::floor(th);
    const double fx = 2 * x + 0.05 * std::sin(tau * x);
    th += 0x1p-8 * (0.3 - std::sin(tau * z) * (1 + 0.5 * std::cos(tau * x)));
    const double xn = fx + 0x1p-44 * rng.uniform();
    x = xn - std::floor(xn);
  }
  CHECK(path.values.size() == 257);
  CHECK(path.values.back() == Approx(th).margin(1e-12));

  const auto again = simulate_slow_path(sys, InitialLaw::uniform(0.2), 1.0, 77);
  CHECK(again.values == path.values);
}

TEST_CASE("horizon budget") {
  TrajectoryOptions o;
  o.max_steps = 1000;
  CHECK_THROWS_MATCHES(steps_for_horizon(1e-4, 1.0, o), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return kind_is(e, ErrorKind::budget_exceeded); }));
  CHECK(steps_for_horizon(0.01, 1.0) == 100);
}

TEST_CASE("initial laws") {
  const auto u = InitialLaw::uniform(0.4);
  stats::RngStream r(8, 0);
  std::vector<double> xs(100000);
  for (auto& x : xs) {
    const auto s = sample_initial(u, r);
    REQUIRE(s.theta.value() == 0.4);
    x = s.x.value();
  }
  CHECK(stats::ks_distance(xs, [](double t) { return std::clamp(t, 0.0, 1.0); }) < 0.01);

  const auto law = InitialLaw::create([](double x) { return 1 + 0.5 * std::sin(tau * x); }, 0.25);
  double s = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const auto st = sample_initial(law, r);
    REQUIRE(st.theta.value() == 0.25);
    s += std::sin(tau * st.x.value());
  }
  CHECK(s / n == Approx(0.25).margin(0.002));

  CHECK_THROWS_AS(InitialLaw::create([](double) { return 2.0; }, 0.0), Error);
  CHECK_THROWS_AS(InitialLaw::create([](double x) { return x < 0.5 ? -1.0 : 3.0; }, 0.0), Error);
}
