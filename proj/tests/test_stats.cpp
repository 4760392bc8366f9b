#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "tlab/stats/distance.hpp"
#include "tlab/stats/fit.hpp"
#include "tlab/stats/rng.hpp"
#include "tlab/stats/series.hpp"

using namespace tlab;
using Catch::Approx;

TEST_CASE("philox4x32-10 known-answer vectors") {
  using tlab::stats::detail::philox4x32_10;
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32_10(A4{0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams replay and split") {
  stats::RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool all_same = true, differs_c = false, differs_d = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    all_same = all_same && x == b.next_u64();
    differs_c = differs_c || x != c.next_u64();
    differs_d = differs_d || x != d.next_u64();
  }
  CHECK(all_same);
  CHECK(differs_c);
  CHECK(differs_d);

  // a copy replays from the copy point
  stats::RngStream e(5, 0);
  e.next_u64();
  auto f = e;
  CHECK(e.uniform() == f.uniform());

  const stats::RngStream root(9, 0);
  auto s1 = root.substream(1), s1b = root.substream(1), s2 = root.substream(2);
  CHECK(s1.next_u64() == s1b.next_u64());
  CHECK(s1.next_u64() != s2.next_u64());
}

TEST_CASE("distinct streams are uncorrelated") {
  stats::RngStream a(1, 0), b(1, 1);
  const int n = 1000000;
  double s = 0;
  for (int i = 0; i < n; ++i) s += (a.uniform() - 0.5) * (b.uniform() - 0.5);
  const double corr = s / n * 12;
  CHECK(std::abs(corr) < 4 / std::sqrt(n));
}

TEST_CASE("variate moments") {
  stats::RngStream r(3, 0);
  const int n = 200000;
  std::vector<double> u(n), z(n), g(n), e(n);
  for (int i = 0; i < n; ++i) {
    u[i] = r.uniform();
    z[i] = r.normal();
    g[i] = r.gamma(1.5, 2.0);
    e[i] = r.exponential(4.0);
  }
  CHECK(stats::mean(u) == Approx(0.5).margin(5 * std::sqrt(1.0 / 12 / n)));
  CHECK(stats::mean(z) == Approx(0).margin(5 / std::sqrt(n)));
  CHECK(stats::variance(z) == Approx(1).margin(5 * std::sqrt(2.0 / n)));
  CHECK(stats::mean(g) == Approx(0.75).margin(5 * std::sqrt(1.5 / 4 / n)));
  CHECK(stats::variance(g) == Approx(1.5 / 4).epsilon(0.03));
  CHECK(stats::mean(e) == Approx(0.25).margin(5 * 0.25 / std::sqrt(n)));
  for (int i = 0; i < 1000; ++i) {
    const auto k = r.below(7);
    REQUIRE(k < 7);
  }
}

TEST_CASE("normal quantile matches boost") {
  boost::math::normal_distribution<> nd;
  for (double p : {1e-12, 1e-6, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.77, 0.97575, 0.999, 1 - 1e-9}) {
    const double ref = boost::math::quantile(nd, p);
    CHECK(stats::normal_quantile(p) == Approx(ref).epsilon(1e-13).margin(1e-14));
    CHECK(stats::normal_quantile_approx(p) == Approx(ref).epsilon(2e-9).margin(1e-12));
  }
  CHECK(stats::normal_cdf(0) == 0.5);
}

TEST_CASE("ks distance examples") {
  const auto unif = [](double x) { return std::clamp(x, 0.0, 1.0); };
  const std::vector<double> two{0.0, 1.0};
  CHECK(stats::ks_distance(two, unif) == Approx(0.5).margin(1e-15));

  const std::vector<double> constant(50, 0.3);
  CHECK(stats::ks_distance(constant, unif) == Approx(0.7).margin(1e-15));

  int pass = 0;
  const int n = 10000, runs = 40;
  for (int s = 0; s < runs; ++s) {
    stats::RngStream r(100 + s, 0);
    std::vector<double> x(n);
    for (auto& v : x) v = r.normal();
    pass += stats::ks_distance(x, [](double t) { return stats::normal_cdf(t); }) < 1.36 / std::sqrt(n);
  }
  CHECK(pass >= 34);  // ~95% expected; 34/40 is 3 binomial SE below

  stats::RngStream r(7, 0);
  std::vector<double> a(5000), b(5000);
  for (auto& v : a) v = r.normal();
  for (auto& v : b) v = r.normal();
  CHECK(stats::ks_distance_two_sample(a, b) < 1.73 * std::sqrt(2.0 / 5000));
  for (auto& v : b) v += 0.5;
  CHECK(stats::ks_distance_two_sample(a, b) > 0.15);
}

TEST_CASE("autocorrelation examples") {
  stats::RngStream r(11, 0);
  const int n = 100000;
  std::vector<double> w(n), alt(n), ar(n);
  for (int i = 0; i < n; ++i) {
    w[i] = r.normal();
    alt[i] = (i % 2) ? -1.0 : 1.0;
  }
  ar[0] = r.normal() / std::sqrt(1 - 0.81);
  for (int i = 1; i < n; ++i) ar[i] = 0.9 * ar[i - 1] + r.normal();

  const auto aw = stats::autocorrelation(w, 10);
  CHECK(aw.rho[0] == 1.0);
  CHECK(std::abs(aw.rho[1]) < 2 / std::sqrt(n) * 2);
  CHECK(stats::autocorrelation(alt, 5).rho[1] == Approx(-1).margin(1e-4));

  const auto aa = stats::autocorrelation(ar, 10);
  for (int k = 1; k <= 10; ++k) CHECK(std::abs(aa.rho[k] - std::pow(0.9, k)) < 4 * aa.std_error[k] + 1e-3);

  CHECK_THROWS_MATCHES(stats::autocorrelation(std::vector<double>(99, 1.0), 10), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::series_too_short; }));
}

TEST_CASE("log-log slope examples") {
  std::vector<double> x, y2, yh;
  for (int i = 1; i <= 8; ++i) {
    x.push_back(i * 1.7);
    y2.push_back(x.back() * x.back());
    yh.push_back(3 * std::sqrt(x.back()));
  }
  const auto f2 = stats::loglog_slope(x, y2);
  CHECK(f2.slope == Approx(2).margin(1e-12));
  CHECK(f2.r_squared == Approx(1).margin(1e-12));
  const auto fh = stats::loglog_slope(x, yh);
  CHECK(fh.slope == Approx(0.5).margin(1e-12));
  CHECK(fh.intercept == Approx(std::log(3.0)).margin(1e-12));

  int inside = 0;
  for (int s = 0; s < 100; ++s) {
    stats::RngStream r(500 + s, 0);
    std::vector<double> xs, ys;
    for (int i = 0; i < 8; ++i) {
      xs.push_back(std::pow(10.0, i / 7.0));
      ys.push_back(std::sqrt(xs.back()) * (1 + 0.05 * r.normal()));
    }
    const auto f = stats::loglog_slope(xs, ys);
    inside += f.slope >= 0.4 && f.slope <= 0.6;
  }
  CHECK(inside >= 95);

  std::vector<double> bad{1.0, -2.0, 3.0};
  CHECK_THROWS_AS(stats::loglog_slope(bad, bad), Error);
}

TEST_CASE("chi-squared examples") {
  const auto cdf = [](double x) { return stats::normal_cdf(x); };
  const auto edges = stats::equiprobable_edges([](double p) { return stats::normal_quantile(p); }, 40);
  int pass = 0;
  const int runs = 50;
  for (int s = 0; s < runs; ++s) {
    stats::RngStream r(900 + s, 0);
    std::vector<double> x(100000);
    for (auto& v : x) v = r.normal();
    pass += stats::chi2_test(x, cdf, edges).p_value > 0.01;
  }
  CHECK(pass >= 47);

  stats::RngStream r(77, 0);
  std::vector<double> shifted(100000);
  for (auto& v : shifted) v = r.normal() + 0.5;
  CHECK(stats::chi2_test(shifted, cdf, edges).p_value < 1e-6);

  // closed-form tail: chi2 with 2 dof has survival exp(-x/2)
  CHECK(stats::chi2_survival(3.0, 2) == Approx(std::exp(-1.5)).epsilon(1e-12));

  const std::vector<double> tiny{0.1, 0.2, 0.3};
  CHECK_THROWS_MATCHES(stats::chi2_test(tiny, cdf, edges), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::insufficient_sample; }));
}
