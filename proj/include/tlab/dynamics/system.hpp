#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>

#include "tlab/dynamics/circle.hpp"
#include "tlab/error.hpp"

namespace tlab::dynamics {

enum class Preset { doubling_pure, single_sink, double_sink, zero_average, custom };

inline std::string preset_name(Preset p) {
  switch (p) {
    case Preset::doubling_pure: return "doubling-pure";
    case Preset::single_sink: return "single-sink";
    case Preset::double_sink: return "double-sink";
    case Preset::zero_average: return "zero-average";
    case Preset::custom: return "custom";
  }
  return "custom";
}

inline Preset parse_preset(const std::string& s) {
  if (s == "doubling-pure") return Preset::doubling_pure;
  if (s == "single-sink") return Preset::single_sink;
  if (s == "double-sink") return Preset::double_sink;
  if (s == "zero-average") return Preset::zero_average;
  fail(ErrorKind::invalid_params, "unknown preset '" + s + "'");
}

using MapFn = std::function<double(double, double)>;

/// Skew product F(x, z) = (f(x, z), z + eps * omega(x, z)) on the two-torus.
///
/// The fast map is given through a real lift F(x, z) with f = F mod 1 and
/// dF/dx >= lambda > 1. Monotonicity of the lift is what the transfer
/// operator discretization relies on.
struct FastSlowSystem {
  MapFn fast_lift;
  MapFn fast_dx;
  MapFn drift;
  double epsilon = 0;
  double expansion_lambda = 0;  ///< min of dF/dx over the certification grid
  double drift_bound = 0;       ///< upper bound of |omega|
  bool fast_depends_on_slow = true;
  Preset preset = Preset::custom;
  std::map<std::string, double> params;

  double fast_map(double x, double z) const { return wrap01(fast_lift(x, z)); }

  FastSlowSystem with_epsilon(double eps) const {
    FastSlowSystem s = *this;
    s.epsilon = eps;
    s.params["epsilon"] = eps;
    return s;
  }
};

/// Validates and certifies a system. The expansion bound is the minimum of
/// dF/dx over a grid x grid lattice; drift_bound <= 0 requests a grid estimate.
inline FastSlowSystem make_system(MapFn lift, MapFn dx, MapFn drift, double epsilon, double drift_bound = 0,
                                  bool fast_depends_on_slow = true, int grid = 512) {
  require(epsilon >= 0 && std::isfinite(epsilon), ErrorKind::invalid_params, "epsilon must be >= 0");
  double lam = INFINITY, sup = 0;
  for (int i = 0; i < grid; ++i) {
    const double x = (i + 0.5) / grid;
    for (int j = 0; j < grid; ++j) {
      const double z = static_cast<double>(j) / grid;
      lam = std::min(lam, dx(x, z));
      if (drift_bound <= 0) sup = std::max(sup, std::abs(drift(x, z)));
    }
  }
  require(lam > 1, ErrorKind::invalid_params,
          "expansion certification failed: min dF/dx = " + std::to_string(lam) + " <= 1");
  FastSlowSystem s;
  s.fast_lift = std::move(lift);
  s.fast_dx = std::move(dx);
  s.drift = std::move(drift);
  s.epsilon = epsilon;
  s.expansion_lambda = lam;
  s.drift_bound = drift_bound > 0 ? drift_bound : sup * (1 + 1e-3);
  s.fast_depends_on_slow = fast_depends_on_slow;
  s.params["epsilon"] = epsilon;
  return s;
}

/// Preset parameters. Missing keys take defaults; unknown keys are rejected.
inline FastSlowSystem make_preset(Preset name, const std::map<std::string, double>& params = {}) {
  constexpr double tau = 2 * std::numbers::pi;
  auto get = [&](const std::string& k, double def) {
    auto it = params.find(k);
    return it == params.end() ? def : it->second;
  };
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : params) {
      bool ok = k == "epsilon";
      for (const char* a : keys) ok = ok || k == a;
      require(ok, ErrorKind::invalid_params, "preset " + preset_name(name) + ": unknown parameter '" + k + "'");
      require(std::isfinite(v), ErrorKind::invalid_params, "non-finite parameter '" + k + "'");
    }
  };
  const double eps = get("epsilon", 1.0 / 1024);
  FastSlowSystem s;
  switch (name) {
    case Preset::doubling_pure: {
      allow({});
      s = make_system([](double x, double) { return 2 * x; }, [](double, double) { return 2.0; },
                      [=](double x, double) { return std::cos(tau * x); }, eps, 1.0, false);
      break;
    }
    case Preset::single_sink: {
      allow({"a", "offset"});
      const double a = get("a", 0.05), c = get("offset", 0.3);
      s = make_system([=](double x, double) { return 2 * x + a * std::sin(tau * x); },
                      [=](double x, double) { return 2 + tau * a * std::cos(tau * x); },
                      [=](double x, double z) { return c - std::sin(tau * z) * (1 + 0.5 * std::cos(tau * x)); }, eps,
                      std::abs(c) + 1.5, false);
      s.params["a"] = a;
      s.params["offset"] = c;
      break;
    }
    case Preset::double_sink: {
      allow({"a", "strength", "noise"});
      const double a = get("a", 0.05), st = get("strength", 0.1), nz = get("noise", 1.0);
      s = make_system([=](double x, double) { return 2 * x + a * std::sin(tau * x); },
                      [=](double x, double) { return 2 + tau * a * std::cos(tau * x); },
                      [=](double x, double z) {
                        return -st * std::sin(2 * tau * z) * (1 + 0.5 * std::cos(tau * x)) + nz * std::sin(tau * x);
                      },
                      eps, 1.5 * std::abs(st) + std::abs(nz), false);
      s.params["a"] = a;
      s.params["strength"] = st;
      s.params["noise"] = nz;
      break;
    }
    case Preset::zero_average: {
      allow({"g_amplitude"});
      const double g = get("g_amplitude", 0.5);
      s = make_system([](double x, double) { return 2 * x; }, [](double, double) { return 2.0; },
                      [=](double x, double z) { return std::cos(tau * x) * (1 + g * std::sin(tau * z)); }, eps,
                      1 + std::abs(g), false);
      s.params["g_amplitude"] = g;
      break;
    }
    case Preset::custom:
      fail(ErrorKind::invalid_params, "custom systems are built with make_system");
  }
  s.preset = name;
  return s;
}

struct StepResult {
  ProductState state;
  double slow_increment;  ///< eps * omega(x, theta), before reduction mod 1
};

/// One application of the skew product.
inline StepResult step(const FastSlowSystem& sys, ProductState s) {
  const double x = s.x.value(), z = s.theta.value();
  const double inc = sys.epsilon * sys.drift(x, z);
  return {{CircleValue(sys.fast_lift(x, z)), CircleValue(z + inc)}, inc};
}

}  // namespace tlab::dynamics
