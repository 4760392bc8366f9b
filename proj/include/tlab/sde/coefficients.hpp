#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "tlab/error.hpp"

namespace tlab::sde {

enum class FamilyId { geodesic_dl11, anharmonic_lo12, custom };

inline FamilyId parse_family(const std::string& s) {
  if (s == "geodesic-DL11" || s == "dl11") return FamilyId::geodesic_dl11;
  if (s == "anharmonic-LO12" || s == "lo12") return FamilyId::anharmonic_lo12;
  fail(ErrorKind::invalid_params, "unknown coefficient family '" + s + "'");
}

inline std::string family_name(FamilyId f) {
  switch (f) {
    case FamilyId::geodesic_dl11: return "geodesic-DL11";
    case FamilyId::anharmonic_lo12: return "anharmonic-LO12";
    case FamilyId::custom: return "custom";
  }
  return "custom";
}

using BondFn = std::function<double(double, double)>;

/// Bond diffusion b^2(u, v) together with the single-site invariant factor
/// u^gamma e^{-beta u} of h_beta.
///
///   geodesic-DL11:   b^2 = A min(u,v) / sqrt(2 max(u,v)),  gamma = n_*/2 - 1
///   anharmonic-LO12: b^2 = A u v,                         gamma = shape - 1
struct CoefficientFamily {
  FamilyId id = FamilyId::anharmonic_lo12;
  double A = 1.0;
  int n_star = 3;
  double lo12_shape = 1.0;
  /// custom families only: user-supplied b^2 and drift
  BondFn custom_b2;
  BondFn custom_drift;
  double custom_shape = 1.0;

  static CoefficientFamily dl11(double A, int n_star) {
    require(A > 0 && n_star >= 3, ErrorKind::invalid_params, "DL11 needs A > 0, n_* >= 3");
    CoefficientFamily f;
    f.id = FamilyId::geodesic_dl11;
    f.A = A;
    f.n_star = n_star;
    return f;
  }

  static CoefficientFamily lo12(double A, double shape = 1.0) {
    require(A > 0 && shape >= 1, ErrorKind::invalid_params, "LO12 needs A > 0, shape >= 1");
    CoefficientFamily f;
    f.id = FamilyId::anharmonic_lo12;
    f.A = A;
    f.lo12_shape = shape;
    return f;
  }

  /// Synthetic family for calibration; `shape` selects the equilibrium law.
  static CoefficientFamily custom(BondFn b2, BondFn drift, double shape = 1.0) {
    CoefficientFamily f;
    f.id = FamilyId::custom;
    f.custom_b2 = std::move(b2);
    f.custom_drift = std::move(drift);
    f.custom_shape = shape;
    return f;
  }

  /// Shape of the Gamma law with density proportional to u^gamma e^{-beta u}.
  double shape() const {
    switch (id) {
      case FamilyId::geodesic_dl11: return 0.5 * n_star;
      case FamilyId::anharmonic_lo12: return lo12_shape;
      case FamilyId::custom: return custom_shape;
    }
    return 1.0;
  }
  double gamma_exponent() const { return shape() - 1; }

  double b2(double u, double v) const {
    switch (id) {
      case FamilyId::geodesic_dl11: {
        const double lo = std::min(u, v), hi = std::max(u, v);
        return hi > 0 ? A * lo / std::sqrt(2 * hi) : 0.0;
      }
      case FamilyId::anharmonic_lo12: return A * u * v;
      case FamilyId::custom: return custom_b2(u, v);
    }
    return 0;
  }
};

/// Bond drift making the per-bond generator (1/h) D (h b^2 D), D = d/du - d/dv,
/// i.e. a = D b^2 + b^2 D log h. The beta-part of D log h cancels, so the
/// drift does not depend on beta. Returns a(u, v) with a(u, v) = -a(v, u).
inline BondFn reversible_drift(const CoefficientFamily& fam, double beta) {
  require(beta > 0, ErrorKind::invalid_params, "reversible_drift: beta must be > 0");
  const double g = fam.gamma_exponent();
  switch (fam.id) {
    case FamilyId::geodesic_dl11: {
      const double A = fam.A;
      return [A, g](double u, double v) {
        if (u == v) return 0.0;
        // write the drift for lo < hi and flip the sign for u > v
        const bool flip = u > v;
        const double lo = flip ? v : u, hi = flip ? u : v;
        const double s = std::sqrt(2 * hi);
        const double d_b2 = A / s + A * lo / (s * s * s);
        const double b2 = A * lo / s;
        const double dlogh = lo > 0 ? g / lo - g / hi : 0.0;
        const double a = d_b2 + b2 * dlogh;
        return flip ? -a : a;
      };
    }
    case FamilyId::anharmonic_lo12: {
      const double A = fam.A, k = g + 1;
      return [A, k](double u, double v) { return A * k * (v - u); };
    }
    case FamilyId::custom: return fam.custom_drift;
  }
  return {};
}

/// Grid check of a(u,v) = -a(v,u) and b^2(u,v) = b^2(v,u).
inline double antisymmetry_defect(const CoefficientFamily& fam, const BondFn& a, int grid = 100, double emax = 10.0) {
  double worst = 0;
  for (int i = 1; i <= grid; ++i)
    for (int j = 1; j <= grid; ++j) {
      const double u = emax * i / grid, v = emax * j / grid;
      worst = std::max({worst, std::abs(a(u, v) + a(v, u)), std::abs(fam.b2(u, v) - fam.b2(v, u))});
    }
  return worst;
}

inline BondFn checked_reversible_drift(const CoefficientFamily& fam, double beta, double tol = 1e-10) {
  auto a = reversible_drift(fam, beta);
  require(antisymmetry_defect(fam, a) <= tol, ErrorKind::asymmetry_violation, "bond drift is not antisymmetric");
  return a;
}

}  // namespace tlab::sde
