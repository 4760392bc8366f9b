#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tlab {

/// Failure categories shared by every module. The CLI maps them to exit codes.
enum class ErrorKind {
  invalid_params,
  validation,
  budget_exceeded,
  resolution_failure,
  no_convergence,
  tail_not_converged,
  series_too_short,
  nonpositive_input,
  insufficient_sample,
  window_too_short,
  degenerate_variance,
  step_rejection,
  blow_up,
  asymmetry_violation,
  positivity_failure,
  fit_failure,
  no_sinks,
  instability_detected,
  verification_error,
  quadrature_failure,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_params: return "invalid-params";
    case ErrorKind::validation: return "validation-error";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::resolution_failure: return "resolution-failure";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::tail_not_converged: return "tail-not-converged";
    case ErrorKind::series_too_short: return "series-too-short";
    case ErrorKind::nonpositive_input: return "nonpositive-input";
    case ErrorKind::insufficient_sample: return "insufficient-sample";
    case ErrorKind::window_too_short: return "window-too-short";
    case ErrorKind::degenerate_variance: return "degenerate-variance";
    case ErrorKind::step_rejection: return "step-rejection";
    case ErrorKind::blow_up: return "blow-up";
    case ErrorKind::asymmetry_violation: return "asymmetry-violation";
    case ErrorKind::positivity_failure: return "positivity-failure";
    case ErrorKind::fit_failure: return "fit-failure";
    case ErrorKind::no_sinks: return "no-sinks";
    case ErrorKind::instability_detected: return "instability-detected";
    case ErrorKind::verification_error: return "verification-error";
    case ErrorKind::quadrature_failure: return "quadrature-failure";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace tlab
