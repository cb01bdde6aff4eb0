#pragma once

#include <functional>

// Deterministic adaptive 1-D integration (Gauss-Kronrod 7/15 pair with
// worst-interval-first bisection). All entry points are pure: identical
// inputs give bit-identical outputs, and concurrent calls are independent.

namespace levcross::quad {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

struct Tolerances {
  double rel = 1e-10;
  double abs = 1e-12;
  long max_evaluations = 1'000'000;
};

// Integrate f over [a, b]. Endpoints are never evaluated (open rule), so
// integrable endpoint singularities are tolerated. A NaN from f anywhere
// else raises std::domain_error naming the offending abscissa.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const Tolerances& tol = {});

enum class DecayHint { gaussian, exponential, power };

// Integrate f over [a, inf). For gaussian/exponential decay the range is
// cut off where |f| falls below 1e-18 of its sampled peak and a bounded
// tail estimate (last-slope extrapolation) is folded into error_estimate.
// For power decay the substitution y = a + s/(1-s) maps to [0,1).
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double a, DecayHint hint,
                                         const Tolerances& tol = {});

}  // namespace levcross::quad
