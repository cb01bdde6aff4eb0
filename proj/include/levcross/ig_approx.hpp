#pragma once

#include "levcross/model.hpp"
#include "levcross/quadrature.hpp"

// The inverse-Gaussian approximation of the conditional crossing law: the
// window probability P{v < crossing <= t | T1 = v} in integral and closed
// form, plus the unconditional CDF obtained by mixing over T1.

namespace levcross::ig {

struct ApproxParams {
  double u = 0.0;        // initial level
  double c = 0.0;        // drift rate
  double v = 0.0;        // conditioning value of T1
  double t = 0.0;        // horizon, +infinity allowed
  double m_ratio = 0.0;  // M = E T / E Y
  double d_squared = 0.0;

  double level() const { return u + c * v; }  // u + c v, must be > 0
  void check() const;
};

// The defining integrand: (1+x)^{-1} times a normal density in x with mean
// c M (1+x) and variance c^2 D^2 (1+x) / (u+cv). Exposed for the quadrature
// route and for the pointwise-equivalence tests.
double window_integrand(const ApproxParams& p, double x);

// Integral form over x in [0, c(t-v)/(u+cv)]; requires c > 0.
quad::QuadratureResult crossing_prob_quadrature(const ApproxParams& p);

// Closed bracket form between x = 1 and x = c(t-v)/(u+cv) + 1; requires
// c > 0. One code path covers c below, at, and above the critical rate; all
// exp*Phi products go through erfcx and the x-limit terms are evaluated in a
// form with no 1/c cancellation, so the value is stable down to c -> 0.
double crossing_prob_closed(const ApproxParams& p);

// Dispatcher valid for c >= 0: closed form for c > 0, the analytic c -> 0
// limit at c = 0. Clamps to [0,1]; *clamped (optional) reports whether the
// clamp activated.
double crossing_prob(const ApproxParams& p, bool* clamped = nullptr);

// P{u + c v - Y1 < 0}: survival of the jump law at u + c v.
double jump_exceedance(double u, double c, double v,
                       const DistributionSpec& jump);

// Theorem-style conditional estimate with the heuristic error field
// ln(u+cv)/(u+cv) (constant C = 1, flagged uncalibrated in meta).
CdfEstimate approx_conditional_cdf(const RenewalModel& model,
                                   const CrossingQuery& q);

// Unconditional CDF: integral of jump exceedance and the window probability
// against the T1 density. When T1 and the jump are both exponential the
// first term uses its closed form.
CdfEstimate approx_unconditional_cdf(const RenewalModel& model, double u,
                                     double t);

}  // namespace levcross::ig
