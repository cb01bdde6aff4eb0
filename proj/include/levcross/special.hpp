#pragma once

#include <utility>

// Special functions used throughout: error-function family, standard normal,
// Dawson integral, regularized incomplete gamma, the inverse Gaussian law,
// and the closed forms of the rational/square-root tail integrals that back
// the self-check suites. All functions are pure and thread-safe.

namespace levcross::sf {

// Error function family (Cody's rational Chebyshev approximations,
// relative error ~1e-16). erfcx(x) = exp(x^2) erfc(x) stays finite for
// arbitrarily large x > 0 and is the workhorse for stable exp*Phi products.
double erf(double x);
double erfc(double x);
double erfcx(double x);

double normal_pdf(double x);
double normal_cdf(double x);
// log Phi(x); stable arbitrarily far into the left tail (via erfcx).
double normal_cdf_log(double x);

// Dawson integral D(x) = e^{-x^2} \int_0^x e^{t^2} dt.
// Positive-term Maclaurin series for |x| <= 6.25 (no cancellation),
// asymptotic series beyond (truncation error < e^{-x^2}).
double dawson(double x);
// erfi(x) = (2/sqrt(pi)) e^{x^2} D(x). Overflows for x > ~26.6.
double erfi(double x);

// Regularized incomplete gamma: gamma_p = P(a,x) lower, gamma_q = Q(a,x) upper.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Inverse Gaussian with mean parameter mu and shape parameter lambda.
struct IgParams {
  double mean;   // mu > 0
  double shape;  // lambda > 0
};
double ig_pdf(double x, const IgParams& p);   // x > 0
double ig_cdf(double x, const IgParams& p);   // x > 0, exp*Phi term via erfcx

// Tail integrals of exp(-y^2/2) against the shifted reciprocal:
//   one:   \int_L^inf (y+R)^{-1} e^{-y^2/2} dy
//   abs_y: \int_L^inf |y| (y+R)^{-1} e^{-y^2/2} dy
// Requires L+R > 0 (pole outside the range). Computed by adaptive
// quadrature with a cutoff where the gaussian falls below 1e-18 of its peak.
enum class TailWeight { one, abs_y };
double gaussian_rational_tail(double l, double r, TailWeight w);

// Closed forms of the four rational-square-root integrals, each verified
// against quadrature by the test suites.
//
// Near k = 1 the last two forms have removable singularities ((k-1)^2 and
// (k-1)^3 denominators); in double precision accuracy degrades like
// eps/|k-1|^3, so callers should avoid |k-1| < ~0.05 when they need full
// precision.
struct RationalIntegralParams {
  double l;  // lower limit L
  double r;  // shift R; requires L+R > 0
  double m;  // scale M > 0
};

// \int_L^inf (y+R)^{-1} (y^2+M^2)^{-3/2} dy
double rational_cube_tail(const RationalIntegralParams& p);
// \int_L^inf |y| (y+R)^{-1} (y^2+M^2)^{-3/2} dy (branch on sign of L)
double rational_cube_tail_absy(const RationalIntegralParams& p);
// first:  \int_0^inf (K+y)^{-1} (1+sqrt y)^{-3} dy,             K > 0
// second: \int_0^P   (K-y)^{-1} (1+sqrt y)^{-3} dy,             0 <= P < K
double sqrt_kernel_integral(double k);
std::pair<double, double> sqrt_kernel_integrals(double k, double p_cap);
// \int_P^inf |y| (K+y)^{-1} (1+sqrt|y|)^{-3} dy,                P < 0 < K+P
double sqrt_kernel_integral_absy(double k, double p_neg);

}  // namespace levcross::sf
