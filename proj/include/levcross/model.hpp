#pragma once

#include <map>
#include <string>
#include <utility>

#include "levcross/distributions.hpp"

// Problem-instance types for the level-crossing problem: the renewal model
// (first inter-arrival, generic inter-arrival, jump law, premium rate), the
// moment-derived constants shared by every route, and the algebraic
// identities between the standardized scores exposed as residual functions
// so tests can pin quantitative tolerances.

namespace levcross {

struct RenewalModel {
  DistributionSpec first_arrival;  // T1
  DistributionSpec inter_arrival;  // T
  DistributionSpec jump;           // Y
  double premium_rate = 0.0;       // c >= 0

  // Throws std::invalid_argument describing the offending distribution when
  // a density is unbounded/non-finite (sampled on a grid against `bound`)
  // or a support extends below zero.
  void validate(double density_bound_limit = 1e6) const;
};

struct DerivedConstants {
  double m_ratio;    // M = E T / E Y
  double d_squared;  // D^2 = B1 / (E Y)^3
  double c_star;     // E Y / E T
  double b1, b2, b3, b4;
  // raw moments carried along for the standardized scores
  double e_t, var_t, e_y, var_y;
};

DerivedConstants derived_constants(const RenewalModel& model);
DerivedConstants derived_constants_from_moments(double e_t, double var_t,
                                                double e_y, double var_y);

struct CrossingQuery {
  double u = 0.0;  // initial level
  double c = 0.0;  // drift rate
  double v = 0.0;  // conditioning value of T1
  double t = 0.0;  // horizon; +infinity allowed
};

enum class Method { ig_approx, exact_series, monte_carlo };

struct CdfEstimate {
  double value = 0.0;
  Method method = Method::ig_approx;
  // per-method meaning: quadrature tolerance / series truncation bound /
  // Monte Carlo CI half-width
  double error = 0.0;
  std::map<std::string, std::string> meta;
};

// Standardized scores of a jump total a, a time total b, and a count n:
//   jump score      (a - n E Y) / sqrt(n Var Y)
//   time score      (b - n E T) / sqrt(n Var T)
//   imbalance score (b E Y - a E T) / sqrt(B1 n)
//   count score     (B1 n - (B2 a + B3 b)) / sqrt(B1 B4 n)
std::pair<double, double> standardized_scores(double a, double b, long n,
                                              const DerivedConstants& k);
double imbalance_score(double a, double b, long n, const DerivedConstants& k);
double count_score(double a, double b, long n, const DerivedConstants& k);

// Residuals |LHS - RHS| / max(1, |LHS|) of the score identities.
//   pythagorean:   jump^2 + time^2 = imbalance^2 + count^2
//   recurrence:    count_{n+1} - count_n = sqrt(B1/(B4 n))
//                                          + count_{n+1} (1 - sqrt(1+1/n))
//   normalization: 1 - a/(n E Y) and its square-root variant in terms of the
//                  count and imbalance scores (variant requires a > 0)
//   substitution:  the two identities obtained at a = U(1+x), b = U x/c,
//                  expressing the imbalance score and 1+x through the count
//                  score (requires c > 0)
double pythagorean_identity_residual(double a, double b, long n,
                                     const DerivedConstants& k);
double count_recurrence_residual(double a, double b, long n,
                                 const DerivedConstants& k);
std::pair<double, double> normalization_identity_residuals(
    double a, double b, long n, const DerivedConstants& k);
std::pair<double, double> substitution_identity_residuals(
    double u_plus_cv, double x, double c, long n, const DerivedConstants& k);

}  // namespace levcross
