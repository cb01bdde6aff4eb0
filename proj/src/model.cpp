#include "levcross/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace levcross {

namespace {

void check_distribution(const DistributionSpec& d, const char* name,
                        double bound) {
  if (d.kind() == DistributionSpec::Kind::grid && d.as_grid().origin < 0.0) {
    throw std::invalid_argument(std::string(name) +
                                ": support must be nonnegative");
  }
  // Sample the pdf on a grid (with a near-zero ladder, where Gamma shapes
  // below one blow up) and reject unbounded or non-finite densities.
  const double m = d.mean();
  const double sd = std::sqrt(d.variance());
  const double hi = m + 12.0 * sd;
  const int kPoints = 2048;
  auto probe = [&](double x) {
    const double p = d.pdf(x);
    if (!std::isfinite(p) || p > bound) {
      throw std::invalid_argument(
          std::string(name) + ": density at x=" + std::to_string(x) +
          " is " + std::to_string(p) + ", above the bound " +
          std::to_string(bound) + " (bounded density required)");
    }
  };
  for (int i = 0; i <= kPoints; ++i) probe(hi * i / kPoints);
  for (double x = hi * 1e-12; x < hi / kPoints; x *= 8.0) probe(x);

  const double third = d.third_moment();
  if (!std::isfinite(third)) {
    throw std::invalid_argument(std::string(name) +
                                ": third moment is not finite");
  }
}

}  // namespace

void RenewalModel::validate(double density_bound_limit) const {
  check_distribution(first_arrival, "first_arrival", density_bound_limit);
  check_distribution(inter_arrival, "inter_arrival", density_bound_limit);
  check_distribution(jump, "jump", density_bound_limit);
  if (!(premium_rate >= 0.0) || !std::isfinite(premium_rate)) {
    throw std::invalid_argument("premium_rate must be finite and >= 0");
  }
}

DerivedConstants derived_constants_from_moments(double e_t, double var_t,
                                                double e_y, double var_y) {
  for (double m : {e_t, var_t, e_y, var_y}) {
    if (!std::isfinite(m)) {
      throw std::invalid_argument("derived_constants: non-finite moment");
    }
  }
  if (!(e_t > 0.0) || !(e_y > 0.0)) {
    throw std::invalid_argument("derived_constants: means must be positive");
  }
  DerivedConstants k;
  k.e_t = e_t;
  k.var_t = var_t;
  k.e_y = e_y;
  k.var_y = var_y;
  k.b1 = e_t * e_t * var_y + e_y * e_y * var_t;
  k.b2 = e_y * var_t;
  k.b3 = e_t * var_y;
  k.b4 = var_y * var_t;
  k.m_ratio = e_t / e_y;
  k.c_star = e_y / e_t;
  k.d_squared = k.b1 / (e_y * e_y * e_y);
  if (!(k.d_squared > 0.0)) {
    throw std::invalid_argument("derived_constants: D^2 must be positive");
  }
  return k;
}

DerivedConstants derived_constants(const RenewalModel& model) {
  auto finite_or_throw = [](double x, const char* which) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string("derived_constants: ") + which +
                                  " has a non-finite moment");
    }
    return x;
  };
  finite_or_throw(model.inter_arrival.third_moment(), "inter_arrival");
  finite_or_throw(model.jump.third_moment(), "jump");
  return derived_constants_from_moments(
      finite_or_throw(model.inter_arrival.mean(), "inter_arrival"),
      finite_or_throw(model.inter_arrival.variance(), "inter_arrival"),
      finite_or_throw(model.jump.mean(), "jump"),
      finite_or_throw(model.jump.variance(), "jump"));
}

std::pair<double, double> standardized_scores(double a, double b, long n,
                                              const DerivedConstants& k) {
  const double dn = static_cast<double>(n);
  return {(a - dn * k.e_y) / std::sqrt(dn * k.var_y),
          (b - dn * k.e_t) / std::sqrt(dn * k.var_t)};
}

double imbalance_score(double a, double b, long n, const DerivedConstants& k) {
  return (b * k.e_y - a * k.e_t) / std::sqrt(k.b1 * static_cast<double>(n));
}

double count_score(double a, double b, long n, const DerivedConstants& k) {
  const double dn = static_cast<double>(n);
  return (k.b1 * dn - (k.b2 * a + k.b3 * b)) / std::sqrt(k.b1 * k.b4 * dn);
}

namespace {
double rel_residual(double lhs, double rhs) {
  return std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs));
}
}  // namespace

double pythagorean_identity_residual(double a, double b, long n,
                                     const DerivedConstants& k) {
  const auto [ys, ts] = standardized_scores(a, b, n, k);
  const double lhs = ys * ys + ts * ts;
  const double di = imbalance_score(a, b, n, k);
  const double lc = count_score(a, b, n, k);
  return rel_residual(lhs, di * di + lc * lc);
}

double count_recurrence_residual(double a, double b, long n,
                                 const DerivedConstants& k) {
  const double dn = static_cast<double>(n);
  const double l_n = count_score(a, b, n, k);
  const double l_n1 = count_score(a, b, n + 1, k);
  const double lhs = l_n1 - l_n;
  // 1 - sqrt(1+1/n) evaluated without cancellation
  const double one_minus_root = -1.0 / (dn * (1.0 + std::sqrt(1.0 + 1.0 / dn)));
  const double rhs = std::sqrt(k.b1 / (k.b4 * dn)) + l_n1 * one_minus_root;
  return rel_residual(lhs, rhs);
}

std::pair<double, double> normalization_identity_residuals(
    double a, double b, long n, const DerivedConstants& k) {
  const double dn = static_cast<double>(n);
  const double lc = count_score(a, b, n, k);
  const double di = imbalance_score(a, b, n, k);
  const double combo = std::sqrt(k.b4 / (k.b1 * dn)) * lc +
                       k.b3 / (k.e_y * std::sqrt(k.b1 * dn)) * di;
  const double plain = rel_residual(1.0 - a / (dn * k.e_y), combo);
  if (!(a > 0.0)) {
    throw std::domain_error(
        "normalization_identity_residuals: square-root variant needs a > 0");
  }
  const double root = std::sqrt(a / (dn * k.e_y));
  const double sqrt_variant =
      rel_residual(1.0 - root, combo / (1.0 + root));
  return {plain, sqrt_variant};
}

std::pair<double, double> substitution_identity_residuals(
    double u_plus_cv, double x, double c, long n, const DerivedConstants& k) {
  if (!(c > 0.0)) {
    throw std::domain_error("substitution_identity_residuals: c must be > 0");
  }
  const double dn = static_cast<double>(n);
  const double U = u_plus_cv;
  const double a = U * (1.0 + x);
  const double b = U * x / c;
  const double lc = count_score(a, b, n, k);
  const double di = imbalance_score(a, b, n, k);
  const double sqB1 = std::sqrt(k.b1);
  const double sqB4 = std::sqrt(k.b4);
  const double bracket = -lc + sqB1 / sqB4 *
                                   (std::sqrt(dn) +
                                    k.b3 / (k.b1 * c) * U / std::sqrt(dn));

  const double imbalance_rhs =
      sqB4 * (k.e_y / c - k.e_t) / (k.b2 + k.b3 / c) * bracket -
      k.e_y / (c * sqB1) * U / std::sqrt(dn);
  const double first = rel_residual(di, imbalance_rhs);

  const double one_plus_x_rhs = k.e_y * std::sqrt(k.b1 * k.b4) /
                                (k.b1 + k.b3 * (k.e_y / c - k.e_t)) *
                                std::sqrt(dn) / U * bracket;
  const double second = rel_residual(1.0 + x, one_plus_x_rhs);
  return {first, second};
}

}  // namespace levcross
