#include "levcross/ig_approx.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "levcross/special.hpp"

namespace levcross::ig {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

bool is_inf(double t) { return std::isinf(t) && t > 0; }

// One bracket term G(x) = Phi(z1) + e^q Phi(z2) with
//   z1 = sqrt(U)/(c D sqrt(x)) * (x(1-cM) - 1)
//   z2 = -sqrt(U)/(c D sqrt(x)) * (x(1-cM) + 1)
//   q  = 2 U (1-cM) / (c^2 D^2)
// q - z2^2/2 = -z1^2/2 identically, so when z2 <= 0 the product is
// exp(-z1^2/2) erfcx(-z2/sqrt2)/2 with no overflow.
double bracket_term(double z1, double z2, double q) {
  double second;
  if (z2 <= 0.0) {
    second = 0.5 * std::exp(-0.5 * z1 * z1) * sf::erfcx(-z2 / kSqrt2);
  } else {
    second = std::exp(q) * sf::normal_cdf(z2);
  }
  return sf::normal_cdf(z1) + second;
}

}  // namespace

void ApproxParams::check() const {
  if (!(u >= 0.0) || !(c >= 0.0) || !(v >= 0.0)) {
    throw std::invalid_argument("window params: u, c, v must be >= 0");
  }
  if (!(level() > 0.0)) {
    throw std::invalid_argument("window params: u + c v must be > 0");
  }
  if (!(d_squared > 0.0)) {
    throw std::invalid_argument("window params: D^2 must be > 0");
  }
  if (!(t > v) && !is_inf(t)) {
    throw std::invalid_argument("window params: t must exceed v (or be inf)");
  }
}

double window_integrand(const ApproxParams& p, double x) {
  const double U = p.level();
  const double mean = p.c * p.m_ratio * (1.0 + x);
  const double var = p.c * p.c * p.d_squared * (1.0 + x) / U;
  const double d = x - mean;
  return std::exp(-0.5 * d * d / var) /
         ((1.0 + x) * std::sqrt(2.0 * M_PI * var));
}

quad::QuadratureResult crossing_prob_quadrature(const ApproxParams& p) {
  p.check();
  if (!(p.c > 0.0)) {
    throw std::invalid_argument("crossing_prob_quadrature: needs c > 0");
  }
  auto f = [&p](double x) { return window_integrand(p, x); };
  quad::Tolerances tol;
  tol.rel = 1e-9;
  tol.abs = 1e-13;
  if (is_inf(p.t)) {
    // subcritical drift leaves an exponential tail in x, critical and
    // supercritical a power tail ~ x^{-3/2}
    const bool subcritical = p.c * p.m_ratio < 1.0;
    return quad::integrate_semi_infinite(
        f, 0.0,
        subcritical ? quad::DecayHint::exponential : quad::DecayHint::power,
        tol);
  }
  const double hi = p.c * (p.t - p.v) / p.level();
  return quad::integrate_adaptive(f, 0.0, hi, tol);
}

double crossing_prob_closed(const ApproxParams& p) {
  p.check();
  if (!(p.c > 0.0)) {
    throw std::invalid_argument("crossing_prob_closed: needs c > 0");
  }
  const double U = p.level();
  const double cm = p.c * p.m_ratio;
  const double d = std::sqrt(p.d_squared);
  const double sqrt_lam = std::sqrt(U) / (p.c * d);  // sqrt(U/(c^2 D^2))
  const double q = 2.0 * sqrt_lam * sqrt_lam * (1.0 - cm);

  // lower limit x = 1: z1 = -M sqrt(U)/D exactly (the 1/c cancels)
  const double z1_lo = -p.m_ratio * std::sqrt(U) / d;
  const double z2_lo = -sqrt_lam * (2.0 - cm);
  const double g_lo = bracket_term(z1_lo, z2_lo, q);

  double g_hi;
  if (is_inf(p.t)) {
    // x -> inf limit of the bracket
    if (cm < 1.0) {
      g_hi = 1.0;
    } else if (cm == 1.0) {
      g_hi = 1.0;  // Phi(0-) + Phi(0-) in the limit
    } else {
      g_hi = std::exp(q);  // first Phi -> 0, second -> e^q
    }
  } else {
    const double xr = p.c * (p.t - p.v) / U;  // x_hi - 1
    const double x_hi = 1.0 + xr;
    // (x(1-cM) - 1)/c = (t-v)/U - x M, removing the small-c cancellation
    const double z1_hi =
        std::sqrt(U) / (d * std::sqrt(x_hi)) * ((p.t - p.v) / U -
                                                x_hi * p.m_ratio);
    const double z2_hi = -sqrt_lam / std::sqrt(x_hi) * (x_hi * (1.0 - cm) + 1.0);
    g_hi = bracket_term(z1_hi, z2_hi, q);
  }
  return g_hi - g_lo;
}

double crossing_prob(const ApproxParams& p, bool* clamped) {
  p.check();
  double raw;
  if (p.c > 0.0) {
    raw = crossing_prob_closed(p);
  } else {
    // analytic c -> 0 limit of the closed form; the exp*Phi terms vanish
    const double U = p.level();
    const double d = std::sqrt(p.d_squared);
    const double lo = sf::normal_cdf(-p.m_ratio * std::sqrt(U) / d);
    if (is_inf(p.t)) {
      raw = 1.0 - lo;
    } else {
      const double z_hi = ((p.t - p.v) - p.m_ratio * U) / (d * std::sqrt(U));
      raw = sf::normal_cdf(z_hi) - lo;
    }
  }
  const double out = std::min(1.0, std::max(0.0, raw));
  if (clamped) *clamped = out != raw;
  return out;
}

double jump_exceedance(double u, double c, double v,
                       const DistributionSpec& jump) {
  const double level = u + c * v;
  if (!(level >= 0.0)) {
    throw std::invalid_argument("jump_exceedance: u + c v must be >= 0");
  }
  return jump.survival(level);
}

CdfEstimate approx_conditional_cdf(const RenewalModel& model,
                                   const CrossingQuery& q) {
  model.validate();
  const DerivedConstants k = derived_constants(model);
  ApproxParams p{q.u, q.c, q.v, q.t, k.m_ratio, k.d_squared};
  bool clamped = false;
  const double value = crossing_prob(p, &clamped);
  const double U = p.level();
  CdfEstimate est;
  est.value = value;
  est.method = Method::ig_approx;
  est.error = std::log(U) / U;
  est.meta["error_model"] = "C*ln(u+cv)/(u+cv) with C=1, uncalibrated";
  if (clamped) est.meta["clamped"] = "true";
  return est;
}

CdfEstimate approx_unconditional_cdf(const RenewalModel& model, double u,
                                     double t) {
  model.validate();
  if (!(t > 0.0)) {
    throw std::invalid_argument("approx_unconditional_cdf: t must be > 0");
  }
  const DerivedConstants k = derived_constants(model);
  const double c = model.premium_rate;

  quad::Tolerances tol;
  tol.rel = 1e-9;
  tol.abs = 1e-12;

  double first_term;
  double quad_error = 0.0;
  const bool both_exponential =
      model.first_arrival.kind() == DistributionSpec::Kind::exponential &&
      model.jump.kind() == DistributionSpec::Kind::exponential;
  if (both_exponential) {
    const double bt = model.first_arrival.as_exponential().rate;
    const double by = model.jump.as_exponential().rate;
    const double r = bt + c * by;
    const double full = bt * std::exp(-by * u) / r;
    first_term = is_inf(t) ? full : full * -std::expm1(-r * t);
  } else {
    auto f1 = [&](double v) {
      return jump_exceedance(u, c, v, model.jump) * model.first_arrival.pdf(v);
    };
    quad::QuadratureResult r1 =
        is_inf(t)
            ? quad::integrate_semi_infinite(f1, 0.0,
                                            quad::DecayHint::exponential, tol)
            : quad::integrate_adaptive(f1, 0.0, t, tol);
    first_term = r1.value;
    quad_error += r1.error_estimate;
  }

  auto f2 = [&](double v) {
    ApproxParams p{u, c, v, t, k.m_ratio, k.d_squared};
    return crossing_prob(p) * model.first_arrival.pdf(v);
  };
  quad::QuadratureResult r2 =
      is_inf(t) ? quad::integrate_semi_infinite(
                      f2, 0.0, quad::DecayHint::exponential, tol)
                : quad::integrate_adaptive(f2, 0.0, t, tol);
  quad_error += r2.error_estimate;

  CdfEstimate est;
  est.value = std::min(1.0, std::max(0.0, first_term + r2.value));
  est.method = Method::ig_approx;
  est.error = quad_error + std::log(std::max(u, M_E)) / std::max(u, M_E);
  est.meta["error_model"] =
      "quadrature estimate + heuristic ln(u)/u approximation error";
  return est;
}

}  // namespace levcross::ig
