#include "levcross/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "levcross/quadrature.hpp"

namespace levcross::sf {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kInvSqrtPi = 0.56418958354775628695;

// Cody, "Rational Chebyshev approximations for the error function",
// Math. Comp. 23 (1969). Coefficients from the netlib SPECFUN CALERF tables.
constexpr double kA[5] = {3.1611237438705656, 113.864154151050156,
                          377.485237685302021, 3209.37758913846947,
                          0.185777706184603153};
constexpr double kB[4] = {23.6012909523441209, 244.024637934444173,
                          1282.61652607737228, 2844.23683343917062};
constexpr double kC[9] = {0.564188496988670089, 8.88314979438837594,
                          66.1191906371416295,  298.635138197400131,
                          881.95222124176909,   1712.04761263407058,
                          2051.07837782607147,  1230.33935479799725,
                          2.15311535474403846e-8};
constexpr double kD[8] = {15.7449261107098347, 117.693950891312499,
                          537.181101862009858, 1621.38957456669019,
                          3290.79923573345963, 4362.61909014324716,
                          3439.36767414372164, 1230.33935480374942};
constexpr double kP[6] = {0.305326634961232344,   0.360344899949804439,
                          0.125781726111229246,   0.0160837851487422766,
                          6.58749161529837803e-4, 0.0163153871373020978};
constexpr double kQ[5] = {2.56852019228982242,  1.87295284992346047,
                          0.527905102951428412, 0.0605183413124413191,
                          0.00233520497626869185};

constexpr double kErfThresh = 0.46875;

double erf_small(double x) {
  // |x| <= 0.46875
  const double z = x * x;
  double xnum = kA[4] * z;
  double xden = z;
  for (int i = 0; i < 3; ++i) {
    xnum = (xnum + kA[i]) * z;
    xden = (xden + kB[i]) * z;
  }
  return x * (xnum + kA[3]) / (xden + kB[3]);
}

// exp(y^2) erfc(y) for y >= 0.46875.
double erfcx_tail(double y) {
  if (y <= 4.0) {
    double xnum = kC[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + kC[i]) * y;
      xden = (xden + kD[i]) * y;
    }
    return (xnum + kC[7]) / (xden + kD[7]);
  }
  if (y >= 6.71e7) return kInvSqrtPi / y;
  const double z = 1.0 / (y * y);
  double xnum = kP[5] * z;
  double xden = z;
  for (int i = 0; i < 4; ++i) {
    xnum = (xnum + kP[i]) * z;
    xden = (xden + kQ[i]) * z;
  }
  const double r = z * (xnum + kP[4]) / (xden + kQ[4]);
  return (kInvSqrtPi - r) / y;
}

// exp(-y^2) with the split-square trick, which keeps the relative error of
// the exponential small for large y (Cody's sixten rounding).
double exp_neg_sq(double y) {
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

}  // namespace

double erf(double x) {
  const double y = std::fabs(x);
  if (y <= kErfThresh) return erf_small(x);
  if (y >= 6.0) return x > 0 ? 1.0 : -1.0;
  const double ec = erfcx_tail(y) * exp_neg_sq(y);
  return x > 0 ? 1.0 - ec : ec - 1.0;
}

double erfc(double x) {
  const double y = std::fabs(x);
  if (y <= kErfThresh) return 1.0 - erf_small(x);
  if (x < 0.0) {
    if (x < -26.5) return 2.0;
    return 2.0 - erfcx_tail(y) * exp_neg_sq(y);
  }
  if (x > 26.6) return 0.0;
  return erfcx_tail(y) * exp_neg_sq(y);
}

double erfcx(double x) {
  if (x >= kErfThresh) return erfcx_tail(x);
  if (x >= -kErfThresh) return std::exp(x * x) * (1.0 - erf_small(x));
  if (x < -26.62) return std::numeric_limits<double>::infinity();
  return 2.0 * std::exp(x * x) - erfcx_tail(-x);
}

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * erfc(-x / kSqrt2); }

double normal_cdf_log(double x) {
  if (x > -1.0) {
    return std::log1p(-0.5 * erfc(x / kSqrt2));
  }
  // Phi(x) = erfcx(-x/sqrt2) exp(-x^2/2) / 2 for x < 0.
  return std::log(0.5 * erfcx(-x / kSqrt2)) - 0.5 * x * x;
}

double dawson(double x) {
  const double y = std::fabs(x);
  double d;
  if (y <= 6.25) {
    // e^{-x^2} * sum_k x^{2k+1} / (k! (2k+1)); all terms positive.
    const double y2 = y * y;
    double term = y;
    double sum = y;
    for (int k = 1; k < 400; ++k) {
      term *= y2 / k;
      const double add = term / (2 * k + 1);
      sum += add;
      if (add < sum * 1e-18) break;
    }
    d = std::exp(-y2) * sum;
  } else {
    // 1/(2x) sum_k (2k-1)!!/(2x^2)^k; stop at the smallest term.
    const double inv2y2 = 0.5 / (y * y);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      const double next = term * (2 * k - 1) * inv2y2;
      if (next >= term) break;
      term = next;
      sum += term;
      if (term < sum * 1e-18) break;
    }
    d = sum / (2.0 * y);
  }
  return x < 0 ? -d : d;
}

double erfi(double x) {
  const double y = std::fabs(x);
  double v;
  if (y * y >= 708.0) {
    v = std::numeric_limits<double>::infinity();
  } else {
    const double y2 = y * y;
    double term = y;
    double sum = y;
    for (int k = 1; k < 900; ++k) {
      term *= y2 / k;
      const double add = term / (2 * k + 1);
      sum += add;
      if (add < sum * 1e-18) break;
    }
    v = 2.0 * kInvSqrtPi * sum;
  }
  return x < 0 ? -v : v;
}

namespace {

// Lower regularized incomplete gamma by series (x < a+1).
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 10000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma by Lentz continued fraction (x >= a+1).
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-17) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) {
    throw std::domain_error("gamma_p: requires a > 0 and x >= 0");
  }
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) {
    throw std::domain_error("gamma_q: requires a > 0 and x >= 0");
  }
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double ig_pdf(double x, const IgParams& p) {
  if (!(p.mean > 0.0) || !(p.shape > 0.0)) {
    throw std::domain_error("ig_pdf: mean and shape must be positive");
  }
  if (!(x > 0.0)) throw std::domain_error("ig_pdf: x must be positive");
  const double z = x - p.mean;
  return std::sqrt(p.shape / (2.0 * M_PI)) * std::pow(x, -1.5) *
         std::exp(-p.shape * z * z / (2.0 * p.mean * p.mean * x));
}

double ig_cdf(double x, const IgParams& p) {
  if (!(p.mean > 0.0) || !(p.shape > 0.0)) {
    throw std::domain_error("ig_cdf: mean and shape must be positive");
  }
  if (!(x > 0.0)) throw std::domain_error("ig_cdf: x must be positive");
  const double s = std::sqrt(p.shape / x);
  const double z1 = s * (x / p.mean - 1.0);
  const double z2 = s * (x / p.mean + 1.0);  // = -arg of the second Phi
  // exp(2 lambda/mu) Phi(-z2) = exp(-z1^2/2) erfcx(z2/sqrt2) / 2, since
  // 2 lambda/mu - z2^2/2 = -z1^2/2 identically.
  const double second = 0.5 * std::exp(-0.5 * z1 * z1) * erfcx(z2 / kSqrt2);
  const double v = normal_cdf(z1) + second;
  return std::min(1.0, std::max(0.0, v));
}

double gaussian_rational_tail(double l, double r, TailWeight w) {
  if (!(l + r > 0.0)) {
    throw std::domain_error("gaussian_rational_tail: requires L + R > 0");
  }
  auto f = [l, r, w](double y) {
    const double g = std::exp(-0.5 * y * y) / (y + r);
    return w == TailWeight::abs_y ? std::fabs(y) * g : g;
  };
  quad::Tolerances tol;
  tol.rel = 1e-12;
  tol.abs = 1e-300;
  return quad::integrate_semi_infinite(f, l, quad::DecayHint::gaussian, tol)
      .value;
}

double rational_cube_tail(const RationalIntegralParams& p) {
  const double L = p.l, R = p.r, M = p.m;
  if (!(L + R > 0.0) || !(M > 0.0)) {
    throw std::domain_error("rational_cube_tail: requires L+R > 0 and M > 0");
  }
  const double M2 = M * M;
  const double RM = R * R + M2;
  const double sL = std::sqrt(L * L + M2);
  const double sR = std::sqrt(RM);
  return R / (M2 * RM) - (M2 + L * R) / (M2 * sL * RM) +
         std::log((M2 - L * R + sL * sR) / ((L + R) * (sR - R))) /
             (RM * sR);
}

double rational_cube_tail_absy(const RationalIntegralParams& p) {
  const double L = p.l, R = p.r, M = p.m;
  if (!(L + R > 0.0) || !(M > 0.0)) {
    throw std::domain_error(
        "rational_cube_tail_absy: requires L+R > 0 and M > 0");
  }
  const double M2 = M * M;
  const double RM = R * R + M2;
  const double sL = std::sqrt(L * L + M2);
  const double sR = std::sqrt(RM);
  if (L >= 0.0) {
    return 1.0 / RM + (R - L) / (RM * sL) +
           R / (RM * sR) *
               std::log((R + L) * (sR - R) / (M2 - R * L + sR * sL));
  }
  return (2.0 * R + M) / (M * RM) - (R - L) / (RM * sL) +
         R / (RM * sR) *
             std::log(R * R * (sR - R) * (M2 - R * L + sR * sL) /
                      (M2 * (M + sR) * (M + sR) * (R + L)));
}

double sqrt_kernel_integral(double k) {
  if (!(k > 0.0)) throw std::domain_error("sqrt_kernel_integral: K must be > 0");
  const double kp1 = 1.0 + k;
  return (k - 3.0) / (kp1 * kp1) -
         M_PI * std::sqrt(k) * (k - 3.0) / (kp1 * kp1 * kp1) +
         (3.0 * k - 1.0) / (kp1 * kp1 * kp1) * std::log(k);
}

std::pair<double, double> sqrt_kernel_integrals(double k, double p_cap) {
  if (!(k > 0.0)) {
    throw std::domain_error("sqrt_kernel_integrals: K must be > 0");
  }
  if (p_cap < 0.0 || p_cap >= k) {
    throw std::domain_error(
        "sqrt_kernel_integrals: requires 0 <= P < K (singularity enters the "
        "domain otherwise)");
  }
  const double first = sqrt_kernel_integral(k);
  if (p_cap == 0.0) return {first, 0.0};
  const double sP = std::sqrt(p_cap);
  const double sK = std::sqrt(k);
  const double km1 = k - 1.0;
  const double second =
      (4.0 * sP + (3.0 + k) * p_cap) / (km1 * km1 * (1.0 + sP) * (1.0 + sP)) +
      sK * (3.0 + k) / (km1 * km1 * km1) * std::log((sK + sP) / (sK - sP)) +
      (3.0 * k + 1.0) / (km1 * km1 * km1) *
          std::log((k - p_cap) / (k * (1.0 + sP) * (1.0 + sP)));
  return {first, second};
}

double sqrt_kernel_integral_absy(double k, double p_neg) {
  if (!(k > 0.0) || !(p_neg < 0.0) || !(k + p_neg > 0.0)) {
    throw std::domain_error(
        "sqrt_kernel_integral_absy: requires K > 0, P < 0, K + P > 0");
  }
  // The closed form uses the magnitude of P throughout.
  const double q = -p_neg;
  const double sQ = std::sqrt(q);
  const double sK = std::sqrt(k);
  const double kp1 = 1.0 + k;
  const double km1 = k - 1.0;
  const double f1 = (5.0 * k + 1.0) / (kp1 * kp1);
  const double f2 = M_PI * k * sK * (k - 3.0) / (kp1 * kp1 * kp1);
  const double f3 = (5.0 * k - 1.0) / (km1 * km1);
  const double f4 = (2.0 * sQ * (1.0 - 3.0 * k) - (5.0 * k - 1.0)) /
                    (km1 * km1 * (1.0 + sQ) * (1.0 + sQ));
  const double f5 = -k * (3.0 * k - 1.0) / (kp1 * kp1 * kp1) * std::log(k);
  const double f6 =
      k * sK * (3.0 + k) / (km1 * km1 * km1) * std::log((sQ + sK) / (sK - sQ));
  const double f7 = k * (3.0 * k + 1.0) / (km1 * km1 * km1) *
                    std::log((k - q) / (k * (1.0 + sQ) * (1.0 + sQ)));
  return f1 + f2 + f3 + f4 + f5 + f6 + f7;
}

}  // namespace levcross::sf
