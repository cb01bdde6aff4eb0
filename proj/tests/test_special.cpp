#include <cmath>
#include <random>

#include "doctest.h"
#include "levcross/quadrature.hpp"
#include "levcross/special.hpp"

using namespace levcross;

namespace {

quad::Tolerances tight() {
  quad::Tolerances t;
  t.rel = 1e-12;
  t.abs = 1e-15;
  return t;
}

}  // namespace

TEST_CASE("erf family against the libc implementation") {
  // std::erf/std::erfc are an independent implementation path
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> ux(-8.0, 8.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = ux(gen);
    CHECK(sf::erf(x) == doctest::Approx(std::erf(x)).epsilon(1e-14));
    const double rc = std::erfc(x);
    CHECK(std::fabs(sf::erfc(x) - rc) <= 1e-14 * std::max(1.0, rc) + 1e-300);
    if (x > 0) {
      CHECK(sf::erfcx(x) ==
            doctest::Approx(std::exp(x * x) * std::erfc(x)).epsilon(1e-12));
    }
  }
  CHECK(sf::erfcx(30.0) ==
        doctest::Approx(1.0 / (30.0 * std::sqrt(M_PI))).epsilon(1e-3));
  CHECK(sf::erfcx(1e9) ==
        doctest::Approx(1.0 / (1e9 * std::sqrt(M_PI))).epsilon(1e-9));
}

TEST_CASE("standard normal pdf/cdf") {
  CHECK(sf::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sf::normal_pdf(0.0) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-15));
  // anchor used at the c -> 0 limit
  CHECK(sf::normal_cdf(std::sqrt(2.5)) ==
        doctest::Approx(0.9430769).epsilon(1e-6));

  std::mt19937_64 gen(20240602);
  std::uniform_real_distribution<double> ux(-8.0, 8.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = ux(gen);
    CHECK(std::fabs(sf::normal_cdf(x) + sf::normal_cdf(-x) - 1.0) <= 1e-15);
  }
  // deep left tail stays finite and tracks the Mills ratio
  const double lg = sf::normal_cdf_log(-40.0);
  const double mills =
      -0.5 * 40.0 * 40.0 - std::log(40.0 * std::sqrt(2 * M_PI));
  CHECK(lg == doctest::Approx(mills).epsilon(1e-3));
  CHECK(sf::normal_cdf_log(1.5) ==
        doctest::Approx(std::log(sf::normal_cdf(1.5))).epsilon(1e-14));
}

TEST_CASE("dawson integral") {
  CHECK(sf::dawson(0.0) == 0.0);
  CHECK(sf::dawson(-1.3) == -sf::dawson(1.3));

  // three-term large-x expansion at x = 10
  const double asym = 1.0 / 20.0 + 1.0 / 4000.0 + 3.0 / 8e5;
  CHECK(std::fabs(sf::dawson(10.0) - asym) <= 1e-6);

  // quadrature oracle: D(x) = e^{-x^2} int_0^x e^{t^2} dt
  for (double x : {0.3, 1.0, 2.7, 4.0, 5.5, 6.2, 6.5, 8.0}) {
    auto r = quad::integrate_adaptive([](double t) { return std::exp(t * t); },
                                      0.0, x, tight());
    const double oracle = std::exp(-x * x) * r.value;
    CHECK(sf::dawson(x) == doctest::Approx(oracle).epsilon(1e-11));
  }

  CHECK(sf::erfi(1.0) ==
        doctest::Approx(2.0 / std::sqrt(M_PI) * std::exp(1.0) * sf::dawson(1.0))
            .epsilon(1e-14));
  CHECK(std::isinf(sf::erfi(27.0)));
}

TEST_CASE("regularized incomplete gamma") {
  for (double x : {0.1, 1.0, 5.0}) {
    CHECK(sf::gamma_p(1.0, x) ==
          doctest::Approx(-std::expm1(-x)).epsilon(1e-14));
  }
  // quadrature oracle at non-integer shape
  const double a = 2.7, x0 = 3.1;
  auto r = quad::integrate_adaptive(
      [a](double t) {
        return std::exp((a - 1.0) * std::log(t) - t - std::lgamma(a));
      },
      0.0, x0, tight());
  CHECK(sf::gamma_p(a, x0) == doctest::Approx(r.value).epsilon(1e-11));
  CHECK(sf::gamma_p(a, x0) + sf::gamma_q(a, x0) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("inverse Gaussian density and distribution") {
  const sf::IgParams p{1.0, 1.0};
  CHECK(sf::ig_pdf(1.0, p) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-14));
  CHECK(sf::ig_pdf(1e-8, p) == doctest::Approx(0.0));
  CHECK_THROWS_AS(sf::ig_pdf(0.0, p), std::domain_error);

  // CDF at x = 1: Phi(0) + e^2 Phi(-2)
  const double expect = 0.5 + std::exp(2.0) * sf::normal_cdf(-2.0);
  CHECK(sf::ig_cdf(1.0, p) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(sf::ig_cdf(1.0, p) == doctest::Approx(0.668102).epsilon(1e-5));

  SUBCASE("pdf mass and cdf consistency over the parameter grid") {
    for (double mu : {0.5, 1.0, 2.0, 10.0}) {
      for (double lam : {0.5, 1.0, 2.0, 10.0}) {
        const sf::IgParams q{mu, lam};
        quad::Tolerances tol;
        tol.rel = 1e-11;
        tol.abs = 1e-13;
        auto total = quad::integrate_semi_infinite(
            [&q](double x) { return x <= 0 ? 0.0 : sf::ig_pdf(x, q); }, 0.0,
            quad::DecayHint::exponential, tol);
        CHECK(std::fabs(total.value - 1.0) <= 1e-9);

        for (double x : {0.25 * mu, mu, 4.0 * mu}) {
          auto part = quad::integrate_adaptive(
              [&q](double y) { return y <= 0 ? 0.0 : sf::ig_pdf(y, q); }, 0.0,
              x, tol);
          CHECK(std::fabs(part.value - sf::ig_cdf(x, q)) <= 1e-10);
        }
      }
    }
  }

  SUBCASE("no overflow at extreme shape/mean ratio") {
    const sf::IgParams q{1e-4, 50.0};  // e^{2 lambda/mu} = e^{1e6} naively
    const double v = sf::ig_cdf(1e-4, q);
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }

  SUBCASE("cdf nondecreasing, derivative matches pdf") {
    const sf::IgParams q{2.0, 3.0};
    double prev = 0.0;
    for (double x = 0.125; x <= 32.0; x *= 1.3) {
      const double cur = sf::ig_cdf(x, q);
      CHECK(cur >= prev);
      prev = cur;
      const double h = 1e-5 * x;
      const double deriv =
          (sf::ig_cdf(x + h, q) - sf::ig_cdf(x - h, q)) / (2.0 * h);
      CHECK(std::fabs(deriv - sf::ig_pdf(x, q)) <= 1e-6);
    }
  }
}

TEST_CASE("gaussian rational tail integrals") {
  CHECK_THROWS_AS(sf::gaussian_rational_tail(-2.0, 1.0, sf::TailWeight::one),
                  std::domain_error);

  // fixed-step Riemann oracle at L=0, R=1
  {
    double riemann = 0.0;
    const double h = 1e-5;
    for (double y = 0.5 * h; y < 12.0; y += h) {
      riemann += h * std::exp(-0.5 * y * y) / (y + 1.0);
    }
    const double v = sf::gaussian_rational_tail(0.0, 1.0, sf::TailWeight::one);
    CHECK(std::fabs(v - riemann) <= 1e-8);
  }

  // large-R leading constants
  const double r = 1e3;
  CHECK(r * sf::gaussian_rational_tail(0.0, r, sf::TailWeight::one) ==
        doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(0.01));
  CHECK(r * sf::gaussian_rational_tail(0.0, r, sf::TailWeight::abs_y) ==
        doctest::Approx(1.0).epsilon(0.01));

  // negative lower limit with the pole still outside
  const double v = sf::gaussian_rational_tail(-1.0, 1.5, sf::TailWeight::abs_y);
  auto oracle = quad::integrate_adaptive(
      [](double y) {
        return std::fabs(y) * std::exp(-0.5 * y * y) / (y + 1.5);
      },
      -1.0, 12.0, tight());
  CHECK(v == doctest::Approx(oracle.value).epsilon(1e-9));
}

TEST_CASE("rational cube tail closed forms match quadrature") {
  std::mt19937_64 gen(987654321);  // documented seed
  std::uniform_real_distribution<double> uL(-2.0, 5.0);
  std::uniform_real_distribution<double> uR(0.05, 5.0);
  std::uniform_real_distribution<double> uM(0.1, 4.0);

  auto quad_oracle = [&](double L, double R, double M, bool absy) {
    auto f = [=](double y) {
      const double base = 1.0 / ((y + R) * std::pow(y * y + M * M, 1.5));
      return absy ? std::fabs(y) * base : base;
    };
    quad::Tolerances tol;
    tol.rel = 1e-11;
    tol.abs = 1e-16;
    return quad::integrate_semi_infinite(f, L, quad::DecayHint::power, tol)
        .value;
  };

  int done = 0;
  while (done < 200) {
    const double L = uL(gen), R = uR(gen), M = uM(gen);
    if (L + R < 0.05) continue;
    ++done;
    const sf::RationalIntegralParams p{L, R, M};
    CHECK(sf::rational_cube_tail(p) ==
          doctest::Approx(quad_oracle(L, R, M, false)).epsilon(1e-8));
    CHECK(sf::rational_cube_tail_absy(p) ==
          doctest::Approx(quad_oracle(L, R, M, true)).epsilon(1e-8));
  }

  // vanishing domain mass far out
  CHECK(sf::rational_cube_tail({1e6, 1.0, 1.0}) <= 1e-12);
  // branch agreement at L = 0
  const double at0p = sf::rational_cube_tail_absy({0.0, 1.3, 0.8});
  const double at0m = sf::rational_cube_tail_absy({-1e-300, 1.3, 0.8});
  CHECK(at0p == doctest::Approx(at0m).epsilon(1e-10));
  CHECK_THROWS_AS(sf::rational_cube_tail({-2.0, 1.0, 1.0}), std::domain_error);
}

TEST_CASE("sqrt kernel integrals match quadrature") {
  std::mt19937_64 gen(123456789);  // documented seed
  std::uniform_real_distribution<double> uk(0.05, 20.0);
  std::uniform_real_distribution<double> ufrac(0.05, 0.95);

  auto first_oracle = [&](double K) {
    auto f = [=](double y) {
      const double s = 1.0 + std::sqrt(y);
      return 1.0 / ((K + y) * s * s * s);
    };
    quad::Tolerances tol;
    tol.rel = 1e-11;
    tol.abs = 1e-16;
    return quad::integrate_semi_infinite(f, 0.0, quad::DecayHint::power, tol)
        .value;
  };
  auto second_oracle = [&](double K, double P) {
    auto f = [=](double y) {
      const double s = 1.0 + std::sqrt(y);
      return 1.0 / ((K - y) * s * s * s);
    };
    return quad::integrate_adaptive(f, 0.0, P, tight()).value;
  };
  auto absy_oracle = [&](double K, double P) {
    auto f = [=](double y) {
      const double s = 1.0 + std::sqrt(std::fabs(y));
      return std::fabs(y) / ((K + y) * s * s * s);
    };
    quad::Tolerances tol;
    tol.rel = 1e-11;
    tol.abs = 1e-16;
    const double neg = quad::integrate_adaptive(f, P, 0.0, tight()).value;
    const double pos =
        quad::integrate_semi_infinite(f, 0.0, quad::DecayHint::power, tol)
            .value;
    return neg + pos;
  };

  int done = 0;
  while (done < 200) {
    const double K = uk(gen);
    if (std::fabs(K - 1.0) < 0.05) continue;  // removable singularity at K=1
    const double P = ufrac(gen) * K;
    ++done;
    auto [first, second] = sf::sqrt_kernel_integrals(K, P);
    CHECK(first == doctest::Approx(first_oracle(K)).epsilon(1e-8));
    CHECK(second == doctest::Approx(second_oracle(K, P)).epsilon(1e-8));
    CHECK(sf::sqrt_kernel_integral_absy(K, -P) ==
          doctest::Approx(absy_oracle(K, -P)).epsilon(1e-8));
  }

  // the first form is regular at K = 1
  CHECK(sf::sqrt_kernel_integral(1.0) ==
        doctest::Approx(M_PI / 4.0 - 0.5).epsilon(1e-12));
  // P -> 0 empties the second domain
  CHECK(sf::sqrt_kernel_integrals(4.0, 0.0).second == 0.0);
  CHECK_THROWS_AS(sf::sqrt_kernel_integrals(4.0, 4.0), std::domain_error);
  CHECK_THROWS_AS(sf::sqrt_kernel_integral_absy(4.0, -5.0), std::domain_error);

  // continuity of the |y| form as P -> 0^-
  const double near0 = sf::sqrt_kernel_integral_absy(4.0, -1e-6);
  auto f4 = [](double y) {
    const double s = 1.0 + std::sqrt(y);
    return y / ((4.0 + y) * s * s * s);
  };
  quad::Tolerances tol;
  tol.rel = 1e-11;
  tol.abs = 1e-16;
  const double limit =
      quad::integrate_semi_infinite(f4, 0.0, quad::DecayHint::power, tol).value;
  CHECK(near0 == doctest::Approx(limit).epsilon(1e-5));
}
