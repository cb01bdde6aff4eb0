#include "levcross/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace levcross::quad {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEval {
  double integral;   // Kronrod 15-point value
  double error;      // QUADPACK-style error estimate
};

PanelEval eval_panel(const std::function<double(double)>& f, double a, double b,
                     long& evaluations) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  auto sample = [&](double x) {
    const double v = f(x);
    ++evaluations;
    if (std::isnan(v)) {
      throw std::domain_error("integrand returned NaN at x = " +
                              std::to_string(x));
    }
    return v;
  };

  const double fc = sample(center);
  double result_gauss = fc * kWg[3];
  double result_kronrod = fc * kWgk[7];
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = sample(center - dx);
    fv2[j] = sample(center + dx);
    const double fsum = fv1[j] + fv2[j];
    result_kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) result_gauss += kWg[j / 2] * fsum;
  }

  double resasc = kWgk[7] * std::fabs(fc - 0.5 * result_kronrod);
  const double mean = 0.5 * result_kronrod;
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));
  }
  resasc *= std::fabs(half);

  PanelEval out;
  out.integral = result_kronrod * half;
  double err = std::fabs((result_kronrod - result_gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  out.error = err;
  return out;
}

struct Panel {
  double a, b, integral, error;
  long id;  // creation order; breaks ties so the refinement order is total
};

struct PanelWorse {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.id > y.id;
  }
};

QuadratureResult integrate_panels(const std::function<double(double)>& f,
                                  const std::vector<double>& breaks,
                                  const Tolerances& tol) {
  QuadratureResult res;
  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
  long next_id = 0;
  double total = 0.0, total_err = 0.0;

  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) continue;
    PanelEval e = eval_panel(f, breaks[i], breaks[i + 1], res.evaluations);
    heap.push({breaks[i], breaks[i + 1], e.integral, e.error, next_id++});
    total += e.integral;
    total_err += e.error;
  }

  auto tolerance_met = [&] {
    return total_err <= std::max(tol.abs, tol.rel * std::fabs(total));
  };

  while (!tolerance_met() && res.evaluations + 30 <= tol.max_evaluations &&
         !heap.empty()) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval at floating-point resolution; cannot refine further
      heap.push({worst.a, worst.b, worst.integral, 0.0, worst.id});
      total_err -= worst.error;
      continue;
    }
    PanelEval left = eval_panel(f, worst.a, mid, res.evaluations);
    PanelEval right = eval_panel(f, mid, worst.b, res.evaluations);
    total += left.integral + right.integral - worst.integral;
    total_err += left.error + right.error - worst.error;
    heap.push({worst.a, mid, left.integral, left.error, next_id++});
    heap.push({mid, worst.b, right.integral, right.error, next_id++});
  }

  // Re-accumulate from the surviving panels in a canonical order; keeps the
  // reported value independent of the heap's internal layout.
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  total = 0.0;
  total_err = 0.0;
  for (const Panel& p : panels) {
    total += p.integral;
    total_err += p.error;
  }

  res.value = total;
  res.error_estimate = total_err;
  res.converged = tolerance_met();
  return res;
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, const Tolerances& tol) {
  if (!(a <= b)) throw std::invalid_argument("integrate_adaptive: a > b");
  if (a == b) return {0.0, 0.0, 0, true};
  return integrate_panels(f, {a, b}, tol);
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double a, DecayHint hint,
                                         const Tolerances& tol) {
  if (hint == DecayHint::power) {
    auto g = [&f, a](double s) {
      const double om = 1.0 - s;
      return f(a + s / om) / (om * om);
    };
    return integrate_panels(g, {0.0, 0.5, 1.0}, tol);
  }

  // Sample |f| on a geometric ladder to locate the peak and the point where
  // the integrand has decayed below 1e-18 of it.
  QuadratureResult probe;
  const double step0 = 1e-3 * (1.0 + std::fabs(a));
  std::vector<double> ladder{a};
  std::vector<double> mags{std::fabs(f(a + 1e-12 * step0))};
  double peak = mags[0];
  double cutoff = a;
  int quiet = 0;
  for (int j = 0; j < 220; ++j) {
    const double y = a + step0 * std::pow(1.35, j);
    const double m = std::fabs(f(y));
    probe.evaluations += 1;
    ladder.push_back(y);
    mags.push_back(m);
    peak = std::max(peak, m);
    cutoff = y;
    quiet = (m <= 1e-18 * peak) ? quiet + 1 : 0;
    if (quiet >= 3 && j >= 8) break;
  }

  // Tail estimate from the observed log-slope over the last rungs.
  double tail = 0.0;
  const std::size_t n = mags.size();
  if (mags[n - 1] > 0.0 && mags[n - 2] > mags[n - 1]) {
    const double rate = std::log(mags[n - 2] / mags[n - 1]) /
                        (ladder[n - 1] - ladder[n - 2]);
    if (rate > 0.0) tail = mags[n - 1] / rate;
  } else if (peak > 0.0) {
    tail = 1e-18 * peak * (ladder[n - 1] - ladder[0]);
  }

  // Pre-split at ladder rungs carrying visible mass so the adaptive pass
  // starts near the peak even when it sits far from `a`.
  std::vector<double> breaks{a};
  for (std::size_t j = 1; j + 1 < ladder.size(); ++j) {
    if (mags[j] >= 1e-8 * peak || mags[j + 1] >= 1e-8 * peak) {
      breaks.push_back(ladder[j]);
    }
  }
  breaks.push_back(cutoff);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  QuadratureResult res = integrate_panels(f, breaks, tol);
  res.evaluations += probe.evaluations;
  res.error_estimate += tail;
  res.converged = res.converged &&
                  res.error_estimate <=
                      std::max(tol.abs, tol.rel * std::fabs(res.value)) * 2.0;
  return res;
}

}  // namespace levcross::quad
