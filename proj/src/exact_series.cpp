#include "levcross/exact_series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "levcross/special.hpp"

namespace levcross::exact {

namespace {

double poisson_log_pmf(double lambda, long n) {
  return -lambda + n * std::log(lambda) - std::lgamma(n + 1.0);
}

// Chernoff bound on the upper Poisson tail P{X >= n}, n > lambda.
double poisson_tail_bound(double lambda, long n) {
  if (n <= lambda) return 1.0;
  const double dn = static_cast<double>(n);
  return std::exp(-lambda + dn * (1.0 + std::log(lambda / dn)));
}

long poisson_tail_cutoff(double lambda, double eps) {
  long n = static_cast<long>(lambda) + 2;
  while (poisson_tail_bound(lambda, n) >= eps) {
    n = n + std::max<long>(4, n / 4);
  }
  return n;
}

// Upper bound on the Laplace transform E e^{-theta Y} (exact for the Gamma
// family; for grids each cell's mass is weighted by the cell's left-end
// value of the decreasing factor, a rigorous overestimate).
double laplace_upper_bound(const DistributionSpec& d, double theta) {
  switch (d.kind()) {
    case DistributionSpec::Kind::exponential: {
      const double b = d.as_exponential().rate;
      return b / (b + theta);
    }
    case DistributionSpec::Kind::gamma: {
      const auto& g = d.as_gamma();
      return std::pow(g.rate / (g.rate + theta), g.shape);
    }
    case DistributionSpec::Kind::grid: {
      const auto& g = d.as_grid();
      double mass = 0.0, acc = 0.0;
      for (std::size_t i = 0; i + 1 < g.values.size(); ++i) {
        const double cell = 0.5 * (g.values[i] + g.values[i + 1]) * g.step;
        acc += std::exp(-theta * (g.origin + i * g.step)) * cell;
        mass += cell;
      }
      return std::min(1.0, acc / mass);
    }
  }
  return 1.0;
}

// Exponential-Markov (Chernoff) bound on P{sum_{i=1}^n Y_i <= s}, theta
// minimized over a doubling grid.
double sum_below_bound(const DistributionSpec& jump, double s, long n) {
  const double scale = std::max(s, jump.mean());
  double best = 1.0;
  for (int j = -8; j <= 48; ++j) {
    const double theta = std::ldexp(1.0 / scale, j);
    const double lt = laplace_upper_bound(jump, theta);
    if (!(lt > 0.0)) continue;
    const double log_bound = theta * s + n * std::log(lt);
    best = std::min(best, std::exp(log_bound));
  }
  return best;
}

// Smallest n (by doubling) with P{M(s) >= n} certified below eps.
long general_tail_cutoff(const DistributionSpec& jump, double s, double eps,
                         long max_terms) {
  long n = std::max<long>(2, static_cast<long>(s / jump.mean()));
  while (n < max_terms && sum_below_bound(jump, s, n) >= eps) n *= 2;
  return n;
}

}  // namespace

double count_pmf(double s, const DistributionSpec& jump, int n) {
  if (!(s > 0.0)) throw std::invalid_argument("count_pmf: s must be > 0");
  if (n < 0) throw std::invalid_argument("count_pmf: n must be >= 0");
  if (n == 0) return jump.survival(s);
  if (jump.kind() == DistributionSpec::Kind::exponential) {
    const double lambda = jump.as_exponential().rate * s;
    return std::exp(poisson_log_pmf(lambda, n));
  }
  const DistributionSpec conv = jump.conv_power(n);
  auto f = [&](double z) { return conv.pdf(s - z) * jump.survival(z); };
  quad::Tolerances tol;
  tol.rel = 1e-10;
  tol.abs = 1e-13;
  return quad::integrate_adaptive(f, 0.0, s, tol).value;
}

CountingPmf counting_pmf(double s, const DistributionSpec& jump,
                         const SeriesControls& ctl) {
  CountingPmf out;
  out.s = s;
  if (jump.kind() == DistributionSpec::Kind::exponential) {
    const double lambda = jump.as_exponential().rate * s;
    const long n_max = poisson_tail_cutoff(lambda, ctl.tail_epsilon);
    out.probabilities.resize(n_max + 1);
    for (long n = 0; n <= n_max; ++n) {
      out.probabilities[n] = std::exp(poisson_log_pmf(lambda, n));
    }
    out.tail_bound = poisson_tail_bound(lambda, n_max + 1);
    return out;
  }
  const long n_max =
      general_tail_cutoff(jump, s, ctl.tail_epsilon, ctl.max_terms);
  out.probabilities.resize(n_max + 1);
  for (long n = 0; n <= n_max; ++n) {
    out.probabilities[n] = count_pmf(s, jump, static_cast<int>(n));
  }
  out.tail_bound = sum_below_bound(jump, s, n_max + 1);
  return out;
}

SeriesEvaluator::SeriesEvaluator(RenewalModel model, SeriesControls ctl)
    : model_(std::move(model)), ctl_(ctl) {
  if (ctl_.grid_step > 0.0 &&
      model_.inter_arrival.kind() == DistributionSpec::Kind::grid) {
    model_.inter_arrival =
        DistributionSpec::discretize(model_.inter_arrival, ctl_.grid_step);
  }
  t_density_bound_ = model_.inter_arrival.density_bound();
  if (!std::isfinite(t_density_bound_)) {
    throw std::invalid_argument(
        "SeriesEvaluator: inter-arrival density must be bounded");
  }
}

const DistributionSpec& SeriesEvaluator::conv_power_cached(int n) {
  auto it = conv_cache_.find(n);
  if (it != conv_cache_.end()) return it->second;
  // build missing powers incrementally: f^{*n} = f^{*(n-1)} * f
  int have = 0;
  if (!conv_cache_.empty()) have = conv_cache_.rbegin()->first;
  if (have == 0) {
    conv_cache_.emplace(1, model_.inter_arrival);
    have = 1;
  }
  while (have < n) {
    DistributionSpec next =
        conv_cache_.at(have).convolve(model_.inter_arrival);
    ++have;
    conv_cache_.emplace(have, std::move(next));
  }
  return conv_cache_.at(n);
}

SeriesEvaluator::SeriesValue SeriesEvaluator::mixture_density(double s,
                                                              double w) {
  SeriesValue out;
  if (!(s > 0.0) || !(w > 0.0)) return out;

  const bool exp_jump =
      model_.jump.kind() == DistributionSpec::Kind::exponential;
  const bool exp_t =
      model_.inter_arrival.kind() == DistributionSpec::Kind::exponential;

  if (exp_jump && exp_t) {
    // Poisson x Gamma(n) product with a pure multiplicative term recurrence
    // swept outward from the joint mode.
    const double lambda = model_.jump.as_exponential().rate * s;
    const double bt = model_.inter_arrival.as_exponential().rate;
    const double btw = bt * w;
    const double lb = lambda * btw;
    const long mode = std::max<long>(
        1, static_cast<long>((std::sqrt(1.0 + 4.0 * lb) - 1.0) * 0.5));
    const double log_mode = poisson_log_pmf(lambda, mode) + std::log(bt) +
                            (mode - 1) * std::log(btw) - btw -
                            std::lgamma(static_cast<double>(mode));
    if (log_mode < -745.0) {
      out.tail_bound = 0.0;  // entire series below the underflow floor
      return out;
    }
    const double t_mode = std::exp(log_mode);
    double sum = t_mode;
    // upward sweep
    double term = t_mode;
    long n = mode;
    long steps = 0;
    for (;;) {
      const double ratio =
          lb / (static_cast<double>(n + 1) * static_cast<double>(n));
      term *= ratio;
      ++n;
      sum += term;
      ++steps;
      if (steps >= ctl_.max_terms) {
        out.truncated = true;
        any_truncated_ = true;
        out.tail_bound += term;
        break;
      }
      if (ratio < 0.9 && term < sum * 1e-18) {
        out.tail_bound += term * ratio / (1.0 - ratio);
        break;
      }
    }
    // downward sweep
    term = t_mode;
    for (long m = mode; m > 1; --m) {
      const double ratio =
          static_cast<double>(m) * static_cast<double>(m - 1) / lb;
      term *= ratio;
      sum += term;
      if (ratio < 0.9 && term < sum * 1e-18) {
        out.tail_bound += term * ratio / (1.0 - ratio);
        break;
      }
    }
    out.value = sum;
    max_tail_ = std::max(max_tail_, out.tail_bound);
    return out;
  }

  if (exp_jump) {
    // Poisson weights, general inter-arrival convolution powers.
    const double lambda = model_.jump.as_exponential().rate * s;
    const long n_max = poisson_tail_cutoff(lambda, ctl_.tail_epsilon);
    double sum = 0.0;
    for (long n = 1; n <= std::min(n_max, ctl_.max_terms); ++n) {
      const double p = std::exp(poisson_log_pmf(lambda, n));
      const double f = conv_power_cached(static_cast<int>(n)).pdf(w);
      sum += p * f;
    }
    out.value = sum;
    out.tail_bound =
        t_density_bound_ * poisson_tail_bound(lambda, n_max + 1);
    out.truncated = n_max > ctl_.max_terms;
    any_truncated_ = any_truncated_ || out.truncated;
    max_tail_ = std::max(max_tail_, out.tail_bound);
    return out;
  }

  // General jump: counting pmf by quadrature per term.
  const long n_max =
      general_tail_cutoff(model_.jump, s, ctl_.tail_epsilon, ctl_.max_terms);
  double sum = 0.0;
  for (long n = 1; n <= std::min(n_max, ctl_.max_terms); ++n) {
    const double p = count_pmf(s, model_.jump, static_cast<int>(n));
    if (p <= 0.0) continue;
    sum += p * conv_power_cached(static_cast<int>(n)).pdf(w);
  }
  out.value = sum;
  out.tail_bound =
      t_density_bound_ * sum_below_bound(model_.jump, s, n_max + 1);
  out.truncated = n_max > ctl_.max_terms;
  any_truncated_ = any_truncated_ || out.truncated;
  max_tail_ = std::max(max_tail_, out.tail_bound);
  return out;
}

double kendall_first_passage_density(double s, double level,
                                     const RenewalModel& model,
                                     const SeriesControls& ctl) {
  if (!(s > 0.0)) {
    throw std::invalid_argument("kendall density: s must be > 0");
  }
  if (!(level > 0.0)) {
    throw std::invalid_argument("kendall density: level must be > 0");
  }
  if (!(model.premium_rate > 0.0)) {
    throw std::invalid_argument("kendall density: premium rate must be > 0");
  }
  SeriesEvaluator ev(model, ctl);
  const double w = s / model.premium_rate - level;
  if (w <= 0.0) return 0.0;  // convolution densities vanish on negatives
  return level / s * ev.mixture_density(s, w).value;
}

double conditional_crossing_density(double z, double u, double c, double v,
                                    const RenewalModel& model,
                                    const SeriesControls& ctl) {
  if (!(c > 0.0)) {
    throw std::invalid_argument("conditional density: c must be > 0");
  }
  if (z <= v) return 0.0;
  SeriesEvaluator ev(model, ctl);
  const double s = u + c * z;
  return (u + c * v) / s * ev.mixture_density(s, z - v).value;
}

namespace {

CdfEstimate finish_exact_estimate(double value, double quad_error,
                                  double tail_error, bool truncated) {
  CdfEstimate est;
  est.value = std::min(1.0, std::max(0.0, value));
  est.method = Method::exact_series;
  est.error = quad_error + tail_error;
  est.meta["quadrature_error"] = std::to_string(quad_error);
  est.meta["series_tail_bound"] = std::to_string(tail_error);
  if (truncated) est.meta["truncated"] = "true";
  return est;
}

}  // namespace

CdfEstimate conditional_cdf_exact(double u, double c, double v, double t,
                                  const RenewalModel& model,
                                  const SeriesControls& ctl) {
  if (!(t > v)) {
    throw std::invalid_argument("conditional_cdf_exact: t must exceed v");
  }
  if (!(c > 0.0)) {
    throw std::invalid_argument("conditional_cdf_exact: c must be > 0");
  }
  SeriesEvaluator ev(model, ctl);
  auto f = [&](double z) {
    const double s = u + c * z;
    const double w = z - v;
    if (w <= 0.0) return 0.0;
    return (u + c * v) / s * ev.mixture_density(s, w).value;
  };
  quad::Tolerances tol;
  tol.rel = 1e-9;
  tol.abs = 1e-13;
  const quad::QuadratureResult r = quad::integrate_adaptive(f, v, t, tol);
  return finish_exact_estimate(r.value, r.error_estimate,
                               ev.max_tail_seen() * (t - v),
                               ev.any_truncated());
}

CdfEstimate unconditional_cdf_exact(double u, double c, double t,
                                    const RenewalModel& model,
                                    const SeriesControls& ctl) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("unconditional_cdf_exact: t must be > 0");
  }
  if (!(c > 0.0)) {
    throw std::invalid_argument("unconditional_cdf_exact: c must be > 0");
  }
  SeriesEvaluator ev(model, ctl);
  quad::Tolerances inner_tol;
  inner_tol.rel = 1e-9;
  inner_tol.abs = 1e-13;
  quad::Tolerances outer_tol;
  outer_tol.rel = inner_tol.rel * 10.0;
  outer_tol.abs = inner_tol.abs * 10.0;

  double inner_error = 0.0;
  auto outer = [&](double v) {
    const double fv = model.first_arrival.pdf(v);
    if (fv <= 0.0) return 0.0;
    auto inner = [&](double z) {
      const double w = z - v;
      if (w <= 0.0) return 0.0;
      const double s = u + c * z;
      return (u + c * v) / s * ev.mixture_density(s, w).value;
    };
    const quad::QuadratureResult ri =
        quad::integrate_adaptive(inner, v, t, inner_tol);
    inner_error = std::max(inner_error, ri.error_estimate);
    return fv * (model.jump.survival(u + c * v) + ri.value);
  };
  const quad::QuadratureResult ro =
      quad::integrate_adaptive(outer, 0.0, t, outer_tol);
  return finish_exact_estimate(
      ro.value, ro.error_estimate + inner_error,
      ev.max_tail_seen() * t, ev.any_truncated());
}

CdfEstimate borovkov_dickson_cdf(double u, double c, double t, double beta_y,
                                 const DistributionSpec& f_t,
                                 const DistributionSpec& f_t1,
                                 const SeriesControls& ctl) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("borovkov_dickson_cdf: t must be > 0");
  }
  if (!(c > 0.0)) {
    throw std::invalid_argument("borovkov_dickson_cdf: c must be > 0");
  }
  if (!(beta_y > 0.0)) {
    throw std::invalid_argument("borovkov_dickson_cdf: beta_y must be > 0");
  }
  RenewalModel model{f_t1, f_t, DistributionSpec::exponential(beta_y), c};
  SeriesEvaluator ev(model, ctl);

  quad::Tolerances inner_tol;
  inner_tol.rel = 1e-9;
  inner_tol.abs = 1e-13;
  quad::Tolerances outer_tol;
  outer_tol.rel = inner_tol.rel * 10.0;
  outer_tol.abs = inner_tol.abs * 10.0;

  double inner_error = 0.0;
  auto outer = [&](double s) {
    const double lev = u + c * s;
    // Poisson-weighted series of inner v-integrals, with the series summed
    // inside a single quadrature over v (the weights do not depend on v)
    auto inner = [&](double v) {
      const double w = s - v;
      if (w <= 0.0) return 0.0;
      return (u + c * v) * f_t1.pdf(v) * ev.mixture_density(lev, w).value;
    };
    const quad::QuadratureResult ri =
        quad::integrate_adaptive(inner, 0.0, s, inner_tol);
    inner_error = std::max(inner_error, ri.error_estimate);
    return std::exp(-beta_y * lev) * f_t1.pdf(s) + ri.value / lev;
  };
  const quad::QuadratureResult ro =
      quad::integrate_adaptive(outer, 0.0, t, outer_tol);
  return finish_exact_estimate(
      ro.value, ro.error_estimate + inner_error,
      ev.max_tail_seen() * t, ev.any_truncated());
}

}  // namespace levcross::exact
