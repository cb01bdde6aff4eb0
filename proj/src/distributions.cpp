#include "levcross/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "levcross/special.hpp"

namespace levcross {

namespace {

constexpr double kMassTolerance = 1e-6;

double trapezoid_mass(const std::vector<double>& v, double step) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * step;
}

// Marsaglia-Tsang gamma sampler; shape < 1 goes through the boost
// Gamma(shape+1) * U^(1/shape).
double sample_gamma(RngStream& rng, double shape, double rate) {
  if (shape < 1.0) {
    const double u = rng.next_uniform();
    return sample_gamma(rng, shape + 1.0, rate) *
           std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, vcube;
    do {
      // normal via Box-Muller on the stream
      const double u1 = rng.next_uniform();
      const double u2 = rng.next_uniform();
      x = std::sqrt(-2.0 * std::log1p(-u1)) *
          std::cos(2.0 * M_PI * u2);
      vcube = 1.0 + c * x;
    } while (vcube <= 0.0);
    vcube = vcube * vcube * vcube;
    const double u = rng.next_uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * vcube / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - vcube + std::log(vcube))) {
      return d * vcube / rate;
    }
  }
}

}  // namespace

DistributionSpec DistributionSpec::exponential(double rate) {
  if (!(rate > 0.0)) {
    throw std::invalid_argument("Exponential rate must be positive");
  }
  DistributionSpec d;
  d.kind_ = Kind::exponential;
  d.form_ = Exponential{rate};
  return d;
}

DistributionSpec DistributionSpec::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::invalid_argument("Gamma shape and rate must be positive");
  }
  DistributionSpec d;
  d.kind_ = Kind::gamma;
  d.form_ = Gamma{shape, rate};
  return d;
}

DistributionSpec DistributionSpec::grid(double origin, double step,
                                        std::vector<double> values) {
  if (!(step > 0.0)) throw std::invalid_argument("GridDensity step must be positive");
  if (values.size() < 2) {
    throw std::invalid_argument("GridDensity needs at least two values");
  }
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("GridDensity values must be finite and >= 0");
    }
  }
  const double mass = trapezoid_mass(values, step);
  if (std::fabs(mass - 1.0) > kMassTolerance) {
    throw std::invalid_argument(
        "GridDensity trapezoid mass " + std::to_string(mass) +
        " deviates from 1 by more than 1e-6");
  }
  DistributionSpec d;
  d.kind_ = Kind::grid;
  d.form_ = GridDensity{origin, step, std::move(values)};
  d.build_grid_cache();
  return d;
}

DistributionSpec DistributionSpec::discretize(const DistributionSpec& src,
                                              double step, double upper) {
  const double m = src.mean();
  const double sd = std::sqrt(src.variance());
  if (step <= 0.0) step = m / 200.0;
  if (upper <= 0.0) upper = m + 12.0 * sd;
  const std::size_t n = static_cast<std::size_t>(std::ceil(upper / step)) + 1;
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = src.pdf(i * step);
  // renormalize so the trapezoid mass is exactly 1
  const double mass = trapezoid_mass(vals, step);
  for (double& v : vals) v /= mass;
  return grid(0.0, step, std::move(vals));
}

const Exponential& DistributionSpec::as_exponential() const {
  return std::get<Exponential>(form_);
}
const Gamma& DistributionSpec::as_gamma() const { return std::get<Gamma>(form_); }
const GridDensity& DistributionSpec::as_grid() const {
  return std::get<GridDensity>(form_);
}

void DistributionSpec::build_grid_cache() {
  const auto& g = std::get<GridDensity>(form_);
  grid_cdf_.assign(g.values.size(), 0.0);
  for (std::size_t i = 1; i < g.values.size(); ++i) {
    grid_cdf_[i] =
        grid_cdf_[i - 1] + 0.5 * (g.values[i - 1] + g.values[i]) * g.step;
  }
  grid_mass_ = grid_cdf_.back();
}

double DistributionSpec::pdf(double x) const {
  switch (kind_) {
    case Kind::exponential: {
      const auto& e = std::get<Exponential>(form_);
      return x < 0.0 ? 0.0 : e.rate * std::exp(-e.rate * x);
    }
    case Kind::gamma: {
      const auto& g = std::get<Gamma>(form_);
      if (x < 0.0) return 0.0;
      if (x == 0.0) {
        if (g.shape < 1.0) return std::numeric_limits<double>::infinity();
        return g.shape == 1.0 ? g.rate : 0.0;
      }
      return std::exp(g.shape * std::log(g.rate) +
                      (g.shape - 1.0) * std::log(x) - g.rate * x -
                      std::lgamma(g.shape));
    }
    case Kind::grid: {
      const auto& g = std::get<GridDensity>(form_);
      const double pos = (x - g.origin) / g.step;
      if (pos < 0.0 || pos > static_cast<double>(g.values.size() - 1)) return 0.0;
      const std::size_t i = std::min(static_cast<std::size_t>(pos),
                                     g.values.size() - 2);
      const double frac = pos - static_cast<double>(i);
      return g.values[i] + frac * (g.values[i + 1] - g.values[i]);
    }
  }
  return 0.0;
}

double DistributionSpec::cdf(double x) const {
  switch (kind_) {
    case Kind::exponential: {
      const auto& e = std::get<Exponential>(form_);
      return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x);
    }
    case Kind::gamma: {
      const auto& g = std::get<Gamma>(form_);
      return x <= 0.0 ? 0.0 : sf::gamma_p(g.shape, g.rate * x);
    }
    case Kind::grid: {
      const auto& g = std::get<GridDensity>(form_);
      const double pos = (x - g.origin) / g.step;
      if (pos <= 0.0) return 0.0;
      if (pos >= static_cast<double>(g.values.size() - 1)) return 1.0;
      const std::size_t i = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(i);
      const double f0 = g.values[i];
      const double f1 = g.values[i + 1];
      // integral of the linear interpolant over the partial cell
      const double part =
          g.step * frac * (f0 + 0.5 * frac * (f1 - f0));
      return std::min(1.0, (grid_cdf_[i] + part) / grid_mass_);
    }
  }
  return 0.0;
}

double DistributionSpec::survival(double x) const {
  if (kind_ == Kind::exponential) {
    const auto& e = std::get<Exponential>(form_);
    return x <= 0.0 ? 1.0 : std::exp(-e.rate * x);
  }
  if (kind_ == Kind::gamma) {
    const auto& g = std::get<Gamma>(form_);
    return x <= 0.0 ? 1.0 : sf::gamma_q(g.shape, g.rate * x);
  }
  return std::max(0.0, 1.0 - cdf(x));
}

double DistributionSpec::mean() const {
  switch (kind_) {
    case Kind::exponential:
      return 1.0 / std::get<Exponential>(form_).rate;
    case Kind::gamma: {
      const auto& g = std::get<Gamma>(form_);
      return g.shape / g.rate;
    }
    case Kind::grid: {
      const auto& g = std::get<GridDensity>(form_);
      std::vector<double> xf(g.values.size());
      for (std::size_t i = 0; i < g.values.size(); ++i) {
        xf[i] = (g.origin + i * g.step) * g.values[i];
      }
      return trapezoid_mass(xf, g.step) / grid_mass_;
    }
  }
  return 0.0;
}

double DistributionSpec::variance() const {
  switch (kind_) {
    case Kind::exponential: {
      const double r = std::get<Exponential>(form_).rate;
      return 1.0 / (r * r);
    }
    case Kind::gamma: {
      const auto& g = std::get<Gamma>(form_);
      return g.shape / (g.rate * g.rate);
    }
    case Kind::grid: {
      const auto& g = std::get<GridDensity>(form_);
      const double m = mean();
      std::vector<double> xf(g.values.size());
      for (std::size_t i = 0; i < g.values.size(); ++i) {
        const double d = (g.origin + i * g.step) - m;
        xf[i] = d * d * g.values[i];
      }
      return trapezoid_mass(xf, g.step) / grid_mass_;
    }
  }
  return 0.0;
}

double DistributionSpec::third_moment() const {
  switch (kind_) {
    case Kind::exponential: {
      const double r = std::get<Exponential>(form_).rate;
      return 6.0 / (r * r * r);
    }
    case Kind::gamma: {
      const auto& g = std::get<Gamma>(form_);
      return g.shape * (g.shape + 1.0) * (g.shape + 2.0) /
             (g.rate * g.rate * g.rate);
    }
    case Kind::grid: {
      const auto& g = std::get<GridDensity>(form_);
      std::vector<double> xf(g.values.size());
      for (std::size_t i = 0; i < g.values.size(); ++i) {
        const double x = g.origin + i * g.step;
        xf[i] = x * x * x * g.values[i];
      }
      return trapezoid_mass(xf, g.step) / grid_mass_;
    }
  }
  return 0.0;
}

double DistributionSpec::density_bound() const {
  switch (kind_) {
    case Kind::exponential:
      return std::get<Exponential>(form_).rate;
    case Kind::gamma: {
      const auto& g = std::get<Gamma>(form_);
      if (g.shape < 1.0) return std::numeric_limits<double>::infinity();
      if (g.shape == 1.0) return g.rate;
      const double mode = (g.shape - 1.0) / g.rate;
      return pdf(mode);
    }
    case Kind::grid: {
      const auto& g = std::get<GridDensity>(form_);
      return *std::max_element(g.values.begin(), g.values.end());
    }
  }
  return 0.0;
}

double DistributionSpec::sample(RngStream& rng) const {
  switch (kind_) {
    case Kind::exponential: {
      const auto& e = std::get<Exponential>(form_);
      return -std::log1p(-rng.next_uniform()) / e.rate;
    }
    case Kind::gamma: {
      const auto& g = std::get<Gamma>(form_);
      return sample_gamma(rng, g.shape, g.rate);
    }
    case Kind::grid: {
      const auto& g = std::get<GridDensity>(form_);
      const double target = rng.next_uniform() * grid_mass_;
      const auto it =
          std::upper_bound(grid_cdf_.begin(), grid_cdf_.end(), target);
      if (it == grid_cdf_.begin()) return g.origin;
      if (it == grid_cdf_.end()) {
        return g.origin + (g.values.size() - 1) * g.step;
      }
      const std::size_t i = static_cast<std::size_t>(it - grid_cdf_.begin()) - 1;
      const double need = target - grid_cdf_[i];
      const double f0 = g.values[i];
      const double f1 = g.values[i + 1];
      // solve step*(f0 w + (f1-f0) w^2/2) = need for w in [0,1]
      double w;
      const double aq = 0.5 * (f1 - f0) * g.step;
      const double bq = f0 * g.step;
      if (std::fabs(aq) < 1e-300) {
        w = bq > 0.0 ? need / bq : 0.0;
      } else {
        const double disc = std::max(0.0, bq * bq + 4.0 * aq * need);
        w = (-bq + std::sqrt(disc)) / (2.0 * aq);
      }
      w = std::clamp(w, 0.0, 1.0);
      return g.origin + (static_cast<double>(i) + w) * g.step;
    }
  }
  return 0.0;
}

namespace {

GridDensity convolve_grids(const GridDensity& f, const GridDensity& h,
                           ConvPowInfo* info) {
  const double step = f.step;
  const std::size_t nf = f.values.size();
  const std::size_t nh = h.values.size();
  const std::size_t nr = nf + nh - 1;
  if (nr > DistributionSpec::kMaxGridPoints) {
    throw std::runtime_error(
        "grid convolution: support exceeds the configured domain (" +
        std::to_string(nr) +
        " points); use a larger grid step or a smaller power");
  }
  GridDensity r{f.origin + h.origin, step, std::vector<double>(nr, 0.0)};
  for (std::size_t i = 0; i < nr; ++i) {
    const std::size_t jlo = i >= nh - 1 ? i - (nh - 1) : 0;
    const std::size_t jhi = std::min(i, nf - 1);
    if (jlo >= jhi) continue;  // degenerate overlap integrates to zero
    double s = 0.5 * (f.values[jlo] * h.values[i - jlo] +
                      f.values[jhi] * h.values[i - jhi]);
    for (std::size_t j = jlo + 1; j < jhi; ++j) {
      s += f.values[j] * h.values[i - j];
    }
    r.values[i] = s * step;
  }
  const double mass = trapezoid_mass(r.values, step);
  if (mass > 0.0) {
    for (double& v : r.values) v /= mass;
  }
  if (info) {
    info->max_step_drift =
        std::max(info->max_step_drift, std::fabs(mass - 1.0));
    info->convolutions += 1;
  }
  return r;
}

GridDensity normalized_copy(const GridDensity& g) {
  GridDensity out = g;
  const double mass = trapezoid_mass(out.values, out.step);
  for (double& v : out.values) v /= mass;
  return out;
}

double gamma_shape_of(const DistributionSpec& d) {
  return d.kind() == DistributionSpec::Kind::exponential
             ? 1.0
             : d.as_gamma().shape;
}

double gamma_rate_of(const DistributionSpec& d) {
  return d.kind() == DistributionSpec::Kind::exponential
             ? d.as_exponential().rate
             : d.as_gamma().rate;
}

}  // namespace

DistributionSpec DistributionSpec::convolve(const DistributionSpec& other,
                                            ConvPowInfo* info) const {
  const bool self_grid = kind_ == Kind::grid;
  const bool other_grid = other.kind() == Kind::grid;
  if (self_grid != other_grid) {
    throw std::invalid_argument("convolve: mixed grid/parametric operands");
  }
  if (!self_grid) {
    const double r1 = gamma_rate_of(*this);
    const double r2 = gamma_rate_of(other);
    if (r1 != r2) {
      throw std::invalid_argument(
          "convolve: Gamma-family convolution needs equal rates");
    }
    return gamma(gamma_shape_of(*this) + gamma_shape_of(other), r1);
  }
  const auto& f = std::get<GridDensity>(form_);
  const auto& h = other.as_grid();
  if (f.step != h.step) {
    throw std::invalid_argument("convolve: grids must share one step");
  }
  GridDensity r = convolve_grids(f, h, info);
  return grid(r.origin, r.step, std::move(r.values));
}

DistributionSpec DistributionSpec::conv_power(int n, ConvPowInfo* info) const {
  if (n < 1) throw std::invalid_argument("conv_power: n must be >= 1");
  switch (kind_) {
    case Kind::exponential: {
      const auto& e = std::get<Exponential>(form_);
      return n == 1 ? *this : gamma(static_cast<double>(n), e.rate);
    }
    case Kind::gamma: {
      const auto& g = std::get<Gamma>(form_);
      return n == 1 ? *this : gamma(n * g.shape, g.rate);
    }
    case Kind::grid:
      break;
  }

  // binary powering of the trapezoid convolution; the base is normalized up
  // front so sub-tolerance input drift is not compounded
  GridDensity base = normalized_copy(std::get<GridDensity>(form_));
  GridDensity acc;
  bool have_acc = false;
  int e = n;
  while (e > 0) {
    if (e & 1) {
      acc = have_acc ? convolve_grids(acc, base, info) : base;
      have_acc = true;
    }
    e >>= 1;
    if (e > 0) base = convolve_grids(base, base, info);
  }
  return grid(acc.origin, acc.step, std::move(acc.values));
}

}  // namespace levcross
