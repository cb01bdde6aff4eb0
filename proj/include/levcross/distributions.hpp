#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "levcross/rng.hpp"

namespace levcross {

// One-of distribution over a positive support with the capabilities the
// crossing-time routes need: density, cdf/survival, first three moments,
// sampling, and n-fold convolution powers.
//
// GridDensity is a uniform-grid tabulated density with trapezoid-rule mass
// convention: values[i] is the pdf at origin + i*step, the pdf is the linear
// interpolant, and all integrals (mass, cdf, moments) are trapezoid sums.

struct Exponential {
  double rate;
};

struct Gamma {
  double shape;
  double rate;
};

struct GridDensity {
  double origin;
  double step;
  std::vector<double> values;
};

struct ConvPowInfo {
  double max_step_drift = 0.0;  // largest |mass - expected| over all steps
  int convolutions = 0;
};

class DistributionSpec {
 public:
  enum class Kind { exponential, gamma, grid };

  static DistributionSpec exponential(double rate);
  static DistributionSpec gamma(double shape, double rate);
  static DistributionSpec grid(double origin, double step,
                               std::vector<double> values);
  // Tabulate `src` on a uniform grid. Defaults per the grid convention:
  // step = mean/200, domain [0, mean + 12*stddev].
  static DistributionSpec discretize(const DistributionSpec& src,
                                     double step = 0.0, double upper = 0.0);

  Kind kind() const { return kind_; }
  const Exponential& as_exponential() const;
  const Gamma& as_gamma() const;
  const GridDensity& as_grid() const;

  double pdf(double x) const;
  double cdf(double x) const;
  double survival(double x) const;

  double mean() const;
  double variance() const;
  double third_moment() const;  // E X^3; positive support makes it absolute
  // sup of the pdf, +inf when unbounded (e.g. Gamma shape < 1)
  double density_bound() const;

  double sample(RngStream& rng) const;

  // Density of the sum of this variable and an independent `other`. Defined
  // within the Gamma family at equal rates and for grids at equal step.
  DistributionSpec convolve(const DistributionSpec& other,
                            ConvPowInfo* info = nullptr) const;

  // Density of the sum of n iid copies. Exponential and Gamma powers stay in
  // the Gamma family; grids go through iterated trapezoid convolution with
  // per-step renormalization (drift reported through `info`).
  DistributionSpec conv_power(int n, ConvPowInfo* info = nullptr) const;

  // Hard cap on grid length during convolution powers.
  static constexpr std::size_t kMaxGridPoints = 1u << 22;

 private:
  DistributionSpec() = default;
  Kind kind_ = Kind::exponential;
  std::variant<Exponential, Gamma, GridDensity> form_;

  // grid-only caches built at construction
  std::vector<double> grid_cdf_;  // trapezoid cdf at the nodes
  double grid_mass_ = 0.0;
  void build_grid_cache();
};

}  // namespace levcross
