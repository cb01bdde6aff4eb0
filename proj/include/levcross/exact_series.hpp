#pragma once

#include <map>
#include <vector>

#include "levcross/model.hpp"
#include "levcross/quadrature.hpp"

// Exact distribution of the crossing time via the convolution series:
// counting-process pmf, the first-passage density through Kendall's
// identity, conditional density/CDF, the unconditional CDF by nested
// quadrature, and the exponential-jump specialization of Borovkov-Dickson.

namespace levcross::exact {

struct SeriesControls {
  double tail_epsilon = 1e-12;  // certified series truncation target
  long max_terms = 2'000'000;
  double grid_step = 0.0;  // > 0: re-tabulate a grid inter-arrival law at
                           // this step before building convolution powers
};

struct CountingPmf {
  double s = 0.0;
  std::vector<double> probabilities;  // n = 0 .. N
  double tail_bound = 0.0;            // certified bound on P{M(s) > N}
};

// P{M(s) = n} for M(s) = inf{k >= 1 : sum Y_i > s} - 1.
// Exponential jumps give the Poisson pmf (log-space); Gamma and grid jumps
// integrate the convolution representation
//   P{M(s)=n} = int_0^s f_Y^{*n}(s - z) P{Y > z} dz           (n >= 1)
// and n = 0 is the survival of Y at s.
double count_pmf(double s, const DistributionSpec& jump, int n);

CountingPmf counting_pmf(double s, const DistributionSpec& jump,
                         const SeriesControls& ctl);

// Per-evaluation series engine. Holds the grid convolution-power cache, so
// one evaluator per CDF evaluation keeps concurrent evaluations independent.
class SeriesEvaluator {
 public:
  SeriesEvaluator(RenewalModel model, SeriesControls ctl);

  struct SeriesValue {
    double value = 0.0;
    double tail_bound = 0.0;
    bool truncated = false;  // max_terms hit before the bound cleared
  };

  // sum_{n >= 1} P{M(s) = n} f_T^{*n}(w); zero for w <= 0.
  SeriesValue mixture_density(double s, double w);

  double max_tail_seen() const { return max_tail_; }
  bool any_truncated() const { return any_truncated_; }
  const RenewalModel& model() const { return model_; }

 private:
  const DistributionSpec& conv_power_cached(int n);

  RenewalModel model_;
  SeriesControls ctl_;
  double t_density_bound_ = 0.0;
  std::map<int, DistributionSpec> conv_cache_;
  double max_tail_ = 0.0;
  bool any_truncated_ = false;
};

// Density of the first passage of the dual process below -level, by
// Kendall's identity: p(s) = (level/s) sum_n P{M(s)=n} f_T^{*n}(s/c - level).
double kendall_first_passage_density(double s, double level,
                                     const RenewalModel& model,
                                     const SeriesControls& ctl);

// Integrand of the conditional CDF:
//   (u+cv)/(u+cz) sum_{n>=1} P{M(u+cz)=n} f_T^{*n}(z-v),  zero for z <= v.
double conditional_crossing_density(double z, double u, double c, double v,
                                    const RenewalModel& model,
                                    const SeriesControls& ctl);

// P{v < crossing <= t | T1 = v} by adaptive quadrature of the density.
CdfEstimate conditional_cdf_exact(double u, double c, double v, double t,
                                  const RenewalModel& model,
                                  const SeriesControls& ctl);

// P{crossing <= t} by nested quadrature (outer over v, inner over z; inner
// tolerance one tenth of the outer).
CdfEstimate unconditional_cdf_exact(double u, double c, double t,
                                    const RenewalModel& model,
                                    const SeriesControls& ctl);

// Exponential-jump specialization (Borovkov-Dickson form): outer integral
// over s of e^{-beta_y (u+cs)} [ f_T1(s) + (u+cs)^{-1} * Poisson-weighted
// series of inner v-integrals ].
CdfEstimate borovkov_dickson_cdf(double u, double c, double t, double beta_y,
                                 const DistributionSpec& f_t,
                                 const DistributionSpec& f_t1,
                                 const SeriesControls& ctl);

}  // namespace levcross::exact
