#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "levcross/model.hpp"

// Ground-truth path simulation of the compound renewal process. Crossing can
// only happen at renewal instants (the process jumps up there and drifts
// down in between), so checking the surplus at renewals is exact.
//
// Reproducibility contract: every path draws from its own RngStream keyed by
// (seed, path_index) and the aggregation is an integer sum, so results are
// bit-identical for a fixed seed regardless of the thread count.

namespace levcross::mc {

struct SimulationPlan {
  long n_paths = 10'000;
  double horizon = 0.0;  // <= 0: defaults to 10x the largest requested t
  std::uint64_t seed = 1;
  std::optional<double> conditioning;  // pin T1 to this value
  int threads = 1;
};

struct EmpiricalCdf {
  std::vector<double> t_grid;
  std::vector<double> estimates;
  std::vector<double> ci_half_widths;  // 95% normal approximation
  double censored_fraction = 0.0;
  // conditional runs only: share of paths with Y1 > u + c v (crossing at
  // exactly T1, excluded from the conditional event)
  double exceedance_fraction = 0.0;
  long n_paths = 0;
};

struct CrossingSample {
  double time = 0.0;
  bool censored = false;
};

CrossingSample sample_crossing_time(const RenewalModel& model, double u,
                                    std::uint64_t seed, long path_index,
                                    double horizon,
                                    std::optional<double> conditioning = {});

EmpiricalCdf estimate_cdf(const RenewalModel& model, double u,
                          std::vector<double> t_grid,
                          const SimulationPlan& plan);

// T1 pinned to v on every path; estimates count v < crossing <= t. Crossing
// at time exactly v (Y1 > u + c v) is tallied separately.
EmpiricalCdf estimate_conditional_cdf(const RenewalModel& model, double u,
                                      double v, std::vector<double> t_grid,
                                      const SimulationPlan& plan);

}  // namespace levcross::mc
