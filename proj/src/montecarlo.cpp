#include "levcross/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "levcross/rng.hpp"

namespace levcross::mc {

CrossingSample sample_crossing_time(const RenewalModel& model, double u,
                                    std::uint64_t seed, long path_index,
                                    double horizon,
                                    std::optional<double> conditioning) {
  RngStream rng(seed, static_cast<std::uint64_t>(path_index));
  const double c = model.premium_rate;

  double s = conditioning ? *conditioning : model.first_arrival.sample(rng);
  double w = model.jump.sample(rng) - c * s;
  for (;;) {
    if (w > u) {
      if (s <= horizon) return {s, false};
      return {0.0, true};
    }
    if (s > horizon) return {0.0, true};
    const double dt = model.inter_arrival.sample(rng);
    s += dt;
    w += model.jump.sample(rng) - c * dt;
  }
}

namespace {

struct Tally {
  std::vector<long> at_or_below;  // per t-grid entry
  long censored = 0;
  long exceedance = 0;  // conditional: Y1 > u + c v, crossing at exactly v

  explicit Tally(std::size_t n) : at_or_below(n, 0) {}
  void merge(const Tally& o) {
    for (std::size_t i = 0; i < at_or_below.size(); ++i) {
      at_or_below[i] += o.at_or_below[i];
    }
    censored += o.censored;
    exceedance += o.exceedance;
  }
};

EmpiricalCdf run(const RenewalModel& model, double u,
                 std::vector<double> t_grid, const SimulationPlan& plan,
                 std::optional<double> conditioning) {
  if (plan.n_paths < 1) {
    throw std::invalid_argument("simulation plan: n_paths must be >= 1");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw std::invalid_argument("simulation: t_grid must be increasing");
    }
  }
  const double max_t = t_grid.empty() ? 1.0 : t_grid.back();
  const double horizon = plan.horizon > 0.0 ? plan.horizon : 10.0 * max_t;
  if (!t_grid.empty() && t_grid.back() > horizon) {
    throw std::invalid_argument("simulation: t_grid exceeds the horizon");
  }

  const double c = model.premium_rate;
  const double exceed_level = conditioning ? u + c * *conditioning : 0.0;

  auto simulate_range = [&](long lo, long hi, Tally& tally) {
    for (long p = lo; p < hi; ++p) {
      RngStream rng(plan.seed, static_cast<std::uint64_t>(p));
      double s, w;
      if (conditioning) {
        s = *conditioning;
        const double y1 = model.jump.sample(rng);
        if (y1 > exceed_level) {
          // crossing at exactly T1 = v; not part of the conditional event
          tally.exceedance += 1;
          continue;
        }
        w = y1 - c * s;
      } else {
        s = model.first_arrival.sample(rng);
        w = model.jump.sample(rng) - c * s;
      }
      bool censored = true;
      double crossing = 0.0;
      for (;;) {
        if (w > u) {
          if (s <= horizon) {
            censored = false;
            crossing = s;
          }
          break;
        }
        if (s > horizon) break;
        const double dt = model.inter_arrival.sample(rng);
        s += dt;
        w += model.jump.sample(rng) - c * dt;
      }
      if (censored) {
        tally.censored += 1;
        continue;
      }
      for (std::size_t j = 0; j < t_grid.size(); ++j) {
        if (crossing <= t_grid[j]) tally.at_or_below[j] += 1;
      }
    }
  };

  const int threads = std::max(1, plan.threads);
  Tally total(t_grid.size());
  if (threads == 1) {
    simulate_range(0, plan.n_paths, total);
  } else {
    std::vector<Tally> partial(threads, Tally(t_grid.size()));
    std::vector<std::thread> pool;
    const long chunk = (plan.n_paths + threads - 1) / threads;
    for (int k = 0; k < threads; ++k) {
      const long lo = k * chunk;
      const long hi = std::min<long>(plan.n_paths, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(
          [&, lo, hi, k] { simulate_range(lo, hi, partial[k]); });
    }
    for (auto& th : pool) th.join();
    for (const Tally& p : partial) total.merge(p);
  }

  EmpiricalCdf out;
  out.t_grid = std::move(t_grid);
  out.n_paths = plan.n_paths;
  const double n = static_cast<double>(plan.n_paths);
  out.estimates.resize(out.t_grid.size());
  out.ci_half_widths.resize(out.t_grid.size());
  for (std::size_t j = 0; j < out.t_grid.size(); ++j) {
    const double p = static_cast<double>(total.at_or_below[j]) / n;
    out.estimates[j] = p;
    out.ci_half_widths[j] =
        std::max(1.96 * std::sqrt(p * (1.0 - p) / n), 1.0 / n);
  }
  out.censored_fraction = static_cast<double>(total.censored) / n;
  out.exceedance_fraction = static_cast<double>(total.exceedance) / n;
  return out;
}

}  // namespace

EmpiricalCdf estimate_cdf(const RenewalModel& model, double u,
                          std::vector<double> t_grid,
                          const SimulationPlan& plan) {
  return run(model, u, std::move(t_grid), plan, std::nullopt);
}

EmpiricalCdf estimate_conditional_cdf(const RenewalModel& model, double u,
                                      double v, std::vector<double> t_grid,
                                      const SimulationPlan& plan) {
  if (!(v >= 0.0)) {
    throw std::invalid_argument("estimate_conditional_cdf: v must be >= 0");
  }
  return run(model, u, std::move(t_grid), plan, v);
}

}  // namespace levcross::mc
