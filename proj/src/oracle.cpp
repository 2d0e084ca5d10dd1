#include "fast/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "fast/error.hpp"

namespace fast {

namespace {

struct Best {
  double energy = std::numeric_limits<double>::infinity();
  std::int64_t index = std::numeric_limits<std::int64_t>::max();

  void offer(double e, std::int64_t idx) {
    if (e < energy || (e == energy && idx < index)) {
      energy = e;
      index = idx;
    }
  }
};

struct Grid {
  SplitLimits mins;
  double step;
  int n;

  TimeSplit at(int i, int j) const {
    return {mins.alpha_min + i * step, mins.beta_min + j * step, mins.gamma_min + (n - i - j) * step};
  }
};

Grid make_grid(const SplitLimits& mins, int grid_n) {
  if (grid_n < 10) throw ConfigError("brute_force_oracle needs grid_n >= 10");
  if (mins.sum() > 1.0) throw InfeasibleError("latency budget unattainable: split lower limits sum past 1");
  return {mins, (1.0 - mins.sum()) / grid_n, grid_n};
}

double energy_or_inf(const TauConstants& tau, const TimeSplit& s) {
  if (!(s.alpha > 0.0 && s.beta > 0.0 && s.gamma > 0.0)) return std::numeric_limits<double>::infinity();
  const double comm = tau.tau2 * s.beta * std::expm1(tau.tau3 / s.beta * std::numbers::ln2);
  return tau.tau1 / (s.alpha * s.alpha) + comm + tau.tau4 / (s.gamma * s.gamma);
}

void scan_row(const TauConstants& tau, const Grid& g, int i, Best& best) {
  for (int j = 0; i + j <= g.n; ++j) {
    best.offer(energy_or_inf(tau, g.at(i, j)), static_cast<std::int64_t>(i) * (g.n + 1) + j);
  }
}

OracleResult to_result(const Grid& g, const Best& best) {
  if (best.index == std::numeric_limits<std::int64_t>::max() || !std::isfinite(best.energy)) {
    throw NumericError("brute_force_oracle found no grid point with finite energy");
  }
  const int i = static_cast<int>(best.index / (g.n + 1));
  const int j = static_cast<int>(best.index % (g.n + 1));
  return {g.at(i, j), best.energy};
}

}  // namespace

OracleResult brute_force_oracle_serial(const TauConstants& tau, const SplitLimits& mins, int grid_n) {
  const Grid g = make_grid(mins, grid_n);
  Best best;
  for (int i = 0; i <= g.n; ++i) scan_row(tau, g, i, best);
  return to_result(g, best);
}

OracleResult brute_force_oracle(const TauConstants& tau, const SplitLimits& mins, int grid_n) {
  const Grid g = make_grid(mins, grid_n);
  Best best;
#pragma omp parallel
  {
    Best local;
#pragma omp for schedule(dynamic, 8) nowait
    for (int i = 0; i <= g.n; ++i) scan_row(tau, g, i, local);
#pragma omp critical(fast_oracle_reduce)
    best.offer(local.energy, local.index);
  }
  return to_result(g, best);
}

}  // namespace fast
