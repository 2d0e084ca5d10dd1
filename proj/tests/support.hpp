#pragma once

#include <cmath>
#include <random>

#include "fast/sysmodel.hpp"

namespace fast::testing {

/// Random feasible time-split instance: tau components log-uniform over
/// [1e-6, 10], lower limits uniform on [0, 0.3] each (sum <= 0.9).
struct RandomInstance {
  TauConstants tau;
  SplitLimits mins;
};

inline RandomInstance random_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> log_tau(std::log(1e-6), std::log(10.0));
  std::uniform_real_distribution<double> lim(0.0, 0.3);
  RandomInstance r;
  r.tau = {std::exp(log_tau(rng)), std::exp(log_tau(rng)), std::exp(log_tau(rng)), std::exp(log_tau(rng))};
  r.mins = {lim(rng), lim(rng), lim(rng)};
  return r;
}

}  // namespace fast::testing
