#pragma once

// Exhaustive grid search over the feasible split simplex. Test and
// benchmark use only; the production path is solve().

#include "fast/sysmodel.hpp"

namespace fast {

struct OracleResult {
  TimeSplit split;
  double energy = 0.0;
};

/// Grid alpha = alpha_min + i*step, beta = beta_min + j*step,
/// gamma = gamma_min + (n - i - j)*step with step = (1 - sum(mins)) / n.
/// The first minimum in row-major (i, j) order wins. OpenMP-parallel over i;
/// the result is identical to brute_force_oracle_serial.
OracleResult brute_force_oracle(const TauConstants& tau, const SplitLimits& mins, int grid_n);

/// Single-threaded reference for brute_force_oracle.
OracleResult brute_force_oracle_serial(const TauConstants& tau, const SplitLimits& mins, int grid_n);

}  // namespace fast
