#pragma once

// Hierarchical bisection for the time-split problem
//
//   min  t1/a^2 + t2*b*(2^(t3/b) - 1) + t4/g^2
//   s.t. a + b + g = 1,  a >= a_min, b >= b_min, g >= g_min.
//
// The outer loop bisects on the multiplier lambda of the sum constraint; for a
// fixed lambda, a and g have closed forms and b is the root of g_lambda,
// found by an inner bisection.

#include <vector>

#include "fast/fidelity.hpp"
#include "fast/sysmodel.hpp"

namespace fast {

struct SolverConfig {
  double tol = 1e-9;
  int max_iters = 200;
  double lambda_bracket_growth = 10.0;
};

void validate(const SolverConfig& cfg);

/// Derivative of the communication term plus lambda; strictly increasing in
/// beta, -inf as beta -> 0+, lambda as beta -> inf.
double g_lambda(double beta, double tau2, double tau3, double lambda);

struct BetaRoot {
  double beta = 0.0;
  int iterations = 0;
};

/// Unconstrained zero of g_lambda. Requires lambda > 0.
BetaRoot solve_beta_counted(double lambda, double tau2, double tau3, const SolverConfig& cfg);
double solve_beta(double lambda, double tau2, double tau3, const SolverConfig& cfg);

struct ActiveSet {
  bool alpha = false;
  bool beta = false;
  bool gamma = false;
};

struct Candidate {
  TimeSplit split;
  double z = 0.0;  ///< alpha + beta + gamma; not yet forced to 1
  ActiveSet active;
  int inner_iters = 0;
};

/// KKT stationary point for a fixed multiplier, clamped at the lower limits.
Candidate candidate_split(double lambda, const TauConstants& tau, const SplitLimits& mins, const SolverConfig& cfg);

struct IterationRecord {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double lambda = 0.0;
  double z = 0.0;
  double energy = 0.0;  ///< energy of the candidate at lambda
};

struct SolveReport {
  TimeSplit split;
  double lambda_star = 0.0;
  int bracket_expansions = 0;
  int outer_iters = 0;
  int total_inner_iters = 0;
  double E_tot = 0.0;
  ActiveSet active_set;
  bool feasible = false;
  std::vector<IterationRecord> trace;  ///< one entry per outer bisection step
};

/// Optimal split. Throws InfeasibleError when the lower limits sum past 1,
/// NumericError on an iteration cap or bracket failure.
SolveReport solve(const TauConstants& tau, const SplitLimits& mins, const SolverConfig& cfg = {});

enum class Verdict { feasible, fidelity_infeasible, latency_infeasible };

const char* to_string(Verdict v);

/// Pre-check of the fidelity target and the latency budget. Fidelity is
/// reported first since the lower limits depend on the chosen pi.
Verdict check_feasible(const SplitLimits& mins, const FidelityInversion& fidelity);

}  // namespace fast
