#include "fast/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fast/error.hpp"

namespace fast {

void validate(const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw ConfigError("solver tol must be > 0");
  if (cfg.max_iters < 1) throw ConfigError("solver max_iters must be >= 1");
  if (!(cfg.lambda_bracket_growth > 1.0)) throw ConfigError("lambda bracket growth must be > 1");
}

double g_lambda(double beta, double tau2, double tau3, double lambda) {
  const double x = tau3 / beta * std::numbers::ln2;
  // (1 - x) e^x - 1 = expm1(x) - x e^x; written this way to keep precision
  // for small x. Past x ~ 709 the exponential overflows and the sign is known.
  if (x > 700.0) return -std::numeric_limits<double>::infinity();
  return tau2 * (std::expm1(x) - x * std::exp(x)) + lambda;
}

namespace {

// Bisection stops once the bracket is within tol or cannot be split further.
bool exhausted(double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  return !(mid > lo && mid < hi);
}

}  // namespace

BetaRoot solve_beta_counted(double lambda, double tau2, double tau3, const SolverConfig& cfg) {
  if (!(lambda > 0.0)) {
    std::ostringstream os;
    os << "solve_beta needs lambda > 0, got " << lambda;
    throw ConfigError(os.str());
  }
  BetaRoot out;
  double lo = cfg.tol * cfg.tol;
  double hi = 1.0;
  int grow = 0;
  while (g_lambda(hi, tau2, tau3, lambda) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++grow > cfg.max_iters || !std::isfinite(hi)) {
      throw NumericError("solve_beta: no sign change of g_lambda found while expanding the bracket");
    }
  }
  if (g_lambda(lo, tau2, tau3, lambda) > 0.0) {
    throw NumericError("solve_beta: g_lambda already positive at the lower bracket guard");
  }
  while (hi - lo > cfg.tol && !exhausted(lo, hi)) {
    if (++out.iterations > cfg.max_iters) throw NumericError("solve_beta: iteration cap reached");
    const double mid = 0.5 * (lo + hi);
    if (g_lambda(mid, tau2, tau3, lambda) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.beta = 0.5 * (lo + hi);
  return out;
}

double solve_beta(double lambda, double tau2, double tau3, const SolverConfig& cfg) {
  return solve_beta_counted(lambda, tau2, tau3, cfg).beta;
}

Candidate candidate_split(double lambda, const TauConstants& tau, const SplitLimits& mins, const SolverConfig& cfg) {
  Candidate c;
  const double a = std::cbrt(2.0 * tau.tau1 / lambda);
  const double g = std::cbrt(2.0 * tau.tau4 / lambda);
  const BetaRoot b = solve_beta_counted(lambda, tau.tau2, tau.tau3, cfg);
  c.active.alpha = a <= mins.alpha_min;
  c.active.beta = b.beta <= mins.beta_min;
  c.active.gamma = g <= mins.gamma_min;
  c.split.alpha = std::max(a, mins.alpha_min);
  c.split.beta = std::max(b.beta, mins.beta_min);
  c.split.gamma = std::max(g, mins.gamma_min);
  c.z = c.split.sum();
  c.inner_iters = b.iterations;
  return c;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::feasible:
      return "feasible";
    case Verdict::fidelity_infeasible:
      return "fidelity-infeasible";
    case Verdict::latency_infeasible:
      return "latency-infeasible";
  }
  return "unknown";
}

Verdict check_feasible(const SplitLimits& mins, const FidelityInversion& fidelity) {
  if (fidelity.status == InversionStatus::infeasible) return Verdict::fidelity_infeasible;
  if (mins.sum() > 1.0) return Verdict::latency_infeasible;
  return Verdict::feasible;
}

SolveReport solve(const TauConstants& tau, const SplitLimits& mins, const SolverConfig& cfg) {
  validate(cfg);
  if (!(tau.tau1 > 0.0 && tau.tau2 > 0.0 && tau.tau3 > 0.0 && tau.tau4 > 0.0)) {
    throw ConfigError("solver requires strictly positive tau constants");
  }
  if (mins.alpha_min < 0.0 || mins.beta_min < 0.0 || mins.gamma_min < 0.0) {
    throw ConfigError("split lower limits must be non-negative");
  }
  if (mins.sum() > 1.0) {
    std::ostringstream os;
    os << "latency budget unattainable: split lower limits sum to " << mins.sum();
    throw InfeasibleError(os.str());
  }

  SolveReport rep;
  rep.feasible = true;

  auto finish = [&](const TimeSplit& split, const ActiveSet& active, double lambda) {
    rep.split = split;
    rep.active_set = active;
    rep.lambda_star = lambda;
    rep.E_tot = energy_of_split(tau, split);
    return rep;
  };

  // Lower limits already fill the budget: the only feasible point.
  if (mins.sum() >= 1.0 - cfg.tol && mins.alpha_min > 0.0 && mins.beta_min > 0.0 && mins.gamma_min > 0.0) {
    return finish({mins.alpha_min, mins.beta_min, mins.gamma_min}, {true, true, true},
                  std::numeric_limits<double>::infinity());
  }

  auto eval = [&](double lambda) {
    Candidate c = candidate_split(lambda, tau, mins, cfg);
    rep.total_inner_iters += c.inner_iters;
    return c;
  };

  // Bracket [lo, hi] with z(lo) >= 1 > z(hi); z is non-increasing in lambda.
  double lo = 1.0, hi = 1.0;
  Candidate c_hi = eval(1.0);
  if (c_hi.z >= 1.0) {
    while (c_hi.z >= 1.0) {
      if (++rep.bracket_expansions > cfg.max_iters) throw NumericError("lambda bracket expansion did not terminate");
      lo = hi;
      hi *= cfg.lambda_bracket_growth;
      c_hi = eval(hi);
    }
  } else {
    for (;;) {
      if (++rep.bracket_expansions > cfg.max_iters) throw NumericError("lambda bracket expansion did not terminate");
      lo /= cfg.lambda_bracket_growth;
      const Candidate c_lo = eval(lo);
      if (c_lo.z >= 1.0) break;
      hi = lo;
      c_hi = c_lo;
    }
  }

  while (!exhausted(lo, hi) && (hi - lo > cfg.tol || std::abs(c_hi.z - 1.0) > cfg.tol)) {
    if (++rep.outer_iters > cfg.max_iters) throw NumericError("lambda bisection reached its iteration cap");
    const double mid = 0.5 * (lo + hi);
    const Candidate c = eval(mid);
    if (c.z < 1.0) {
      hi = mid;
      c_hi = c;
    } else {
      lo = mid;
    }
    rep.trace.push_back({lo, hi, mid, c.z, energy_of_split(tau, c.split)});
  }
  return finish(c_hi.split, c_hi.active, hi);
}

}  // namespace fast
