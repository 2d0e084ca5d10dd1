// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fast/fidelity.hpp"
#include "fast/harness.hpp"
#include "fast/oracle.hpp"
#include "fast/solver.hpp"
#include "support.hpp"

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto inst = fast::testing::random_instance(rng);
    const auto rep = fast::solve(inst.tau, inst.mins);
    const auto oracle = fast::brute_force_oracle(inst.tau, inst.mins, 600);
    worst = std::max(worst, std::abs(rep.E_tot - oracle.energy) / oracle.energy);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 5e-3 && secs < 60.0, fmt("max relative gap %.3g over 100 instances, %.2f s", worst, secs)};
}

Outcome constraint_tightness() {
  double worst_t = 0.0, worst_phi = 0.0;
  int runs = 0, unclamped = 0;
  for (double phi : {0.80, 0.82, 0.84, 0.85, 0.86, 0.88, 0.89, 0.9}) {
    for (double d : {100.0, 200.0, 300.0}) {
      for (double T : {4.0, 8.0, 12.0}) {
        fast::Scenario s;
        s.constraints.phi_min = phi;
        s.link.d = d;
        s.constraints.T_max = T;
        const auto r = fast::run_fast(s);
        if (!r.feasible()) continue;
        ++runs;
        worst_t = std::max(worst_t, std::abs(r.cost->T_tot - T) / T);
        const auto inv = fast::try_invert_fidelity(s.curve, phi, s.constraints.pi_min);
        if (!inv.clamped) {
          ++unclamped;
          worst_phi = std::max(worst_phi, std::abs(*r.fidelity - phi));
        }
      }
    }
  }
  return {runs > 0 && unclamped > 0 && worst_t <= 1e-6 && worst_phi <= 1e-9,
          fmt("%g feasible runs: max |T_tot - T_max|/T_max %.3g, ", runs, worst_t) +
              fmt("max fidelity error %.3g over %g unclamped runs", worst_phi, unclamped)};
}

Outcome convergence() {
  const auto r = fast::run_fast(fast::Scenario{});
  if (!r.feasible() || !r.solve) return {false, "default scenario did not solve: " + r.detail};
  const auto& rep = *r.solve;
  // Bracket expansions count as iterations too.
  int to_z = -1, to_width = -1;
  for (std::size_t i = 0; i < rep.trace.size(); ++i) {
    const auto& it = rep.trace[i];
    const int n = rep.bracket_expansions + static_cast<int>(i) + 1;
    if (to_z < 0 && std::abs(it.z - 1.0) < 1e-3) to_z = n;
    if (to_width < 0 && it.lambda_hi - it.lambda_lo < 1e-9) to_width = n;
  }
  return {to_z >= 0 && to_z <= 40 && to_width >= 0 && to_width <= 200,
          fmt("|z-1| < 1e-3 after %g iterations, bracket < 1e-9 after %g (lambda* = %.6g)", to_z, to_width,
              rep.lambda_star)};
}

Outcome monotonicity() {
  std::mt19937_64 rng(99);
  const fast::SolverConfig cfg;
  int violations = 0;
  for (int t = 0; t < 20; ++t) {
    const auto inst = fast::testing::random_instance(rng);
    fast::Candidate prev{};
    for (int i = 0; i < 100; ++i) {
      const double lam = std::pow(10.0, -3.0 + 6.0 * i / 99.0);
      const auto c = fast::candidate_split(lam, inst.tau, inst.mins, cfg);
      if (i > 0) {
        if (c.z > prev.z) ++violations;
        if (c.split.alpha > prev.split.alpha || c.split.beta > prev.split.beta || c.split.gamma > prev.split.gamma) {
          ++violations;
        }
      }
      prev = c;
    }
  }
  return {violations == 0, fmt("%g increases over 20 instances x 100 lambda values (1e-3 .. 1e3)", violations)};
}

Outcome fidelity_round_trip() {
  using fast::ScalingFactor;
  const std::vector<fast::FidelityCurve> curves{{-0.05, 1.0, 0.0, 0.9, ScalingFactor{0.25}},
                                                {-0.08, 0.5, 0.3, 0.85, ScalingFactor{0.25}},
                                                {0.04, -1.0, 5.0, 0.8, ScalingFactor{0.25}},
                                                {-0.02, 2.0, -1.5, 0.95, ScalingFactor{0.25}}};
  double worst_inv = 0.0, worst_fit = 0.0;
  for (const auto& c : curves) {
    const double lo = fast::eval_fidelity(c, c.pi_min);
    const double hi = fast::eval_fidelity(c, ScalingFactor{1.0});
    for (int k = 0; k < 50; ++k) {
      const double phi0 = lo + (hi - lo) * k / 49.0;
      const auto pi = fast::invert_fidelity(c, phi0, c.pi_min);
      worst_inv = std::max(worst_inv, std::abs(fast::eval_fidelity(c, pi) - phi0));
    }
    std::vector<fast::FidelitySample> samples;
    for (int k = 0; k < 7; ++k) {
      const ScalingFactor p{0.25 + 0.125 * k};
      samples.push_back({p, fast::eval_fidelity(c, p)});
    }
    const auto fit = fast::fit_curve(samples, c.pi_min);
    for (int k = 0; k <= 30; ++k) {
      const ScalingFactor p{0.25 + 0.75 * k / 30.0};
      worst_fit = std::max(worst_fit, std::abs(fast::eval_fidelity(fit.curve, p) - fast::eval_fidelity(c, p)));
    }
  }
  return {worst_inv <= 1e-9 && worst_fit <= 1e-6,
          fmt("max round-trip error %.3g, max fit error %.3g over 4 curves", worst_inv, worst_fit)};
}

Outcome order_of_magnitude() {
  const auto t = fast::compare(fast::Scenario{}, {0.80});
  const fast::ScenarioResult* fast_row = nullptr;
  const fast::ScenarioResult* quant_row = nullptr;
  for (const auto& r : t) {
    if (r.method == "fast") fast_row = &r;
    if (r.method.rfind("quant", 0) == 0) quant_row = &r;
  }
  if (!fast_row || !quant_row || !fast_row->feasible() || !quant_row->feasible()) {
    return {false, "missing feasible fast or quant row"};
  }
  const double ratio = fast_row->cost->E_tot / quant_row->cost->E_tot;
  return {ratio <= 0.2, fmt("fast %.4g J vs quant %.4g J, ratio %.3g", fast_row->cost->E_tot, quant_row->cost->E_tot,
                            ratio)};
}

Outcome sweep_shapes() {
  using fast::Method;
  using fast::SweepAxis;
  struct Case {
    SweepAxis axis;
    std::vector<double> values;
    int direction;  // +1 non-decreasing, -1 non-increasing
  };
  const std::vector<Case> cases{{SweepAxis::distance, {50, 100, 150, 200, 250, 300, 350, 400}, +1},
                                {SweepAxis::eps_scale, {0.1, 0.2, 0.5, 1, 2, 5, 10}, +1},
                                {SweepAxis::T_max, {2, 4, 6, 8, 10, 12, 16}, -1}};
  const std::vector<Method> methods{Method::fast, Method::prune, Method::quant};
  int shape_violations = 0, dominance_violations = 0, feasible_points = 0;
  for (const auto& c : cases) {
    const auto table = fast::sweep(fast::Scenario{}, c.axis, c.values, methods);
    double prev = std::nan("");
    for (std::size_t i = 0; i < table.size(); i += methods.size()) {
      const auto& f = table[i];
      if (!f.feasible()) continue;
      ++feasible_points;
      const double e = f.cost->E_tot;
      if (!std::isnan(prev) && c.direction * (e - prev) < 0.0) ++shape_violations;
      prev = e;
      for (std::size_t k = 1; k < methods.size(); ++k) {
        const auto& b = table[i + k];
        if (b.feasible() && e > b.cost->E_tot) ++dominance_violations;
      }
    }
  }
  return {shape_violations == 0 && dominance_violations == 0 && feasible_points > 0,
          fmt("%g shape and %g dominance violations over %g feasible points", shape_violations, dominance_violations,
              feasible_points)};
}

Outcome raw_volume() {
  const auto out = std::filesystem::temp_directory_path() / "fast_acceptance_compare.csv";
  const auto scenario = std::filesystem::path(FAST_SOURCE_DIR) / "scenarios" / "default.json";
  std::ostringstream sink_out, sink_err;
  const int code =
      fast::cli::run({"fast", "compare", "--scenario", scenario.string(), "--out", out.string()}, sink_out, sink_err);
  if (code != 0) return {false, "compare exited with " + std::to_string(code) + ": " + sink_err.str()};
  std::ifstream in(out);
  std::string header, line;
  std::getline(in, header);
  while (std::getline(in, line)) {
    if (line.rfind("raw,", 0) != 0) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    const auto& cols = fast::result_columns();
    const auto pos = std::find(cols.begin(), cols.end(), "data_bits") - cols.begin();
    const std::string bits = static_cast<std::size_t>(pos) < cells.size() ? cells[pos] : "";
    return {bits == "12582912", "raw data_bits = " + bits};
  }
  return {false, "no raw row in compare output"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence}, {"constraint tightness", constraint_tightness},
      {"convergence", convergence},               {"monotonicity", monotonicity},
      {"fidelity round-trip", fidelity_round_trip}, {"order of magnitude vs quant", order_of_magnitude},
      {"sweep shapes", sweep_shapes},             {"raw volume", raw_volume}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  return failures;
}
