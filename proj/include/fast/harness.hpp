#pragma once

// Scenario runner: the width-adjustable pipeline, the fixed-model
// baselines it is compared against, parameter sweeps and the two-fidelity
// comparison table.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fast/fidelity.hpp"
#include "fast/solver.hpp"
#include "fast/sysmodel.hpp"

namespace fast {

struct Constraints {
  double T_max = 8.0;     // s
  double phi_min = 0.80;
  ScalingFactor pi_min{0.25};
};

/// Piecewise-linear parameter -> fidelity table. Outside the tabulated range
/// the fidelity is unknown and the parameter is never selected.
class FidelityMap {
 public:
  FidelityMap() = default;
  /// Points are sorted by parameter; duplicates are rejected.
  explicit FidelityMap(std::vector<std::pair<double, double>> points);

  const std::vector<std::pair<double, double>>& points() const noexcept { return points_; }
  bool empty() const noexcept { return points_.empty(); }
  std::optional<double> at(double parameter) const;

 private:
  std::vector<std::pair<double, double>> points_;
};

struct ExternalReference {
  double data_bits = 2.76e6;
  double fidelity = 0.73;
};

struct BaselineMaps {
  FidelityMap prune;  // pruning rate rho -> fidelity
  FidelityMap quant;  // bits b -> fidelity
  ExternalReference jpeg;
};

/// Published prune/quant points plus the no-op anchors (rho = 0 and 8 bits
/// both deliver the full model's fidelity).
BaselineMaps default_baseline_maps(double full_model_fidelity);

struct Scenario {
  WorkloadProfile workload;
  DeviceProfile devices;
  LinkProfile link;
  Constraints constraints;
  FidelityCurve curve{-0.05, 1.0, 0.0, 0.9, ScalingFactor{0.25}};
  BaselineMaps baselines = default_baseline_maps(0.9);
};

/// Throws ConfigError if any component is invalid.
void validate(const Scenario& s);

enum class BaselineKind { raw, prune, quant, external };

struct BaselineSpec {
  BaselineKind kind = BaselineKind::raw;
  double parameter = 0.0;  ///< rho for prune, bits for quant
  double fidelity = 1.0;   ///< achieved fidelity (from the map, 1 for raw)
  double external_bits = 0.0;
};

enum class Status { ok, fidelity_infeasible, latency_infeasible, not_applicable, error };

const char* to_string(Status s);

struct ScenarioResult {
  std::string method;
  std::optional<double> axis_value;
  std::optional<double> pi;  ///< model width; empty for methods without a model
  std::optional<TransmissionStrategy> strategy;
  std::optional<CostReport> cost;
  std::optional<double> fidelity;
  double data_bits = 0.0;
  double compute_cycles = 0.0;
  Status status = Status::ok;
  std::string detail;  ///< human-readable reason for a non-ok status
  std::optional<SolveReport> solve;

  bool feasible() const noexcept { return status == Status::ok; }
};

/// Picks the width that just meets phi_min, solves the split, and recovers
/// frequencies and power. Infeasibility is reported in the result.
ScenarioResult run_fast(const Scenario& s, const SolverConfig& cfg = {});

/// Same latency-constrained energy minimization for a fixed-model baseline.
ScenarioResult run_baseline(const Scenario& s, const BaselineSpec& b, const SolverConfig& cfg = {});

/// Cheapest baseline parameter whose mapped fidelity reaches phi_min
/// (largest rho for prune, fewest bits for quant). Empty when none does.
std::optional<BaselineSpec> matched_baseline(const Scenario& s, BaselineKind kind, double phi_min);

enum class SweepAxis { distance, eps_scale, T_max, phi_min };

const char* to_string(SweepAxis a);
SweepAxis parse_sweep_axis(const std::string& name);

enum class Method { fast, raw, prune, quant, jpeg };

const char* to_string(Method m);
Method parse_method(const std::string& name);

/// Copy of `s` with the swept parameter set to `value` (eps_scale multiplies
/// both energy coefficients).
Scenario apply_axis(const Scenario& s, SweepAxis axis, double value);

/// One method at the scenario's own constraints; prune/quant are matched to
/// phi_min.
ScenarioResult run_method(const Scenario& s, Method m, const SolverConfig& cfg = {});

using ResultTable = std::vector<ScenarioResult>;

/// One row per (value, method), ordered by value then method. Cells are
/// evaluated in parallel; the table is identical to sweep_serial.
ResultTable sweep(const Scenario& s, SweepAxis axis, const std::vector<double>& values,
                  const std::vector<Method>& methods, const SolverConfig& cfg = {});
ResultTable sweep_serial(const Scenario& s, SweepAxis axis, const std::vector<double>& values,
                         const std::vector<Method>& methods, const SolverConfig& cfg = {});

/// Raw and JPEG reference rows, then prune / quant / fast at each fidelity
/// target. Two targets give the familiar 8-row comparison.
ResultTable compare(const Scenario& s, const std::vector<double>& fidelity_targets, const SolverConfig& cfg = {});

}  // namespace fast
