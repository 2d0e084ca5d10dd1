#include "fast/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fast/error.hpp"

namespace fast {

namespace {

// Slack when comparing a mapped fidelity against its target, so that a
// target built by floating-point arithmetic still matches a tabulated point.
constexpr double kFidelitySlack = 1e-12;

std::string format_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

FidelityMap::FidelityMap(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i > 0 && points_[i].first == points_[i - 1].first) {
      throw ConfigError("fidelity map has a duplicate parameter " + format_param(points_[i].first));
    }
    if (!(points_[i].second >= 0.0 && points_[i].second <= 1.0)) {
      throw ConfigError("fidelity map value outside [0, 1]");
    }
  }
}

std::optional<double> FidelityMap::at(double parameter) const {
  if (points_.empty() || parameter < points_.front().first || parameter > points_.back().first) return std::nullopt;
  auto hi = std::lower_bound(points_.begin(), points_.end(), parameter,
                             [](const auto& p, double x) { return p.first < x; });
  if (hi->first == parameter) return hi->second;
  auto lo = std::prev(hi);
  const double t = (parameter - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

BaselineMaps default_baseline_maps(double full_model_fidelity) {
  BaselineMaps m;
  m.prune = FidelityMap({{0.0, full_model_fidelity}, {0.1, 0.85}, {0.3, 0.80}});
  m.quant = FidelityMap({{3.0, 0.80}, {4.0, 0.85}, {8.0, full_model_fidelity}});
  return m;
}

void validate(const Scenario& s) {
  validate(s.workload);
  validate(s.devices);
  validate(s.link);
  if (!(s.constraints.T_max > 0.0)) throw ConfigError("T_max must be > 0");
  if (!(s.constraints.phi_min >= 0.0 && s.constraints.phi_min <= 1.0)) throw ConfigError("phi_min must lie in [0, 1]");
  const auto diag = validate_curve(s.curve);
  if (!diag.ok()) {
    std::string msg = "invalid fidelity curve:";
    for (const auto& m : diag.messages) msg += " " + m + ";";
    throw ConfigError(msg);
  }
  if (s.constraints.pi_min < s.curve.pi_min) {
    throw ConfigError("constraint pi_min lies below the fidelity curve's validity window");
  }
}

const char* to_string(Status s) {
  switch (s) {
    case Status::ok:
      return "ok";
    case Status::fidelity_infeasible:
      return "fidelity-infeasible";
    case Status::latency_infeasible:
      return "latency-infeasible";
    case Status::not_applicable:
      return "n/a";
    case Status::error:
      return "error";
  }
  return "unknown";
}

namespace {

// Minimizes energy for a fixed workload under the scenario's latency budget
// and fills cost, strategy and solver fields of `r`.
void optimize_workload(const Scenario& s, const WorkloadTriple& w, double pi, const SolverConfig& cfg,
                       ScenarioResult& r) {
  const double T_max = s.constraints.T_max;
  r.data_bits = w.D;
  r.compute_cycles = w.C_e + w.C_d;

  if (w.C_e == 0.0 && w.C_d == 0.0) {
    // No compute: energy falls monotonically with transmit time, so the whole
    // budget goes to transmission.
    const double P = power_for_rate(s.link, w.D / T_max);
    if (P > s.link.P_max * (1.0 + 1e-9)) {
      r.status = Status::latency_infeasible;
      std::ostringstream os;
      os << "payload needs " << P << " W to fit in T_max, above P_max = " << s.link.P_max << " W";
      r.detail = os.str();
      return;
    }
    TransmissionStrategy st{pi, 0.0, 0.0, std::min(P, s.link.P_max)};
    r.strategy = st;
    r.cost = evaluate_workload(w, 0.0, 0.0, st.P, s.devices, s.link);
    return;
  }

  const SplitLimits mins = split_lower_limits(w, s.devices, s.link, T_max);
  if (mins.sum() > 1.0) {
    r.status = Status::latency_infeasible;
    std::ostringstream os;
    os << "lower split limits sum to " << mins.sum() << " > 1 even at maximum frequency and power";
    r.detail = os.str();
    return;
  }
  const TauConstants tau = tau_constants(w, s.link, s.devices, T_max);
  SolveReport rep = solve(tau, mins, cfg);
  const TransmissionStrategy st = recover_strategy(rep.split, w, ScalingFactor{pi}, s.devices, s.link, T_max);
  r.strategy = st;
  r.cost = evaluate_workload(w, st.f_e, st.f_d, st.P, s.devices, s.link);
  r.solve = std::move(rep);
}

template <class F>
ScenarioResult guarded(ScenarioResult r, F&& body) {
  try {
    body(r);
  } catch (const InfeasibleError& e) {
    r.status = Status::latency_infeasible;
    r.detail = e.what();
  } catch (const Error& e) {
    r.status = Status::error;
    r.detail = e.what();
  }
  return r;
}

}  // namespace

ScenarioResult run_fast(const Scenario& s, const SolverConfig& cfg) {
  ScenarioResult r;
  r.method = "fast";
  return guarded(std::move(r), [&](ScenarioResult& out) {
    const auto inv = try_invert_fidelity(s.curve, s.constraints.phi_min, s.constraints.pi_min);
    if (inv.status == InversionStatus::infeasible) {
      out.status = Status::fidelity_infeasible;
      std::ostringstream os;
      os << "phi_min = " << s.constraints.phi_min << " exceeds the full model's fidelity "
         << eval_fidelity(s.curve, ScalingFactor{1.0});
      out.detail = os.str();
      return;
    }
    const ScalingFactor pi{inv.pi};
    out.pi = pi.value();
    out.fidelity = eval_fidelity(s.curve, pi);
    optimize_workload(s, derive_workload(s.workload, pi), pi.value(), cfg, out);
  });
}

ScenarioResult run_baseline(const Scenario& s, const BaselineSpec& b, const SolverConfig& cfg) {
  ScenarioResult r;
  const double K = static_cast<double>(s.workload.K);
  switch (b.kind) {
    case BaselineKind::raw:
      r.method = "raw";
      break;
    case BaselineKind::prune:
      r.method = "prune:rho=" + format_param(b.parameter);
      break;
    case BaselineKind::quant:
      r.method = "quant:bits=" + format_param(b.parameter);
      break;
    case BaselineKind::external:
      r.method = "jpeg";
      break;
  }
  r.fidelity = b.fidelity;
  return guarded(std::move(r), [&](ScenarioResult& out) {
    switch (b.kind) {
      case BaselineKind::raw:
        optimize_workload(s, {0.0, 0.0, K * s.workload.raw_bits}, 1.0, cfg, out);
        out.pi.reset();
        return;
      case BaselineKind::prune:
        if (!(b.parameter >= 0.0 && b.parameter < 1.0)) throw ConfigError("pruning rate must lie in [0, 1)");
        out.pi = 1.0;
        optimize_workload(s, {K * s.workload.W_e, K * s.workload.W_d, (1.0 - b.parameter) * K * s.workload.S}, 1.0,
                          cfg, out);
        return;
      case BaselineKind::quant:
        if (!(b.parameter >= 1.0 && b.parameter <= 8.0)) throw ConfigError("quantization bits must lie in [1, 8]");
        out.pi = 1.0;
        optimize_workload(s, {K * s.workload.W_e, K * s.workload.W_d, b.parameter / 8.0 * K * s.workload.S}, 1.0,
                          cfg, out);
        return;
      case BaselineKind::external:
        out.status = Status::not_applicable;
        out.data_bits = b.external_bits;
        out.detail = "external reference point; no energy model";
        return;
    }
  });
}

std::optional<BaselineSpec> matched_baseline(const Scenario& s, BaselineKind kind, double phi_min) {
  const double target = phi_min - kFidelitySlack;
  switch (kind) {
    case BaselineKind::raw:
      return BaselineSpec{BaselineKind::raw, 0.0, 1.0, 0.0};
    case BaselineKind::external: {
      const auto& j = s.baselines.jpeg;
      if (j.fidelity < target) return std::nullopt;
      return BaselineSpec{BaselineKind::external, 0.0, j.fidelity, j.data_bits};
    }
    case BaselineKind::quant:
      for (int bits = 1; bits <= 8; ++bits) {
        const auto f = s.baselines.quant.at(bits);
        if (f && *f >= target) return BaselineSpec{BaselineKind::quant, static_cast<double>(bits), *f, 0.0};
      }
      return std::nullopt;
    case BaselineKind::prune: {
      // Largest rho whose interpolated fidelity still reaches the target.
      const auto& pts = s.baselines.prune.points();
      std::optional<double> best;
      auto offer = [&](double rho) {
        if (rho < 1.0 && (!best || rho > *best)) best = rho;
      };
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].second >= target) offer(pts[i].first);
        if (i + 1 < pts.size()) {
          const auto [p0, f0] = pts[i];
          const auto [p1, f1] = pts[i + 1];
          if ((f0 - phi_min) * (f1 - phi_min) < 0.0) offer(p0 + (phi_min - f0) / (f1 - f0) * (p1 - p0));
        }
      }
      if (!best) return std::nullopt;
      return BaselineSpec{BaselineKind::prune, *best, *s.baselines.prune.at(*best), 0.0};
    }
  }
  return std::nullopt;
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::distance:
      return "distance";
    case SweepAxis::eps_scale:
      return "eps_scale";
    case SweepAxis::T_max:
      return "T_max";
    case SweepAxis::phi_min:
      return "phi_min";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(const std::string& name) {
  for (auto a : {SweepAxis::distance, SweepAxis::eps_scale, SweepAxis::T_max, SweepAxis::phi_min}) {
    if (name == to_string(a)) return a;
  }
  throw ConfigError("unknown sweep axis '" + name + "' (expected distance, eps_scale, T_max or phi_min)");
}

const char* to_string(Method m) {
  switch (m) {
    case Method::fast:
      return "fast";
    case Method::raw:
      return "raw";
    case Method::prune:
      return "prune";
    case Method::quant:
      return "quant";
    case Method::jpeg:
      return "jpeg";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (auto m : {Method::fast, Method::raw, Method::prune, Method::quant, Method::jpeg}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + name + "' (expected fast, raw, prune, quant or jpeg)");
}

Scenario apply_axis(const Scenario& s, SweepAxis axis, double value) {
  Scenario out = s;
  switch (axis) {
    case SweepAxis::distance:
      out.link.d = value;
      break;
    case SweepAxis::eps_scale:
      out.devices.eps_e *= value;
      out.devices.eps_d *= value;
      break;
    case SweepAxis::T_max:
      out.constraints.T_max = value;
      break;
    case SweepAxis::phi_min:
      out.constraints.phi_min = value;
      break;
  }
  return out;
}

ScenarioResult run_method(const Scenario& s, Method m, const SolverConfig& cfg) {
  auto matched = [&](BaselineKind kind, const char* label) {
    const auto spec = matched_baseline(s, kind, s.constraints.phi_min);
    if (spec) return run_baseline(s, *spec, cfg);
    ScenarioResult r;
    r.method = label;
    r.status = Status::fidelity_infeasible;
    r.detail = std::string("no ") + label + " setting reaches the fidelity target";
    return r;
  };
  switch (m) {
    case Method::fast:
      return run_fast(s, cfg);
    case Method::raw:
      return run_baseline(s, BaselineSpec{BaselineKind::raw, 0.0, 1.0, 0.0}, cfg);
    case Method::prune:
      return matched(BaselineKind::prune, "prune");
    case Method::quant:
      return matched(BaselineKind::quant, "quant");
    case Method::jpeg:
      return matched(BaselineKind::external, "jpeg");
  }
  throw ConfigError("unknown method");
}

namespace {

ScenarioResult sweep_cell(const Scenario& s, SweepAxis axis, double value, Method m, const SolverConfig& cfg) {
  ScenarioResult r;
  try {
    const Scenario cell = apply_axis(s, axis, value);
    validate(cell);
    r = run_method(cell, m, cfg);
  } catch (const Error& e) {
    r = ScenarioResult{};
    r.method = to_string(m);
    r.status = Status::error;
    r.detail = e.what();
  }
  r.axis_value = value;
  return r;
}

}  // namespace

ResultTable sweep_serial(const Scenario& s, SweepAxis axis, const std::vector<double>& values,
                         const std::vector<Method>& methods, const SolverConfig& cfg) {
  ResultTable table;
  table.reserve(values.size() * methods.size());
  for (double v : values) {
    for (Method m : methods) table.push_back(sweep_cell(s, axis, v, m, cfg));
  }
  return table;
}

ResultTable sweep(const Scenario& s, SweepAxis axis, const std::vector<double>& values,
                  const std::vector<Method>& methods, const SolverConfig& cfg) {
  const auto n_methods = static_cast<long>(methods.size());
  const auto n_cells = static_cast<long>(values.size()) * n_methods;
  ResultTable table(static_cast<std::size_t>(n_cells));
#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < n_cells; ++c) {
    table[static_cast<std::size_t>(c)] = sweep_cell(s, axis, values[c / n_methods], methods[c % n_methods], cfg);
  }
  return table;
}

ResultTable compare(const Scenario& s, const std::vector<double>& fidelity_targets, const SolverConfig& cfg) {
  ResultTable table;
  table.push_back(run_method(s, Method::raw, cfg));
  {
    const auto& j = s.baselines.jpeg;
    table.push_back(run_baseline(s, BaselineSpec{BaselineKind::external, 0.0, j.fidelity, j.data_bits}, cfg));
  }
  for (double phi : fidelity_targets) {
    const Scenario at = apply_axis(s, SweepAxis::phi_min, phi);
    for (Method m : {Method::prune, Method::quant, Method::fast}) {
      ScenarioResult r = run_method(at, m, cfg);
      r.axis_value = phi;
      table.push_back(std::move(r));
    }
  }
  return table;
}

}  // namespace fast
