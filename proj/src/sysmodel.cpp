#include "fast/sysmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string_view>

#include "fast/error.hpp"

namespace fast {

namespace {

constexpr double kBoundRelTol = 1e-9;

void require_positive(double v, std::string_view name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be positive and finite, got " << v;
    throw ConfigError(os.str());
  }
}

void require_positive_time(double T_max) { require_positive(T_max, "T_max"); }

}  // namespace

void validate(const WorkloadProfile& w) {
  require_positive(w.W_e, "W_e");
  require_positive(w.W_d, "W_d");
  require_positive(w.S, "S");
  require_positive(w.raw_bits, "raw_bits");
  if (w.K < 1) throw ConfigError("K must be an integer >= 1");
}

void validate(const DeviceProfile& d) {
  require_positive(d.eps_e, "eps_e");
  require_positive(d.eps_d, "eps_d");
  require_positive(d.f_e_max, "f_e_max");
  require_positive(d.f_d_max, "f_d_max");
}

void validate(const LinkProfile& l) {
  require_positive(l.B, "B");
  require_positive(l.N0, "N0");
  require_positive(l.h2, "h2");
  require_positive(l.d, "d");
  require_positive(l.eta, "eta");
  require_positive(l.P_max, "P_max");
}

double LinkProfile::snr_per_watt() const { return h2 * std::pow(d, -eta) / (N0 * B); }

double dbm_per_mhz_to_w_per_hz(double dbm_per_mhz) { return std::pow(10.0, dbm_per_mhz / 10.0) * 1e-3 / 1e6; }

WorkloadTriple derive_workload(const WorkloadProfile& profile, ScalingFactor pi) {
  const double p = pi.value();
  const double k = static_cast<double>(profile.K);
  return {k * p * p * profile.W_e, k * p * p * profile.W_d, k * p * profile.S};
}

double shannon_rate(const LinkProfile& link, double P) {
  if (P < 0.0 || P > link.P_max * (1.0 + kBoundRelTol)) {
    std::ostringstream os;
    os << "transmit power " << P << " W outside [0, " << link.P_max << "]";
    throw ConfigError(os.str());
  }
  return link.B * std::log1p(link.snr_per_watt() * P) / std::numbers::ln2;
}

double power_for_rate(const LinkProfile& link, double rate) {
  return std::expm1(rate / link.B * std::numbers::ln2) / link.snr_per_watt();
}

TauConstants tau_constants(const WorkloadTriple& w, const LinkProfile& link, const DeviceProfile& dev, double T_max) {
  require_positive_time(T_max);
  if (!(w.C_e > 0.0) || !(w.C_d > 0.0)) {
    throw NumericError("degenerate workload: zero compute leaves tau1/tau4 at zero");
  }
  require_positive(w.D, "payload D");
  const double T2 = T_max * T_max;
  TauConstants t;
  t.tau1 = dev.eps_e * w.C_e * w.C_e * w.C_e / T2;
  t.tau2 = link.B * link.N0 * T_max / (link.h2 * std::pow(link.d, -link.eta));
  t.tau3 = w.D / (link.B * T_max);
  t.tau4 = dev.eps_d * w.C_d * w.C_d * w.C_d / T2;
  return t;
}

SplitLimits split_lower_limits(const WorkloadTriple& w, const DeviceProfile& dev, const LinkProfile& link,
                               double T_max) {
  require_positive_time(T_max);
  SplitLimits m;
  m.alpha_min = w.C_e / (dev.f_e_max * T_max);
  m.gamma_min = w.C_d / (dev.f_d_max * T_max);
  m.beta_min = w.D / (T_max * shannon_rate(link, link.P_max));
  return m;
}

double energy_of_split(const TauConstants& tau, const TimeSplit& s) {
  if (!(s.alpha > 0.0 && s.beta > 0.0 && s.gamma > 0.0)) {
    throw ConfigError("energy_of_split needs every split component > 0");
  }
  const double comm = tau.tau2 * s.beta * std::expm1(tau.tau3 / s.beta * std::numbers::ln2);
  return tau.tau1 / (s.alpha * s.alpha) + comm + tau.tau4 / (s.gamma * s.gamma);
}

namespace {

double checked_bound(double value, double max, std::string_view name) {
  if (value > max * (1.0 + kBoundRelTol)) {
    std::ostringstream os;
    os << "recovered " << name << " = " << value << " exceeds its maximum " << max << "; split below its lower limit";
    throw NumericError(os.str());
  }
  return std::min(value, max);
}

}  // namespace

TransmissionStrategy recover_strategy(const TimeSplit& split, const WorkloadTriple& w, ScalingFactor pi,
                                      const DeviceProfile& dev, const LinkProfile& link, double T_max) {
  require_positive_time(T_max);
  TransmissionStrategy s;
  s.pi = pi.value();
  s.f_e = w.C_e > 0.0 ? checked_bound(w.C_e / (split.alpha * T_max), dev.f_e_max, "f_e") : 0.0;
  s.f_d = w.C_d > 0.0 ? checked_bound(w.C_d / (split.gamma * T_max), dev.f_d_max, "f_d") : 0.0;
  s.P = checked_bound(power_for_rate(link, w.D / (split.beta * T_max)), link.P_max, "P");
  return s;
}

CostReport evaluate_workload(const WorkloadTriple& w, double f_e, double f_d, double P, const DeviceProfile& dev,
                             const LinkProfile& link) {
  auto phase_time = [](double cycles, double f, std::string_view name) {
    if (cycles == 0.0) return 0.0;
    if (!(f > 0.0)) {
      std::ostringstream os;
      os << name << " frequency must be positive for a non-empty workload";
      throw NumericError(os.str());
    }
    return cycles / f;
  };
  CostReport r;
  const double t_e = phase_time(w.C_e, f_e, "encoder");
  const double t_d = phase_time(w.C_d, f_d, "decoder");
  r.T_cmp = t_e + t_d;
  r.E_cmp = dev.eps_e * f_e * f_e * w.C_e + dev.eps_d * f_d * f_d * w.C_d;
  const double rate = shannon_rate(link, P);
  if (!(rate > 0.0)) throw NumericError("zero transmit rate; payload can never be delivered");
  r.T_com = w.D / rate;
  r.E_com = P * r.T_com;
  r.T_tot = r.T_cmp + r.T_com;
  r.E_tot = r.E_cmp + r.E_com;
  r.data_bits = w.D;
  r.compute_cycles = w.C_e + w.C_d;
  return r;
}

CostReport evaluate_strategy(const TransmissionStrategy& s, const WorkloadProfile& profile, const DeviceProfile& dev,
                             const LinkProfile& link) {
  return evaluate_workload(derive_workload(profile, ScalingFactor{s.pi}), s.f_e, s.f_d, s.P, dev, link);
}

}  // namespace fast
