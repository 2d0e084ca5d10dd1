#pragma once

// Computation and communication cost models for one source/destination pair,
// the time-split reformulation of the energy objective, and recovery of the
// physical strategy from a split. All quantities are SI.

#include "fast/fidelity.hpp"

namespace fast {

/// Per-sample workload of the full-size model.
struct WorkloadProfile {
  double W_e = 0.65e6;     // encoder cycles / sample
  double W_d = 3.25e6;     // decoder cycles / sample
  double S = 4096.0;       // semantic payload bits / sample
  int K = 512;             // samples per task
  double raw_bits = 24576; // uncompressed bits / sample (32x32x3 at 8 bit)
};

/// Task totals for whatever the source runs and sends.
struct WorkloadTriple {
  double C_e = 0.0;  // encode cycles
  double C_d = 0.0;  // decode cycles
  double D = 0.0;    // payload bits
};

struct DeviceProfile {
  double eps_e = 1e-26;  // J per cycle per Hz^2
  double eps_d = 1e-26;
  double f_e_max = 2e9;  // Hz
  double f_d_max = 2e9;
};

struct LinkProfile {
  double B = 1e6;                // Hz
  double N0 = 3.1622776601683794e-19;  // W/Hz (-95 dBm/MHz)
  double h2 = 1e-3;              // channel power gain
  double d = 200.0;              // m
  double eta = 3.76;             // pathloss exponent
  double P_max = 1.0;            // W

  /// Received SNR per watt of transmit power: h2 * d^-eta / (N0 * B).
  double snr_per_watt() const;
};

/// Converts a noise density in dBm/MHz to W/Hz.
double dbm_per_mhz_to_w_per_hz(double dbm_per_mhz);

/// Coefficients of E(a, b, g) = t1/a^2 + t2*b*(2^(t3/b) - 1) + t4/g^2.
struct TauConstants {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau3 = 0.0;
  double tau4 = 0.0;
};

/// Fractions of the latency budget spent encoding, transmitting, decoding.
struct TimeSplit {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  double sum() const noexcept { return alpha + beta + gamma; }
};

struct SplitLimits {
  double alpha_min = 0.0;
  double beta_min = 0.0;
  double gamma_min = 0.0;

  double sum() const noexcept { return alpha_min + beta_min + gamma_min; }
};

struct TransmissionStrategy {
  double pi = 1.0;
  double f_e = 0.0;  // Hz
  double f_d = 0.0;  // Hz
  double P = 0.0;    // W
};

struct CostReport {
  double T_cmp = 0.0, T_com = 0.0, T_tot = 0.0;  // s
  double E_cmp = 0.0, E_com = 0.0, E_tot = 0.0;  // J
  double data_bits = 0.0;
  double compute_cycles = 0.0;
};

void validate(const WorkloadProfile& w);
void validate(const DeviceProfile& d);
void validate(const LinkProfile& l);

/// Width pi shrinks compute quadratically and payload linearly.
WorkloadTriple derive_workload(const WorkloadProfile& profile, ScalingFactor pi);

/// Shannon rate B * log2(1 + snr_per_watt * P), bits/s.
double shannon_rate(const LinkProfile& link, double P);

/// Transmit power whose Shannon rate equals `rate` (inverse of shannon_rate).
double power_for_rate(const LinkProfile& link, double rate);

/// Throws NumericError when either compute total is zero; such workloads
/// have no positive tau1/tau4 and are handled by the caller's shortcut.
TauConstants tau_constants(const WorkloadTriple& w, const LinkProfile& link, const DeviceProfile& dev, double T_max);

/// Smallest admissible split components, attained at maximum frequency/power.
SplitLimits split_lower_limits(const WorkloadTriple& w, const DeviceProfile& dev, const LinkProfile& link,
                               double T_max);

/// Total energy of a split. Requires each component > 0.
double energy_of_split(const TauConstants& tau, const TimeSplit& split);

/// Frequencies and power that make each phase take exactly its share of
/// T_max. Throws NumericError if any value exceeds its maximum by more than
/// a relative 1e-9 (the split is below its lower limits).
TransmissionStrategy recover_strategy(const TimeSplit& split, const WorkloadTriple& w, ScalingFactor pi,
                                      const DeviceProfile& dev, const LinkProfile& link, double T_max);

/// Latency and energy of a strategy on a model-scaled workload.
CostReport evaluate_strategy(const TransmissionStrategy& s, const WorkloadProfile& profile, const DeviceProfile& dev,
                             const LinkProfile& link);

/// Same cost model on an explicit workload triple (used by the baselines,
/// whose compute and payload are not tied to pi). Phases with zero work
/// contribute nothing and may run at zero frequency.
CostReport evaluate_workload(const WorkloadTriple& w, double f_e, double f_d, double P, const DeviceProfile& dev,
                             const LinkProfile& link);

}  // namespace fast
