#pragma once

// Semantic-fidelity curve phi(pi) = k1 * ln(k2 / pi + k3) + k4, valid on
// [pi_min, 1]: evaluation, inversion, least-squares fitting, validation.

#include <span>
#include <string>
#include <vector>

namespace fast {

/// Sub-model width multiplier in (0, 1].
class ScalingFactor {
 public:
  /// Throws ConfigError unless 0 < value <= 1.
  explicit ScalingFactor(double value);
  double value() const noexcept { return value_; }
  friend auto operator<=>(const ScalingFactor&, const ScalingFactor&) = default;

 private:
  double value_;
};

struct FidelityCurve {
  double kappa1 = 0.0;
  double kappa2 = 1.0;
  double kappa3 = 0.0;
  double kappa4 = 0.0;
  ScalingFactor pi_min{0.25};
};

struct FidelitySample {
  ScalingFactor pi;
  double fidelity;
};

/// Evaluates the curve at pi. Throws ConfigError when pi lies outside
/// [pi_min, 1] and NumericError when the log argument is not positive.
double eval_fidelity(const FidelityCurve& curve, ScalingFactor pi);

enum class InversionStatus { ok, infeasible };

struct FidelityInversion {
  InversionStatus status = InversionStatus::ok;
  double pi = 1.0;         ///< chosen scaling factor (meaningful when ok)
  double unclamped = 1.0;  ///< raw closed-form inverse, before clamping
  bool clamped = false;    ///< true when the inverse fell below pi_min
};

/// Smallest scaling factor meeting phi_min, without throwing on an
/// unreachable target. Used by feasibility pre-checks.
FidelityInversion try_invert_fidelity(const FidelityCurve& curve, double phi_min, ScalingFactor pi_min);

/// Smallest scaling factor meeting phi_min. Clamps up to pi_min; throws
/// InfeasibleError when even pi = 1 falls short of phi_min.
ScalingFactor invert_fidelity(const FidelityCurve& curve, double phi_min, ScalingFactor pi_min);

struct FitOptions {
  /// Fits whose residual RMS exceeds this are rejected.
  double rms_ceiling = 0.05;
};

struct CurveFit {
  FidelityCurve curve;
  double rms = 0.0;
};

/// Nonlinear least-squares fit of the curve to measured samples. Requires at
/// least four distinct pi values inside [pi_min, 1].
CurveFit fit_curve(std::span<const FidelitySample> samples, ScalingFactor pi_min, const FitOptions& opts = {});

struct CurveDiagnostics {
  bool log_domain_ok = true;
  bool monotone_ok = true;
  bool range_ok = true;
  std::vector<std::string> messages;

  bool ok() const noexcept { return log_domain_ok && monotone_ok && range_ok; }
};

/// Checks the curve invariants analytically (sign conditions at the window
/// endpoints); never samples the interior.
CurveDiagnostics validate_curve(const FidelityCurve& curve);

}  // namespace fast
