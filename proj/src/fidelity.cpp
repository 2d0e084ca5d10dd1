#include "fast/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "fast/error.hpp"

namespace fast {

ScalingFactor::ScalingFactor(double value) : value_(value) {
  if (!(value > 0.0 && value <= 1.0)) {
    std::ostringstream os;
    os << "scaling factor must lie in (0, 1], got " << value;
    throw ConfigError(os.str());
  }
}

namespace {

double log_argument(const FidelityCurve& c, double pi) { return c.kappa2 / pi + c.kappa3; }

}  // namespace

double eval_fidelity(const FidelityCurve& curve, ScalingFactor pi) {
  const double p = pi.value();
  if (p < curve.pi_min.value()) {
    std::ostringstream os;
    os << "pi = " << p << " below the curve's validity window [" << curve.pi_min.value() << ", 1]";
    throw ConfigError(os.str());
  }
  const double arg = log_argument(curve, p);
  if (!(arg > 0.0)) {
    std::ostringstream os;
    os << "fidelity log argument " << arg << " is not positive at pi = " << p;
    throw NumericError(os.str());
  }
  return curve.kappa1 * std::log(arg) + curve.kappa4;
}

FidelityInversion try_invert_fidelity(const FidelityCurve& curve, double phi_min, ScalingFactor pi_min) {
  FidelityInversion out;
  // A target equal to phi(1) up to a few ulps is met by the full model.
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(phi_min));
  if (eval_fidelity(curve, ScalingFactor{1.0}) < phi_min - slack) {
    out.status = InversionStatus::infeasible;
    return out;
  }
  const double lo = std::max(pi_min.value(), curve.pi_min.value());
  if (curve.kappa1 == 0.0) {
    // Flat curve: every admissible pi delivers kappa4 >= phi_min.
    out.pi = lo;
    out.unclamped = lo;
    out.clamped = true;
    return out;
  }
  const double raw = curve.kappa2 / (std::exp((phi_min - curve.kappa4) / curve.kappa1) - curve.kappa3);
  if (!(raw > 0.0) || !std::isfinite(raw)) {
    std::ostringstream os;
    os << "fidelity inverse is not a positive finite scaling factor (" << raw << ")";
    throw NumericError(os.str());
  }
  out.unclamped = raw;
  if (raw < lo) {
    out.pi = lo;
    out.clamped = true;
  } else {
    // phi(1) >= phi_min was checked above; anything past 1 is round-off.
    out.pi = std::min(raw, 1.0);
  }
  return out;
}

ScalingFactor invert_fidelity(const FidelityCurve& curve, double phi_min, ScalingFactor pi_min) {
  const auto inv = try_invert_fidelity(curve, phi_min, pi_min);
  if (inv.status == InversionStatus::infeasible) {
    std::ostringstream os;
    os << "fidelity target " << phi_min << " exceeds the full model's fidelity "
       << eval_fidelity(curve, ScalingFactor{1.0});
    throw InfeasibleError(os.str());
  }
  return ScalingFactor{inv.pi};
}

CurveDiagnostics validate_curve(const FidelityCurve& curve) {
  CurveDiagnostics d;
  const double lo = curve.pi_min.value();
  // k2/pi + k3 is monotone in pi, so positivity at both ends covers the window.
  const double arg_lo = log_argument(curve, lo);
  const double arg_hi = log_argument(curve, 1.0);
  if (!(arg_lo > 0.0 && arg_hi > 0.0)) {
    d.log_domain_ok = false;
    std::ostringstream os;
    os << "log argument not positive on [" << lo << ", 1]: " << arg_lo << " at pi_min, " << arg_hi << " at 1";
    d.messages.push_back(os.str());
  }
  if (curve.kappa1 * curve.kappa2 > 0.0) {
    d.monotone_ok = false;
    d.messages.push_back("fidelity decreases with pi (kappa1 * kappa2 > 0)");
  }
  if (d.log_domain_ok) {
    // phi is monotone on the window, so its extremes sit at the endpoints.
    for (double p : {lo, 1.0}) {
      const double phi = curve.kappa1 * std::log(log_argument(curve, p)) + curve.kappa4;
      if (!(phi >= 0.0 && phi <= 1.0)) {
        d.range_ok = false;
        std::ostringstream os;
        os << "fidelity " << phi << " at pi = " << p << " outside [0, 1]";
        d.messages.push_back(os.str());
      }
    }
  } else {
    d.range_ok = false;
  }
  return d;
}

namespace {

// With k2 fixed to +1 or -1 (any positive rescaling of (k2, k3) folds into
// k4), the curve family is indexed by the sign and by the log argument's
// minimum over the window, `margin` > 0.
struct Profile {
  double sign;
  double margin;
};

double kappa3_for(const Profile& p, double pi_min) {
  return p.sign > 0 ? p.margin - 1.0 : p.margin + 1.0 / pi_min;
}

struct LinearFit {
  double kappa1 = 0.0;
  double kappa4 = 0.0;
  double rss = std::numeric_limits<double>::infinity();
};

// Closed-form least squares for (k1, k4) given (k2, k3), with k1 * k2 <= 0.
LinearFit solve_linear(std::span<const FidelitySample> samples, double kappa2, double kappa3) {
  const auto n = static_cast<double>(samples.size());
  double sx = 0, sy = 0;
  std::vector<double> x(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    x[i] = std::log(kappa2 / samples[i].pi.value() + kappa3);
    sx += x[i];
    sy += samples[i].fidelity;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (samples[i].fidelity - my);
  }
  LinearFit f;
  f.kappa1 = sxx > 0.0 ? sxy / sxx : 0.0;
  if (f.kappa1 * kappa2 > 0.0 || !std::isfinite(f.kappa1)) f.kappa1 = 0.0;
  f.kappa4 = my - f.kappa1 * mx;
  f.rss = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double r = f.kappa1 * x[i] + f.kappa4 - samples[i].fidelity;
    f.rss += r * r;
  }
  return f;
}

}  // namespace

CurveFit fit_curve(std::span<const FidelitySample> samples, ScalingFactor pi_min, const FitOptions& opts) {
  if (samples.size() < 4) {
    std::ostringstream os;
    os << "need at least 4 fidelity samples to fit 4 parameters, got " << samples.size();
    throw ConfigError(os.str());
  }
  std::set<double> distinct;
  for (const auto& s : samples) {
    if (s.pi < pi_min) {
      std::ostringstream os;
      os << "sample at pi = " << s.pi.value() << " lies below pi_min = " << pi_min.value();
      throw ConfigError(os.str());
    }
    if (!(s.fidelity >= 0.0 && s.fidelity <= 1.0)) {
      std::ostringstream os;
      os << "sample fidelity " << s.fidelity << " outside [0, 1]";
      throw ConfigError(os.str());
    }
    distinct.insert(s.pi.value());
  }
  if (distinct.size() < 4) throw ConfigError("need at least 4 distinct pi values to fit the fidelity curve");

  const double lo = pi_min.value();
  auto rss_at = [&](double sign, double log_margin) {
    const Profile p{sign, std::exp(log_margin)};
    return solve_linear(samples, sign, kappa3_for(p, lo)).rss;
  };

  // Coarse scan over log(margin) in [ln 1e-6, ln 1e6], 20 points per decade.
  constexpr int kSteps = 240;
  const double lm_lo = std::log(1e-6), lm_hi = std::log(1e6);
  const double step = (lm_hi - lm_lo) / kSteps;
  double best_sign = 1.0, best_lm = 0.0, best_rss = std::numeric_limits<double>::infinity();
  for (double sign : {1.0, -1.0}) {
    for (int i = 0; i <= kSteps; ++i) {
      const double lm = lm_lo + i * step;
      const double r = rss_at(sign, lm);
      if (r < best_rss) {
        best_rss = r;
        best_sign = sign;
        best_lm = lm;
      }
    }
  }

  // Brent polish within the neighbouring grid cells.
  const auto polished = boost::math::tools::brent_find_minima(
      [&](double lm) { return rss_at(best_sign, lm); }, std::max(lm_lo, best_lm - step), std::min(lm_hi, best_lm + step),
      std::numeric_limits<double>::digits / 2 + 4);
  if (polished.second < best_rss) best_lm = polished.first;

  const Profile chosen{best_sign, std::exp(best_lm)};
  const double kappa3 = kappa3_for(chosen, lo);
  const LinearFit lin = solve_linear(samples, best_sign, kappa3);

  CurveFit out;
  out.curve = FidelityCurve{lin.kappa1, best_sign, kappa3, lin.kappa4, pi_min};
  out.rms = std::sqrt(lin.rss / static_cast<double>(samples.size()));

  const auto diag = validate_curve(out.curve);
  if (!diag.ok()) {
    std::ostringstream os;
    os << "fitted curve violates its invariants:";
    for (const auto& m : diag.messages) os << ' ' << m << ';';
    throw NumericError(os.str());
  }
  if (!(out.rms <= opts.rms_ceiling)) {
    std::ostringstream os;
    os << "fit residual RMS " << out.rms << " exceeds the ceiling " << opts.rms_ceiling;
    throw NumericError(os.str());
  }
  return out;
}

}  // namespace fast
