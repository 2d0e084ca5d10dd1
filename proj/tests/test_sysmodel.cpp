#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fast/error.hpp"
#include "fast/sysmodel.hpp"

namespace {

using fast::ScalingFactor;

// Expected values below were computed with 30-digit arithmetic straight from
// the cost formulas, outside this code base.
constexpr double kTau1 = 8.998912e-05;
constexpr double kTau2 = 1.13491352256394042;
constexpr double kTau3 = 0.131072;
constexpr double kTau4 = 1.124864e-02;

struct Defaults {
  fast::WorkloadProfile work;
  fast::DeviceProfile dev;
  fast::LinkProfile link;
};

TEST(Units, NoiseDensityConversion) {
  EXPECT_NEAR(fast::dbm_per_mhz_to_w_per_hz(-95.0), 3.16227766016837933e-19, 1e-32);
  EXPECT_NEAR(fast::LinkProfile{}.N0, fast::dbm_per_mhz_to_w_per_hz(-95.0), 1e-32);
}

TEST(DeriveWorkload, Defaults) {
  const Defaults d;
  const auto full = fast::derive_workload(d.work, ScalingFactor{1.0});
  EXPECT_DOUBLE_EQ(full.C_e, 3.328e8);
  EXPECT_DOUBLE_EQ(full.C_d, 1.664e9);
  EXPECT_DOUBLE_EQ(full.D, 2097152.0);

  const auto half = fast::derive_workload(d.work, ScalingFactor{0.5});
  EXPECT_DOUBLE_EQ(half.C_e, 8.32e7);
  EXPECT_DOUBLE_EQ(half.C_d, 4.16e8);
  EXPECT_DOUBLE_EQ(half.D, 1048576.0);
}

TEST(DeriveWorkload, ZeroComputeProfile) {
  fast::WorkloadProfile w;
  w.K = 1;
  w.W_e = 0.0;
  w.W_d = 0.0;
  const auto t = fast::derive_workload(w, ScalingFactor{0.3});
  EXPECT_EQ(t.C_e, 0.0);
  EXPECT_EQ(t.C_d, 0.0);
  EXPECT_DOUBLE_EQ(t.D, 0.3 * w.S);
}

TEST(ShannonRate, Defaults) {
  const fast::LinkProfile link;
  EXPECT_NEAR(fast::shannon_rate(link, 0.1), 769686.717060056543, 1e-6);
  EXPECT_EQ(fast::shannon_rate(link, 0.0), 0.0);
  EXPECT_THROW(fast::shannon_rate(link, 2.0 * link.P_max), fast::ConfigError);
}

TEST(ShannonRate, DoublingBandwidthAtFixedSnr) {
  fast::LinkProfile a;
  fast::LinkProfile b = a;
  b.B = 2.0 * a.B;
  b.P_max = 2.0 * a.P_max;
  EXPECT_NEAR(fast::shannon_rate(b, 0.2), 2.0 * fast::shannon_rate(a, 0.1), 1e-6);
}

TEST(ShannonRate, PowerForRateInverts) {
  const fast::LinkProfile link;
  for (double P : {1e-6, 1e-3, 0.05, 0.5, 1.0}) {
    EXPECT_NEAR(fast::power_for_rate(link, fast::shannon_rate(link, P)), P, 1e-12 * std::max(1.0, P));
  }
}

TEST(TauConstants, HalfWidthDefaults) {
  const Defaults d;
  const auto w = fast::derive_workload(d.work, ScalingFactor{0.5});
  const auto t = fast::tau_constants(w, d.link, d.dev, 8.0);
  EXPECT_NEAR(t.tau1, kTau1, 1e-12 * kTau1);
  EXPECT_NEAR(t.tau2, kTau2, 1e-12 * kTau2);
  EXPECT_NEAR(t.tau3, kTau3, 1e-15);
  EXPECT_NEAR(t.tau4, kTau4, 1e-12 * kTau4);
}

TEST(TauConstants, MatchesClosedFormInPi) {
  // The generalized triple must reproduce the pi-explicit expressions.
  const Defaults d;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double pi = u(rng);
    const double T = 1.0 + 10.0 * u(rng);
    const auto t = fast::tau_constants(fast::derive_workload(d.work, ScalingFactor{pi}), d.link, d.dev, T);
    const double K = d.work.K;
    const double lit1 = d.dev.eps_e * std::pow(K * d.work.W_e, 3) * std::pow(pi, 6) / (T * T);
    const double lit3 = K * pi * d.work.S / (d.link.B * T);
    const double lit4 = d.dev.eps_d * std::pow(K * d.work.W_d, 3) * std::pow(pi, 6) / (T * T);
    EXPECT_NEAR(t.tau1, lit1, 1e-12 * lit1);
    EXPECT_NEAR(t.tau3, lit3, 1e-12 * lit3);
    EXPECT_NEAR(t.tau4, lit4, 1e-12 * lit4);
  }
}

TEST(TauConstants, TimeScaling) {
  const Defaults d;
  const auto w = fast::derive_workload(d.work, ScalingFactor{0.5});
  const auto a = fast::tau_constants(w, d.link, d.dev, 4.0);
  const auto b = fast::tau_constants(w, d.link, d.dev, 8.0);
  EXPECT_NEAR(b.tau1, a.tau1 / 4.0, 1e-15 * a.tau1);
  EXPECT_NEAR(b.tau2, a.tau2 * 2.0, 1e-12 * b.tau2);
  EXPECT_NEAR(b.tau3, a.tau3 / 2.0, 1e-15);
  EXPECT_NEAR(b.tau4, a.tau4 / 4.0, 1e-15 * a.tau4);
}

TEST(TauConstants, DegenerateWorkload) {
  const Defaults d;
  EXPECT_THROW(fast::tau_constants({0.0, 1e8, 1e6}, d.link, d.dev, 8.0), fast::NumericError);
}

TEST(SplitLowerLimits, HalfWidthDefaults) {
  Defaults d;
  d.link.P_max = 0.2;
  const auto w = fast::derive_workload(d.work, ScalingFactor{0.5});
  const auto m = fast::split_lower_limits(w, d.dev, d.link, 8.0);
  EXPECT_NEAR(m.alpha_min, 5.2e-3, 1e-15);
  EXPECT_NEAR(m.gamma_min, 2.6e-2, 1e-15);
  EXPECT_NEAR(m.beta_min, 0.103294722432951615, 1e-12);
}

TEST(SplitLowerLimits, Limits) {
  Defaults d;
  const auto w = fast::derive_workload(d.work, ScalingFactor{0.5});
  d.dev.f_e_max = 1e300;
  EXPECT_LT(fast::split_lower_limits(w, d.dev, d.link, 8.0).alpha_min, 1e-280);

  // Payload sized to saturate the link exactly.
  const double T = 8.0;
  const fast::WorkloadTriple saturating{w.C_e, w.C_d, T * fast::shannon_rate(d.link, d.link.P_max)};
  EXPECT_NEAR(fast::split_lower_limits(saturating, d.dev, d.link, T).beta_min, 1.0, 1e-15);
}

TEST(EnergyOfSplit, EqualThirds) {
  const fast::TauConstants t{kTau1, kTau2, kTau3, kTau4};
  EXPECT_NEAR(fast::energy_of_split(t, {1.0 / 3, 1.0 / 3, 1.0 / 3}), 0.220577175545645892, 1e-12);
}

TEST(EnergyOfSplit, FunctionalForm) {
  fast::TauConstants t{kTau1, kTau2, 0.0, kTau4};
  // No payload: the transmission term vanishes.
  EXPECT_NEAR(fast::energy_of_split(t, {0.2, 0.5, 0.3}), kTau1 / 0.04 + kTau4 / 0.09, 1e-15);

  t.tau3 = kTau3;
  t.tau2 = 0.0;
  t.tau4 = 0.0;
  const double e1 = fast::energy_of_split(t, {0.4, 0.3, 0.3});
  const double e2 = fast::energy_of_split(t, {0.2, 0.3, 0.3});
  EXPECT_NEAR(e2, 4.0 * e1, 1e-15);

  EXPECT_THROW(fast::energy_of_split(t, {0.0, 0.5, 0.5}), fast::ConfigError);
}

TEST(EnergyOfSplit, ConvexAlongSegments) {
  const fast::TauConstants t{kTau1, kTau2, kTau3, kTau4};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.02, 1.0);
  auto random_split = [&] {
    double a = u(rng), b = u(rng), g = u(rng);
    const double s = a + b + g;
    return fast::TimeSplit{a / s, b / s, g / s};
  };
  for (int i = 0; i < 200; ++i) {
    const auto p = random_split();
    const auto q = random_split();
    constexpr int n = 20;
    auto at = [&](int k) {
      const double s = static_cast<double>(k) / n;
      return fast::energy_of_split(t, {p.alpha + s * (q.alpha - p.alpha), p.beta + s * (q.beta - p.beta),
                                       p.gamma + s * (q.gamma - p.gamma)});
    };
    for (int k = 1; k < n; ++k) {
      const double second = at(k - 1) - 2.0 * at(k) + at(k + 1);
      EXPECT_GE(second, -1e-12 * std::abs(at(k)));
    }
  }
}

TEST(RecoverStrategy, TightLimitsHitMaxima) {
  Defaults d;
  d.link.P_max = 0.2;
  const ScalingFactor pi{0.5};
  const auto w = fast::derive_workload(d.work, pi);
  const auto m = fast::split_lower_limits(w, d.dev, d.link, 8.0);
  const auto s = fast::recover_strategy({m.alpha_min, m.beta_min, m.gamma_min}, w, pi, d.dev, d.link, 8.0);
  EXPECT_NEAR(s.f_e, d.dev.f_e_max, 1e-9 * d.dev.f_e_max);
  EXPECT_NEAR(s.f_d, d.dev.f_d_max, 1e-9 * d.dev.f_d_max);
  EXPECT_NEAR(s.P, d.link.P_max, 1e-9 * d.link.P_max);
}

TEST(RecoverStrategy, KnownSplit) {
  const Defaults d;
  const ScalingFactor pi{0.5};
  const auto w = fast::derive_workload(d.work, pi);
  const auto s = fast::recover_strategy({0.2, 0.5, 0.3}, w, pi, d.dev, d.link, 8.0);
  EXPECT_NEAR(s.f_e, 5.2e7, 1e-6);
  EXPECT_NEAR(s.f_d, 1.73333333333333333e8, 1e-5);
  EXPECT_NEAR(s.P, 0.0282678032006873684, 1e-15);
}

TEST(RecoverStrategy, RoundTripReproducesPhaseTimes) {
  const Defaults d;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const ScalingFactor pi{0.25 + 0.75 * u(rng)};
    const double T = 2.0 + 10.0 * u(rng);
    const auto w = fast::derive_workload(d.work, pi);
    const auto m = fast::split_lower_limits(w, d.dev, d.link, T);
    const double slack = 1.0 - m.sum();
    ASSERT_GT(slack, 0.0);
    double a = u(rng), b = u(rng), g = u(rng);
    const double s = a + b + g;
    const fast::TimeSplit split{m.alpha_min + slack * a / s, m.beta_min + slack * b / s, m.gamma_min + slack * g / s};
    const auto st = fast::recover_strategy(split, w, pi, d.dev, d.link, T);
    // Phase times from the cost model, evaluated independently.
    const double t_enc = w.C_e / st.f_e;
    const double t_dec = w.C_d / st.f_d;
    const double t_com = w.D / fast::shannon_rate(d.link, st.P);
    EXPECT_NEAR(t_enc, split.alpha * T, 1e-9 * split.alpha * T);
    EXPECT_NEAR(t_com, split.beta * T, 1e-9 * split.beta * T);
    EXPECT_NEAR(t_dec, split.gamma * T, 1e-9 * split.gamma * T);
    const auto cost = fast::evaluate_strategy(st, d.work, d.dev, d.link);
    EXPECT_NEAR(cost.T_tot, T, 1e-9 * T);
  }
}

TEST(RecoverStrategy, BelowLimitIsRejected) {
  const Defaults d;
  const ScalingFactor pi{1.0};
  const auto w = fast::derive_workload(d.work, pi);
  const auto m = fast::split_lower_limits(w, d.dev, d.link, 8.0);
  EXPECT_THROW(fast::recover_strategy({m.alpha_min * 0.5, 0.5, 0.4}, w, pi, d.dev, d.link, 8.0), fast::NumericError);
}

TEST(EvaluateStrategy, EncodeComponents) {
  Defaults d;
  const fast::TransmissionStrategy s{0.5, 1e9, 1e9, 0.1};
  const auto c = fast::evaluate_strategy(s, d.work, d.dev, d.link);
  const double t_enc = 0.0832, e_enc = 0.832;
  const double t_dec = 512 * 0.25 * 3.25e6 / 1e9, e_dec = 1e-26 * 1e18 * 512 * 0.25 * 3.25e6;
  EXPECT_NEAR(c.T_cmp, t_enc + t_dec, 1e-12);
  EXPECT_NEAR(c.E_cmp, e_enc + e_dec, 1e-12);
  EXPECT_NEAR(c.T_com, 1048576.0 / 769686.717060056543, 1e-9);
  EXPECT_NEAR(c.E_com, 0.1 * c.T_com, 1e-12);
  EXPECT_DOUBLE_EQ(c.T_tot, c.T_cmp + c.T_com);
  EXPECT_DOUBLE_EQ(c.E_tot, c.E_cmp + c.E_com);
}

TEST(EvaluateStrategy, DoublingFrequencies) {
  const Defaults d;
  const auto a = fast::evaluate_strategy({0.5, 5e8, 7e8, 0.1}, d.work, d.dev, d.link);
  const auto b = fast::evaluate_strategy({0.5, 1e9, 1.4e9, 0.1}, d.work, d.dev, d.link);
  EXPECT_NEAR(b.T_cmp, a.T_cmp / 2.0, 1e-15);
  EXPECT_NEAR(b.E_cmp, a.E_cmp * 4.0, 1e-12);
}

TEST(EvaluateStrategy, ZeroFrequencyOrRate) {
  const Defaults d;
  EXPECT_THROW(fast::evaluate_strategy({0.5, 0.0, 1e9, 0.1}, d.work, d.dev, d.link), fast::NumericError);
  EXPECT_THROW(fast::evaluate_strategy({0.5, 1e9, 1e9, 0.0}, d.work, d.dev, d.link), fast::NumericError);
}

TEST(EvaluateWorkload, RawVolume) {
  const Defaults d;
  const fast::WorkloadTriple raw{0.0, 0.0, d.work.K * d.work.raw_bits};
  const auto c = fast::evaluate_workload(raw, 0.0, 0.0, 0.5, d.dev, d.link);
  EXPECT_DOUBLE_EQ(c.data_bits, 12582912.0);
  EXPECT_EQ(c.E_cmp, 0.0);
  EXPECT_EQ(c.T_cmp, 0.0);
}

}  // namespace
