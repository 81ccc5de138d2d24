#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "fopa/gaussian_ops.hpp"
#include "fopa/metrics.hpp"
#include "heisenberg_oracle.hpp"

namespace fopa {
namespace {

constexpr double kPi = std::numbers::pi;
const GainPair kGain6 = GainPair::from_power_gain(6.0);
const GainPair kGain20 = GainPair::from_power_gain(20.0);
const GainPair kUnity = GainPair::from_g(0.0);

TEST(GainPair, ConstructionAndInvariant) {
  EXPECT_NEAR(kGain6.mu * kGain6.mu, 6.0, 1e-12);
  EXPECT_NEAR(kGain6.nu * kGain6.nu, 5.0, 1e-12);
  EXPECT_NEAR(kGain6.g(), 1.5444849524, 1e-9);
  EXPECT_NEAR(kGain20.g(), 2.1782722103, 1e-9);
  EXPECT_NEAR(kGain6.power_gain(), 6.0, 1e-12);
  EXPECT_NEAR(kGain6.noise_sum(), 11.0, 1e-12);
  EXPECT_THROW(GainPair(2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(GainPair(0.5, 0.0), std::invalid_argument);
  EXPECT_NO_THROW(GainPair(1.0, 0.0));
}

TEST(Decibels, KnownValues) {
  EXPECT_EQ(to_decibels(1.0), 0.0);
  EXPECT_NEAR(to_decibels(2.0), 3.0103, 1e-4);
  EXPECT_NEAR(to_decibels(1.47), 1.6732, 1e-4);
  EXPECT_THROW(to_decibels(0.0), std::domain_error);
  EXPECT_THROW(to_decibels(-1.0), std::domain_error);
  for (double x : {1e-6, 0.3, 1.0, 7.5, 1e9}) EXPECT_NEAR(from_decibels(to_decibels(x)) / x, 1.0, 1e-12);
}

TEST(Snr, Basics) {
  EXPECT_DOUBLE_EQ(snr(QuadratureStats{2.0, 1.0}), 4.0);
  EXPECT_DOUBLE_EQ(snr(QuadratureStats{0.0, 3.0}), 0.0);
  EXPECT_THROW(snr(QuadratureStats{1.0, 0.0}), std::domain_error);
}

TEST(Snr, CalibratedCoherentProbe) {
  // 6.69 dB input SNR on vacuum noise requires 4 alpha^2 = 4.6666.
  const double alpha = 1.0801150173873715;
  const auto st = displace(vacuum_state({"s"}), "s", {alpha, 0.0});
  const double s = snr(homodyne_stats(st, "s", 0.0));
  EXPECT_NEAR(s, 4.666593803142887, 1e-12);
  EXPECT_NEAR(to_decibels(s), 6.69, 1e-12);
}

TEST(OptimalLambda, UncorrelatedModes) {
  const auto st = set_thermal(vacuum_state({"s", "i"}), "s", 2.0);
  const auto fit = optimal_lambda(st, "s", "i", 0.3);
  EXPECT_NEAR(fit.lambda, 0.0, 1e-15);
  EXPECT_NEAR(fit.var_min, 5.0, 1e-12);
}

TEST(OptimalLambda, FirstAmplifierOutputs) {
  const auto st = apply_two_mode_squeezer(vacuum_state({"s", "i"}), "s", "i", SqueezerParams{kGain6.g(), 0.0});
  const auto fit = optimal_lambda(st, "s", "i", 0.0);
  EXPECT_NEAR(fit.lambda, 0.9958591954639384, 1e-9);
  EXPECT_NEAR(fit.var_min, 1.0 / 11.0, 1e-9);
  const auto closed = optimal_lambda_closed_form(kGain6);
  EXPECT_NEAR(closed.lambda, 0.9958591954639384, 1e-12);
  EXPECT_NEAR(closed.var_min, 1.0 / 11.0, 1e-12);
}

TEST(OptimalLambda, ConjugateAngleForOtherPumpPhases) {
  // With pump phase theta_p the idler partner of X_s(theta) is X_i(2 theta_p - theta).
  const double tp = 0.7, th = 0.25;
  const auto st = apply_two_mode_squeezer(vacuum_state({"s", "i"}), "s", "i", SqueezerParams{kGain6.g(), tp});
  const auto fit = optimal_lambda(st, "s", th, "i", 2 * tp - th);
  EXPECT_NEAR(fit.lambda, 0.9958591954639384, 1e-9);
  EXPECT_NEAR(fit.var_min, 1.0 / 11.0, 1e-9);
}

TEST(OptimalLambda, DegenerateIdler) {
  GaussianState::Matrix cov = GaussianState::Matrix::Identity(4, 4);
  cov(2, 2) = 0.0;
  const GaussianState st({"s", "i"}, GaussianState::Vector::Zero(4), cov);
  EXPECT_THROW(optimal_lambda(st, "s", "i", 0.0), std::domain_error);
}

TEST(OutputNoise, ClosedFormValues) {
  EXPECT_NEAR(output_noise_closed_form(kUnity, kGain20, 0.4), 39.0, 1e-12);
  EXPECT_NEAR(output_noise_closed_form(kGain6, kGain20, kPi / 2), 1.9168699187475466, 1e-9);
  EXPECT_NEAR(minimum_output_noise_closed_form(kGain6, kGain20), 1.9168699187475466, 1e-12);
  EXPECT_NEAR(output_noise_closed_form(kGain6, kGain6, kPi / 2), 1.0, 1e-12);
  EXPECT_NEAR(output_noise_closed_form(kGain6, kGain20, 0.0), 856.0831300812525, 1e-9);
}

TEST(OutputNoise, AgreesWithOperatorModel) {
  for (double g1 : {0.2, 0.9, 1.6}) {
    for (double g2 : {0.4, 1.3, 2.2}) {
      for (double d : {0.0, 0.5, 1.2, kPi / 2, 2.8}) {
        const Circuit c{{"s", "i"}, {Tms{"s", "i", g1, 0.3}, Tms{"s", "i", g2, 0.3 + d}}};
        const double v = testing::HeisenbergModel::run(c).variance("s", 1.0);
        const double ref = output_noise_closed_form(GainPair::from_g(g1), GainPair::from_g(g2), d);
        EXPECT_NEAR(v / ref, 1.0, 1e-12);
      }
    }
  }
}

TEST(RegularNf, KnownValuesAndLimits) {
  const auto nf = regular_nf_closed_form(kGain20);
  EXPECT_NEAR(nf.nf_s, 1.95, 1e-12);
  EXPECT_NEAR(nf.nf_i, 39.0 / 19.0, 1e-12);
  EXPECT_NEAR(to_decibels(nf.nf_s), 2.9003, 1e-4);
  EXPECT_NEAR(to_decibels(nf.nf_i), 3.1231, 1e-4);
  EXPECT_NEAR(regular_nf_closed_form(GainPair::from_power_gain(1e6)).nf_s, 2.0, 1e-5);
  const auto none = regular_nf_closed_form(kUnity);
  EXPECT_EQ(none.nf_s, 1.0);
  EXPECT_TRUE(std::isinf(none.nf_i));
}

TEST(CorrelatedNf, DefaultGains) {
  const auto nf = correlated_nf_closed_form(kGain6, kGain20);
  EXPECT_NEAR(nf.nf_s, 1.0542784553111506, 1e-12);
  EXPECT_NEAR(nf.nf_i, 1.109766795064369, 1e-12);
  EXPECT_NEAR(to_decibels(nf.nf_s), 0.2296, 1e-4);
  EXPECT_NEAR(to_decibels(nf.nf_i), 0.4523, 1e-4);
}

TEST(CorrelatedNf, NoiselessAtOptimalSecondGain) {
  const auto g2 = optimal_second_gain(kGain6);
  EXPECT_NEAR(g2.mu, 11.0, 1e-12);
  const auto nf = correlated_nf_closed_form(kGain6, g2);
  EXPECT_NEAR(nf.nf_s, 1.0, 1e-9);
  EXPECT_NEAR(nf.nf_i, 121.0 / 120.0, 1e-9);
}

TEST(CorrelatedNf, TrivialFirstStageReducesToRegular) {
  // mu1 = 1, nu1 = 0: (1 + 2 nu2^2) / mu2^2 = 1 + nu2^2 / mu2^2.
  for (double pg : {1.5, 6.0, 20.0, 300.0}) {
    const auto g2 = GainPair::from_power_gain(pg);
    const auto c = correlated_nf_closed_form(kUnity, g2);
    const auto r = regular_nf_closed_form(g2);
    EXPECT_NEAR(c.nf_s, r.nf_s, 1e-12);
    EXPECT_NEAR(c.nf_i, r.nf_i, 1e-12);
  }
}

TEST(CorrelatedNf, ReductionAtOptimum) {
  for (double pg1 : {1.2, 3.0, 6.0, 15.0}) {
    const auto g1 = GainPair::from_power_gain(pg1);
    const auto g2 = optimal_second_gain(g1);
    const double ratio = correlated_nf_closed_form(g1, g2).nf_s / regular_nf_closed_form(g2).nf_s;
    EXPECT_NEAR(ratio, nf_reduction_closed_form(g2), 1e-9);
    EXPECT_LT(ratio, 1.0);
  }
}

TEST(ThermalInputNf, ExcessNoiseDoesNotCancel) {
  const auto nf = thermal_input_nf_closed_form(kGain6, kGain20);
  EXPECT_NEAR(to_decibels(nf.nf_s), 0.3598, 1e-4);
  EXPECT_NEAR(to_decibels(nf.nf_i), 0.3969, 1e-4);
  const auto unity = thermal_input_nf_closed_form(kUnity, kGain20);
  EXPECT_NEAR(unity.nf_s, regular_nf_closed_form(kGain20).nf_s, 1e-12);
}

TEST(SnrImprovement, ClosedForm) {
  EXPECT_NEAR(snr_improvement_closed_form(kGain6, kGain20), 20.345668539408244, 1e-9);
  EXPECT_NEAR(to_decibels(snr_improvement_closed_form(kGain6, kGain20)), 13.08, 5e-3);
  EXPECT_NEAR(snr_improvement_closed_form(kGain20, kGain20), kGain20.noise_sum(), 1e-9);
  EXPECT_NEAR(snr_improvement_closed_form(kUnity, kGain20) * 1.0, 1.0, 1e-12);
}

TEST(Transfer, Coefficients) {
  const auto opt = correlated_nf_closed_form(kGain6, optimal_second_gain(kGain6));
  EXPECT_NEAR(transfer_coefficients(opt.nf_s, opt.nf_i).t_sum, 1.9917355371900827, 1e-9);
  EXPECT_DOUBLE_EQ(transfer_coefficients(2.0, 2.0).t_sum, 1.0);
  const auto measured = transfer_coefficients(from_decibels(0.85), from_decibels(1.91));
  EXPECT_NEAR(measured.t_s, 0.82, 5e-3);
  EXPECT_NEAR(measured.t_i, 0.64, 5e-3);
  EXPECT_NEAR(measured.t_sum, 1.47, 5e-3);
  EXPECT_THROW(transfer_coefficients(0.0, 1.0), std::domain_error);
  EXPECT_THROW(transfer_coefficients(1.0, -1.0), std::domain_error);
}

TEST(Su11, VisibilityClosedForm) {
  EXPECT_NEAR(su11_visibility_closed_form(kGain6, kGain20), 0.9978577805636739, 1e-12);
  EXPECT_NEAR(su11_visibility_closed_form(kGain6, kGain6), 1.0, 1e-12);
  EXPECT_EQ(su11_visibility_closed_form(kGain6, kUnity), 0.0);
}

TEST(TapReport, ReciprocityAndDecibels) {
  const auto r = make_tap_report(4.0, 2.0, 1.0, 0.5, 3.0, 4.0);
  EXPECT_DOUBLE_EQ(r.nf_s, 2.0);
  EXPECT_DOUBLE_EQ(r.nf_i, 4.0);
  EXPECT_DOUBLE_EQ(r.t_s * r.nf_s, 1.0);
  EXPECT_DOUBLE_EQ(r.t_sum, 0.75);
  EXPECT_NEAR(r.nf_s_db(), 3.0103, 1e-4);
  EXPECT_DOUBLE_EQ(r.lambda_opt, 0.5);

  const auto dark = make_tap_report(4.0, 0.0, 2.0);
  EXPECT_TRUE(std::isinf(dark.nf_s));
  EXPECT_EQ(dark.t_s, 0.0);
  EXPECT_EQ(TapReport::db(0.0), -std::numeric_limits<double>::infinity());
}

}  // namespace
}  // namespace fopa
