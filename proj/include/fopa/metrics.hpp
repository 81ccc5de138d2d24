#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "fopa/gaussian_ops.hpp"
#include "fopa/gaussian_state.hpp"

namespace fopa {

/// Amplitude gains of a parametric amplifier, mu = cosh g and nu = sinh g.
template <typename Scalar>
struct BasicGainPair {
  Scalar mu{1};
  Scalar nu{0};

  BasicGainPair() = default;
  BasicGainPair(Scalar mu_, Scalar nu_) : mu(mu_), nu(nu_) {
    if (!(mu >= Scalar(1)) || !(nu >= Scalar(0)) || std::abs(mu * mu - nu * nu - Scalar(1)) > Scalar(1e-9) * mu * mu) {
      throw std::invalid_argument("GainPair requires mu >= 1, nu >= 0 and mu^2 - nu^2 = 1");
    }
  }

  static BasicGainPair from_g(Scalar g) {
    if (!(g >= Scalar(0))) throw std::invalid_argument("gain g must be >= 0");
    return {std::cosh(g), std::sinh(g)};
  }
  /// From the measurable power gain G = mu^2 >= 1.
  static BasicGainPair from_power_gain(Scalar power_gain) {
    if (!(power_gain >= Scalar(1))) throw std::invalid_argument("power gain must be >= 1");
    return {std::sqrt(power_gain), std::sqrt(power_gain - Scalar(1))};
  }

  Scalar g() const { return std::acosh(mu); }
  Scalar power_gain() const { return mu * mu; }
  /// mu^2 + nu^2: the output noise of a regular amplifier on vacuum.
  Scalar noise_sum() const { return mu * mu + nu * nu; }
};
using GainPair = BasicGainPair<double>;

template <typename Scalar>
struct BasicNoiseFigures {
  Scalar nf_s{1};
  Scalar nf_i{1};
};
using NoiseFigures = BasicNoiseFigures<double>;

template <typename Scalar>
struct BasicTransferCoefficients {
  Scalar t_s{0};
  Scalar t_i{0};
  Scalar t_sum{0};
};
using TransferCoefficients = BasicTransferCoefficients<double>;

template <typename Scalar>
struct BasicLambdaFit {
  Scalar lambda{0};
  Scalar var_min{0};
};
using LambdaFit = BasicLambdaFit<double>;

// ---------------------------------------------------------------------------
// Decibels

template <typename Scalar>
Scalar to_decibels(Scalar x) {
  if (!(x > Scalar(0))) throw std::domain_error("to_decibels: input must be positive");
  return Scalar(10) * std::log10(x);
}

template <typename Scalar>
Scalar from_decibels(Scalar db) {
  return std::pow(Scalar(10), db / Scalar(10));
}

// ---------------------------------------------------------------------------
// Measured quantities

template <typename Scalar>
Scalar snr(const BasicQuadratureStats<Scalar>& stats) {
  if (!(stats.variance > Scalar(0))) throw std::domain_error("snr: variance must be positive");
  return stats.mean * stats.mean / stats.variance;
}

/**
 * Least-squares weight for X_s(theta_s) - lambda X_i(theta_i):
 * lambda = Cov(X_s, X_i) / Var(X_i), leaving Var(X_s) - Cov^2 / Var(X_i).
 */
template <typename Scalar>
BasicLambdaFit<Scalar> optimal_lambda(const BasicGaussianState<Scalar>& state, const ModeId& s_mode,
                                      std::type_identity_t<Scalar> theta_s, const ModeId& i_mode,
                                      std::type_identity_t<Scalar> theta_i) {
  const Scalar var_i = homodyne_stats(state, i_mode, theta_i).variance;
  if (!(var_i > Scalar(1e-300))) throw std::domain_error("optimal_lambda: degenerate idler variance");
  const Scalar var_s = homodyne_stats(state, s_mode, theta_s).variance;
  const Scalar cov = quadrature_covariance(state, s_mode, Scalar(theta_s), i_mode, Scalar(theta_i));
  const Scalar rest = var_s - cov * cov / var_i;
  return {cov / var_i, rest < Scalar(0) ? Scalar(0) : rest};
}

template <typename Scalar>
BasicLambdaFit<Scalar> optimal_lambda(const BasicGaussianState<Scalar>& state, const ModeId& s_mode,
                                      const ModeId& i_mode, std::type_identity_t<Scalar> theta) {
  return optimal_lambda(state, s_mode, theta, i_mode, theta);
}

// ---------------------------------------------------------------------------
// Closed forms for one amplifier (regular) and two cascaded amplifiers
// (correlated inputs, the second amplifier fed by the first one's outputs).

/// Subtraction weight and residual noise for the outputs of the first
/// amplifier measured at theta = theta_p1.
template <typename Scalar>
BasicLambdaFit<Scalar> optimal_lambda_closed_form(const BasicGainPair<Scalar>& g1) {
  return {Scalar(2) * g1.mu * g1.nu / g1.noise_sum(), Scalar(1) / g1.noise_sum()};
}

/// Output quadrature variance of the cascade for pump phase difference
/// dtheta_p = theta_p2 - theta_p1 (independent of the homodyne angle).
template <typename Scalar>
Scalar output_noise_closed_form(const BasicGainPair<Scalar>& g1, const BasicGainPair<Scalar>& g2, Scalar dtheta_p) {
  const Scalar m1 = g1.mu, n1 = g1.nu, m2 = g2.mu, n2 = g2.nu;
  return m1 * m1 * m2 * m2 + n1 * n1 * n2 * n2 + m1 * m1 * n2 * n2 + n1 * n1 * m2 * m2 +
         Scalar(4) * m1 * m2 * n1 * n2 * std::cos(Scalar(2) * dtheta_p);
}

/// Minimum of output_noise_closed_form, reached at dtheta_p = pi/2.
template <typename Scalar>
Scalar minimum_output_noise_closed_form(const BasicGainPair<Scalar>& g1, const BasicGainPair<Scalar>& g2) {
  const Scalar d = g1.mu * g2.nu - g2.mu * g1.nu;
  return Scalar(1) + Scalar(2) * d * d;
}

/// Regular amplifier with vacuum idler; nf_i is +inf when nu = 0.
template <typename Scalar>
BasicNoiseFigures<Scalar> regular_nf_closed_form(const BasicGainPair<Scalar>& g2) {
  const Scalar mu2 = g2.mu * g2.mu;
  const Scalar nu2 = g2.nu * g2.nu;
  const Scalar nf_i = nu2 > Scalar(0) ? Scalar(1) + mu2 / nu2 : std::numeric_limits<Scalar>::infinity();
  return {Scalar(1) + nu2 / mu2, nf_i};
}

/// Correlated inputs at the optimal phase difference pi/2, with the input
/// SNR taken from the lambda-subtracted dual-channel measurement.
template <typename Scalar>
BasicNoiseFigures<Scalar> correlated_nf_closed_form(const BasicGainPair<Scalar>& g1, const BasicGainPair<Scalar>& g2) {
  const Scalar common = minimum_output_noise_closed_form(g1, g2) * g1.noise_sum();
  const Scalar nu2 = g2.nu * g2.nu;
  return {common / (g2.mu * g2.mu), nu2 > Scalar(0) ? common / nu2 : std::numeric_limits<Scalar>::infinity()};
}

/// Regular amplifier fed by one (thermal) arm of the first amplifier, idler
/// input blocked; input SNR measured directly on the thermal signal.
template <typename Scalar>
BasicNoiseFigures<Scalar> thermal_input_nf_closed_form(const BasicGainPair<Scalar>& g1, const BasicGainPair<Scalar>& g2) {
  const Scalar v = g1.noise_sum();
  const Scalar mu2 = g2.mu * g2.mu;
  const Scalar nu2 = g2.nu * g2.nu;
  return {Scalar(1) + nu2 / (mu2 * v),
          nu2 > Scalar(0) ? Scalar(1) + mu2 / (nu2 * v) : std::numeric_limits<Scalar>::infinity()};
}

/// Output SNR gain of correlated over vacuum idler input, at dtheta_p = pi/2.
template <typename Scalar>
Scalar snr_improvement_closed_form(const BasicGainPair<Scalar>& g1, const BasicGainPair<Scalar>& g2) {
  return g2.noise_sum() / minimum_output_noise_closed_form(g1, g2);
}

/// NF_correlated / NF_regular at the optimum mu2 = mu1^2 + nu1^2.
template <typename Scalar>
Scalar nf_reduction_closed_form(const BasicGainPair<Scalar>& g2) {
  return g2.mu * g2.mu / g2.noise_sum();
}

/// Second-stage gain minimising the correlated signal NF: mu2 = mu1^2 + nu1^2.
template <typename Scalar>
BasicGainPair<Scalar> optimal_second_gain(const BasicGainPair<Scalar>& g1) {
  const Scalar mu = g1.noise_sum();
  return {mu, std::sqrt(mu * mu - Scalar(1))};
}

/// Fringe visibility of the idler-port mean intensity when a coherent
/// reference seeds the first amplifier and the pump phase difference is scanned.
template <typename Scalar>
Scalar su11_visibility_closed_form(const BasicGainPair<Scalar>& g1, const BasicGainPair<Scalar>& g2) {
  const Scalar den = g2.mu * g2.mu * g1.nu * g1.nu + g1.mu * g1.mu * g2.nu * g2.nu;
  if (!(den > Scalar(0))) return Scalar(0);
  return Scalar(2) * g1.mu * g2.mu * g1.nu * g2.nu / den;
}

template <typename Scalar>
BasicTransferCoefficients<Scalar> transfer_coefficients(Scalar nf_s, Scalar nf_i) {
  if (!(nf_s > Scalar(0)) || !(nf_i > Scalar(0))) {
    throw std::domain_error("transfer_coefficients: noise figures must be positive");
  }
  const Scalar t_s = Scalar(1) / nf_s;
  const Scalar t_i = Scalar(1) / nf_i;
  return {t_s, t_i, t_s + t_i};
}

// ---------------------------------------------------------------------------

/// SNR, noise figure and transfer coefficient bundle for one amplifier
/// configuration. Linear values; *_db() helpers give 10 log10.
struct TapReport {
  double snr_in{0};
  double snr_s{0};
  double snr_i{0};
  double nf_s{0};
  double nf_i{0};
  double t_s{0};
  double t_i{0};
  double t_sum{0};
  double lambda_opt{0};
  double variance_s{0};  // output quadrature variances (shot-noise units)
  double variance_i{0};

  static double db(double linear);  // +inf for +inf, -inf for 0
  double snr_in_db() const { return db(snr_in); }
  double snr_s_db() const { return db(snr_s); }
  double snr_i_db() const { return db(snr_i); }
  double nf_s_db() const { return db(nf_s); }
  double nf_i_db() const { return db(nf_i); }
  double t_s_db() const { return db(t_s); }
  double t_i_db() const { return db(t_i); }
  double t_sum_db() const { return db(t_sum); }
};

/// Builds a report from measured SNRs. A zero output SNR yields an infinite
/// noise figure and zero transfer coefficient.
TapReport make_tap_report(double snr_in, double snr_s, double snr_i, double lambda_opt = 0.0,
                          double variance_s = 0.0, double variance_i = 0.0);

}  // namespace fopa
