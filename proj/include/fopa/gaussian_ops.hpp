#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "fopa/gaussian_state.hpp"

namespace fopa {

/**
 * Affine Gaussian channel acting as
 *   mean <- S mean + shift
 *   cov  <- S cov S^T + noise
 * Every optical element in this library is one of these. Unitary elements
 * have noise = 0 and symplectic S.
 */
template <typename Scalar>
struct BasicGaussianChannel {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix transfer;
  Matrix noise;
  Vector shift;

  static BasicGaussianChannel identity(Eigen::Index n_modes) {
    return {Matrix::Identity(2 * n_modes, 2 * n_modes), Matrix::Zero(2 * n_modes, 2 * n_modes),
            Vector::Zero(2 * n_modes)};
  }

  /// Channel equivalent to applying `first`, then *this.
  BasicGaussianChannel after(const BasicGaussianChannel& first) const {
    return {transfer * first.transfer, transfer * first.noise * transfer.transpose() + noise,
            transfer * first.shift + shift};
  }
};
using GaussianChannel = BasicGaussianChannel<double>;

template <typename Scalar>
BasicGaussianState<Scalar> apply_channel(const BasicGaussianState<Scalar>& state,
                                         const BasicGaussianChannel<Scalar>& channel) {
  using Matrix = typename BasicGaussianState<Scalar>::Matrix;
  typename BasicGaussianState<Scalar>::Vector mean = channel.transfer * state.mean() + channel.shift;
  Matrix cov = channel.transfer * state.cov() * channel.transfer.transpose() + channel.noise;
  // keep exact symmetry through long chains
  Matrix sym = (cov + cov.transpose()) / Scalar(2);
  return state.with_moments(std::move(mean), std::move(sym));
}

// ---------------------------------------------------------------------------
// Element matrices on the full 2n-dimensional phase space. Mode arguments are
// indices into the state's mode list.

/**
 * Two-mode squeezer b_s = mu a_s + e^{2i theta_p} nu a_i^dagger (and s <-> i).
 * In quadratures, with phi = 2 theta_p:
 *   x_s' = mu x_s + nu (cos phi x_i + sin phi p_i)
 *   p_s' = mu p_s + nu (sin phi x_i - cos phi p_i)
 * equivalently X_s'(theta) = mu X_s(theta) + nu X_i(phi - theta).
 */
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> two_mode_squeezer_matrix(
    Eigen::Index n_modes, Eigen::Index s, Eigen::Index i, const BasicSqueezerParams<Scalar>& params) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (s == i) throw std::invalid_argument("signal and idler must differ");
  Matrix out = Matrix::Identity(2 * n_modes, 2 * n_modes);
  const Scalar mu = params.mu();
  const Scalar nu = params.nu();
  const Scalar c = std::cos(Scalar(2) * params.pump_phase);
  const Scalar sn = std::sin(Scalar(2) * params.pump_phase);
  Eigen::Matrix<Scalar, 2, 2> coupling;
  coupling << nu * c, nu * sn, nu * sn, -nu * c;
  for (auto [a, b] : {std::pair{s, i}, std::pair{i, s}}) {
    out.template block<2, 2>(2 * a, 2 * a) = mu * Eigen::Matrix<Scalar, 2, 2>::Identity();
    out.template block<2, 2>(2 * a, 2 * b) = coupling;
  }
  return out;
}

/// Beam splitter with amplitude transmittance t: a' = t a + r b, b' = -r a + t b.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> beam_splitter_matrix(Eigen::Index n_modes,
                                                                           Eigen::Index a,
                                                                           Eigen::Index b, Scalar t) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a == b) throw std::invalid_argument("beam splitter ports must differ");
  if (!(t >= Scalar(0) && t <= Scalar(1))) throw std::invalid_argument("beam splitter t must lie in [0, 1]");
  const Scalar r = std::sqrt(Scalar(1) - t * t);
  Matrix out = Matrix::Identity(2 * n_modes, 2 * n_modes);
  const auto id = Eigen::Matrix<Scalar, 2, 2>::Identity();
  out.template block<2, 2>(2 * a, 2 * a) = t * id;
  out.template block<2, 2>(2 * a, 2 * b) = r * id;
  out.template block<2, 2>(2 * b, 2 * a) = -r * id;
  out.template block<2, 2>(2 * b, 2 * b) = t * id;
  return out;
}

/// Phase shift a -> e^{i theta} a.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> phase_shift_matrix(Eigen::Index n_modes,
                                                                         Eigen::Index mode, Scalar theta) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix out = Matrix::Identity(2 * n_modes, 2 * n_modes);
  const Scalar c = std::cos(theta);
  const Scalar s = std::sin(theta);
  out.template block<2, 2>(2 * mode, 2 * mode) << c, -s, s, c;
  return out;
}

template <typename Scalar>
BasicGaussianChannel<Scalar> unitary_channel(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> s) {
  const auto dim = s.rows();
  return {std::move(s), Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(dim, dim),
          Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(dim)};
}

template <typename Scalar>
BasicGaussianChannel<Scalar> displacement_channel(Eigen::Index n_modes, Eigen::Index mode,
                                                  std::complex<Scalar> alpha) {
  auto out = BasicGaussianChannel<Scalar>::identity(n_modes);
  out.shift(2 * mode) = Scalar(2) * alpha.real();
  out.shift(2 * mode + 1) = Scalar(2) * alpha.imag();
  return out;
}

/// Pure-loss channel with power transmission eta (eta = 0 resets to vacuum).
template <typename Scalar>
BasicGaussianChannel<Scalar> loss_channel(Eigen::Index n_modes, Eigen::Index mode, Scalar eta) {
  if (!(eta >= Scalar(0) && eta <= Scalar(1))) throw std::invalid_argument("loss eta must lie in [0, 1]");
  auto out = BasicGaussianChannel<Scalar>::identity(n_modes);
  const auto id = Eigen::Matrix<Scalar, 2, 2>::Identity();
  out.transfer.template block<2, 2>(2 * mode, 2 * mode) = std::sqrt(eta) * id;
  out.noise.template block<2, 2>(2 * mode, 2 * mode) = (Scalar(1) - eta) * id;
  return out;
}

/// Replaces a mode by a thermal state with mean photon number nbar.
template <typename Scalar>
BasicGaussianChannel<Scalar> thermal_reset_channel(Eigen::Index n_modes, Eigen::Index mode, Scalar nbar) {
  if (!(nbar >= Scalar(0)) || !std::isfinite(nbar)) throw std::invalid_argument("thermal nbar must be >= 0");
  auto out = loss_channel<Scalar>(n_modes, mode, Scalar(0));
  out.noise.template block<2, 2>(2 * mode, 2 * mode) *= Scalar(2) * nbar + Scalar(1);
  return out;
}

// ---------------------------------------------------------------------------
// State-level operations.

template <typename Scalar>
BasicGaussianState<Scalar> displace(const BasicGaussianState<Scalar>& state, const ModeId& mode,
                                    std::type_identity_t<std::complex<Scalar>> alpha) {
  const auto k = static_cast<Eigen::Index>(state.index_of(mode));
  auto mean = state.mean();
  mean(2 * k) += Scalar(2) * alpha.real();
  mean(2 * k + 1) += Scalar(2) * alpha.imag();
  return state.with_moments(std::move(mean), state.cov());
}

template <typename Scalar>
BasicGaussianState<Scalar> set_thermal(const BasicGaussianState<Scalar>& state, const ModeId& mode,
                                       std::type_identity_t<Scalar> nbar) {
  const auto k = static_cast<Eigen::Index>(state.index_of(mode));
  return apply_channel(state, thermal_reset_channel<Scalar>(state.num_modes(), k, nbar));
}

template <typename Scalar>
BasicGaussianState<Scalar> apply_two_mode_squeezer(const BasicGaussianState<Scalar>& state,
                                                   const ModeId& signal, const ModeId& idler,
                                                   const BasicSqueezerParams<Scalar>& params) {
  if (signal == idler) throw std::invalid_argument("signal and idler must differ");
  if (!(params.gain_g >= Scalar(0))) throw std::invalid_argument("squeezer gain g must be >= 0");
  const auto s = static_cast<Eigen::Index>(state.index_of(signal));
  const auto i = static_cast<Eigen::Index>(state.index_of(idler));
  return apply_channel(state, unitary_channel<Scalar>(two_mode_squeezer_matrix<Scalar>(state.num_modes(), s, i, params)));
}

template <typename Scalar>
BasicGaussianState<Scalar> apply_beam_splitter(const BasicGaussianState<Scalar>& state, const ModeId& a,
                                               const ModeId& b, std::type_identity_t<Scalar> t) {
  const auto ka = static_cast<Eigen::Index>(state.index_of(a));
  const auto kb = static_cast<Eigen::Index>(state.index_of(b));
  return apply_channel(state, unitary_channel<Scalar>(beam_splitter_matrix<Scalar>(state.num_modes(), ka, kb, t)));
}

template <typename Scalar>
BasicGaussianState<Scalar> apply_phase_shift(const BasicGaussianState<Scalar>& state, const ModeId& mode,
                                             std::type_identity_t<Scalar> theta) {
  const auto k = static_cast<Eigen::Index>(state.index_of(mode));
  return apply_channel(state, unitary_channel<Scalar>(phase_shift_matrix<Scalar>(state.num_modes(), k, theta)));
}

template <typename Scalar>
BasicGaussianState<Scalar> apply_loss(const BasicGaussianState<Scalar>& state, const ModeId& mode, std::type_identity_t<Scalar> eta) {
  const auto k = static_cast<Eigen::Index>(state.index_of(mode));
  return apply_channel(state, loss_channel<Scalar>(state.num_modes(), k, eta));
}

template <typename Scalar>
BasicGaussianState<Scalar> reset_vacuum(const BasicGaussianState<Scalar>& state, const ModeId& mode) {
  return apply_loss(state, mode, Scalar(0));
}

// ---------------------------------------------------------------------------
// Homodyne statistics.

/// One term of a weighted quadrature combination sum_k w_k X_{mode_k}(theta_k).
template <typename Scalar>
struct BasicQuadratureTerm {
  ModeId mode;
  Scalar theta{0};
  Scalar weight{1};
};
using QuadratureTerm = BasicQuadratureTerm<double>;

/// Selector u such that u^T r = sum_k w_k X_k(theta_k).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> quadrature_selector(const BasicGaussianState<Scalar>& state,
                                                             std::span<const BasicQuadratureTerm<Scalar>> terms) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> u =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(static_cast<Eigen::Index>(2 * state.num_modes()));
  for (const auto& term : terms) {
    const auto k = static_cast<Eigen::Index>(state.index_of(term.mode));
    u(2 * k) += term.weight * std::cos(term.theta);
    u(2 * k + 1) += term.weight * std::sin(term.theta);
  }
  return u;
}

template <typename Scalar>
BasicQuadratureStats<Scalar> combo_stats(const BasicGaussianState<Scalar>& state,
                                         std::span<const BasicQuadratureTerm<Scalar>> terms) {
  if (terms.empty()) throw std::invalid_argument("combo_stats: empty term list");
  const auto u = quadrature_selector(state, terms);
  const Scalar var = u.dot(state.cov() * u);
  return {u.dot(state.mean()), var < Scalar(0) ? Scalar(0) : var};
}

template <typename Scalar>
BasicQuadratureStats<Scalar> combo_stats(const BasicGaussianState<Scalar>& state,
                                         std::initializer_list<BasicQuadratureTerm<Scalar>> terms) {
  return combo_stats(state, std::span<const BasicQuadratureTerm<Scalar>>(terms.begin(), terms.size()));
}

template <typename Scalar>
BasicQuadratureStats<Scalar> homodyne_stats(const BasicGaussianState<Scalar>& state, const ModeId& mode,
                                            std::type_identity_t<Scalar> theta) {
  const BasicQuadratureTerm<Scalar> term{mode, theta, Scalar(1)};
  return combo_stats(state, std::span<const BasicQuadratureTerm<Scalar>>(&term, 1));
}

/// Covariance between X_a(theta_a) and X_b(theta_b).
template <typename Scalar>
Scalar quadrature_covariance(const BasicGaussianState<Scalar>& state, const ModeId& a, Scalar theta_a,
                             const ModeId& b, Scalar theta_b) {
  const BasicQuadratureTerm<Scalar> ta{a, theta_a, Scalar(1)};
  const BasicQuadratureTerm<Scalar> tb{b, theta_b, Scalar(1)};
  const auto ua = quadrature_selector(state, std::span<const BasicQuadratureTerm<Scalar>>(&ta, 1));
  const auto ub = quadrature_selector(state, std::span<const BasicQuadratureTerm<Scalar>>(&tb, 1));
  return ua.dot(state.cov() * ub);
}

/// Mean amplitude <a> of a mode.
template <typename Scalar>
std::complex<Scalar> mean_amplitude(const BasicGaussianState<Scalar>& state, const ModeId& mode) {
  const auto k = static_cast<Eigen::Index>(state.index_of(mode));
  return {state.mean()(2 * k) / Scalar(2), state.mean()(2 * k + 1) / Scalar(2)};
}

}  // namespace fopa
