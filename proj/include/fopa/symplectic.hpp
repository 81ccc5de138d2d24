#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>

#include <Eigen/Dense>

#include "fopa/gaussian_state.hpp"

namespace fopa {

// Tolerances used across the library for double-precision element chains.
inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kPhysicalityTol = 1e-9;
inline constexpr double kSymplecticTol = 1e-12;

/// Block-diagonal symplectic form with [[0, 1], [-1, 0]] per mode.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> symplectic_form(Eigen::Index n_modes) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> omega =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * n_modes, 2 * n_modes);
  for (Eigen::Index k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = Scalar(1);
    omega(2 * k + 1, 2 * k) = Scalar(-1);
  }
  return omega;
}

/// Max-norm of S Omega S^T - Omega.
template <typename Derived>
typename Derived::Scalar symplectic_defect(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  const auto omega = symplectic_form<Scalar>(s.rows() / 2);
  if (s.size() == 0) return Scalar(0);
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_symplectic(const Eigen::MatrixBase<Derived>& s, double tol = kSymplecticTol) {
  return s.rows() == s.cols() && s.rows() % 2 == 0 && symplectic_defect(s) <= tol;
}

/**
 * Symplectic eigenvalues of a covariance matrix, ascending, one per mode.
 *
 * With M = V^{1/2} Omega V^{1/2} (real antisymmetric), i M is Hermitian with
 * eigenvalues +-nu_k. A covariance that is not positive definite has no
 * symplectic spectrum; its smallest entry is reported as 0.
 */
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> symplectic_eigenvalues(
    const Eigen::MatrixBase<Derived>& cov) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = cov.rows() / 2;
  Vector out(n);
  if (n == 0) return out;

  const Matrix sym = (cov + cov.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix> cov_eig(sym);
  if (cov_eig.eigenvalues().minCoeff() <= Scalar(0)) {
    out.setZero();
    return out;
  }
  const Matrix root = cov_eig.operatorSqrt();
  const Matrix m = root * symplectic_form<Scalar>(n) * root;
  const CMatrix h = std::complex<Scalar>(0, 1) * ((m - m.transpose()) / Scalar(2)).template cast<std::complex<Scalar>>();
  Eigen::SelfAdjointEigenSolver<CMatrix> h_eig(h, Eigen::EigenvaluesOnly);
  // ascending: the upper half holds +nu_k in increasing order
  const Vector vals = h_eig.eigenvalues();
  for (Eigen::Index k = 0; k < n; ++k) out(k) = (vals(n + k) - vals(n - 1 - k)) / Scalar(2);
  return out;
}

/// Finite, symmetric and satisfying the uncertainty principle V + i Omega >= 0.
template <typename Scalar>
bool is_physical(const BasicGaussianState<Scalar>& state, double tol = kPhysicalityTol) {
  const auto& v = state.cov();
  if (!v.allFinite() || !state.mean().allFinite()) return false;
  if (v.size() == 0) return true;
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * std::max(Scalar(1), v.cwiseAbs().maxCoeff())) {
    return false;
  }
  // long double keeps strongly squeezed states clear of round-off
  using Wide = std::conditional_t<std::is_floating_point_v<Scalar>, long double, Scalar>;
  return symplectic_eigenvalues(v.template cast<Wide>()).minCoeff() >= Wide(1) - Wide(tol);
}

}  // namespace fopa
