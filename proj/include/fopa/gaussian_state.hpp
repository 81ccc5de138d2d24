#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fopa {

/// Label of an optical mode ("s", "i", "aux", ...).
struct ModeId {
  std::string label;

  ModeId() = default;
  ModeId(std::string l) : label(std::move(l)) {}
  ModeId(const char* l) : label(l) {}
  ModeId(std::string_view l) : label(l) {}

  friend bool operator==(const ModeId&, const ModeId&) = default;
  friend auto operator<=>(const ModeId&, const ModeId&) = default;
};

/// Mean and variance of a homodyne-measured quadrature. Variance is in units
/// of the shot-noise level (vacuum variance = 1).
template <typename Scalar>
struct BasicQuadratureStats {
  Scalar mean{0};
  Scalar variance{0};
};
using QuadratureStats = BasicQuadratureStats<double>;

/// Two-mode squeezer (parametric amplifier) settings. mu = cosh(g), nu = sinh(g).
template <typename Scalar>
struct BasicSqueezerParams {
  Scalar gain_g{0};
  Scalar pump_phase{0};

  Scalar mu() const { return std::cosh(gain_g); }
  Scalar nu() const { return std::sinh(gain_g); }
};
using SqueezerParams = BasicSqueezerParams<double>;

/**
 * Multimode Gaussian state in the quadrature basis.
 *
 * Vectors are ordered (x_1, p_1, ..., x_n, p_n) in mode declaration order.
 * The quadrature at angle theta is X(theta) = cos(theta) x + sin(theta) p,
 * i.e. X(theta) = exp(-i theta) a + exp(i theta) a^dagger, so the vacuum has
 * zero mean and identity covariance.
 *
 * Instances are values: every operation in gaussian_ops.hpp returns a new
 * state and leaves its argument untouched.
 */
template <typename Scalar>
class BasicGaussianState {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasicGaussianState() = default;

  BasicGaussianState(std::vector<ModeId> modes, Vector mean, Matrix cov)
      : modes_(std::move(modes)), mean_(std::move(mean)), cov_(std::move(cov)) {
    const auto dim = static_cast<Eigen::Index>(2 * modes_.size());
    if (mean_.size() != dim || cov_.rows() != dim || cov_.cols() != dim) {
      throw std::invalid_argument("GaussianState: mean/cov size does not match mode count");
    }
    for (std::size_t a = 0; a < modes_.size(); ++a) {
      if (modes_[a].label.empty()) throw std::invalid_argument("GaussianState: empty mode label");
      for (std::size_t b = a + 1; b < modes_.size(); ++b) {
        if (modes_[a] == modes_[b]) {
          throw std::invalid_argument("GaussianState: duplicate mode '" + modes_[a].label + "'");
        }
      }
    }
  }

  const std::vector<ModeId>& modes() const { return modes_; }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }
  std::size_t num_modes() const { return modes_.size(); }

  std::optional<std::size_t> find(const ModeId& mode) const {
    for (std::size_t k = 0; k < modes_.size(); ++k) {
      if (modes_[k] == mode) return k;
    }
    return std::nullopt;
  }

  /// Index of `mode`; throws std::invalid_argument when absent.
  std::size_t index_of(const ModeId& mode) const {
    if (auto k = find(mode)) return *k;
    throw std::invalid_argument("unknown mode '" + mode.label + "'");
  }

  /// Copy with a replaced moment pair; mode list is shared.
  BasicGaussianState with_moments(Vector mean, Matrix cov) const {
    BasicGaussianState out;
    out.modes_ = modes_;
    out.mean_ = std::move(mean);
    out.cov_ = std::move(cov);
    return out;
  }

 private:
  std::vector<ModeId> modes_;
  Vector mean_;
  Matrix cov_;
};
using GaussianState = BasicGaussianState<double>;

template <typename Scalar = double>
BasicGaussianState<Scalar> vacuum_state(std::vector<ModeId> modes) {
  const auto dim = static_cast<Eigen::Index>(2 * modes.size());
  using State = BasicGaussianState<Scalar>;
  return State(std::move(modes), State::Vector::Zero(dim), State::Matrix::Identity(dim, dim));
}

}  // namespace fopa
