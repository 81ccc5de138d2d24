#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "fopa/circuit.hpp"
#include "fopa/gaussian_ops.hpp"
#include "fopa/gaussian_state.hpp"

namespace fopa {

using ModeIndexMap = std::map<std::string, Eigen::Index, std::less<>>;

template <typename Scalar>
ModeIndexMap mode_index_map(const BasicGaussianState<Scalar>& state) {
  ModeIndexMap out;
  for (std::size_t k = 0; k < state.num_modes(); ++k) out.emplace(state.modes()[k].label, static_cast<Eigen::Index>(k));
  return out;
}

inline Eigen::Index mapped_index(const ModeIndexMap& map, const ModeId& mode) {
  const auto it = map.find(mode.label);
  if (it == map.end()) throw std::invalid_argument("unmapped mode '" + mode.label + "'");
  return it->second;
}

/**
 * Affine channel of one circuit element on an n-mode phase space. Unitary
 * elements give symplectic `transfer` and zero `noise`; loss, block and
 * thermal give a contraction plus vacuum or thermal diffusion. Measure is the
 * identity.
 */
template <typename Scalar = double>
BasicGaussianChannel<Scalar> element_symplectic(const CircuitElement& element, Eigen::Index n_modes,
                                                const ModeIndexMap& modes) {
  using Channel = BasicGaussianChannel<Scalar>;
  const auto idx = [&](const ModeId& m) { return mapped_index(modes, m); };
  return std::visit(
      [&](const auto& e) -> Channel {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Displace>) {
          return displacement_channel<Scalar>(n_modes, idx(e.mode), {Scalar(e.re), Scalar(e.im)});
        } else if constexpr (std::is_same_v<T, Thermal>) {
          return thermal_reset_channel<Scalar>(n_modes, idx(e.mode), Scalar(e.nbar));
        } else if constexpr (std::is_same_v<T, Tms>) {
          if (!(e.g >= 0)) throw std::invalid_argument("squeezer gain g must be >= 0");
          const BasicSqueezerParams<Scalar> params{Scalar(e.g), Scalar(e.theta_p)};
          return unitary_channel<Scalar>(two_mode_squeezer_matrix<Scalar>(n_modes, idx(e.signal), idx(e.idler), params));
        } else if constexpr (std::is_same_v<T, Bs>) {
          return unitary_channel<Scalar>(beam_splitter_matrix<Scalar>(n_modes, idx(e.a), idx(e.b), Scalar(e.t)));
        } else if constexpr (std::is_same_v<T, Phase>) {
          return unitary_channel<Scalar>(phase_shift_matrix<Scalar>(n_modes, idx(e.mode), Scalar(e.theta)));
        } else if constexpr (std::is_same_v<T, Loss>) {
          return loss_channel<Scalar>(n_modes, idx(e.mode), Scalar(e.eta));
        } else if constexpr (std::is_same_v<T, Block>) {
          return loss_channel<Scalar>(n_modes, idx(e.mode), Scalar(0));
        } else {
          idx(e.mode);
          return Channel::identity(n_modes);
        }
      },
      element);
}

/// Whole-circuit channel obtained by composing element channels in order.
template <typename Scalar = double>
BasicGaussianChannel<Scalar> circuit_channel(const Circuit& circuit, Eigen::Index n_modes, const ModeIndexMap& modes) {
  auto total = BasicGaussianChannel<Scalar>::identity(n_modes);
  for (const auto& element : circuit.elements) {
    total = element_symplectic<Scalar>(element, n_modes, modes).after(total);
  }
  return total;
}

/// Vacuum over the circuit's declared modes.
template <typename Scalar = double>
BasicGaussianState<Scalar> initial_state(const Circuit& circuit) {
  return vacuum_state<Scalar>(circuit.modes);
}

template <typename Scalar>
struct BasicMeasurementResult {
  std::string label;
  ModeId mode;
  Scalar theta{0};
  BasicQuadratureStats<Scalar> stats;
};
using MeasurementResult = BasicMeasurementResult<double>;

template <typename Scalar>
struct BasicRunResult {
  BasicGaussianState<Scalar> state;
  std::vector<BasicMeasurementResult<Scalar>> measurements;
};
using RunResult = BasicRunResult<double>;

namespace detail {
inline void require_valid(const Circuit& circuit) {
  for (const auto& d : validate(circuit)) {
    if (d.severity == Severity::error) throw std::invalid_argument("invalid circuit: " + to_string(d));
  }
}
}  // namespace detail

/// Applies the elements in order; measurements record statistics at their
/// position in the circuit and leave the state unchanged.
template <typename Scalar>
BasicRunResult<Scalar> run_circuit(const BasicGaussianState<Scalar>& input, const Circuit& circuit) {
  detail::require_valid(circuit);
  const auto modes = mode_index_map(input);
  const auto n = static_cast<Eigen::Index>(input.num_modes());
  BasicRunResult<Scalar> out{input, {}};
  for (const auto& element : circuit.elements) {
    if (const auto* m = std::get_if<Measure>(&element)) {
      out.measurements.push_back({m->label, m->mode, Scalar(m->theta), homodyne_stats(out.state, m->mode, Scalar(m->theta))});
      continue;
    }
    out.state = apply_channel(out.state, element_symplectic<Scalar>(element, n, modes));
  }
  return out;
}

template <typename Scalar>
BasicGaussianState<Scalar> propagate(const BasicGaussianState<Scalar>& input, const Circuit& circuit) {
  return run_circuit(input, circuit).state;
}

inline RunResult run_circuit(const Circuit& circuit) { return run_circuit(initial_state<double>(circuit), circuit); }

}  // namespace fopa
