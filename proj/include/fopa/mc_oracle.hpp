#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fopa/circuit.hpp"
#include "fopa/gaussian_state.hpp"

namespace fopa {

/**
 * Monte-Carlo moment oracle.
 *
 * Each sample draws classical complex amplitudes for every mode (vacuum:
 * x and p independent standard normals, a = (x + i p) / 2) and pushes them
 * through the circuit with the mode-operator input-output relations
 * (b_s = mu a_s + e^{2i theta_p} nu conj(a_i) and friends). Loss mixes in a
 * fresh vacuum draw. For Gaussian circuits the first and second moments of
 * these samples equal the quantum ones, so the estimates are a moment-level
 * oracle for the covariance pipeline, which this module never calls.
 *
 * Samples are processed in fixed-size batches; batch b uses an
 * std::mt19937_64 seeded from std::seed_seq{seed_lo, seed_hi, b} and
 * std::normal_distribution<double>. Batch statistics are merged in batch
 * order, so results depend only on (circuit, n_samples, seed).
 */
inline constexpr std::string_view kMcAlgorithm =
    "mt19937_64/normal_distribution, 65536-sample batches seeded by seed_seq{seed_lo, seed_hi, batch}";
inline constexpr std::size_t kMcBatchSize = 65536;
inline constexpr std::size_t kMcMinSamples = 100;

struct McEstimate {
  double mean{0};
  double variance{0};
  std::size_t n_samples{0};
  double std_error_mean{0};  // s / sqrt(n)
  double std_error_var{0};   // s^2 sqrt(2 / (n - 1))
};

struct McMeasurement {
  std::string label;
  McEstimate estimate;
};

/// One estimate per Measure element, in circuit order.
std::vector<McMeasurement> mc_propagate(const Circuit& circuit, std::size_t n_samples, std::uint64_t seed);

struct ComparisonVerdict {
  double z_mean{0};
  double z_variance{0};
  bool pass{false};
};

/// z = (mc - analytic) / standard error for mean and variance; passes iff
/// both |z| <= z_threshold. Throws std::domain_error on a zero standard
/// error or a nonpositive threshold.
ComparisonVerdict compare(const QuadratureStats& analytic, const McEstimate& mc, double z_threshold = 5.0);

}  // namespace fopa
