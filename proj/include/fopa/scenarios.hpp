#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fopa/circuit.hpp"
#include "fopa/metrics.hpp"

namespace fopa {

/// Optical efficiencies of the two-amplifier setup. Mode-match visibility v
/// enters the homodyne efficiency as v^2.
struct ImperfectionModel {
  double eta_link{0.70};  // first amplifier output -> second amplifier input, both beams
  double eta_out{0.80};   // second amplifier output -> homodyne detector
  double eta_det{0.85};   // photodiode quantum efficiency
  double vis_s{0.72};     // signal homodyne mode-match visibility
  double vis_i{0.84};     // idler homodyne mode-match visibility

  static ImperfectionModel ideal() { return {1.0, 1.0, 1.0, 1.0, 1.0}; }
  /// Link efficiency quoted with the loss budget (0.70).
  static ImperfectionModel discussion_preset() { return {}; }
  /// Link efficiency quoted with the input-SNR measurement (0.68).
  static ImperfectionModel results_preset() {
    ImperfectionModel m;
    m.eta_link = 0.68;
    return m;
  }

  bool is_ideal() const;
  double output_efficiency_s() const { return eta_out * eta_det * vis_s * vis_s; }
  double output_efficiency_i() const { return eta_out * eta_det * vis_i * vis_i; }
  void validate() const;
};

enum class InputKind { correlated, thermal_input, shot_noise_input };

std::string_view to_string(InputKind kind);
InputKind input_kind_from_string(std::string_view name);

/**
 * Parameters of one run of the two-amplifier experiment.
 *
 * The probe amplitude alpha is injected through a coupler of amplitude
 * transmittance coupler_t (alpha / coupler_t enters the weak port, the
 * first amplifier's signal passes with r = sqrt(1 - coupler_t^2)).
 * coupler_t = 0 denotes the lossless r -> 1 limit, realised as a direct
 * displacement of the signal mode.
 */
struct ScenarioConfig {
  double g1{0};
  double g2{0};
  double theta_p1{0};
  double theta_p2{0};
  std::complex<double> alpha{0, 0};
  double coupler_t{0};
  ImperfectionModel imperfections{};
  InputKind input_kind{InputKind::correlated};

  /// Power gains 6 and 20, dtheta = pi/2, 95:5 coupler, default
  /// imperfections, alpha calibrated to an ideal input SNR of 6.69 dB.
  static ScenarioConfig experiment_defaults();
  /// Same gains and phases with unit efficiencies and a lossless coupler.
  ScenarioConfig as_ideal() const;

  GainPair gains1() const { return GainPair::from_g(g1); }
  GainPair gains2() const { return GainPair::from_g(g2); }
  /// Homodyne angle maximising the signal-port mean: arg(alpha).
  double signal_angle() const;
  /// Homodyne angle maximising the idler-port mean: 2 theta_p2 - arg(alpha).
  double idler_angle() const;
  void validate() const;
};

/// Amplitude giving an input SNR of `snr_db` for a coherent state on vacuum noise.
double alpha_for_input_snr_db(double snr_db);

inline constexpr double kDefaultPowerGain1 = 6.0;
inline constexpr double kDefaultPowerGain2 = 20.0;
inline constexpr double kDefaultInputSnrDb = 6.69;

// Mode labels used by the scenario builders.
inline constexpr std::string_view kSignal = "s";
inline constexpr std::string_view kIdler = "i";
inline constexpr std::string_view kAux = "aux";

/// Single amplifier with vacuum idler input: displace, link loss, amplify,
/// output loss, measure. Requires input_kind == shot_noise_input.
Circuit build_regular(const ScenarioConfig& config);

/// First amplifier on vacuum, probe injection, link loss, second amplifier,
/// output loss, measure. thermal_input additionally blocks the idler after
/// the first amplifier.
Circuit build_correlated(const ScenarioConfig& config);

/// Dispatches on config.input_kind.
Circuit build_circuit(const ScenarioConfig& config);

/// The circuit up to the second amplifier's input (second pump blocked),
/// with measurements of the signal and of the idler at the angle that
/// maximises its correlation with the signal.
Circuit build_input_circuit(const ScenarioConfig& config);

/// Nonlinear interferometer: coherent reference seeds the first amplifier's
/// signal port, both outputs feed the second amplifier, idler port measured.
Circuit build_su11(const ScenarioConfig& config);

TapReport run_tap_report(const ScenarioConfig& config);

struct Table1Report {
  TapReport shot_noise_input;
  TapReport thermal_noise_input;
  TapReport correlated_inputs;
};

/// One report per input kind, sharing every other configuration value.
Table1Report run_table1(const ScenarioConfig& config);

/// Measured values from the experiment (dB), printed next to model output.
struct MeasuredTable1 {
  struct Column {
    double snr_in, snr_s, snr_i, nf_s, nf_i;
  };
  static constexpr Column shot_noise_input{6.69, 5.14, 3.94, 1.55, 2.75};
  static constexpr Column thermal_noise_input{4.93, 3.42, 2.23, 1.51, 2.70};
  static constexpr Column correlated_inputs{6.49, 5.64, 4.58, 0.85, 1.91};
  static constexpr double t_sum = 1.47;
  static constexpr double t_sum_uncertainty = 0.2;
  static constexpr double nf_s_improvement_db = 0.70;
  static constexpr double nf_i_improvement_db = 0.84;
};

enum class SweepParameter { theta_p2, g2, eta_link, alpha };

std::string_view to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(std::string_view name);

struct SweepPoint {
  double value{0};
  double variance_s_db{0};  // output variance relative to the shot-noise level
  double variance_i_db{0};
  double nf_s_db{0};  // NaN when no tap report is defined (alpha = 0)
  double nf_i_db{0};
  double t_sum{0};
};

struct SweepTrace {
  std::string parameter;
  std::vector<SweepPoint> points;
};

/// Evaluates `config` with `parameter` set to each of `values`, in order.
SweepTrace sweep(const ScenarioConfig& config, SweepParameter parameter, const std::vector<double>& values);

/// theta_p2 over [0, 2 pi) in n_points equal steps.
SweepTrace phase_sweep(const ScenarioConfig& config, std::size_t n_points);

/// Idler-port mean intensity |<a_i>|^2 against theta_p2 - theta_p1.
struct FringePoint {
  double dtheta{0};
  double intensity{0};
};
std::vector<FringePoint> su11_fringe(const ScenarioConfig& config, std::size_t n_points = 720);

/// (I_max - I_min) / (I_max + I_min) of su11_fringe; throws when no light
/// reaches the idler port.
double su11_visibility(const ScenarioConfig& config);

}  // namespace fopa
