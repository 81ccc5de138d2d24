#include "fopa/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "fopa/propagate.hpp"

namespace fopa {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_unit_interval(double v, std::string_view name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(fmt::format("{}={} must lie in [0, 1]", name, v));
}

ModeId mode(std::string_view label) { return ModeId{label}; }

void push_loss(Circuit& c, std::string_view m, double eta) {
  if (eta < 1.0) c.elements.push_back(Loss{mode(m), eta});
}

/// Everything up to (not including) the second amplifier.
Circuit front_end(const ScenarioConfig& cfg) {
  Circuit c;
  c.modes = {mode(kSignal), mode(kIdler)};
  const bool use_coupler = cfg.coupler_t > 0.0 && cfg.input_kind != InputKind::shot_noise_input;
  if (use_coupler) c.modes.push_back(mode(kAux));

  if (cfg.input_kind != InputKind::shot_noise_input) {
    c.elements.push_back(Tms{mode(kSignal), mode(kIdler), cfg.g1, cfg.theta_p1});
    if (cfg.input_kind == InputKind::thermal_input) c.elements.push_back(Block{mode(kIdler)});
  }
  if (use_coupler) {
    const auto injected = cfg.alpha / cfg.coupler_t;
    c.elements.push_back(Displace{mode(kAux), injected.real(), injected.imag()});
    // the signal stays in mode s with amplitude r; the probe couples in with coupler_t
    c.elements.push_back(Bs{mode(kSignal), mode(kAux), std::sqrt(1.0 - cfg.coupler_t * cfg.coupler_t)});
  } else {
    c.elements.push_back(Displace{mode(kSignal), cfg.alpha.real(), cfg.alpha.imag()});
  }
  push_loss(c, kSignal, cfg.imperfections.eta_link);
  push_loss(c, kIdler, cfg.imperfections.eta_link);
  return c;
}

void back_end(Circuit& c, const ScenarioConfig& cfg) {
  c.elements.push_back(Tms{mode(kSignal), mode(kIdler), cfg.g2, cfg.theta_p2});
  push_loss(c, kSignal, cfg.imperfections.output_efficiency_s());
  push_loss(c, kIdler, cfg.imperfections.output_efficiency_i());
  c.elements.push_back(Measure{mode(kSignal), cfg.signal_angle(), std::string(kSignal)});
  c.elements.push_back(Measure{mode(kIdler), cfg.idler_angle(), std::string(kIdler)});
}

double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  return a < 0 ? a + two_pi : a;
}

const MeasurementResult& find_measurement(const RunResult& run, std::string_view label) {
  for (const auto& m : run.measurements) {
    if (m.label == label) return m;
  }
  throw std::logic_error(fmt::format("scenario circuit lacks measurement '{}'", label));
}

}  // namespace

bool ImperfectionModel::is_ideal() const {
  return eta_link == 1.0 && eta_out == 1.0 && eta_det == 1.0 && vis_s == 1.0 && vis_i == 1.0;
}

void ImperfectionModel::validate() const {
  check_unit_interval(eta_link, "eta_link");
  check_unit_interval(eta_out, "eta_out");
  check_unit_interval(eta_det, "eta_det");
  check_unit_interval(vis_s, "vis_s");
  check_unit_interval(vis_i, "vis_i");
}

std::string_view to_string(InputKind kind) {
  switch (kind) {
    case InputKind::correlated:
      return "correlated";
    case InputKind::thermal_input:
      return "thermal_input";
    case InputKind::shot_noise_input:
      return "shot_noise_input";
  }
  return "?";
}

InputKind input_kind_from_string(std::string_view name) {
  if (name == "correlated") return InputKind::correlated;
  if (name == "thermal_input" || name == "thermal") return InputKind::thermal_input;
  if (name == "shot_noise_input" || name == "shot" || name == "regular") return InputKind::shot_noise_input;
  throw std::invalid_argument(fmt::format("unknown input kind '{}'", name));
}

double alpha_for_input_snr_db(double snr_db) { return std::sqrt(from_decibels(snr_db) / 4.0); }

ScenarioConfig ScenarioConfig::experiment_defaults() {
  ScenarioConfig c;
  c.g1 = GainPair::from_power_gain(kDefaultPowerGain1).g();
  c.g2 = GainPair::from_power_gain(kDefaultPowerGain2).g();
  c.theta_p1 = 0.0;
  c.theta_p2 = std::numbers::pi / 2;
  c.alpha = {alpha_for_input_snr_db(kDefaultInputSnrDb), 0.0};
  c.coupler_t = std::sqrt(0.05);
  c.imperfections = ImperfectionModel::discussion_preset();
  c.input_kind = InputKind::correlated;
  return c;
}

ScenarioConfig ScenarioConfig::as_ideal() const {
  ScenarioConfig c = *this;
  c.imperfections = ImperfectionModel::ideal();
  c.coupler_t = 0.0;
  return c;
}

double ScenarioConfig::signal_angle() const { return alpha == 0.0 ? 0.0 : std::arg(alpha); }

double ScenarioConfig::idler_angle() const { return wrap_angle(2.0 * theta_p2 - signal_angle()); }

void ScenarioConfig::validate() const {
  if (!(g1 >= 0.0) || !std::isfinite(g1)) throw std::invalid_argument("g1 must be a finite value >= 0");
  if (!(g2 >= 0.0) || !std::isfinite(g2)) throw std::invalid_argument("g2 must be a finite value >= 0");
  if (!std::isfinite(theta_p1) || !std::isfinite(theta_p2)) throw std::invalid_argument("pump phases must be finite");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) throw std::invalid_argument("alpha must be finite");
  if (!(coupler_t >= 0.0 && coupler_t < 1.0)) throw std::invalid_argument("coupler_t must lie in [0, 1)");
  imperfections.validate();
}

Circuit build_regular(const ScenarioConfig& config) {
  config.validate();
  if (config.input_kind != InputKind::shot_noise_input) {
    throw std::invalid_argument("build_regular requires input_kind = shot_noise_input");
  }
  Circuit c = front_end(config);
  back_end(c, config);
  return c;
}

Circuit build_correlated(const ScenarioConfig& config) {
  config.validate();
  if (config.input_kind == InputKind::shot_noise_input) {
    throw std::invalid_argument("build_correlated requires input_kind = correlated or thermal_input");
  }
  Circuit c = front_end(config);
  back_end(c, config);
  return c;
}

Circuit build_circuit(const ScenarioConfig& config) {
  return config.input_kind == InputKind::shot_noise_input ? build_regular(config) : build_correlated(config);
}

Circuit build_input_circuit(const ScenarioConfig& config) {
  config.validate();
  Circuit c = front_end(config);
  const double theta_s = config.signal_angle();
  c.elements.push_back(Measure{mode(kSignal), theta_s, std::string(kSignal)});
  c.elements.push_back(Measure{mode(kIdler), wrap_angle(2.0 * config.theta_p1 - theta_s), std::string(kIdler)});
  return c;
}

Circuit build_su11(const ScenarioConfig& config) {
  config.validate();
  Circuit c;
  c.modes = {mode(kSignal), mode(kIdler)};
  c.elements.push_back(Displace{mode(kSignal), config.alpha.real(), config.alpha.imag()});
  c.elements.push_back(Tms{mode(kSignal), mode(kIdler), config.g1, config.theta_p1});
  push_loss(c, kSignal, config.imperfections.eta_link);
  push_loss(c, kIdler, config.imperfections.eta_link);
  c.elements.push_back(Tms{mode(kSignal), mode(kIdler), config.g2, config.theta_p2});
  push_loss(c, kSignal, config.imperfections.output_efficiency_s());
  push_loss(c, kIdler, config.imperfections.output_efficiency_i());
  c.elements.push_back(Measure{mode(kIdler), config.idler_angle(), std::string(kIdler)});
  return c;
}

TapReport run_tap_report(const ScenarioConfig& config) {
  if (config.alpha == 0.0) throw std::invalid_argument("tap report needs a nonzero probe amplitude alpha");

  const RunResult input = run_circuit(build_input_circuit(config));
  const auto& in_s = find_measurement(input, kSignal);
  const auto& in_i = find_measurement(input, kIdler);

  double snr_in = 0.0;
  double lambda = 0.0;
  if (config.input_kind == InputKind::correlated) {
    const LambdaFit fit = optimal_lambda(input.state, in_s.mode, in_s.theta, in_i.mode, in_i.theta);
    // the idler carries no coherent part before the second amplifier
    const double mean = in_s.stats.mean - fit.lambda * in_i.stats.mean;
    snr_in = snr(QuadratureStats{mean, fit.var_min});
    lambda = fit.lambda;
  } else {
    snr_in = snr(in_s.stats);
  }

  const RunResult output = run_circuit(build_circuit(config));
  const auto& out_s = find_measurement(output, kSignal).stats;
  const auto& out_i = find_measurement(output, kIdler).stats;
  return make_tap_report(snr_in, snr(out_s), snr(out_i), lambda, out_s.variance, out_i.variance);
}

Table1Report run_table1(const ScenarioConfig& config) {
  auto with_kind = [&](InputKind kind) {
    ScenarioConfig c = config;
    c.input_kind = kind;
    return run_tap_report(c);
  };
  return {with_kind(InputKind::shot_noise_input), with_kind(InputKind::thermal_input),
          with_kind(InputKind::correlated)};
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::theta_p2:
      return "theta_p2";
    case SweepParameter::g2:
      return "g2";
    case SweepParameter::eta_link:
      return "eta_link";
    case SweepParameter::alpha:
      return "alpha";
  }
  return "?";
}

SweepParameter sweep_parameter_from_string(std::string_view name) {
  if (name == "theta_p2") return SweepParameter::theta_p2;
  if (name == "g2") return SweepParameter::g2;
  if (name == "eta_link") return SweepParameter::eta_link;
  if (name == "alpha") return SweepParameter::alpha;
  throw std::invalid_argument(fmt::format("unknown sweep parameter '{}'", name));
}

SweepTrace sweep(const ScenarioConfig& config, SweepParameter parameter, const std::vector<double>& values) {
  if (values.size() < 2) throw std::invalid_argument("a sweep needs at least 2 points");
  SweepTrace trace{std::string(to_string(parameter)), {}};
  trace.points.reserve(values.size());
  for (const double v : values) {
    ScenarioConfig c = config;
    switch (parameter) {
      case SweepParameter::theta_p2:
        c.theta_p2 = v;
        break;
      case SweepParameter::g2:
        c.g2 = v;
        break;
      case SweepParameter::eta_link:
        c.imperfections.eta_link = v;
        break;
      case SweepParameter::alpha:
        c.alpha = std::polar(v, config.signal_angle());
        break;
    }
    const RunResult out = run_circuit(build_circuit(c));
    SweepPoint point{v,
                     to_decibels(find_measurement(out, kSignal).stats.variance),
                     to_decibels(find_measurement(out, kIdler).stats.variance),
                     kNaN,
                     kNaN,
                     kNaN};
    if (c.alpha != 0.0) {
      const TapReport r = run_tap_report(c);
      point.nf_s_db = r.nf_s_db();
      point.nf_i_db = r.nf_i_db();
      point.t_sum = r.t_sum;
    }
    trace.points.push_back(point);
  }
  return trace;
}

SweepTrace phase_sweep(const ScenarioConfig& config, std::size_t n_points) {
  if (n_points < 2) throw std::invalid_argument("phase_sweep needs at least 2 points");
  std::vector<double> values(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    values[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_points);
  }
  return sweep(config, SweepParameter::theta_p2, values);
}

std::vector<FringePoint> su11_fringe(const ScenarioConfig& config, std::size_t n_points) {
  if (n_points < 2) throw std::invalid_argument("su11_fringe needs at least 2 points");
  std::vector<FringePoint> out;
  out.reserve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    ScenarioConfig c = config;
    const double dtheta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_points);
    c.theta_p2 = config.theta_p1 + dtheta;
    const auto state = run_circuit(build_su11(c)).state;
    out.push_back({dtheta, std::norm(mean_amplitude(state, ModeId{kIdler}))});
  }
  return out;
}

double su11_visibility(const ScenarioConfig& config) {
  const auto fringe = su11_fringe(config);
  const auto [lo, hi] = std::minmax_element(fringe.begin(), fringe.end(), [](const FringePoint& a, const FringePoint& b) {
    return a.intensity < b.intensity;
  });
  const double den = hi->intensity + lo->intensity;
  if (!(den > 0.0)) throw std::domain_error("su11_visibility: no light at the idler port");
  return (hi->intensity - lo->intensity) / den;
}

}  // namespace fopa
