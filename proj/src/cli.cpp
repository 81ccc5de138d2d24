#include "fopa/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fopa/circuit.hpp"
#include "fopa/mc_oracle.hpp"
#include "fopa/propagate.hpp"
#include "fopa/report_io.hpp"
#include "fopa/scenarios.hpp"

namespace fopa::cli {
namespace {

using io::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::optional<double> g1, g2, power_gain1, power_gain2, theta_p1, theta_p2, dtheta;
  std::optional<double> alpha, alpha_im, coupler_t;
  std::optional<double> eta_link, eta_out, eta_det, vis_s, vis_i;
  bool ideal = false;
  std::string link_preset = "discussion";

  void attach(CLI::App* app) {
    app->add_option("--g1", g1, "first amplifier gain g (mu = cosh g)");
    app->add_option("--g2", g2, "second amplifier gain g");
    app->add_option("--power-gain1", power_gain1, "first amplifier power gain mu^2");
    app->add_option("--power-gain2", power_gain2, "second amplifier power gain mu^2");
    app->add_option("--theta-p1", theta_p1, "first pump phase [rad]");
    app->add_option("--theta-p2", theta_p2, "second pump phase [rad]");
    app->add_option("--dtheta", dtheta, "pump phase difference theta_p2 - theta_p1 [rad]");
    app->add_option("--alpha", alpha, "probe amplitude (real part)");
    app->add_option("--alpha-im", alpha_im, "probe amplitude (imaginary part)");
    app->add_option("--coupler-t", coupler_t, "probe coupler amplitude transmittance (0 = lossless injection)");
    app->add_option("--eta-link", eta_link, "link efficiency between the amplifiers");
    app->add_option("--eta-out", eta_out, "output path efficiency");
    app->add_option("--eta-det", eta_det, "detector quantum efficiency");
    app->add_option("--vis-s", vis_s, "signal homodyne visibility");
    app->add_option("--vis-i", vis_i, "idler homodyne visibility");
    app->add_flag("--ideal", ideal, "unit efficiencies and lossless probe injection");
    app->add_option("--link-preset", link_preset, "link efficiency preset")
        ->check(CLI::IsMember({"discussion", "results"}));
  }

  ScenarioConfig apply(InputKind kind) const {
    ScenarioConfig c = ScenarioConfig::experiment_defaults();
    if (link_preset == "results") c.imperfections = ImperfectionModel::results_preset();
    if (ideal) c = c.as_ideal();
    c.input_kind = kind;
    if (power_gain1) c.g1 = GainPair::from_power_gain(*power_gain1).g();
    if (power_gain2) c.g2 = GainPair::from_power_gain(*power_gain2).g();
    if (g1) c.g1 = *g1;
    if (g2) c.g2 = *g2;
    if (theta_p1) c.theta_p1 = *theta_p1;
    if (theta_p2) c.theta_p2 = *theta_p2;
    if (dtheta) c.theta_p2 = c.theta_p1 + *dtheta;
    if (alpha) c.alpha.real(*alpha);
    if (alpha_im) c.alpha.imag(*alpha_im);
    if (coupler_t) c.coupler_t = *coupler_t;
    if (eta_link) c.imperfections.eta_link = *eta_link;
    if (eta_out) c.imperfections.eta_out = *eta_out;
    if (eta_det) c.imperfections.eta_det = *eta_det;
    if (vis_s) c.imperfections.vis_s = *vis_s;
    if (vis_i) c.imperfections.vis_i = *vis_i;
    c.validate();
    return c;
  }
};

std::string default_format() {
  if (const char* env = std::getenv("FOPA_FORMAT"); env != nullptr && *env != '\0') return env;
  return "json";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw UsageError(fmt::format("error reading '{}'", path));
  return ss.str();
}

void emit(std::ostream& out, const std::string& format, const std::string& command, const json& payload,
          const std::string& csv) {
  if (format == "csv") {
    out << csv;
  } else {
    out << io::envelope(command, payload).dump(2) << '\n';
  }
}

void print_diagnostics(std::ostream& err, const std::string& path, const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) err << path << ": " << to_string(d) << '\n';
}

/// Parses a circuit file, printing diagnostics; nullopt on errors.
std::optional<Circuit> load_circuit(const std::string& path, std::ostream& err) {
  const auto parsed = parse_circuit(read_file(path));
  print_diagnostics(err, path, parsed.diagnostics);
  return parsed.circuit;
}

const std::vector<std::string> kScenarioNames = {"regular", "correlated", "thermal", "table1", "fig3-sweep", "su11"};

InputKind kind_for_scenario(const std::string& name) {
  if (name == "regular") return InputKind::shot_noise_input;
  if (name == "thermal") return InputKind::thermal_input;
  return InputKind::correlated;
}

Circuit scenario_circuit(const std::string& name, const ScenarioConfig& cfg) {
  if (name == "su11") return build_su11(cfg);
  return build_circuit(cfg);
}

int cmd_simulate(const std::string& path, const std::string& format, const std::string& command, std::ostream& out,
                 std::ostream& err) {
  const auto circuit = load_circuit(path, err);
  if (!circuit) return kDomainError;
  const RunResult result = run_circuit(*circuit);
  json payload{{"file", path}, {"measurements", io::measurements_json(result.measurements)}};
  emit(out, format, command, payload, io::measurements_csv(result.measurements));
  return kOk;
}

int cmd_validate(const std::string& path, const std::string& format, const std::string& command, std::ostream& out,
                 std::ostream& err) {
  const auto parsed = parse_circuit(read_file(path));
  print_diagnostics(err, path, parsed.diagnostics);
  json diags = json::array();
  std::string csv = "line,severity,message\n";
  for (const auto& d : parsed.diagnostics) {
    const char* sev = d.severity == Severity::error ? "error" : "warning";
    diags.push_back({{"line", d.line}, {"severity", sev}, {"message", d.message}});
    csv += fmt::format("{},{},{}\n", d.line, sev, io::csv_field(d.message));
  }
  emit(out, format, command, json{{"file", path}, {"valid", parsed.circuit.has_value()}, {"diagnostics", diags}}, csv);
  return parsed.circuit ? kOk : kDomainError;
}

int cmd_scenario(const std::string& name, const Overrides& ov, const std::string& format, std::size_t steps,
                 bool emit_circuit, bool fringe, const std::string& command, std::ostream& out) {
  const ScenarioConfig cfg = ov.apply(kind_for_scenario(name));
  if (emit_circuit) {
    out << serialize(scenario_circuit(name, cfg));
    return kOk;
  }

  json payload{{"scenario", name}, {"config", io::to_json(cfg)}};
  std::string csv;
  if (name == "regular" || name == "correlated" || name == "thermal") {
    const TapReport r = run_tap_report(cfg);
    payload["report"] = io::to_json(r);
    csv = io::tap_report_csv(r);
  } else if (name == "table1") {
    const Table1Report t = run_table1(cfg);
    payload["model"] = io::to_json(t);
    payload["measured_reference"] = io::measured_table1_json();
    if (format == "table") {
      out << io::table1_text(t, cfg.imperfections.is_ideal());
      return kOk;
    }
    csv = io::table1_csv(t);
  } else if (name == "fig3-sweep") {
    const SweepTrace trace = phase_sweep(cfg, steps);
    payload["trace"] = io::to_json(trace);
    csv = io::sweep_trace_csv(trace);
  } else {
    const double v = su11_visibility(cfg);
    const double closed = su11_visibility_closed_form(cfg.gains1(), cfg.gains2());
    payload["visibility"] = v;
    payload["closed_form_visibility"] = closed;
    csv = fmt::format("visibility,closed_form_visibility\n{},{}\n", io::fixed(v, 6), io::fixed(closed, 6));
    if (fringe) {
      json points = json::array();
      csv = "dtheta,intensity\n";
      for (const auto& p : su11_fringe(cfg)) {
        points.push_back({{"dtheta", p.dtheta}, {"intensity", p.intensity}});
        csv += fmt::format("{},{}\n", format_number(p.dtheta), format_number(p.intensity));
      }
      payload["fringe"] = std::move(points);
    }
  }
  emit(out, format, command, payload, csv);
  return kOk;
}

int cmd_sweep(const std::string& param, double start, double stop, std::size_t steps, const std::string& base,
              bool exclusive, const Overrides& ov, const std::string& format, const std::string& command,
              std::ostream& out) {
  const SweepParameter p = sweep_parameter_from_string(param);
  const ScenarioConfig cfg = ov.apply(input_kind_from_string(base));
  std::vector<double> values(steps);
  const double denom = static_cast<double>(exclusive ? steps : steps - 1);
  for (std::size_t k = 0; k < steps; ++k) values[k] = start + (stop - start) * static_cast<double>(k) / denom;
  const SweepTrace trace = sweep(cfg, p, values);
  json payload{{"base", base}, {"config", io::to_json(cfg)}, {"trace", io::to_json(trace)}};
  emit(out, format, command, payload, io::sweep_trace_csv(trace));
  return kOk;
}

int cmd_oracle(const std::string& target, const Overrides& ov, std::size_t n, std::uint64_t seed, double z,
               const std::string& format, const std::string& command, std::ostream& out, std::ostream& err) {
  if (n < kMcMinSamples) throw std::invalid_argument(fmt::format("n too small: need at least {} samples", kMcMinSamples));
  Circuit circuit;
  if (std::filesystem::is_regular_file(target)) {
    auto loaded = load_circuit(target, err);
    if (!loaded) return kDomainError;
    circuit = std::move(*loaded);
  } else if (target == "regular" || target == "correlated" || target == "thermal" || target == "su11") {
    circuit = scenario_circuit(target, ov.apply(kind_for_scenario(target)));
  } else {
    throw UsageError(fmt::format("'{}' is neither a readable file nor one of regular, correlated, thermal, su11", target));
  }

  const RunResult analytic = run_circuit(circuit);
  const auto mc = mc_propagate(circuit, n, seed);
  std::vector<io::OracleRow> rows;
  bool pass = true;
  for (std::size_t k = 0; k < mc.size(); ++k) {
    const auto verdict = compare(analytic.measurements[k].stats, mc[k].estimate, z);
    pass = pass && verdict.pass;
    rows.push_back({mc[k].label, analytic.measurements[k].stats, mc[k].estimate, verdict});
  }
  json payload{{"target", target},     {"n_samples", n},          {"seed", seed},
               {"z_threshold", z},     {"algorithm", kMcAlgorithm}, {"rows", io::oracle_json(rows)},
               {"pass", pass}};
  emit(out, format, command, payload, io::oracle_csv(rows));
  return pass ? kOk : kDomainError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian-state simulator for cascaded parametric-amplifier information taps", "fopa"};
  app.require_subcommand(1);
  std::string format = default_format();
  app.add_option("--format", format, "output format (default from FOPA_FORMAT, else json)")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  std::string path;
  auto* simulate = app.add_subcommand("simulate", "propagate a .fopa circuit and report its measurements");
  simulate->add_option("file", path, ".fopa circuit file")->required();
  simulate->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* validate_cmd = app.add_subcommand("validate", "check a .fopa circuit file");
  validate_cmd->add_option("file", path, ".fopa circuit file")->required();
  validate_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  Overrides ov;
  std::string scenario_name;
  std::size_t steps = 64;
  bool emit_circuit = false;
  bool fringe = false;
  auto* scenario = app.add_subcommand("scenario", "run a named experiment");
  scenario->add_option("name", scenario_name, "regular | correlated | thermal | table1 | fig3-sweep | su11")
      ->required()
      ->check(CLI::IsMember(kScenarioNames));
  scenario->add_option("--steps", steps, "points of the fig3-sweep phase scan")->check(CLI::Range(2, 1 << 20));
  scenario->add_flag("--emit-circuit", emit_circuit, "print the scenario circuit as .fopa text instead");
  scenario->add_flag("--fringe", fringe, "su11: emit the full fringe");
  scenario->add_option("--format", format)->check(CLI::IsMember({"json", "csv", "table"}));
  ov.attach(scenario);

  std::string sweep_param, base = "correlated";
  double start = 0, stop = 0;
  std::size_t sweep_steps = 0;
  bool exclusive = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter of a scenario");
  sweep_cmd->add_option("param", sweep_param, "theta_p2 | g2 | eta_link | alpha")
      ->required()
      ->check(CLI::IsMember({"theta_p2", "g2", "eta_link", "alpha"}));
  sweep_cmd->add_option("start", start)->required();
  sweep_cmd->add_option("stop", stop)->required();
  sweep_cmd->add_option("steps", sweep_steps)->required()->check(CLI::Range(2, 1 << 20));
  sweep_cmd->add_option("--base", base, "input kind of the swept scenario")
      ->check(CLI::IsMember({"correlated", "regular", "thermal", "shot_noise_input", "thermal_input"}));
  sweep_cmd->add_flag("--exclusive", exclusive, "exclude the stop value (e.g. for [0, 2pi))");
  sweep_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  ov.attach(sweep_cmd);

  std::string target;
  std::size_t n_samples = 1000000;
  std::uint64_t seed = 1;
  double z = 5.0;
  auto* oracle = app.add_subcommand("oracle", "cross-check a circuit or scenario against Monte-Carlo sampling");
  oracle->add_option("target", target, ".fopa file or scenario name (regular | correlated | thermal | su11)")
      ->required();
  oracle->add_option("-n,--samples", n_samples, "number of samples");
  oracle->add_option("--seed", seed, "64-bit seed");
  oracle->add_option("-z,--z-threshold", z, "pass threshold on |z|")->check(CLI::PositiveNumber);
  oracle->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  ov.attach(oracle);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  std::string command = "fopa";
  for (const auto& a : args) command += " " + a;

  try {
    if (*simulate) return cmd_simulate(path, format, command, out, err);
    if (*validate_cmd) return cmd_validate(path, format, command, out, err);
    if (*scenario) return cmd_scenario(scenario_name, ov, format, steps, emit_circuit, fringe, command, out);
    if (*sweep_cmd) return cmd_sweep(sweep_param, start, stop, sweep_steps, base, exclusive, ov, format, command, out);
    if (*oracle) return cmd_oracle(target, ov, n_samples, seed, z, format, command, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kUsageError;
}

}  // namespace fopa::cli
