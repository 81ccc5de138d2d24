#include "fopa/report_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>

#include <fmt/format.h>

namespace fopa::io {

std::string utc_timestamp() {
  std::time_t t = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json envelope(std::string_view command, json payload) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"timestamp", utc_timestamp()},
              {"payload", std::move(payload)}};
}

json number(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

std::string fixed(double value, int decimals) {
  if (std::isnan(value)) return "";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.{}f}", value, decimals);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

json to_json(const ScenarioConfig& c) {
  return json{{"g1", c.g1},
              {"g2", c.g2},
              {"power_gain1", c.gains1().power_gain()},
              {"power_gain2", c.gains2().power_gain()},
              {"theta_p1", c.theta_p1},
              {"theta_p2", c.theta_p2},
              {"alpha_re", c.alpha.real()},
              {"alpha_im", c.alpha.imag()},
              {"coupler_t", c.coupler_t},
              {"input_kind", to_string(c.input_kind)},
              {"imperfections",
               {{"eta_link", c.imperfections.eta_link},
                {"eta_out", c.imperfections.eta_out},
                {"eta_det", c.imperfections.eta_det},
                {"vis_s", c.imperfections.vis_s},
                {"vis_i", c.imperfections.vis_i}}}};
}

json to_json(const TapReport& r) {
  return json{{"snr_in", number(r.snr_in)},         {"snr_in_db", number(r.snr_in_db())},
              {"snr_s", number(r.snr_s)},           {"snr_s_db", number(r.snr_s_db())},
              {"snr_i", number(r.snr_i)},           {"snr_i_db", number(r.snr_i_db())},
              {"nf_s", number(r.nf_s)},             {"nf_s_db", number(r.nf_s_db())},
              {"nf_i", number(r.nf_i)},             {"nf_i_db", number(r.nf_i_db())},
              {"t_s", number(r.t_s)},               {"t_i", number(r.t_i)},
              {"t_sum", number(r.t_sum)},           {"lambda_opt", number(r.lambda_opt)},
              {"variance_s", number(r.variance_s)}, {"variance_i", number(r.variance_i)}};
}

json to_json(const SweepTrace& trace) {
  json points = json::array();
  for (const auto& p : trace.points) {
    points.push_back({{"value", number(p.value)},
                      {"variance_s_db", number(p.variance_s_db)},
                      {"variance_i_db", number(p.variance_i_db)},
                      {"nf_s_db", number(p.nf_s_db)},
                      {"nf_i_db", number(p.nf_i_db)},
                      {"t_sum", number(p.t_sum)}});
  }
  return json{{"parameter", trace.parameter}, {"points", std::move(points)}};
}

json to_json(const Table1Report& t) {
  return json{{"shot_noise_input", to_json(t.shot_noise_input)},
              {"thermal_noise_input", to_json(t.thermal_noise_input)},
              {"correlated_inputs", to_json(t.correlated_inputs)},
              {"nf_s_improvement_db", number(t.shot_noise_input.nf_s_db() - t.correlated_inputs.nf_s_db())},
              {"nf_i_improvement_db", number(t.shot_noise_input.nf_i_db() - t.correlated_inputs.nf_i_db())}};
}

json measured_table1_json() {
  const auto column = [](const MeasuredTable1::Column& c) {
    return json{{"snr_in_db", c.snr_in}, {"snr_s_db", c.snr_s}, {"snr_i_db", c.snr_i},
                {"nf_s_db", c.nf_s},     {"nf_i_db", c.nf_i}};
  };
  return json{{"shot_noise_input", column(MeasuredTable1::shot_noise_input)},
              {"thermal_noise_input", column(MeasuredTable1::thermal_noise_input)},
              {"correlated_inputs", column(MeasuredTable1::correlated_inputs)},
              {"t_sum", MeasuredTable1::t_sum},
              {"t_sum_uncertainty", MeasuredTable1::t_sum_uncertainty},
              {"nf_s_improvement_db", MeasuredTable1::nf_s_improvement_db},
              {"nf_i_improvement_db", MeasuredTable1::nf_i_improvement_db}};
}

std::string tap_report_csv(const TapReport& r) {
  std::string out = "snr_in_db,snr_s_db,snr_i_db,nf_s_db,nf_i_db,t_s,t_i,t_sum,lambda_opt,variance_s_db,variance_i_db\n";
  out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", fixed(r.snr_in_db()), fixed(r.snr_s_db()),
                     fixed(r.snr_i_db()), fixed(r.nf_s_db()), fixed(r.nf_i_db()), fixed(r.t_s, 6), fixed(r.t_i, 6),
                     fixed(r.t_sum, 6), fixed(r.lambda_opt, 6), fixed(TapReport::db(r.variance_s)),
                     fixed(TapReport::db(r.variance_i)));
  return out;
}

std::string sweep_trace_csv(const SweepTrace& trace) {
  std::string out = "value,variance_s_db,variance_i_db,nf_s_db,nf_i_db,t_sum\n";
  for (const auto& p : trace.points) {
    out += fmt::format("{},{},{},{},{},{}\n", format_number(p.value), fixed(p.variance_s_db), fixed(p.variance_i_db),
                       fixed(p.nf_s_db), fixed(p.nf_i_db), fixed(p.t_sum, 6));
  }
  return out;
}

namespace {

struct Row {
  const char* name;
  double (TapReport::*get)() const;
  double MeasuredTable1::Column::*measured;
};

constexpr Row kTableRows[] = {
    {"snr_in_db", &TapReport::snr_in_db, &MeasuredTable1::Column::snr_in},
    {"snr_s_db", &TapReport::snr_s_db, &MeasuredTable1::Column::snr_s},
    {"snr_i_db", &TapReport::snr_i_db, &MeasuredTable1::Column::snr_i},
    {"nf_s_db", &TapReport::nf_s_db, &MeasuredTable1::Column::nf_s},
    {"nf_i_db", &TapReport::nf_i_db, &MeasuredTable1::Column::nf_i},
};

}  // namespace

std::string table1_csv(const Table1Report& t) {
  std::string out =
      "quantity,shot_noise_input,thermal_noise_input,correlated_inputs,"
      "measured_shot_noise_input,measured_thermal_noise_input,measured_correlated_inputs\n";
  for (const auto& row : kTableRows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", row.name, fixed((t.shot_noise_input.*row.get)()),
                       fixed((t.thermal_noise_input.*row.get)()), fixed((t.correlated_inputs.*row.get)()),
                       fixed(MeasuredTable1::shot_noise_input.*row.measured, 2),
                       fixed(MeasuredTable1::thermal_noise_input.*row.measured, 2),
                       fixed(MeasuredTable1::correlated_inputs.*row.measured, 2));
  }
  out += fmt::format("t_sum,{},{},{},,,{}\n", fixed(t.shot_noise_input.t_sum), fixed(t.thermal_noise_input.t_sum),
                     fixed(t.correlated_inputs.t_sum), fixed(MeasuredTable1::t_sum, 2));
  return out;
}

std::string table1_text(const Table1Report& t, bool ideal) {
  std::string out = fmt::format("{:<10} {:>22} {:>22} {:>22}\n", "", "shot noise input", "thermal noise input",
                                "correlated inputs");
  const auto cell = [&](double model, double measured) {
    return ideal ? fmt::format("{:>22}", fixed(model, 2)) : fmt::format("{:>10} (meas. {:>5})", fixed(model, 2), fixed(measured, 2));
  };
  for (const auto& row : kTableRows) {
    out += fmt::format("{:<10} {} {} {}\n", row.name, cell((t.shot_noise_input.*row.get)(), MeasuredTable1::shot_noise_input.*row.measured),
                       cell((t.thermal_noise_input.*row.get)(), MeasuredTable1::thermal_noise_input.*row.measured),
                       cell((t.correlated_inputs.*row.get)(), MeasuredTable1::correlated_inputs.*row.measured));
  }
  out += fmt::format("{:<10} {:>22} {:>22} {}\n", "t_sum", fixed(t.shot_noise_input.t_sum, 3),
                     fixed(t.thermal_noise_input.t_sum, 3),
                     ideal ? fmt::format("{:>22}", fixed(t.correlated_inputs.t_sum, 3))
                           : fmt::format("{:>10} (meas. {:>5})", fixed(t.correlated_inputs.t_sum, 3),
                                         fixed(MeasuredTable1::t_sum, 2)));
  return out;
}

json measurements_json(const std::vector<MeasurementResult>& results) {
  json rows = json::array();
  for (const auto& m : results) {
    rows.push_back({{"label", m.label},
                    {"mode", m.mode.label},
                    {"theta", m.theta},
                    {"mean", m.stats.mean},
                    {"variance", m.stats.variance},
                    {"variance_db", number(TapReport::db(m.stats.variance))}});
  }
  return rows;
}

std::string measurements_csv(const std::vector<MeasurementResult>& results) {
  std::string out = "label,theta,mean,variance,variance_db\n";
  for (const auto& m : results) {
    out += fmt::format("{},{},{},{},{}\n", csv_field(m.label), format_number(m.theta), format_number(m.stats.mean),
                       format_number(m.stats.variance), fixed(TapReport::db(m.stats.variance)));
  }
  return out;
}

json oracle_json(const std::vector<OracleRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"label", r.label},
                   {"analytic_mean", r.analytic.mean},
                   {"analytic_variance", r.analytic.variance},
                   {"mc_mean", r.mc.mean},
                   {"mc_variance", r.mc.variance},
                   {"n_samples", r.mc.n_samples},
                   {"std_error_mean", r.mc.std_error_mean},
                   {"std_error_var", r.mc.std_error_var},
                   {"z_mean", r.verdict.z_mean},
                   {"z_variance", r.verdict.z_variance},
                   {"pass", r.verdict.pass}});
  }
  return out;
}

std::string oracle_csv(const std::vector<OracleRow>& rows) {
  std::string out =
      "label,analytic_mean,analytic_variance,mc_mean,mc_variance,std_error_mean,std_error_var,z_mean,z_variance,pass\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", csv_field(r.label), format_number(r.analytic.mean),
                       format_number(r.analytic.variance), format_number(r.mc.mean), format_number(r.mc.variance),
                       format_number(r.mc.std_error_mean), format_number(r.mc.std_error_var),
                       fixed(r.verdict.z_mean, 3), fixed(r.verdict.z_variance, 3), r.verdict.pass ? "true" : "false");
  }
  return out;
}

}  // namespace fopa::io
