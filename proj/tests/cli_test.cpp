#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fopa/cli.hpp"

namespace fopa::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    previous_ = fs::current_path();
    fs::current_path(FOPA_TEST_DATA_DIR);
    setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
    unsetenv("FOPA_FORMAT");
  }
  void TearDown() override { fs::current_path(previous_); }

  static Result run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
  }

  static std::string golden(const std::string& name) {
    std::ifstream in(name, std::ios::binary);
    EXPECT_TRUE(in) << "missing golden " << name;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

 private:
  fs::path previous_;
};

TEST_F(Cli, SimulateJsonGolden) {
  const auto r = run_cli({"simulate", "regular.fopa"});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out, golden("simulate_regular.golden.json"));
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], "1.0");
  EXPECT_EQ(j["payload"]["measurements"].size(), 2u);
}

TEST_F(Cli, SimulateCsvGolden) {
  const auto r = run_cli({"simulate", "cascade.fopa", "--format", "csv"});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out, golden("simulate_cascade.golden.csv"));
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "label,theta,mean,variance,variance_db");
}

TEST_F(Cli, FormatFromEnvironment) {
  setenv("FOPA_FORMAT", "csv", 1);
  const auto r = run_cli({"simulate", "cascade.fopa"});
  EXPECT_EQ(r.out, golden("simulate_cascade.golden.csv"));
  const auto flag_wins = run_cli({"simulate", "cascade.fopa", "--format", "json"});
  EXPECT_NO_THROW((void)nlohmann::json::parse(flag_wins.out));
}

TEST_F(Cli, MalformedFileListsDiagnostics) {
  const auto r = run_cli({"simulate", "malformed.fopa"});
  EXPECT_EQ(r.code, kDomainError);
  EXPECT_NE(r.err.find("line 3: error"), std::string::npos);
  EXPECT_NE(r.err.find("line 4: error"), std::string::npos);
  EXPECT_NE(r.err.find("line 5: error"), std::string::npos);
  EXPECT_NE(r.err.find("line 6: error"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(Cli, MissingFileIsIoError) {
  EXPECT_EQ(run_cli({"simulate", "does-not-exist.fopa"}).code, kUsageError);
  EXPECT_EQ(run_cli({"validate", "does-not-exist.fopa"}).code, kUsageError);
}

TEST_F(Cli, Validate) {
  const auto ok = run_cli({"validate", "regular.fopa"});
  EXPECT_EQ(ok.code, kOk);
  EXPECT_TRUE(nlohmann::json::parse(ok.out)["payload"]["valid"].get<bool>());
  const auto bad = run_cli({"validate", "malformed.fopa", "--format", "csv"});
  EXPECT_EQ(bad.code, kDomainError);
  EXPECT_EQ(bad.out.substr(0, bad.out.find('\n')), "line,severity,message");
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, kUsageError);
  EXPECT_EQ(run_cli({"scenario", "nonsense"}).code, kUsageError);
  EXPECT_EQ(run_cli({"sweep", "theta_p2", "0", "1", "1"}).code, kUsageError);
  EXPECT_EQ(run_cli({"sweep", "bogus", "0", "1", "4"}).code, kUsageError);
  EXPECT_EQ(run_cli({"scenario", "correlated", "--g1", "abc"}).code, kUsageError);
  EXPECT_EQ(run_cli({"--help"}).code, kOk);
}

TEST_F(Cli, BadOverrideIsDomainError) {
  EXPECT_EQ(run_cli({"scenario", "correlated", "--eta-link", "1.5"}).code, kDomainError);
  EXPECT_EQ(run_cli({"scenario", "correlated", "--g2", "-1"}).code, kDomainError);
}

TEST_F(Cli, Table1IdealGolden) {
  const auto r = run_cli({"scenario", "table1", "--ideal", "--format", "table"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, golden("table1_ideal.golden.txt"));
  const auto j = nlohmann::json::parse(run_cli({"scenario", "table1", "--ideal"}).out);
  const auto& corr = j["payload"]["model"]["correlated_inputs"];
  EXPECT_NEAR(corr["nf_s_db"].get<double>(), 0.23, 5e-3);
  EXPECT_NEAR(corr["nf_i_db"].get<double>(), 0.45, 5e-3);
}

TEST_F(Cli, Table1WithImperfectionsAnnotatesReference) {
  const auto r = run_cli({"scenario", "table1", "--format", "table"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("(meas.  0.85)"), std::string::npos);
  EXPECT_NE(r.out.find("(meas.  1.91)"), std::string::npos);
  EXPECT_NE(r.out.find("(meas.  1.47)"), std::string::npos);
  const auto csv = run_cli({"scenario", "table1", "--format", "csv"});
  EXPECT_EQ(csv.out.substr(0, 9), "quantity,");
}

TEST_F(Cli, ScenarioCsvAndCircuitGoldens) {
  EXPECT_EQ(run_cli({"scenario", "correlated", "--format", "csv"}).out, golden("correlated.golden.csv"));
  EXPECT_EQ(run_cli({"scenario", "correlated", "--emit-circuit"}).out, golden("correlated.golden.fopa"));
}

TEST_F(Cli, Su11Visibility) {
  const auto j = nlohmann::json::parse(run_cli({"scenario", "su11", "--ideal"}).out);
  EXPECT_NEAR(j["payload"]["visibility"].get<double>(), 0.9979, 5e-5);
  const auto fringe = run_cli({"scenario", "su11", "--ideal", "--fringe", "--format", "csv"});
  EXPECT_EQ(fringe.out.substr(0, fringe.out.find('\n')), "dtheta,intensity");
}

TEST_F(Cli, OverridesApplyAfterPresets) {
  const auto j = nlohmann::json::parse(
      run_cli({"scenario", "correlated", "--ideal", "--eta-link", "0.5", "--power-gain2", "121", "--dtheta", "1.5"}).out);
  const auto& cfg = j["payload"]["config"];
  EXPECT_DOUBLE_EQ(cfg["imperfections"]["eta_link"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(cfg["imperfections"]["eta_det"].get<double>(), 1.0);
  EXPECT_NEAR(cfg["power_gain2"].get<double>(), 121.0, 1e-9);
  EXPECT_NEAR(cfg["theta_p2"].get<double>(), 1.5, 1e-15);
  const auto results = nlohmann::json::parse(run_cli({"scenario", "correlated", "--link-preset", "results"}).out);
  EXPECT_DOUBLE_EQ(results["payload"]["config"]["imperfections"]["eta_link"].get<double>(), 0.68);
}

TEST_F(Cli, SweepGolden) {
  const auto r = run_cli({"sweep", "theta_p2", "0", "6.283185307179586", "8", "--exclusive", "--ideal", "--format", "csv"});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out, golden("sweep_theta.golden.csv"));
}

TEST_F(Cli, SweepSecondGainFindsOptimum) {
  const auto r = run_cli({"sweep", "g2", "2.0", "3.5", "61", "--ideal"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto pts = nlohmann::json::parse(r.out)["payload"]["trace"]["points"];
  double best = 1e9, best_g = 0;
  for (const auto& p : pts) {
    if (p["nf_s_db"].get<double>() < best) {
      best = p["nf_s_db"].get<double>();
      best_g = p["value"].get<double>();
    }
  }
  EXPECT_NEAR(std::cosh(best_g), 11.0, 0.3);
}

TEST_F(Cli, OracleScenarioPassesAndIsReproducible) {
  const auto a = run_cli({"oracle", "correlated", "--ideal", "-n", "200000", "--seed", "5", "--format", "csv"});
  const auto b = run_cli({"oracle", "correlated", "--ideal", "-n", "200000", "--seed", "5", "--format", "csv"});
  EXPECT_EQ(a.code, kOk) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find(",true\n"), std::string::npos);
}

TEST_F(Cli, OracleFileAndErrors) {
  EXPECT_EQ(run_cli({"oracle", "cascade.fopa", "-n", "100000"}).code, kOk);
  const auto tiny = run_cli({"oracle", "correlated", "-n", "10"});
  EXPECT_EQ(tiny.code, kDomainError);
  EXPECT_NE(tiny.err.find("n too small"), std::string::npos);
  EXPECT_EQ(run_cli({"oracle", "no-such-target"}).code, kUsageError);
}

}  // namespace
}  // namespace fopa::cli
