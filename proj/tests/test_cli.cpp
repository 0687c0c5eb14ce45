#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "common.hpp"
#include "scenario.hpp"

using namespace phqm;
using phqm::cli::json;

namespace {

struct KitRun {
  int code;
  std::string out;
};

KitRun kit(const std::string& args) {
  const std::string tmp = std::filesystem::temp_directory_path() / ("phqm_cli_" + std::to_string(::getpid()));
  const std::string cmd = std::string(PHQM_KIT_PATH) + " " + args + " > " + tmp;
  int st = std::system(cmd.c_str());
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  std::filesystem::remove(tmp);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, ss.str()};
}

std::string scenario(const std::string& name) { return std::string(PHQM_SCENARIO_DIR) + "/" + name; }

}  // namespace

struct Case {
  const char* file;
  int expected;
  friend std::ostream& operator<<(std::ostream& os, const Case& c) { return os << c.file; }
};

class CommittedScenario : public ::testing::TestWithParam<Case> {};

TEST_P(CommittedScenario, ExitCode) {
  auto [file, expected] = GetParam();
  KitRun r = kit("--scenario " + scenario(file));
  EXPECT_EQ(r.code, expected) << r.out.substr(0, 2000);
}

INSTANTIATE_TEST_SUITE_P(
    Scenarios, CommittedScenario,
    ::testing::Values(Case{"diagnose_pt_real.json", 0}, Case{"diagnose_pt_broken.json", 0},
                      Case{"metric_spectral.json", 0}, Case{"metric_sign.json", 0},
                      Case{"metric_perturbative.json", 0}, Case{"hermitize.json", 0},
                      Case{"hermitize_given_eta.json", 0}, Case{"model_two_level.json", 0},
                      Case{"model_swanson.json", 0}, Case{"model_quartic.json", 0},
                      Case{"model_quartic_omega1.json", 0}, Case{"model_kernel_barrier.json", 0},
                      Case{"model_kernel_delta.json", 0}, Case{"model_kernel_well.json", 0},
                      Case{"model_pt_cubic.json", 0}, Case{"model_pt_cubic_order3.json", 0},
                      Case{"brachistochrone.json", 0}, Case{"brachistochrone_eta.json", 0},
                      Case{"geometry.json", 0}, Case{"classical_cubic.json", 0},
                      Case{"classical_harmonic.json", 0}, Case{"em_tanh.json", 0},
                      Case{"em_vacuum.json", 0}, Case{"em_sampled.json", 0}, Case{"batch.json", 0},
                      Case{"errors/negative_d.json", 3}, Case{"errors/schema_violation.json", 3},
                      Case{"errors/defective.json", 3}, Case{"errors/identical_states.json", 3},
                      Case{"errors/complex_spectrum_metric.json", 3},
                      Case{"errors/small_quartic_grid.json", 3}, Case{"errors/cfl.json", 3}),
    [](const auto& info) {
      std::string n = info.param.file;
      for (char& c : n)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
      return n;
    });

TEST(Cli, RecordShape) {
  KitRun r = kit("--scenario " + scenario("model_two_level.json"));
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  for (const char* k : {"inputs", "outputs", "residuals", "pass", "timing_ms"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_NEAR(j["outputs"]["theta"].get<double>(), 0.5 * std::log(4.0), 1e-15);
}

TEST(Cli, DiagnoseClassification) {
  json a = json::parse(kit("--scenario " + scenario("diagnose_pt_real.json")).out);
  json b = json::parse(kit("--scenario " + scenario("diagnose_pt_broken.json")).out);
  EXPECT_EQ(a["outputs"]["classification"], "quasi_hermitian");
  EXPECT_EQ(b["outputs"]["classification"], "pseudo_hermitian");
}

TEST(Cli, ErrorRecordCarriesCode) {
  KitRun r = kit("--scenario " + scenario("errors/negative_d.json"));
  json j = json::parse(r.out);
  EXPECT_EQ(j["error"]["code"], "NonPositiveD");
  EXPECT_FALSE(j["pass"].get<bool>());
}

TEST(Cli, BatchProducesOneRecordEach) {
  json j = json::parse(kit("--scenario " + scenario("batch.json")).out);
  ASSERT_TRUE(j.contains("results"));
  EXPECT_EQ(j["results"].size(), 3u);
}

TEST(Cli, CsvPlotOutput) {
  KitRun r = kit("--scenario " + scenario("geometry.json") + " --format csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("theta,phi,ds2_factor\n", 0), 0u) << r.out.substr(0, 80);
}

TEST(Cli, SeedOverrideIsDeterministic) {
  auto a = json::parse(kit("--scenario " + scenario("hermitize.json") + " --seed 5").out);
  auto b = json::parse(kit("--scenario " + scenario("hermitize.json") + " --seed 5").out);
  EXPECT_EQ(a["residuals"], b["residuals"]);
}

TEST(Cli, BadArgumentsExitThree) {
  EXPECT_EQ(kit("--scenario " + scenario("does_not_exist.json")).code, 3);
  EXPECT_EQ(kit("--scenario " + scenario("hermitize.json") + " --format xml").code, 3);
}

TEST(Cli, LoadScenarioValidatesSchema) {
  EXPECT_ERRC(cli::load_scenario("{\"command\": \"teleport\"}"), Errc::SchemaError);
  EXPECT_ERRC(cli::load_scenario("{not json"), Errc::SchemaError);
  EXPECT_NO_THROW(cli::load_scenario("{\"command\": \"geometry\"}"));
}

TEST(Cli, ResidualFailureExitsTwo) {
  // A first-order kernel far outside its regime: the order fit collapses.
  json sc = {{"command", "model"}, {"model", {{"kind", "kernel"}, {"potential", "square_well"}, {"zeta", 0.02}}}};
  auto rec = cli::run(sc, {});
  EXPECT_FALSE(rec.error.has_value());
  EXPECT_EQ(cli::exit_code({rec}), 2);
}

TEST(Cli, ComplexParsing) {
  EXPECT_EQ(cli::complex_from_json(json(2.5)), cplx(2.5, 0));
  EXPECT_EQ(cli::complex_from_json(json::array({1, -2})), cplx(1, -2));
  EXPECT_ERRC(cli::complex_from_json(json("x")), Errc::SchemaError);
  EXPECT_EQ(cli::matrix_from_json(json("identity"), 3), Mat::Identity(3, 3));
  EXPECT_ERRC(cli::matrix_from_json(json::array({json::array({1, 2}), json::array({1})}), 0), Errc::DimensionMismatch);
}
