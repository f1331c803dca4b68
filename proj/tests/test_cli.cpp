#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace iqprob;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args, std::optional<std::string> env = std::nullopt) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err, env);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(IQPROB_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("iqprob_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, Spin1ReproduceSucceeds) {
  const auto r = run({"spin1", "--reproduce"});
  ASSERT_EQ(r.code, cli::ok) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["schema"], "iqprob/1");
  EXPECT_TRUE(j["report"]["pass"].get<bool>());
  EXPECT_LE(j["report"]["max_deviation"].get<double>(), 1e-10);
}

TEST(Cli, Spin1PrettyTable) {
  const auto r = run({"--pretty", "spin1", "--reproduce"});
  EXPECT_EQ(r.code, cli::ok);
  EXPECT_NE(r.out.find("max deviation"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, Spin1CatalogMatchesData) {
  const auto j = run({"spin1"}).json();
  const Matrix from_cli = matrix_from_json(j["projectors"]["x"]["1"]);
  EXPECT_LE(op_norm(from_cli - load_matrix(data("spin1_x_plus.json"))), 1e-15);
}

TEST(Cli, BoundsOnCommutingPair) {
  const auto r = run({"bounds", data("commuting_p.json"), data("commuting_q.json")});
  ASSERT_EQ(r.code, cli::ok) << r.out;
  const auto j = r.json();
  const Matrix pq = load_matrix(data("commuting_p.json")) * load_matrix(data("commuting_q.json"));
  EXPECT_LE(op_norm(matrix_from_json(j["bounds"]["lower"]) - pq), 1e-14);
  EXPECT_LE(op_norm(matrix_from_json(j["bounds"]["upper"]) - pq), 1e-14);
  EXPECT_TRUE(j["bounds"]["commuting"].get<bool>());
}

TEST(Cli, BoundsWithEveryMethod) {
  for (const char* m : {"spectral", "harmonic-mean", "iterated-limit", "schur-block"}) {
    const auto r = run({"--method", m, "bounds", data("spin1_x_plus.json"), data("spin1_z_plus.json")});
    ASSERT_EQ(r.code, cli::ok) << m;
    EXPECT_LE(op_norm(matrix_from_json(r.json()["bounds"]["upper"]) - spin::golden::upper_xz(1, 1)), 1e-12) << m;
  }
}

TEST(Cli, DecomposeReportsReconstruction) {
  const auto j = run({"decompose", data("spin1_x_plus.json"), data("spin1_z_plus.json")}).json();
  EXPECT_LE(j["reconstruction"]["p_error"].get<double>(), 1e-10);
  EXPECT_LE(j["reconstruction"]["q_error"].get<double>(), 1e-10);
  EXPECT_EQ(j["decomposition"]["blocks"]["generic"], 1);
}

TEST(Cli, IntervalOnMixedState) {
  const auto j = run({"interval", data("mixed3.json"), data("spin1_x_plus.json"), data("spin1_z_plus.json")}).json();
  EXPECT_NEAR(j["interval"]["lower"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(j["interval"]["upper"].get<double>(), 1.0 / 6.0, 1e-12);
  const auto c = run({"interval", "--conditional", data("spin1_z_plus.json"), data("spin1_x_plus.json"),
                      data("spin1_z_plus.json")})
                     .json();
  EXPECT_NEAR(c["interval"]["upper"].get<double>(), 0.25, 1e-12);
}

TEST(Cli, ConditionOnNullEventIsValidationError) {
  const auto r = run({"interval", "--conditional", data("spin1_z_minus.json"), data("spin1_x_plus.json"),
                      data("spin1_z_plus.json")});
  EXPECT_EQ(r.code, cli::validation_error);
  EXPECT_EQ(r.json()["error"]["code"], "ConditionOnNullEvent");
}

TEST(Cli, CompareReportsDominanceAndDistance) {
  const auto j = run({"compare", data("mixed3.json"), data("spin1_x_plus.json"), data("spin1_z_plus.json"),
                      data("spin1_x_zero.json"), data("spin1_z_plus.json")})
                     .json();
  EXPECT_NEAR(j["hausdorff_distance"].get<double>(), 1.0 / 6.0, 1e-12);
  EXPECT_FALSE(j["first_surely_more_probable"]["holds"].get<bool>());
}

TEST(Cli, AxiomsOnRandomPairs) {
  const auto r = run({"axioms", "--random", "100", "--dim", "5"});
  ASSERT_EQ(r.code, cli::ok) << r.out.substr(0, 400);
  const auto j = r.json();
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["pairs"].size(), 100u);
  EXPECT_EQ(j["failed"], 0);
}

TEST(Cli, AxiomsOnFilesWithStates) {
  const auto r = run({"axioms", data("spin1_x_plus.json"), data("spin1_z_plus.json"), "--state", data("mixed3.json"),
                      "--samples", "4"});
  ASSERT_EQ(r.code, cli::ok);
  const auto j = r.json();
  EXPECT_EQ(j["report"]["supplied_states_used"], 1);
  EXPECT_EQ(j["report"]["sampled_states"], 4);
}

TEST(Cli, OutputIsDeterministic) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"--seed", "7", "axioms", "--random", "20", "--dim", "4", "--emit-witnesses"},
           {"--seed", "3", "witnesses", "--trials", "2000"},
           {"spin1", "--reproduce"}}) {
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, b.code);
  }
  EXPECT_NE(run({"--seed", "1", "axioms", "--random", "3"}).out, run({"--seed", "2", "axioms", "--random", "3"}).out);
}

TEST(Cli, ErrorCarriesCodeAndPath) {
  const auto bad = data("not_projector.json");
  const auto r = run({"bounds", bad, data("commuting_q.json")});
  EXPECT_EQ(r.code, cli::validation_error);
  const auto j = r.json();
  EXPECT_EQ(j["schema"], "iqprob/1");
  EXPECT_EQ(j["error"]["code"], "NotIdempotent");
  EXPECT_EQ(j["error"]["path"], bad);
  EXPECT_NE(r.err.find(bad), std::string::npos);
}

TEST(Cli, MalformedAndMissingFiles) {
  const auto broken = temp_file("broken.json", "{\"dim\": 2, \"entries\": [");
  auto r = run({"bounds", broken, broken});
  EXPECT_EQ(r.code, cli::validation_error);
  EXPECT_EQ(r.json()["error"]["code"], "MalformedInput");
  EXPECT_EQ(r.json()["error"]["path"], broken);
  r = run({"bounds", "/nonexistent/p.json", broken});
  EXPECT_EQ(r.code, cli::validation_error);
  EXPECT_EQ(r.json()["error"]["path"], "/nonexistent/p.json");
}

TEST(Cli, DimensionMismatch) {
  const auto r = run({"bounds", data("spin1_x_plus.json"), data("commuting_q.json")});
  EXPECT_EQ(r.code, cli::validation_error);
  EXPECT_EQ(r.json()["error"]["code"], "DimensionMismatch");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::validation_error);
  EXPECT_EQ(run({"bounds", data("commuting_p.json")}).code, cli::validation_error);
  EXPECT_EQ(run({"--method", "magic", "spin1"}).code, cli::validation_error);
  EXPECT_EQ(run({"twotime", data("mixed3.json"), data("spin1_x_plus.json"), data("spin1_z_plus.json"), "--order", "zz"})
                .code,
            cli::validation_error);
  EXPECT_EQ(run({"axioms"}).code, cli::validation_error);
}

TEST(Cli, ToleranceSpecParsing) {
  Tolerances t;
  cli::apply_tolerance_spec("1e-6", t);
  EXPECT_EQ(t.herm, 1e-6);
  EXPECT_EQ(t.proj, 1e-6);
  EXPECT_EQ(t.psd, 1e-6);
  EXPECT_EQ(t.trace, 1e-6);
  const double band = Tolerances{}.band;
  EXPECT_EQ(t.band, band);
  Tolerances u;
  cli::apply_tolerance_spec("band=1e-7,rank=1e-9", u);
  EXPECT_EQ(u.band, 1e-7);
  EXPECT_EQ(u.rank, 1e-9);
  Tolerances v;
  EXPECT_THROW(cli::apply_tolerance_spec("abc", v), Error);
  EXPECT_THROW(cli::apply_tolerance_spec("speed=1", v), Error);
  EXPECT_THROW(cli::apply_tolerance_spec("-1", v), Error);
  EXPECT_THROW(cli::apply_tolerance_spec("herm", v), Error);
}

TEST(Cli, EnvironmentToleranceApplies) {
  const std::string rough = temp_file("rough.json", R"({"dim": 2, "entries": [[[1.000001, 0], [0, 0]], [[0, 0], [0, 0]]]})");
  const std::string z = temp_file("zero2.json", R"({"dim": 2, "entries": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]})");
  EXPECT_EQ(run({"bounds", rough, z}).code, cli::validation_error);
  EXPECT_EQ(run({"bounds", rough, z}, "1e-4").code, cli::ok);
  EXPECT_EQ(run({"--tol", "1e-12", "bounds", rough, z}, "1e-4").code, cli::validation_error);
  const auto bad = run({"spin1"}, "nonsense");
  EXPECT_EQ(bad.code, cli::validation_error);
  EXPECT_EQ(bad.json()["error"]["code"], "InvalidArgument");
}

TEST(Cli, ClassicalExitCodes) {
  auto r = run({"classical", data("measure_vacuous3.json")});
  EXPECT_EQ(r.code, cli::ok) << r.out;
  EXPECT_TRUE(r.json()["pass"].get<bool>());
  r = run({"classical", data("credal4.json")});
  EXPECT_EQ(r.code, cli::ok);
  EXPECT_EQ(r.json()["n"], 4);
  r = run({"classical", data("measure_bad.json")});
  EXPECT_EQ(r.code, cli::property_failure);
  EXPECT_FALSE(r.json()["axioms"]["pass"].get<bool>());
}

TEST(Cli, NogoOnSpinResolutions) {
  const auto plain = run({"nogo", data("spin1_x_resolution.json"), data("spin1_z_resolution.json")});
  ASSERT_EQ(plain.code, cli::ok) << plain.out;
  const auto j = plain.json();
  EXPECT_TRUE(j["certificate"]["no_additive_joint"].get<bool>());
  EXPECT_EQ(j["certificate"]["forced_zero"].size(), 9u);
  EXPECT_NEAR(j["certificate"]["trace_defect"].get<double>(), 3.0, 1e-12);
  EXPECT_FALSE(j["certificate"].contains("defect"));
  const auto full = run({"--emit-witnesses", "nogo", data("spin1_x_resolution.json"), data("spin1_z_resolution.json")});
  const auto w = full.json();
  ASSERT_TRUE(w["certificate"].contains("defect"));
  EXPECT_LE(op_norm(matrix_from_json(w["certificate"]["defect"]) - identity(3)), 1e-12);
}

TEST(Cli, TwoTimeOrdersAndMarginals) {
  auto j = run({"twotime", data("mixed3.json"), data("spin1_x_plus.json"), data("spin1_z_plus.json")}).json();
  EXPECT_NEAR(j["value"].get<double>(), 1.0 / 12.0, 1e-12);
  j = run({"twotime", data("mixed3.json"), data("spin1_x_plus.json"), data("spin1_z_plus.json"), "--order", "mean"})
          .json();
  EXPECT_NEAR(j["value"].get<double>(), 1.0 / 12.0, 1e-12);
  const auto r = run({"twotime", "--marginals", data("spin1_y_plus.json"), data("spin1_x_resolution.json"),
                      data("spin1_z_resolution.json")});
  ASSERT_EQ(r.code, cli::ok) << r.out;
  j = r.json();
  EXPECT_TRUE(j["marginals"]["first_marginal_exact"].get<bool>());
  EXPECT_GT(j["marginals"]["max_second"].get<double>(), 0.01);
}

TEST(Cli, WitnessesFound) {
  const auto r = run({"witnesses"});
  ASSERT_EQ(r.code, cli::ok);
  const auto j = r.json();
  EXPECT_TRUE(j["non_subadditivity"]["found"].get<bool>());
  EXPECT_FALSE(j["non_subadditivity"].contains("p"));
  EXPECT_TRUE(run({"--emit-witnesses", "witnesses"}).json()["non_subadditivity"].contains("p"));
}
