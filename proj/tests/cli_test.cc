// Copyright 2026 The cibgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cibgame/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cibgame/io.hpp"
#include "test_games.hpp"

namespace cibgame {
namespace {

using cli::RunResult;
using testing::game_path;

RunResult run(std::vector<std::string> args) {
  std::ostringstream help;
  return cli::run(args, &help);
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string write_temp(const std::string& name, const json& j) {
  const std::string path = temp_path(name);
  std::ofstream(path) << j.dump();
  return path;
}

TEST(Cli, ValidateWellFormedGame) {
  const RunResult r = run({"validate", game_path("revelation_t2.json")});
  EXPECT_EQ(r.exit_code, cli::kExitOk) << r.report.error;
  EXPECT_TRUE(r.report.values["violations"].empty());
}

TEST(Cli, ValidateReportsViolations) {
  json j = json::parse(std::ifstream(game_path("revelation_t2.json")));
  j["initial"] = {0.7, 0.7};
  const RunResult r = run({"validate", write_temp("cibgame_cli_bad.json", j)});
  EXPECT_EQ(r.exit_code, cli::kExitInvalid);
  EXPECT_FALSE(r.report.values["violations"].empty());
}

TEST(Cli, MalformedFileNamesTheField) {
  json j = json::parse(std::ifstream(game_path("revelation_t2.json")));
  j["cost"][0][1][0][0] = "x";
  const RunResult r =
      run({"validate", write_temp("cibgame_cli_field.json", j)});
  EXPECT_EQ(r.exit_code, cli::kExitInvalid);
  EXPECT_NE(r.report.error.find("cost[0][1][0][0]"), std::string::npos)
      << r.report.error;
}

TEST(Cli, UnknownFlagIsRejected) {
  const RunResult r =
      run({"solve", game_path("revelation_t2.json"), "--bogus", "1"});
  EXPECT_EQ(r.exit_code, cli::kExitInvalid);
  EXPECT_FALSE(r.report.error.empty());
}

TEST(Cli, MissingFileIsRejected) {
  EXPECT_EQ(run({"validate", "/nonexistent/game.json"}).exit_code,
            cli::kExitInvalid);
}

TEST(Cli, HelpSucceeds) {
  std::ostringstream help;
  EXPECT_EQ(cli::run({"--help"}, &help).exit_code, cli::kExitOk);
  EXPECT_NE(help.str().find("compare"), std::string::npos);
}

TEST(Cli, CompareMatchingPennies) {
  const RunResult r = run({"compare", game_path("matching_pennies.json")});
  ASSERT_EQ(r.exit_code, cli::kExitOk) << r.report.error;
  const json& v = r.report.values;
  EXPECT_NEAR(v["solver_value"].get<double>(), 0.5, 1e-9);
  EXPECT_NEAR(v["oracle_value"].get<double>(), 0.5, 1e-9);
  EXPECT_LE(v["exploitability"].get<double>(), 1e-7);
}

TEST(Cli, CompareRevelationGap) {
  const RunResult r = run({"compare", game_path("revelation_t2.json")});
  ASSERT_EQ(r.exit_code, cli::kExitOk) << r.report.error;
  const json& v = r.report.values;
  EXPECT_LE(std::abs(v["gap"].get<double>()), 1e-3);
  EXPECT_TRUE(v["lower_bound_sound"].get<bool>());
}

TEST(Cli, CompareTwoSidedGame) {
  const RunResult r = run({"compare", game_path("two_sided_t2.json")});
  ASSERT_EQ(r.exit_code, cli::kExitOk) << r.report.error;
  EXPECT_TRUE(r.report.values["bracket_contains_oracle"].get<bool>());
  EXPECT_LE(r.report.values["lower"].get<double>(),
            r.report.values["upper"].get<double>() + 1e-9);
}

TEST(Cli, CapsRefuse) {
  const RunResult r =
      run({"solve", game_path("revelation_t3.json"), "--max-horizon", "2"});
  EXPECT_EQ(r.exit_code, cli::kExitRefused);
  const RunResult n =
      run({"oracle", game_path("revelation_t2.json"), "--node-cap", "5"});
  EXPECT_EQ(n.exit_code, cli::kExitRefused);
}

TEST(Cli, DeclaredOracleRefusesImperfectRecall) {
  const OneSidedGame g = testing::random_one_sided(3, 2, 2, 2, 2, 2);
  const std::string path =
      write_temp("cibgame_cli_recall.json", one_sided_to_json(g));
  const RunResult r = run({"oracle", path, "--declared"});
  EXPECT_EQ(r.exit_code, cli::kExitRefused);
  EXPECT_EQ(r.report.values["recall_witness"].size(), 2u);
  EXPECT_EQ(run({"oracle", path}).exit_code, cli::kExitOk);
}

TEST(Cli, ValueAtBelief) {
  const RunResult r = run({"value", game_path("revelation_t2.json"),
                           "--belief", "[0.5, 0.5]"});
  ASSERT_EQ(r.exit_code, cli::kExitOk) << r.report.error;
  EXPECT_NEAR(r.report.values["value"].get<double>(), 0.35, 1e-9);
  EXPECT_EQ(run({"value", game_path("revelation_t2.json"), "--belief", "1,2,3"})
                .exit_code,
            cli::kExitInvalid);
}

TEST(Cli, StrategyFilesRoundTrip) {
  const std::string out = temp_path("cibgame_cli_br.json");
  const RunResult br = run({"best-response", game_path("revelation_t2.json"),
                            "--strategy", "cib", "--out", out});
  ASSERT_EQ(br.exit_code, cli::kExitOk) << br.report.error;
  const HistoryStrategy s2 = load_strategy(out);
  EXPECT_EQ(s2.player, 2);

  const RunResult eq = run({"best-response", game_path("revelation_t2.json"),
                            "--strategy", "equilibrium"});
  ASSERT_EQ(eq.exit_code, cli::kExitOk) << eq.report.error;

  const RunResult sim =
      run({"simulate", game_path("revelation_t2.json"), "--strategies", "cib",
           out, "--episodes", "2000", "--seed", "3"});
  ASSERT_EQ(sim.exit_code, cli::kExitOk) << sim.report.error;
  EXPECT_LE(std::abs(sim.report.values["mean"].get<double>() -
                     sim.report.values["expected_cost"].get<double>()),
            4.0 * sim.report.values["standard_error"].get<double>() + 1e-12);
}

TEST(Cli, ReduceAndExport) {
  const std::string uniform = temp_path("cibgame_cli_uniform.json");
  {
    const GameFile f = load_game(game_path("revelation_t2.json"));
    const ExtensiveForm ef =
        build_extensive_form(f.game, InfoKeyMode::kRecallClosure);
    std::ofstream(uniform) << strategy_to_json(uniform_strategy(ef, 1)).dump();
  }
  const RunResult r =
      run({"reduce", game_path("revelation_t2.json"), "--strategy", uniform});
  ASSERT_EQ(r.exit_code, cli::kExitOk) << r.report.error;
  EXPECT_EQ(r.report.values["strategy"]["keys"], "declared");

  const std::string alpha = temp_path("cibgame_cli_alpha.json");
  const RunResult e =
      run({"export-alpha", game_path("revelation_t2.json"), "--out", alpha});
  ASSERT_EQ(e.exit_code, cli::kExitOk) << e.report.error;
  EXPECT_EQ(alpha_sets_from_json(json::parse(std::ifstream(alpha))).size(), 3u);
  EXPECT_EQ(run({"export-alpha", game_path("revelation_t2.json")}).exit_code,
            cli::kExitInvalid);
}

TEST(Cli, RegressionSolve) {
  const RunResult r = run({"solve", game_path("revelation_t2.json"),
                           "--pieces", "4", "--samples", "30"});
  ASSERT_EQ(r.exit_code, cli::kExitOk) << r.report.error;
  EXPECT_TRUE(r.report.values.contains("training_mse"));
}

TEST(Cli, CompareRerunIsBitExact) {
  const std::vector<std::string> args = {
      "--json", "compare", game_path("noisy_guess_t2.json"), "--seed", "17"};
  json a = run(args).report.to_json();
  json b = run(args).report.to_json();
  a.erase("timing");
  b.erase("timing");
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a["seed"], 17);
}

}  // namespace
}  // namespace cibgame
