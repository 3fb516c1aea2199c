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

#include "cibgame/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "test_games.hpp"

namespace cibgame {
namespace {

using testing::game_path;

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

TEST(LoadGame, CorpusFilesAreValid) {
  for (const auto& name : testing::one_sided_corpus()) {
    const GameFile f = load_game(game_path(name));
    ASSERT_TRUE(f.one_sided.has_value()) << name;
    EXPECT_TRUE(validate_game(f.game).empty()) << name;
  }
  const GameFile f = load_game(game_path("two_sided_t2.json"));
  EXPECT_FALSE(f.one_sided.has_value());
  EXPECT_TRUE(validate_game(f.game).empty());
  EXPECT_EQ(f.game.stage(0).labels.actions1,
            (std::vector<std::string>{"left", "right"}));
}

TEST(GameJson, GeneralRoundTripIsBitExact) {
  const GameFile f = load_game(game_path("two_sided_t2.json"));
  const json once = game_to_json(f.game);
  const GameFile g = parse_game(json::parse(once.dump()));
  EXPECT_EQ(game_to_json(g.game), once);
  for (int t = 0; t < f.game.horizon(); ++t) {
    EXPECT_EQ(f.game.stage(t).kernel, g.game.stage(t).kernel);
    EXPECT_EQ(f.game.stage(t).cost, g.game.stage(t).cost);
    EXPECT_EQ(f.game.stage(t).labels, g.game.stage(t).labels);
  }
}

TEST(GameJson, OneSidedRoundTripIsBitExact) {
  const OneSidedGame g = testing::random_one_sided(9, 3, 2, 3, 2, 3);
  const GameFile f = parse_game(json::parse(one_sided_to_json(g).dump()));
  ASSERT_TRUE(f.one_sided.has_value());
  for (int t = 0; t < g.horizon(); ++t) {
    EXPECT_EQ(f.one_sided->stages[t].transition, g.stages[t].transition);
    EXPECT_EQ(f.one_sided->stages[t].observation, g.stages[t].observation);
    EXPECT_EQ(f.one_sided->stages[t].cost, g.stages[t].cost);
  }
  EXPECT_EQ(f.one_sided->initial, g.initial);
}

TEST(GameJson, SyntaxErrorReportsLineAndColumn) {
  const std::string path =
      temp_file("cibgame_bad_syntax.json", "{\n  \"horizon\": 1,\n  \"stages\": [,]\n}\n");
  const std::string msg = error_of([&] { load_game(path); });
  EXPECT_NE(msg.find(path), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(GameJson, BadEntryReportsFieldPath) {
  json j = json::parse(std::ifstream(game_path("revelation_t2.json")));
  j["cost"][1][0][0][1] = "oops";
  const std::string msg = error_of([&] { parse_game(j); });
  EXPECT_NE(msg.find("cost[1][0][0][1]"), std::string::npos) << msg;
}

TEST(GameJson, WrongArityReportsFieldPath) {
  json j = json::parse(std::ifstream(game_path("two_sided_t2.json")));
  j["stages"][1]["cost"][0].erase(1);
  const std::string msg = error_of([&] { parse_game(j); });
  EXPECT_NE(msg.find("stages[1].cost[0]"), std::string::npos) << msg;
}

TEST(GameJson, MissingFieldIsNamed) {
  json j = json::parse(std::ifstream(game_path("two_sided_t2.json")));
  j.erase("initial");
  EXPECT_NE(error_of([&] { parse_game(j); }).find("initial"),
            std::string::npos);
}

TEST(GameJson, StructuredStageMatchesAssembledKernel) {
  // One stage whose kernel is given through observation and update maps.
  const json j = json::parse(R"({
    "horizon": 1,
    "stages": [{
      "spaces": {"X": 2, "U1": 1, "U2": 1, "P1": 1, "P2": 1, "Z": 2},
      "structured": {
        "Y2": 2,
        "transition": [[[[1, 0]]], [[[0, 1]]]],
        "observation1": [[[[1]]], [[[1]]]],
        "observation2": [[[[0.9, 0.1]]], [[[0.1, 0.9]]]],
        "xi1": [[[0]]], "xi2": [[[0, 0]]],
        "zeta": [[[[[[0, 1]]]]]]
      },
      "cost": [[[0]], [[1]]]
    }],
    "terminal": {"X": 2},
    "initial": [[[0.5]], [[0.5]]]
  })");
  const GameFile f = parse_game(j);
  EXPECT_TRUE(validate_game(f.game).empty());
  EXPECT_DOUBLE_EQ(f.game.kernel(0, 0, 0, 0, 0, 0, 0, 0, 0, 0), 0.9);
  EXPECT_DOUBLE_EQ(f.game.kernel(0, 1, 0, 0, 0, 0, 1, 0, 0, 0), 0.1);
}

TEST(AlphaJson, RoundTripIsBitExact) {
  std::mt19937_64 rng(3);
  std::vector<AlphaSet> sets = {testing::random_alpha_set(rng, 0, 3, 4),
                                AlphaSet::zero(1, 1)};
  const auto back = alpha_sets_from_json(json::parse(alpha_sets_to_json(sets).dump()));
  EXPECT_EQ(back, sets);
}

TEST(StrategyJson, RoundTripAndValidation) {
  HistoryStrategy s;
  s.player = 2;
  s.keys = InfoKeyMode::kDeclared;
  s.tables = {{{"2|t0|c|p0", {0.25, 0.75}}}, {{"2|t1|c1.|p0", {1.0, 0.0}}}};
  const HistoryStrategy back =
      strategy_from_json(json::parse(strategy_to_json(s).dump()));
  EXPECT_EQ(back.player, 2);
  EXPECT_EQ(back.keys, InfoKeyMode::kDeclared);
  EXPECT_EQ(back.tables, s.tables);

  json bad = strategy_to_json(s);
  bad["stages"][0]["2|t0|c|p0"] = {0.5, 0.6};
  EXPECT_THROW(strategy_from_json(bad), ValidationError);
  bad = strategy_to_json(s);
  bad["keys"] = "other";
  EXPECT_THROW(strategy_from_json(bad), ValidationError);
  bad.erase("player");
  EXPECT_THROW(strategy_from_json(bad), ValidationError);
}

TEST(StrategyJson, LoadPrefixesPath) {
  const std::string path = temp_file("cibgame_bad_strategy.json",
                                     R"({"player": 3, "stages": []})");
  const std::string msg = error_of([&] { load_strategy(path); });
  EXPECT_EQ(msg.rfind(path, 0), 0u) << msg;
}

}  // namespace
}  // namespace cibgame
