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

#include "cibgame/strategy.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "cibgame/io.hpp"
#include "references.hpp"
#include "test_games.hpp"

namespace cibgame {
namespace {

using testing::game_path;
using testing::joint_reference;
using testing::pure_best_response_reference;

// Player-1 rows chosen per node from (stage, state, private1).
HistoryStrategy p1_strategy(
    const ExtensiveForm& ef,
    const std::function<std::vector<double>(const EfNode&)>& row) {
  std::vector<std::vector<double>> rows(ef.infosets.size());
  for (std::size_t h = 0; h < ef.infosets.size(); ++h) {
    if (ef.infosets[h].player != 1) continue;
    rows[h] = row(ef.nodes[ef.infosets[h].nodes.front()]);
  }
  return strategy_from_behavior(ef, 1, rows);
}

TEST(BestResponse, UniformMatchingPennies) {
  const GameFile f = load_game(game_path("matching_pennies.json"));
  const ExtensiveForm ef =
      build_extensive_form(f.game, InfoKeyMode::kRecallClosure);
  const BestResponse br = best_response_value(f.game, uniform_strategy(ef, 1));
  EXPECT_NEAR(br.value, 0.5, 1e-12);
}

TEST(BestResponse, RevealingStrategyIsPunished) {
  const GameFile f = load_game(game_path("revelation_t2.json"));
  const ExtensiveForm ef =
      build_extensive_form(f.game, InfoKeyMode::kRecallClosure);
  const HistoryStrategy reveal = p1_strategy(ef, [](const EfNode& n) {
    if (n.stage > 0) return std::vector<double>{1.0};
    std::vector<double> r(2, 0.0);
    r[n.state] = 1.0;
    return r;
  });
  // Player 1 collects 0.3 and player 2 then guesses x with certainty.
  EXPECT_NEAR(best_response(ef, reveal).value, 0.7, 1e-12);
}

TEST(BestResponse, MatchesPureEnumeration) {
  for (const char* name : {"revelation_t2.json", "noisy_guess_t2.json",
                           "matching_pennies.json"}) {
    const GameFile f = load_game(game_path(name));
    const ExtensiveForm ef =
        build_extensive_form(f.game, InfoKeyMode::kRecallClosure);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const HistoryStrategy s1 = random_strategy(ef, 1, seed);
      const BestResponse br = best_response(ef, s1);
      EXPECT_NEAR(br.value, pure_best_response_reference(ef, s1), 1e-12)
          << name;
      EXPECT_NEAR(expected_cost(ef, s1, br.strategy), br.value, 1e-12);
    }
  }
}

TEST(BestResponse, PlayerOneResponds) {
  const GameFile f = load_game(game_path("revelation_t2.json"));
  const ExtensiveForm ef =
      build_extensive_form(f.game, InfoKeyMode::kRecallClosure);
  const HistoryStrategy s2 = random_strategy(ef, 2, 4);
  const BestResponse br = best_response(ef, s2);
  EXPECT_EQ(br.strategy.player, 1);
  EXPECT_NEAR(expected_cost(ef, br.strategy, s2), br.value, 1e-12);
  EXPECT_LE(br.value, expected_cost(ef, uniform_strategy(ef, 1), s2) + 1e-12);
}

TEST(BestResponse, EquilibriumIsUnexploitable) {
  const GameFile f = load_game(game_path("noisy_guess_t2.json"));
  const ExtensiveForm ef =
      build_extensive_form(f.game, InfoKeyMode::kRecallClosure);
  const SequenceFormSolution sol = sequence_form_value(ef);
  EXPECT_NEAR(best_response(ef, strategy_from_plan(ef, sol, 1)).value,
              sol.value, 1e-9);
}

TEST(CibStrategy, MatchingPenniesMixesEvenly) {
  const GameFile f = load_game(game_path("matching_pennies.json"));
  const OneSidedResult r = solve_one_sided(*f.one_sided);
  const CIBStrategy s = extract_cib_strategy(*f.one_sided, r.vf);
  const auto row = s.action(0, Belief::over_states(0, {1.0}), 0);
  EXPECT_NEAR(row[0], 0.5, 1e-9);
  EXPECT_NEAR(row[1], 0.5, 1e-9);
}

TEST(CibStrategy, BestResponseIsNearTheOracle) {
  for (const char* name : {"revelation_t2.json", "noisy_guess_t2.json",
                           "three_state_t2.json"}) {
    const GameFile f = load_game(game_path(name));
    const OneSidedResult r = solve_one_sided(*f.one_sided);
    const ExtensiveForm ef =
        build_extensive_form(f.game, InfoKeyMode::kRecallClosure);
    const double oracle = sequence_form_value(ef).value;
    const HistoryStrategy s =
        unroll_cib_strategy(extract_cib_strategy(*f.one_sided, r.vf), ef);
    const double br = best_response(ef, s).value;
    EXPECT_GE(br, oracle - 1e-9) << name;
    EXPECT_LE(br, oracle + 2e-3) << name;
  }
}

TEST(CibStrategy, RejectsHorizonMismatch) {
  const GameFile f = load_game(game_path("revelation_t2.json"));
  OneSidedValueFunction vf;
  vf.alpha = {AlphaSet::zero(0, 2), AlphaSet::zero(1, 1)};
  EXPECT_THROW(extract_cib_strategy(*f.one_sided, vf), ValidationError);
}

TEST(RhoProject, DependsOnCommonHistoryOnly) {
  const GameDefinition g = testing::bracket_instance(100);
  // Prescriptions that read the past prescriptions of both players.
  auto chi = [&](int player) -> ExpandedStrategy {
    return [&g, player](int t, const std::vector<int>& common,
                        const std::vector<Prescription>& past1,
                        const std::vector<Prescription>& past2) {
      const StageSpaces& s = g.spaces(t);
      const int rows = player == 1 ? s.private1 : s.private2;
      const int cols = player == 1 ? s.actions1 : s.actions2;
      double lean = 0.2 + 0.1 * player;
      for (int z : common) lean += 0.05 * z;
      for (const auto& p : past1) lean += 0.1 * p(0, 0);
      for (const auto& p : past2) lean -= 0.07 * p(0, cols - 1);
      lean = std::clamp(lean, 0.0, 1.0);
      std::vector<double> d;
      for (int r = 0; r < rows; ++r) {
        const double a = r % 2 == 0 ? lean : 1.0 - lean;
        d.push_back(a);
        d.push_back(1.0 - a);
      }
      return Prescription(t, player, rows, cols, d);
    };
  };
  const VirtualProfile v = rho_project(g, chi(1), chi(2));
  EXPECT_EQ(v.stages[0].size(), 1u);
  EXPECT_EQ(v.stages[1].size(), 8u);
  const auto a = play_distribution(g, chi(1), chi(2));
  const auto b = play_distribution(g, v.expanded(1), v.expanded(2));
  ASSERT_EQ(a.size(), b.size());
  double total = 0.0;
  for (const auto& [play, p] : a) {
    ASSERT_TRUE(b.count(play)) << play;
    EXPECT_NEAR(b.at(play), p, 1e-15);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(RhoProject, RejectsWrongShape) {
  const GameDefinition g = testing::bracket_instance(100);
  ExpandedStrategy bad = [](int t, const std::vector<int>&,
                            const std::vector<Prescription>&,
                            const std::vector<Prescription>&) {
    return Prescription::uniform(t, 1, 3, 2);
  };
  EXPECT_THROW(rho_project(g, bad, bad), ValidationError);
}

TEST(ReduceStrategy, PreservesJointDistribution) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GameDefinition g =
        lower_one_sided(testing::random_one_sided(seed, 2, 2, 2, 2, 2));
    const ExtensiveForm ef =
        build_extensive_form(g, InfoKeyMode::kRecallClosure);
    const HistoryStrategy s1 = random_strategy(ef, 1, 100 + seed);
    const HistoryStrategy reduced = reduce_strategy(g, s1);
    EXPECT_EQ(reduced.keys, InfoKeyMode::kDeclared);
    for (std::uint64_t k = 0; k < 5; ++k) {
      const HistoryStrategy s2 = random_strategy(ef, 2, 1000 * seed + k);
      std::map<std::string, double> want, got;
      joint_reference(ef, s1, s2, ef.root, 1.0, want);
      joint_reference(ef, reduced, s2, ef.root, 1.0, got);
      for (const auto& [key, p] : want) {
        EXPECT_NEAR(got[key], p, 1e-10) << key;
      }
      for (const auto& [key, p] : got) {
        if (!want.count(key)) EXPECT_NEAR(p, 0.0, 1e-10) << key;
      }
      EXPECT_NEAR(expected_cost(ef, reduced, s2), expected_cost(ef, s1, s2),
                  1e-10);
      const auto lib = stage_joint_distribution(ef, s1, s2);
      for (const auto& [key, p] : want) EXPECT_NEAR(lib.at(key), p, 1e-12);
    }
  }
}

TEST(ReduceStrategy, IsAFixedPoint) {
  const GameDefinition g =
      lower_one_sided(testing::random_one_sided(7, 2, 2, 2, 2, 2));
  const ExtensiveForm ef = build_extensive_form(g, InfoKeyMode::kRecallClosure);
  const HistoryStrategy once = reduce_strategy(g, random_strategy(ef, 1, 3));
  const HistoryStrategy twice = reduce_strategy(g, once);
  ASSERT_EQ(once.tables.size(), twice.tables.size());
  for (std::size_t t = 0; t < once.tables.size(); ++t) {
    for (const auto& [key, row] : once.tables[t]) {
      for (std::size_t u = 0; u < row.size(); ++u) {
        EXPECT_NEAR(twice.tables[t].at(key)[u], row[u], 1e-12) << key;
      }
    }
  }
}

TEST(ReduceStrategy, UnreachableKeysAreUniform) {
  // u1 is observed exactly; never playing u1 = 1 leaves z = 1 unreached.
  const GameFile f = load_game(game_path("revelation_t3.json"));
  const ExtensiveForm ef =
      build_extensive_form(f.game, InfoKeyMode::kRecallClosure);
  const HistoryStrategy s = p1_strategy(ef, [](const EfNode& n) {
    return n.stage == 2 ? std::vector<double>{1.0}
                        : std::vector<double>{1.0, 0.0};
  });
  const HistoryStrategy r = reduce_strategy(f.game, s);
  EXPECT_EQ(r.tables[0].at("1|t0|c|p0"), (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(r.tables[1].at("1|t1|c0.|p1"), (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(r.tables[1].at("1|t1|c1.|p0"), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(r.tables[1].at("1|t1|c1.|p1"), (std::vector<double>{0.5, 0.5}));
}

TEST(ReduceStrategy, RejectsTwoSidedGames) {
  const GameDefinition g = testing::bracket_instance(100);
  HistoryStrategy s;
  s.player = 1;
  EXPECT_THROW(reduce_strategy(g, s), ValidationError);
}

TEST(Simulate, ConstantCostHasZeroVariance) {
  GameStage st;
  st.spaces = {1, 2, 2, 1, 1, 1};
  st.kernel.assign(4, 1.0);
  st.cost.assign(4, 0.25);
  const GameDefinition g({st}, {1, 1, 1}, {1.0});
  const ExtensiveForm ef = build_extensive_form(g, InfoKeyMode::kRecallClosure);
  const SimulationResult r =
      simulate(ef, uniform_strategy(ef, 1), uniform_strategy(ef, 2), 1, 500);
  EXPECT_EQ(r.mean, 0.25);
  EXPECT_EQ(r.standard_error, 0.0);
  EXPECT_EQ(r.episodes, 500);
}

TEST(Simulate, AgreesWithExpectedCost) {
  for (const char* name : {"matching_pennies.json", "noisy_guess_t2.json",
                           "random_a_t2.json"}) {
    const GameFile f = load_game(game_path(name));
    const ExtensiveForm ef =
        build_extensive_form(f.game, InfoKeyMode::kRecallClosure);
    const HistoryStrategy s1 = random_strategy(ef, 1, 5);
    const HistoryStrategy s2 = random_strategy(ef, 2, 6);
    const SimulationResult r = simulate(ef, s1, s2, 42, 20000);
    EXPECT_GT(r.standard_error, 0.0);
    EXPECT_LE(std::abs(r.mean - expected_cost(ef, s1, s2)),
              3.0 * r.standard_error)
        << name;
  }
}

TEST(Simulate, IndependentOfThreadCount) {
  const GameFile f = load_game(game_path("noisy_guess_t2.json"));
  const ExtensiveForm ef =
      build_extensive_form(f.game, InfoKeyMode::kRecallClosure);
  const HistoryStrategy s1 = uniform_strategy(ef, 1);
  const HistoryStrategy s2 = uniform_strategy(ef, 2);
  const SimulationResult a = simulate(ef, s1, s2, 9, 3000, 1);
  const SimulationResult b = simulate(ef, s1, s2, 9, 3000, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.standard_error, b.standard_error);
  EXPECT_THROW(simulate(ef, s1, s2, 9, 0), ValidationError);
}

TEST(HistoryStrategy, CheckRejectsBadRows) {
  HistoryStrategy s;
  s.tables = {{{"1|t0|c|p0", {0.5, 0.6}}}};
  EXPECT_THROW(s.check(), ValidationError);
  s.tables = {{{"1|t0|c|p0", {0.5, 0.5}}}};
  EXPECT_NO_THROW(s.check());
  EXPECT_THROW(s.at(0, "1|t0|c|p1"), ValidationError);
  EXPECT_THROW(s.at(3, "1|t0|c|p0"), ValidationError);
}

}  // namespace
}  // namespace cibgame
