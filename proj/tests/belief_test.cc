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

#include "cibgame/belief.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_games.hpp"

namespace cibgame {
namespace {

using testing::random_belief;
using testing::random_general;
using testing::random_prescription;

// A T = 1 game with a single kernel row for every source.
GameDefinition single_stage(StageSpaces s, BeliefShape next,
                            const std::vector<double>& row) {
  GameStage st;
  st.spaces = s;
  const int sources =
      s.states * s.private1 * s.private2 * s.actions1 * s.actions2;
  for (int i = 0; i < sources; ++i) {
    st.kernel.insert(st.kernel.end(), row.begin(), row.end());
  }
  st.cost.assign(static_cast<std::size_t>(s.states) * s.actions1 * s.actions2,
                 0.0);
  std::vector<double> init(s.states * s.private1 * s.private2, 0.0);
  init[0] = 1.0;
  return GameDefinition({st}, next, init);
}

// Sum over every primitive tuple, read through kernel().
std::vector<double> enumerate_joint(const Belief& pi, const Prescription& g1,
                                    const Prescription& g2,
                                    const GameDefinition& g) {
  const StageSpaces& s = g.spaces(0);
  const BeliefShape nx = g.belief_shape(1);
  std::vector<double> out(static_cast<std::size_t>(s.increments) * nx.size(),
                          0.0);
  for (int x = 0; x < s.states; ++x)
    for (int p1 = 0; p1 < s.private1; ++p1)
      for (int p2 = 0; p2 < s.private2; ++p2)
        for (int u1 = 0; u1 < s.actions1; ++u1)
          for (int u2 = 0; u2 < s.actions2; ++u2)
            for (int z = 0; z < s.increments; ++z)
              for (int a = 0; a < nx.states; ++a)
                for (int b = 0; b < nx.private1; ++b)
                  for (int c = 0; c < nx.private2; ++c) {
                    out[static_cast<std::size_t>(z) * nx.size() +
                        nx.index(a, b, c)] +=
                        pi.at(x, p1, p2) * g1(p1, u1) * g2(p2, u2) *
                        g.kernel(0, x, p1, p2, u1, u2, a, b, c, z);
                  }
  return out;
}

TEST(JointUpdate, DeterministicInputsGivePointMass) {
  const StageSpaces s{2, 2, 2, 1, 1, 3};
  // Every source maps to (x' = 1, z = 2).
  std::vector<double> row(2 * 3, 0.0);
  row[1 * 3 + 2] = 1.0;
  const GameDefinition g = single_stage(s, {2, 1, 1}, row);
  const Belief pi = Belief::point(0, g.belief_shape(0), 1);
  const JointMeasure j =
      joint_update(pi, Prescription::pure(0, 1, 2, {1}),
                   Prescription::pure(0, 2, 2, {0}), g);
  for (int z = 0; z < 3; ++z) {
    for (int k = 0; k < 2; ++k) {
      EXPECT_EQ(j.at(z, k), (z == 2 && k == 1) ? 1.0 : 0.0);
    }
  }
}

TEST(JointUpdate, UninformativeIncrementIsUniform) {
  const StageSpaces s{2, 2, 2, 1, 1, 4};
  const GameDefinition g =
      single_stage(s, {1, 1, 1}, std::vector<double>(4, 0.25));
  const auto m = marginal_z(Belief::uniform(0, g.belief_shape(0)),
                            Prescription::uniform(0, 1, 1, 2),
                            Prescription::uniform(0, 2, 1, 2), g);
  for (double v : m) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(JointUpdate, MatchesEnumeration) {
  std::mt19937_64 rng(1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GameDefinition g =
        random_general(seed, {2, 2, 3, 2, 2, 3}, {2, 2, 1});
    const Belief pi = random_belief(rng, 0, g.belief_shape(0), true);
    const Prescription g1 = random_prescription(rng, 0, 1, 2, 2);
    const Prescription g2 = random_prescription(rng, 0, 2, 2, 3);
    const JointMeasure j = joint_update(pi, g1, g2, g);
    const std::vector<double> want = enumerate_joint(pi, g1, g2, g);
    ASSERT_EQ(j.data.size(), want.size());
    for (std::size_t k = 0; k < want.size(); ++k) {
      EXPECT_NEAR(j.data[k], want[k], 1e-12);
    }
    EXPECT_NEAR(j.mass(), 1.0, 1e-12);
  }
}

TEST(MarginalZ, RevelationIsPointMass) {
  const StageSpaces s{1, 1, 1, 1, 1, 3};
  const GameDefinition g = single_stage(s, {1, 1, 1}, {0.0, 1.0, 0.0});
  const auto m = marginal_z(Belief::uniform(0, {1, 1, 1}),
                            Prescription::uniform(0, 1, 1, 1),
                            Prescription::uniform(0, 2, 1, 1), g);
  EXPECT_EQ(m, (std::vector<double>{0.0, 1.0, 0.0}));
}

TEST(MarginalZ, EqualsColumnSumsOfJoint) {
  std::mt19937_64 rng(2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GameDefinition g =
        random_general(seed, {3, 2, 2, 2, 1, 4}, {2, 1, 2});
    const Belief pi = random_belief(rng, 0, g.belief_shape(0));
    const Prescription g1 = random_prescription(rng, 0, 1, 2, 2);
    const Prescription g2 = random_prescription(rng, 0, 2, 1, 2);
    const auto want = enumerate_joint(pi, g1, g2, g);
    const auto m = marginal_z(pi, g1, g2, g);
    for (int z = 0; z < 4; ++z) {
      double col = 0.0;
      for (int k = 0; k < 4; ++k) col += want[z * 4 + k];
      EXPECT_NEAR(m[z], col, 1e-12);
    }
  }
}

TEST(NextBelief, RevealingPrescriptionIdentifiesState) {
  // Static state, z reports player 1's action; x = 0 plays action 0.
  const OneSidedGame os = [] {
    OneSidedGame g;
    OneSidedStage s;
    s.states = 2;
    s.actions1 = 2;
    s.transition = {1, 0, 1, 0, 0, 1, 0, 1};
    s.observations = 2;
    for (int nx = 0; nx < 2; ++nx)
      for (int u1 = 0; u1 < 2; ++u1) {
        s.observation.push_back(u1 == 0 ? 1.0 : 0.0);
        s.observation.push_back(u1 == 1 ? 1.0 : 0.0);
      }
    s.cost.assign(4, 0.0);
    g.stages = {s};
    g.terminal_states = 2;
    g.initial = {0.5, 0.5};
    return g;
  }();
  const GameDefinition g = lower_one_sided(os);
  const Belief pi = lift_one_sided_belief(Belief::over_states(0, {0.5, 0.5}));
  const Prescription g1 = Prescription::pure(0, 1, 2, {0, 1});
  const Prescription g2 = Prescription::uniform(0, 2, 1, 1);
  const Belief post = next_belief(pi, g1, g2, one_sided_increment(0, 0, 1), g);
  EXPECT_EQ(project_one_sided_belief(post).values(),
            (std::vector<double>{1.0, 0.0}));
  const Belief direct =
      one_sided_next_belief(Belief::over_states(0, {0.5, 0.5}), g1, 1, os);
  EXPECT_EQ(direct.values(), (std::vector<double>{0.0, 1.0}));
}

TEST(NextBelief, UninformativeStaticKeepsBelief) {
  // Identity on (x, p1, p2), z carries nothing.
  const StageSpaces s{2, 2, 2, 2, 1, 1};
  GameStage st;
  st.spaces = s;
  for (int x = 0; x < 2; ++x)
    for (int p1 = 0; p1 < 2; ++p1)
      for (int u = 0; u < 4; ++u)
        for (int k = 0; k < 4; ++k) st.kernel.push_back(k == x * 2 + p1);
  st.cost.assign(8, 0.0);
  const GameDefinition g({st}, {2, 2, 1}, {0.1, 0.2, 0.3, 0.4});
  const Belief pi(0, {2, 2, 1}, {0.1, 0.2, 0.3, 0.4});
  std::mt19937_64 rng(3);
  const Belief post = next_belief(pi, random_prescription(rng, 0, 1, 2, 2),
                                  random_prescription(rng, 0, 2, 1, 2), 0, g);
  EXPECT_EQ(post.stage(), 1);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(post[k], pi[k], 1e-15);
}

TEST(NextBelief, ZeroProbabilityIncrementFallsBackToUniform) {
  const StageSpaces s{1, 1, 1, 1, 1, 2};
  const GameDefinition g = single_stage(s, {3, 1, 1}, {0.2, 0, 0.3, 0, 0.5, 0});
  const Belief post =
      next_belief(Belief::uniform(0, {1, 1, 1}), Prescription::uniform(0, 1, 1, 1),
                  Prescription::uniform(0, 2, 1, 1), 1, g);
  for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(post[k], 1.0 / 3.0);
}

TEST(NextBelief, NormalizedAndTotalProbability) {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const GameDefinition g =
        random_general(seed, {2, 2, 2, 2, 2, 3}, {2, 2, 2});
    const Belief pi = random_belief(rng, 0, g.belief_shape(0), true);
    const Prescription g1 = random_prescription(rng, 0, 1, 2, 2);
    const Prescription g2 = random_prescription(rng, 0, 2, 2, 2);
    const JointMeasure j = joint_update(pi, g1, g2, g);
    const auto m = marginal_z(j);
    std::vector<double> mixed(8, 0.0);
    for (int z = 0; z < 3; ++z) {
      const Belief b = next_belief(j, z);
      EXPECT_NEAR(b.mass(), 1.0, 1e-10);
      for (int k = 0; k < 8; ++k) mixed[k] += m[z] * b[k];
    }
    for (int k = 0; k < 8; ++k) {
      double direct = 0.0;
      for (int z = 0; z < 3; ++z) direct += j.at(z, k);
      EXPECT_NEAR(mixed[k], direct, 1e-10);
    }
  }
}

TEST(OneSidedNextBelief, NoiselessObservationGivesPointMass) {
  OneSidedGame g = testing::random_one_sided(5, 3, 2, 2, 3, 2);
  // y2 = x'.
  g.stages[0].observation.assign(3 * 4 * 3, 0.0);
  for (int nx = 0; nx < 3; ++nx)
    for (int a = 0; a < 4; ++a) g.stages[0].observation[(nx * 4 + a) * 3 + nx] = 1.0;
  std::mt19937_64 rng(5);
  const Belief pi = random_belief(rng, 0, {3, 1, 1});
  const Prescription g1 = random_prescription(rng, 0, 1, 3, 2);
  for (int y = 0; y < 3; ++y) {
    const Belief post = one_sided_next_belief(pi, g1, one_sided_increment(y, 1, 2), g);
    double reach = 0.0;
    for (int x = 0; x < 3; ++x)
      for (int u = 0; u < 2; ++u) reach += pi[x] * g1(x, u) * g.transition(0, x, u, 1, y);
    if (reach <= 1e-12) continue;
    for (int k = 0; k < 3; ++k) EXPECT_EQ(post[k], k == y ? 1.0 : 0.0);
  }
}

TEST(OneSidedNextBelief, ActionLikelihoodBayesUpdate) {
  // Identity transition, y2 = u1 with probability 0.8.
  OneSidedGame g;
  OneSidedStage s;
  s.states = 2;
  s.actions1 = 2;
  s.observations = 2;
  s.transition = {1, 0, 1, 0, 0, 1, 0, 1};
  for (int nx = 0; nx < 2; ++nx)
    for (int u1 = 0; u1 < 2; ++u1) {
      s.observation.push_back(u1 == 0 ? 0.8 : 0.2);
      s.observation.push_back(u1 == 0 ? 0.2 : 0.8);
    }
  s.cost.assign(4, 0.0);
  g.stages = {s};
  g.terminal_states = 2;
  g.initial = {0.3, 0.7};
  const Prescription g1(0, 1, 2, 2, {0.9, 0.1, 0.4, 0.6});
  const Belief post =
      one_sided_next_belief(Belief::over_states(0, {0.3, 0.7}), g1, 0, g);
  // P(y = 0 | x) = 0.8 g1(x, 0) + 0.2 g1(x, 1).
  const double l0 = 0.8 * 0.9 + 0.2 * 0.1;
  const double l1 = 0.8 * 0.4 + 0.2 * 0.6;
  EXPECT_NEAR(post[0], 0.3 * l0 / (0.3 * l0 + 0.7 * l1), 1e-15);
  EXPECT_NEAR(post[1], 0.7 * l1 / (0.3 * l0 + 0.7 * l1), 1e-15);
}

TEST(OneSidedNextBelief, IndependentOfPlayerTwoPrescription) {
  std::mt19937_64 rng(6);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const OneSidedGame g = testing::random_one_sided(seed, 3, 2, 3, 2, 2);
    const Belief pi = random_belief(rng, 0, {3, 1, 1}, true);
    const Prescription g1 = random_prescription(rng, 0, 1, 3, 2);
    for (int z = 0; z < g.increments(0); ++z) {
      const Belief ref = one_sided_next_belief(pi, g1, z, g);
      for (int r = 0; r < 10; ++r) {
        const Belief b = one_sided_next_belief(
            pi, g1, random_prescription(rng, 0, 2, 1, 3), z, g);
        EXPECT_EQ(b.values(), ref.values());
      }
    }
  }
}

TEST(OneSidedNextBelief, AgreesWithLoweredGame) {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const OneSidedGame g = testing::random_one_sided(seed, 3, 2, 2, 2, 2);
    const GameDefinition h = lower_one_sided(g);
    const Belief pi = random_belief(rng, 0, {3, 1, 1});
    const Prescription g1 = random_prescription(rng, 0, 1, 3, 2);
    const Prescription g2 = random_prescription(rng, 0, 2, 1, 2);
    const auto m = marginal_z(lift_one_sided_belief(pi), g1, g2, h);
    for (int z = 0; z < g.increments(0); ++z) {
      if (m[z] <= 1e-12) continue;
      const Belief a = one_sided_next_belief(pi, g1, z, g);
      const Belief b = project_one_sided_belief(
          next_belief(lift_one_sided_belief(pi), g1, g2, z, h));
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
    }
  }
}

TEST(ScaleBelief, Arithmetic) {
  const Belief u = Belief::uniform(0, {4, 1, 1});
  EXPECT_EQ(scale_belief(u, 1.0).values(), u.values());
  const Belief zero = scale_belief(u, 0.0);
  for (double v : zero.values()) EXPECT_EQ(v, 0.0);
  const Belief quarter = scale_belief(u, 0.25);
  EXPECT_TRUE(quarter.sub_normalized());
  for (double v : quarter.values()) EXPECT_EQ(v, 1.0 / 16.0);
  EXPECT_THROW(scale_belief(u, 1.5), ValidationError);
}

TEST(Belief, RejectsInvalidInput) {
  EXPECT_THROW(Belief(0, {2, 1, 1}, {0.5, 0.6}), ValidationError);
  EXPECT_THROW(Belief(0, {2, 1, 1}, {1.5, -0.5}), ValidationError);
  EXPECT_THROW(Belief(0, {2, 1, 1}, {1.0}), ValidationError);
  EXPECT_THROW(Prescription(0, 1, 1, 2, {0.5, 0.4}), ValidationError);
  const GameDefinition g = random_general(1, {2, 2, 2, 1, 1, 2}, {1, 1, 1});
  EXPECT_THROW(joint_update(Belief::uniform(0, {3, 1, 1}),
                            Prescription::uniform(0, 1, 1, 2),
                            Prescription::uniform(0, 2, 1, 2), g),
               ValidationError);
  EXPECT_THROW(joint_update(Belief::uniform(0, {2, 1, 1}),
                            Prescription::uniform(0, 1, 1, 3),
                            Prescription::uniform(0, 2, 1, 2), g),
               ValidationError);
}

}  // namespace
}  // namespace cibgame
