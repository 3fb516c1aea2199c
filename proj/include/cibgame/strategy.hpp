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

// Strategies: history-indexed behavioral strategies, the lazy
// common-information-belief strategy of the more-informed player, the
// projection of prescription-history strategies onto common-history ones,
// best responses, strategy reduction and Monte-Carlo simulation.
//
// History strategies are keyed by the information-set keys of the extensive
// form (see oracle.hpp), in either recall-closure or declared form.

#ifndef CIBGAME_STRATEGY_HPP_
#define CIBGAME_STRATEGY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cibgame/belief.hpp"
#include "cibgame/errors.hpp"
#include "cibgame/lp.hpp"
#include "cibgame/model.hpp"
#include "cibgame/oracle.hpp"
#include "cibgame/solver.hpp"
#include "cibgame/stage.hpp"

namespace cibgame {

// ---------------------------------------------------------------------------
// History strategies.

struct HistoryStrategy {
  int player = 1;
  InfoKeyMode keys = InfoKeyMode::kRecallClosure;
  // tables[t][key]: distribution over the player's stage-t actions.
  std::vector<std::map<std::string, std::vector<double>>> tables;

  // Row for the information set with recall-closure key `key` at stage t.
  const std::vector<double>& at(int t, const std::string& key) const {
    if (t < 0 || t >= static_cast<int>(tables.size())) {
      throw ValidationError("strategy has no stage " + std::to_string(t));
    }
    const std::string k =
        keys == InfoKeyMode::kDeclared ? declared_key(key) : key;
    auto it = tables[t].find(k);
    if (it == tables[t].end()) {
      throw ValidationError("strategy of player " + std::to_string(player) +
                            " has no entry for " + k);
    }
    return it->second;
  }

  // Throws ValidationError unless every row is a distribution within 1e-12.
  void check() const {
    if (player != 1 && player != 2) {
      throw ValidationError("strategy player must be 1 or 2");
    }
    for (std::size_t t = 0; t < tables.size(); ++t) {
      for (const auto& [key, row] : tables[t]) {
        double sum = 0.0;
        for (double v : row) {
          if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError("strategy row " + key +
                                  " has a negative or non-finite entry");
          }
          sum += v;
        }
        if (row.empty() || std::abs(sum - 1.0) > 1e-12) {
          throw ValidationError("strategy row " + key + " is not stochastic");
        }
      }
    }
  }
};

inline int infoset_stage(const ExtensiveForm& ef, const InfoSet& h) {
  return ef.nodes[h.nodes.front()].stage;
}

inline int extensive_horizon(const ExtensiveForm& ef) {
  int horizon = 0;
  for (const EfNode& n : ef.nodes) horizon = std::max(horizon, n.stage + 1);
  return horizon;
}

// Behavioral strategy indexed by information set, as used by
// expected_payoff. Information sets of the other player get empty rows.
inline std::vector<std::vector<double>> behavior(const ExtensiveForm& ef,
                                                 const HistoryStrategy& s) {
  std::vector<std::vector<double>> out(ef.infosets.size());
  for (std::size_t h = 0; h < ef.infosets.size(); ++h) {
    const InfoSet& info = ef.infosets[h];
    if (info.player != s.player || info.nodes.empty()) continue;
    out[h] = s.at(infoset_stage(ef, info), info.key);
    if (static_cast<int>(out[h].size()) != info.num_actions) {
      throw ValidationError("strategy row for " + info.key + " has " +
                            std::to_string(out[h].size()) +
                            " actions, expected " +
                            std::to_string(info.num_actions));
    }
  }
  return out;
}

// History strategy from rows indexed by information set.
inline HistoryStrategy strategy_from_behavior(
    const ExtensiveForm& ef, int player,
    const std::vector<std::vector<double>>& rows) {
  HistoryStrategy s;
  s.player = player;
  s.tables.resize(extensive_horizon(ef));
  for (std::size_t h = 0; h < ef.infosets.size(); ++h) {
    const InfoSet& info = ef.infosets[h];
    if (info.player != player || info.nodes.empty()) continue;
    s.tables[infoset_stage(ef, info)][info.key] = rows.at(h);
  }
  return s;
}

inline HistoryStrategy uniform_strategy(const ExtensiveForm& ef, int player) {
  std::vector<std::vector<double>> rows(ef.infosets.size());
  for (std::size_t h = 0; h < ef.infosets.size(); ++h) {
    const int na = ef.infosets[h].num_actions;
    rows[h].assign(na, 1.0 / na);
  }
  return strategy_from_behavior(ef, player, rows);
}

// Rows drawn from Dirichlet(1), reproducible under `seed`.
inline HistoryStrategy random_strategy(const ExtensiveForm& ef, int player,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<std::vector<double>> rows(ef.infosets.size());
  for (std::size_t h = 0; h < ef.infosets.size(); ++h) {
    if (ef.infosets[h].player != player) continue;
    auto& r = rows[h];
    r.resize(ef.infosets[h].num_actions);
    double sum = 0.0;
    for (double& v : r) sum += (v = expo(rng));
    for (double& v : r) v /= sum;
  }
  return strategy_from_behavior(ef, player, rows);
}

// Equilibrium strategies from the sequence-form solution.
inline HistoryStrategy strategy_from_plan(const ExtensiveForm& ef,
                                          const SequenceFormSolution& sol,
                                          int player) {
  return strategy_from_behavior(
      ef, player,
      behavioral_from_plan(ef, sol.form, player,
                           player == 1 ? sol.plan1 : sol.plan2));
}

inline double expected_cost(const ExtensiveForm& ef, const HistoryStrategy& s1,
                            const HistoryStrategy& s2) {
  if (s1.player != 1 || s2.player != 2) {
    throw ValidationError("expected_cost takes player 1, then player 2");
  }
  return expected_payoff(ef, behavior(ef, s1), behavior(ef, s2));
}

// Distribution of (t, x_t, u1_t, u2_t, player-2 information) over all
// stages, keyed "t|x|u1|u2|<player-2 information key>".
inline std::map<std::string, double> stage_joint_distribution(
    const ExtensiveForm& ef, const HistoryStrategy& s1,
    const HistoryStrategy& s2) {
  const auto b1 = behavior(ef, s1);
  const auto b2 = behavior(ef, s2);
  std::map<std::string, double> out;
  std::vector<std::pair<int, double>> stack{{ef.root, 1.0}};
  while (!stack.empty()) {
    auto [node, p] = stack.back();
    stack.pop_back();
    const EfNode& n = ef.nodes[node];
    if (n.kind == NodeKind::kTerminal) continue;
    if (n.kind == NodeKind::kPlayer && n.player == 2) {
      const std::string prefix =
          std::to_string(n.stage) + "|" + std::to_string(n.state) + "|" +
          std::to_string(n.parent_action) + "|";
      for (std::size_t k = 0; k < n.children.size(); ++k) {
        out[prefix + std::to_string(k) + "|" + ef.infosets[n.infoset].key] +=
            p * b2[n.infoset][k];
      }
    }
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      double w = 0.0;
      if (n.kind == NodeKind::kChance) {
        w = n.probs[k];
      } else {
        w = (n.player == 1 ? b1 : b2)[n.infoset][k];
      }
      if (w > 0.0 && p > 0.0) stack.push_back({n.children[k], p * w});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Best response.

struct BestResponse {
  double value = 0.0;
  HistoryStrategy strategy;  // pure
};

// Exact best response of `responder` against the fixed strategy of the
// other player. Player 2 maximizes the cost, player 1 minimizes it. The
// extensive form must have perfect recall for the responder; stages are
// processed backwards and each responder information set picks the action
// with the best reach-weighted continuation (lowest index on ties).
inline BestResponse best_response(const ExtensiveForm& ef,
                                  const HistoryStrategy& fixed) {
  const int responder = 3 - fixed.player;
  const auto bf = behavior(ef, fixed);
  const int nn = static_cast<int>(ef.nodes.size());
  const double sense = responder == 2 ? 1.0 : -1.0;

  // Reach weight of chance and the fixed player.
  std::vector<double> reach(nn, 0.0);
  reach[ef.root] = 1.0;
  for (int i = 0; i < nn; ++i) {
    const EfNode& n = ef.nodes[i];
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      double w = 1.0;
      if (n.kind == NodeKind::kChance) {
        w = n.probs[k];
      } else if (n.player == fixed.player) {
        w = bf[n.infoset][k];
      }
      reach[n.children[k]] = reach[i] * w;
    }
  }

  const int horizon = extensive_horizon(ef);
  std::vector<std::vector<int>> by_stage(horizon);
  for (int i = 0; i < nn; ++i) {
    if (i != ef.root) by_stage[ef.nodes[i].stage].push_back(i);
  }
  std::vector<std::vector<int>> infosets_by_stage(horizon);
  for (std::size_t h = 0; h < ef.infosets.size(); ++h) {
    if (ef.infosets[h].player == responder && !ef.infosets[h].nodes.empty()) {
      infosets_by_stage[infoset_stage(ef, ef.infosets[h])].push_back(
          static_cast<int>(h));
    }
  }

  std::vector<double> value(nn, 0.0);
  std::vector<int> choice(ef.infosets.size(), -1);
  auto evaluate = [&](int i) {
    const EfNode& n = ef.nodes[i];
    double v = 0.0;
    switch (n.kind) {
      case NodeKind::kTerminal: v = n.payoff; break;
      case NodeKind::kChance:
        for (std::size_t k = 0; k < n.children.size(); ++k) {
          v += n.probs[k] * value[n.children[k]];
        }
        break;
      case NodeKind::kPlayer:
        if (n.player == responder) {
          v = value[n.children[choice[n.infoset]]];
        } else {
          for (std::size_t k = 0; k < n.children.size(); ++k) {
            v += bf[n.infoset][k] * value[n.children[k]];
          }
        }
        break;
    }
    value[i] = v;
  };
  for (int t = horizon - 1; t >= 0; --t) {
    // Within a stage: chance and terminal nodes, then player-2 nodes, then
    // player-1 nodes; a responder picks before its nodes are evaluated.
    for (int i : by_stage[t]) {
      if (ef.nodes[i].kind != NodeKind::kPlayer) evaluate(i);
    }
    for (int player : {2, 1}) {
      if (player == responder) {
        for (int h : infosets_by_stage[t]) {
          const InfoSet& info = ef.infosets[h];
          int best = 0;
          double best_v = -std::numeric_limits<double>::infinity();
          for (int a = 0; a < info.num_actions; ++a) {
            double v = 0.0;
            for (int node : info.nodes) {
              v += reach[node] * value[ef.nodes[node].children[a]];
            }
            if (sense * v > best_v) {
              best_v = sense * v;
              best = a;
            }
          }
          choice[h] = best;
        }
      }
      for (int i : by_stage[t]) {
        const EfNode& n = ef.nodes[i];
        if (n.kind == NodeKind::kPlayer && n.player == player) evaluate(i);
      }
    }
  }
  evaluate(ef.root);

  BestResponse out;
  out.value = value[ef.root];
  std::vector<std::vector<double>> rows(ef.infosets.size());
  for (std::size_t h = 0; h < ef.infosets.size(); ++h) {
    if (choice[h] < 0) continue;
    rows[h].assign(ef.infosets[h].num_actions, 0.0);
    rows[h][choice[h]] = 1.0;
  }
  out.strategy = strategy_from_behavior(ef, responder, rows);
  return out;
}

// Player 2's best response to a player-1 strategy on the recall-closure
// tree of `g`.
inline BestResponse best_response_value(
    const GameDefinition& g, const HistoryStrategy& s1,
    std::int64_t node_cap = kDefaultNodeCap) {
  if (s1.player != 1) {
    throw ValidationError("best_response_value takes a player-1 strategy");
  }
  return best_response(
      build_extensive_form(g, InfoKeyMode::kRecallClosure, node_cap), s1);
}

// ---------------------------------------------------------------------------
// The common-information-belief strategy of player 1 in a one-sided game.

class CIBStrategy {
 public:
  CIBStrategy(OneSidedGame game, OneSidedValueFunction vf,
              LpOptions lp = LpOptions())
      : game_(std::move(game)), vf_(std::move(vf)), lp_(lp) {
    if (vf_.horizon() != game_.horizon()) {
      throw ValidationError("value function horizon " +
                            std::to_string(vf_.horizon()) +
                            " does not match the game horizon " +
                            std::to_string(game_.horizon()));
    }
  }

  int horizon() const { return game_.horizon(); }
  const OneSidedGame& game() const { return game_; }
  const OneSidedValueFunction& value_function() const { return vf_; }

  // gamma1 minimizing the stage objective at (t, pi) against A_{t+1}.
  Prescription prescription(int t, const Belief& pi) const {
    return one_sided_backup_minmax(pi, vf_.alpha.at(t + 1), game_, t, lp_)
        .gamma1;
  }
  std::vector<double> action(int t, const Belief& pi, int x) const {
    const Prescription g1 = prescription(t, pi);
    const auto row = g1.row(x);
    return {row.begin(), row.end()};
  }

 private:
  OneSidedGame game_;
  OneSidedValueFunction vf_;
  LpOptions lp_;
};

inline CIBStrategy extract_cib_strategy(const OneSidedGame& g,
                                        const OneSidedValueFunction& vf,
                                        const LpOptions& lp = LpOptions()) {
  return CIBStrategy(g, vf, lp);
}

// Player-1 history strategy on the recall-closure tree of the lowered game,
// querying the CIB strategy once per reachable common history.
inline HistoryStrategy unroll_cib_strategy(const CIBStrategy& s,
                                           const ExtensiveForm& ef) {
  const OneSidedGame& g = s.game();
  std::unordered_map<std::string, Belief> beliefs;
  std::unordered_map<std::string, Prescription> chosen;
  beliefs.emplace("", Belief::over_states(0, g.initial));
  std::function<const Prescription&(int, const std::string&)> at =
      [&](int t, const std::string& common) -> const Prescription& {
    auto hit = chosen.find(common);
    if (hit != chosen.end()) return hit->second;
    auto b = beliefs.find(common);
    if (b == beliefs.end()) {
      // common = parent + "z."
      const std::size_t cut = common.find_last_of('.', common.size() - 2);
      const std::string parent =
          cut == std::string::npos ? "" : common.substr(0, cut + 1);
      const int z = std::stoi(common.substr(parent.size()));
      const Prescription& g1 = at(t - 1, parent);
      b = beliefs
              .emplace(common, one_sided_next_belief(beliefs.at(parent), g1,
                                                     z, g))
              .first;
    }
    return chosen.emplace(common, s.prescription(t, b->second)).first->second;
  };

  HistoryStrategy out;
  out.player = 1;
  out.tables.resize(extensive_horizon(ef));
  for (const InfoSet& info : ef.infosets) {
    if (info.player != 1 || info.nodes.empty()) continue;
    const EfNode& n = ef.nodes[info.nodes.front()];
    const Prescription& g1 = at(n.stage, n.common);
    const auto row = g1.row(n.state);
    out.tables[n.stage][info.key] = {row.begin(), row.end()};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prescription strategies and their projection onto common histories.

// A strategy in the prescription game: the stage-t prescription of one
// player given the common history z_{1:t} and both players' earlier
// prescriptions.
using ExpandedStrategy = std::function<Prescription(
    int t, const std::vector<int>& common,
    const std::vector<Prescription>& past1,
    const std::vector<Prescription>& past2)>;

inline std::string common_key(const std::vector<int>& common) {
  std::string out;
  for (int z : common) out += std::to_string(z) + ".";
  return out;
}

// Prescriptions of both players per common history.
struct VirtualProfile {
  std::vector<std::map<std::string, std::pair<Prescription, Prescription>>>
      stages;

  const std::pair<Prescription, Prescription>& at(
      int t, const std::vector<int>& common) const {
    auto it = stages.at(t).find(common_key(common));
    if (it == stages[t].end()) {
      throw ValidationError("no prescriptions for common history " +
                            common_key(common));
    }
    return it->second;
  }
  // The same profile seen as strategies that ignore the prescription past.
  ExpandedStrategy expanded(int player) const {
    return [this, player](int t, const std::vector<int>& common,
                          const std::vector<Prescription>&,
                          const std::vector<Prescription>&) {
      const auto& pr = at(t, common);
      return player == 1 ? pr.first : pr.second;
    };
  }
};

namespace strategy_internal {

inline void check_prescription(const Prescription& p, const GameDefinition& g,
                               int t, int player) {
  const StageSpaces& s = g.spaces(t);
  const int rows = player == 1 ? s.private1 : s.private2;
  const int cols = player == 1 ? s.actions1 : s.actions2;
  if (p.rows() != rows || p.cols() != cols) {
    throw ValidationError("player " + std::to_string(player) +
                          " prescription at stage " + std::to_string(t) +
                          " has the wrong shape");
  }
}

}  // namespace strategy_internal

// Forward substitution of both players' prescriptions along every common
// history; the result depends on the common history only.
inline VirtualProfile rho_project(const GameDefinition& g,
                                  const ExpandedStrategy& chi1,
                                  const ExpandedStrategy& chi2,
                                  std::int64_t cap = 1000000) {
  VirtualProfile out;
  out.stages.resize(g.horizon());
  std::int64_t count = 0;
  std::vector<int> common;
  std::vector<Prescription> past1, past2;
  std::function<void(int)> rec = [&](int t) {
    if (++count > cap) {
      throw CapExceeded("more than " + std::to_string(cap) +
                        " common histories");
    }
    Prescription g1 = chi1(t, common, past1, past2);
    Prescription g2 = chi2(t, common, past1, past2);
    strategy_internal::check_prescription(g1, g, t, 1);
    strategy_internal::check_prescription(g2, g, t, 2);
    out.stages[t][common_key(common)] = {g1, g2};
    if (t + 1 == g.horizon()) return;
    past1.push_back(std::move(g1));
    past2.push_back(std::move(g2));
    for (int z = 0; z < g.spaces(t).increments; ++z) {
      common.push_back(z);
      rec(t + 1);
      common.pop_back();
    }
    past1.pop_back();
    past2.pop_back();
  };
  rec(0);
  return out;
}

// Distribution of complete plays (x, p1, p2, u1, u2, z per stage) under a
// prescription-strategy profile, by exhaustive enumeration.
inline std::map<std::string, double> play_distribution(
    const GameDefinition& g, const ExpandedStrategy& chi1,
    const ExpandedStrategy& chi2) {
  std::map<std::string, double> out;
  std::vector<int> common;
  std::vector<Prescription> past1, past2;
  std::function<void(int, int, int, int, double, const std::string&)> rec =
      [&](int t, int x, int p1, int p2, double p, const std::string& play) {
        if (t == g.horizon()) {
          out[play + "x" + std::to_string(x)] += p;
          return;
        }
        const Prescription g1 = chi1(t, common, past1, past2);
        const Prescription g2 = chi2(t, common, past1, past2);
        strategy_internal::check_prescription(g1, g, t, 1);
        strategy_internal::check_prescription(g2, g, t, 2);
        const StageSpaces& s = g.spaces(t);
        past1.push_back(g1);
        past2.push_back(g2);
        for (int u1 = 0; u1 < s.actions1; ++u1) {
          const double w1 = g1(p1, u1);
          if (w1 == 0.0) continue;
          for (int u2 = 0; u2 < s.actions2; ++u2) {
            const double w2 = g2(p2, u2);
            if (w2 == 0.0) continue;
            for (const KernelOutcome& o : g.outcomes(t, x, p1, p2, u1, u2)) {
              common.push_back(o.increment);
              rec(t + 1, o.next_state, o.next_private1, o.next_private2,
                  p * w1 * w2 * o.probability,
                  play + "x" + std::to_string(x) + "p" + std::to_string(p1) +
                      "," + std::to_string(p2) + "u" + std::to_string(u1) +
                      "," + std::to_string(u2) + "z" +
                      std::to_string(o.increment) + ";");
              common.pop_back();
            }
          }
        }
        past1.pop_back();
        past2.pop_back();
      };
  const BeliefShape sh = g.belief_shape(0);
  for (int x = 0; x < sh.states; ++x)
    for (int p1 = 0; p1 < sh.private1; ++p1)
      for (int p2 = 0; p2 < sh.private2; ++p2) {
        const double p = g.initial()[sh.index(x, p1, p2)];
        if (p > 0.0) rec(0, x, p1, p2, p, "");
      }
  return out;
}

// ---------------------------------------------------------------------------
// Strategy reduction.

// Replaces a player-1 strategy over full histories by one over
// (x_t, player-2 information), keyed by declared keys of the lowered game.
// Each row averages the original rows over the player-1 histories consistent
// with (x_t, z_{1:t}), weighted by their probability under the original
// strategy with player 2's actions fixed to those in z. Rows of unreachable
// keys are uniform.
inline HistoryStrategy reduce_strategy(const GameDefinition& lowered,
                                       const HistoryStrategy& g1,
                                       std::int64_t node_cap = kDefaultNodeCap) {
  if (g1.player != 1) {
    throw ValidationError("reduce_strategy takes a player-1 strategy");
  }
  for (int t = 0; t <= lowered.horizon(); ++t) {
    if (lowered.belief_shape(t).private2 != 1) {
      throw ValidationError(
          "reduce_strategy needs a game without player-2 private information");
    }
  }
  const ExtensiveForm ef =
      build_extensive_form(lowered, InfoKeyMode::kRecallClosure, node_cap);
  const auto b1 = behavior(ef, g1);
  const int nn = static_cast<int>(ef.nodes.size());

  // Reach weight of chance and player 1 only.
  std::vector<double> reach(nn, 0.0);
  reach[ef.root] = 1.0;
  for (int i = 0; i < nn; ++i) {
    const EfNode& n = ef.nodes[i];
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      double w = 1.0;
      if (n.kind == NodeKind::kChance) {
        w = n.probs[k];
      } else if (n.player == 1) {
        w = b1[n.infoset][k];
      }
      reach[n.children[k]] = reach[i] * w;
    }
  }

  struct Acc {
    std::vector<double> num;
    double den = 0.0;
    int stage = 0;
  };
  std::map<std::string, Acc> acc;
  for (int i = 0; i < nn; ++i) {
    const EfNode& n = ef.nodes[i];
    if (n.kind != NodeKind::kPlayer || n.player != 1) continue;
    const InfoSet& info = ef.infosets[n.infoset];
    Acc& a = acc[declared_key(info.key)];
    a.stage = n.stage;
    a.num.resize(info.num_actions, 0.0);
    a.den += reach[i];
    for (int u = 0; u < info.num_actions; ++u) {
      a.num[u] += reach[i] * b1[n.infoset][u];
    }
  }

  HistoryStrategy out;
  out.player = 1;
  out.keys = InfoKeyMode::kDeclared;
  out.tables.resize(extensive_horizon(ef));
  for (auto& [key, a] : acc) {
    std::vector<double> row(a.num.size(), 1.0 / a.num.size());
    if (a.den > 0.0) {
      double sum = 0.0;
      for (std::size_t u = 0; u < row.size(); ++u) {
        row[u] = a.num[u] / a.den;
        sum += row[u];
      }
      for (double& v : row) v /= sum;
    }
    out.tables[a.stage][key] = std::move(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simulation.

struct SimulationResult {
  double mean = 0.0;
  double standard_error = 0.0;
  std::int64_t episodes = 0;
};

namespace strategy_internal {

// Uniform double in [0, 1) from the top 53 bits.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-CDF draw; mass lost to rounding goes to the last positive entry.
inline int sample_index(std::span<const double> p, std::mt19937_64& rng) {
  const double u = unit_draw(rng);
  double cum = 0.0;
  int last = -1;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    cum += p[k];
    last = static_cast<int>(k);
    if (u < cum) return last;
  }
  return last;
}

}  // namespace strategy_internal

// Monte-Carlo estimate of the expected cost. Episode k draws from its own
// generator seeded by (seed, k), so results do not depend on `threads`.
inline SimulationResult simulate(const ExtensiveForm& ef,
                                 const HistoryStrategy& s1,
                                 const HistoryStrategy& s2,
                                 std::uint64_t seed, std::int64_t episodes,
                                 int threads = 0) {
  if (episodes < 1) throw ValidationError("episodes must be positive");
  const auto b1 = behavior(ef, s1);
  const auto b2 = behavior(ef, s2);
  std::vector<double> cost(episodes);
  parallel_for(static_cast<int>(episodes),
               threads > 0 ? threads : configured_threads(), [&](int k) {
                 std::seed_seq seq{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32),
                                   static_cast<std::uint32_t>(k)};
                 std::mt19937_64 rng(seq);
                 int node = ef.root;
                 while (ef.nodes[node].kind != NodeKind::kTerminal) {
                   const EfNode& n = ef.nodes[node];
                   std::span<const double> p;
                   if (n.kind == NodeKind::kChance) {
                     p = n.probs;
                   } else {
                     p = (n.player == 1 ? b1 : b2)[n.infoset];
                   }
                   node = n.children[strategy_internal::sample_index(p, rng)];
                 }
                 cost[k] = ef.nodes[node].payoff;
               });
  SimulationResult out;
  out.episodes = episodes;
  double sum = 0.0;
  for (double c : cost) sum += c;
  out.mean = sum / static_cast<double>(episodes);
  if (episodes > 1) {
    double ss = 0.0;
    for (double c : cost) ss += (c - out.mean) * (c - out.mean);
    out.standard_error =
        std::sqrt(ss / static_cast<double>(episodes - 1) /
                  static_cast<double>(episodes));
  }
  return out;
}

}  // namespace cibgame

#endif  // CIBGAME_STRATEGY_HPP_
