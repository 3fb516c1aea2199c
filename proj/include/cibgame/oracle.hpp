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

// Extensive-form realization of a GameDefinition and its exact value via the
// sequence-form LP.
//
// Tree layout per stage: a player-1 node, then a player-2 node that does not
// see u1, then a chance node realizing the stage kernel. The last stage ends
// in terminal nodes right after u2. Payoffs are the accumulated stage costs
// (player 1 pays, so player 1 minimizes).
//
// Information sets are content-addressed. The declared key of player i at
// stage t is (t, z_{1:t}, p^i_t). The recall-closure key adds the player's
// own private-information and action histories, which restores perfect
// recall for models whose declared private information forgets.

#ifndef CIBGAME_ORACLE_HPP_
#define CIBGAME_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cibgame/errors.hpp"
#include "cibgame/lp.hpp"
#include "cibgame/model.hpp"

namespace cibgame {

enum class NodeKind { kChance, kPlayer, kTerminal };

enum class InfoKeyMode { kDeclared, kRecallClosure };

struct EfNode {
  NodeKind kind = NodeKind::kTerminal;
  int player = 0;   // 1 or 2 for player nodes
  int infoset = -1;
  int stage = 0;
  int parent = -1;
  int parent_action = -1;
  std::vector<int> children;
  std::vector<double> probs;  // chance nodes only
  double payoff = 0.0;        // terminal nodes only; paid by player 1
  std::string event;          // what happened on the edge into this node
  // Player nodes only: the stage state and private information, and the
  // common history z_{1:t} as "z1.z2.".
  int state = -1;
  int private1 = -1;
  int private2 = -1;
  std::string common;
};

struct InfoSet {
  int player = 0;
  std::string key;
  int num_actions = 0;
  std::vector<int> nodes;
};

struct ExtensiveForm {
  std::vector<EfNode> nodes;
  std::vector<InfoSet> infosets;
  int root = 0;
  // Player 1 minimizes the payoff.

  std::int64_t count(NodeKind kind) const {
    return std::count_if(nodes.begin(), nodes.end(),
                         [&](const EfNode& n) { return n.kind == kind; });
  }
  int num_infosets(int player) const {
    return static_cast<int>(std::count_if(
        infosets.begin(), infosets.end(),
        [&](const InfoSet& h) { return h.player == player; }));
  }
  // Edge labels from the root to `node`.
  std::string history(int node) const {
    std::vector<std::string> parts;
    for (int n = node; n >= 0 && nodes[n].parent >= 0; n = nodes[n].parent) {
      parts.push_back(nodes[n].event);
    }
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      if (!out.empty()) out += ' ';
      out += *it;
    }
    return out.empty() ? "(root)" : out;
  }
};

inline constexpr std::int64_t kDefaultNodeCap = 1000000;

// Declared part of an information-set key: drops the own-history suffix of
// a recall-closure key.
inline std::string declared_key(const std::string& key) {
  const std::size_t cut = key.find("|hp");
  return cut == std::string::npos ? key : key.substr(0, cut);
}

inline ExtensiveForm build_extensive_form(
    const GameDefinition& g, InfoKeyMode mode = InfoKeyMode::kDeclared,
    std::int64_t node_cap = kDefaultNodeCap) {
  ExtensiveForm ef;
  std::unordered_map<std::string, int> infoset_index;
  const int horizon = g.horizon();

  auto new_node = [&](NodeKind kind, int parent, int action, std::string ev,
                      int stage) {
    if (static_cast<std::int64_t>(ef.nodes.size()) >= node_cap) {
      throw CapExceeded("extensive form exceeds the node cap of " +
                        std::to_string(node_cap));
    }
    EfNode n;
    n.kind = kind;
    n.parent = parent;
    n.parent_action = action;
    n.event = std::move(ev);
    n.stage = stage;
    ef.nodes.push_back(std::move(n));
    const int id = static_cast<int>(ef.nodes.size()) - 1;
    if (parent >= 0) ef.nodes[parent].children.push_back(id);
    return id;
  };
  auto attach_infoset = [&](int node, int player, const std::string& key,
                            int actions) {
    auto [it, inserted] = infoset_index.try_emplace(
        key, static_cast<int>(ef.infosets.size()));
    if (inserted) ef.infosets.push_back({player, key, actions, {}});
    InfoSet& h = ef.infosets[it->second];
    if (h.num_actions != actions) {
      throw SolverFailure("information set " + key +
                          " has inconsistent action counts");
    }
    h.nodes.push_back(node);
    ef.nodes[node].player = player;
    ef.nodes[node].infoset = it->second;
  };

  struct Own {
    std::string privates;
    std::string actions;
  };
  std::function<void(int, int, int, int, int, int, const std::string&,
                     const Own&,
                     const Own&, double)>
      expand;
  expand = [&](int parent_chance, int branch, int t, int x, int p1, int p2,
               const std::string& common, const Own& own1, const Own& own2,
               double acc) {
    const StageSpaces& s = g.spaces(t);
    auto key = [&](int player, int p, const Own& own) {
      std::string k = std::to_string(player) + "|t" + std::to_string(t) +
                      "|c" + common + "|p" + std::to_string(p);
      if (mode == InfoKeyMode::kRecallClosure) {
        k += "|hp" + own.privates + "|hu" + own.actions;
      }
      return k;
    };
    std::ostringstream ev;
    ev << "(x" << x << ",p" << p1 << "," << p2 << ")";
    const int n1 = new_node(NodeKind::kPlayer, parent_chance, branch, ev.str(),
                            t);
    attach_infoset(n1, 1, key(1, p1, own1), s.actions1);
    auto mark = [&](int node) {
      EfNode& n = ef.nodes[node];
      n.state = x;
      n.private1 = p1;
      n.private2 = p2;
      n.common = common;
    };
    mark(n1);
    for (int u1 = 0; u1 < s.actions1; ++u1) {
      const int n2 = new_node(NodeKind::kPlayer, n1, u1,
                              "u1=" + std::to_string(u1), t);
      attach_infoset(n2, 2, key(2, p2, own2), s.actions2);
      mark(n2);
      for (int u2 = 0; u2 < s.actions2; ++u2) {
        const double total = acc + g.cost(t, x, u1, u2);
        if (t + 1 == horizon) {
          const int leaf = new_node(NodeKind::kTerminal, n2, u2,
                                    "u2=" + std::to_string(u2), t);
          ef.nodes[leaf].payoff = total;
          continue;
        }
        const int c = new_node(NodeKind::kChance, n2, u2,
                               "u2=" + std::to_string(u2), t);
        const Own next1{own1.privates + std::to_string(p1) + ".",
                        own1.actions + std::to_string(u1) + "."};
        const Own next2{own2.privates + std::to_string(p2) + ".",
                        own2.actions + std::to_string(u2) + "."};
        int b = 0;
        for (const KernelOutcome& o : g.outcomes(t, x, p1, p2, u1, u2)) {
          ef.nodes[c].probs.push_back(o.probability);
          std::ostringstream ev2;
          ev2 << "z" << o.increment;
          // Placeholder edge node is the next stage's player-1 node.
          expand(c, b++, t + 1, o.next_state, o.next_private1,
                 o.next_private2,
                 common + std::to_string(o.increment) + ".", next1, next2,
                 total);
          ef.nodes[ef.nodes[c].children.back()].event =
              ev2.str() + " " + ef.nodes[ef.nodes[c].children.back()].event;
        }
      }
    }
  };

  const int root = new_node(NodeKind::kChance, -1, -1, "", 0);
  ef.root = root;
  const BeliefShape sh = g.belief_shape(0);
  int b = 0;
  for (int x = 0; x < sh.states; ++x)
    for (int p1 = 0; p1 < sh.private1; ++p1)
      for (int p2 = 0; p2 < sh.private2; ++p2) {
        const double p = g.initial()[sh.index(x, p1, p2)];
        if (p <= 0.0) continue;
        ef.nodes[root].probs.push_back(p);
        expand(root, b++, 0, x, p1, p2, "", Own{}, Own{}, 0.0);
      }
  return ef;
}

// ---------------------------------------------------------------------------
// Perfect recall.

struct RecallCheck {
  bool perfect = true;
  int player = 0;
  std::string infoset;
  std::string first_history;
  std::string second_history;
};

namespace oracle_internal {

// Sequence of (infoset, action) pairs of `player` on the path to `node`,
// serialized.
inline std::string own_sequence(const ExtensiveForm& ef, int node, int player) {
  std::vector<std::pair<int, int>> seq;
  for (int n = node; ef.nodes[n].parent >= 0; n = ef.nodes[n].parent) {
    const EfNode& par = ef.nodes[ef.nodes[n].parent];
    if (par.kind == NodeKind::kPlayer && par.player == player) {
      seq.push_back({par.infoset, ef.nodes[n].parent_action});
    }
  }
  std::string out;
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    out += std::to_string(it->first) + ":" + std::to_string(it->second) + ";";
  }
  return out;
}

}  // namespace oracle_internal

inline RecallCheck check_perfect_recall(const ExtensiveForm& ef) {
  RecallCheck out;
  for (const InfoSet& h : ef.infosets) {
    if (h.nodes.empty()) continue;
    const std::string ref =
        oracle_internal::own_sequence(ef, h.nodes.front(), h.player);
    for (std::size_t k = 1; k < h.nodes.size(); ++k) {
      if (oracle_internal::own_sequence(ef, h.nodes[k], h.player) != ref) {
        out.perfect = false;
        out.player = h.player;
        out.infoset = h.key;
        out.first_history = ef.history(h.nodes.front());
        out.second_history = ef.history(h.nodes[k]);
        return out;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sequence form.

struct SequenceForm {
  // For each player (index 0, 1): sequences, sequence 0 is the empty one.
  // seq_of[i][infoset-action] and parent sequence per infoset.
  std::vector<int> parent_sequence;       // per infoset
  std::vector<int> first_sequence;        // per infoset: id of (h, 0)
  int num_sequences[2] = {1, 1};
  // Nonzero payoff entries: (s1, s2) -> chance-weighted payoff.
  std::map<std::pair<int, int>, double> payoff;
};

namespace oracle_internal {

inline SequenceForm build_sequence_form(const ExtensiveForm& ef) {
  SequenceForm sf;
  sf.parent_sequence.assign(ef.infosets.size(), -1);
  sf.first_sequence.assign(ef.infosets.size(), -1);
  // DFS carrying the current sequence of each player and the chance weight.
  struct Frame {
    int node;
    int seq1;
    int seq2;
    double chance;
  };
  std::vector<Frame> stack{{ef.root, 0, 0, 1.0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const EfNode& n = ef.nodes[f.node];
    switch (n.kind) {
      case NodeKind::kTerminal:
        if (f.chance > 0.0) {
          sf.payoff[{f.seq1, f.seq2}] += f.chance * n.payoff;
        }
        break;
      case NodeKind::kChance:
        for (std::size_t k = 0; k < n.children.size(); ++k) {
          stack.push_back({n.children[k], f.seq1, f.seq2,
                           f.chance * n.probs[k]});
        }
        break;
      case NodeKind::kPlayer: {
        const int h = n.infoset;
        const int own = n.player == 1 ? f.seq1 : f.seq2;
        if (sf.first_sequence[h] < 0) {
          sf.parent_sequence[h] = own;
          sf.first_sequence[h] = sf.num_sequences[n.player - 1];
          sf.num_sequences[n.player - 1] += ef.infosets[h].num_actions;
        } else if (sf.parent_sequence[h] != own) {
          throw ImperfectRecall("information set " + ef.infosets[h].key +
                                    " is reached by different own sequences",
                                "", "");
        }
        for (std::size_t a = 0; a < n.children.size(); ++a) {
          const int s = sf.first_sequence[h] + static_cast<int>(a);
          stack.push_back({n.children[a], n.player == 1 ? s : f.seq1,
                           n.player == 2 ? s : f.seq2, f.chance});
        }
        break;
      }
    }
  }
  return sf;
}

}  // namespace oracle_internal

struct SequenceFormSolution {
  double value = 0.0;
  std::vector<double> plan1;  // realization plan of player 1 (minimizer)
  std::vector<double> plan2;  // realization plan of player 2
  SequenceForm form;
  std::int64_t lp_iterations = 0;
  int lp_rows = 0;
  int lp_columns = 0;
};

inline SequenceFormSolution sequence_form_value(
    const ExtensiveForm& ef, const LpOptions& opt = LpOptions()) {
  RecallCheck rc = check_perfect_recall(ef);
  if (!rc.perfect) {
    throw ImperfectRecall("player " + std::to_string(rc.player) +
                              " lacks perfect recall at " + rc.infoset,
                          rc.first_history, rc.second_history);
  }
  SequenceFormSolution out;
  out.form = oracle_internal::build_sequence_form(ef);
  const SequenceForm& sf = out.form;
  const int n1 = sf.num_sequences[0];
  const int n2 = sf.num_sequences[1];

  // Player-2 constraint rows: index 0 is the root, then one per P2 infoset.
  std::vector<int> p2_row(ef.infosets.size(), -1);
  int rows2 = 1;
  for (std::size_t h = 0; h < ef.infosets.size(); ++h) {
    if (ef.infosets[h].player == 2 && sf.first_sequence[h] >= 0) {
      p2_row[h] = rows2++;
    }
  }

  LinearProgram lp;
  for (int s = 0; s < n1; ++s) lp.add_variable(0.0);
  std::vector<int> qv(rows2);
  for (int r = 0; r < rows2; ++r) {
    qv[r] = lp.add_variable(r == 0 ? -1.0 : 0.0, VarBound::kFree);
  }
  // (A' x)_s2 - (F' q)_s2 <= 0 for each player-2 sequence s2.
  std::vector<std::vector<LpTerm>> rows(n2);
  for (const auto& [key, v] : sf.payoff) {
    if (v != 0.0) rows[key.second].push_back({key.first, v});
  }
  rows[0].push_back({qv[0], -1.0});
  for (std::size_t h = 0; h < ef.infosets.size(); ++h) {
    if (p2_row[h] < 0) continue;
    const int q = qv[p2_row[h]];
    rows[sf.parent_sequence[h]].push_back({q, 1.0});
    for (int a = 0; a < ef.infosets[h].num_actions; ++a) {
      rows[sf.first_sequence[h] + a].push_back({q, -1.0});
    }
  }
  for (auto& r : rows) lp.add_inequality(std::move(r), 0.0);
  // E x = e for player 1.
  lp.add_equality({{0, 1.0}}, 1.0);
  for (std::size_t h = 0; h < ef.infosets.size(); ++h) {
    if (ef.infosets[h].player != 1 || sf.first_sequence[h] < 0) continue;
    std::vector<LpTerm> terms{{sf.parent_sequence[h], -1.0}};
    for (int a = 0; a < ef.infosets[h].num_actions; ++a) {
      terms.push_back({sf.first_sequence[h] + a, 1.0});
    }
    lp.add_equality(std::move(terms), 0.0);
  }
  out.lp_rows = lp.num_inequalities() + lp.num_equalities();
  out.lp_columns = lp.num_variables();
  LpSolution s = solve_lp_or_throw(lp, "sequence-form LP", opt);
  out.lp_iterations = s.iterations;
  out.value = -s.value;
  out.plan1.assign(s.primal.begin(), s.primal.begin() + n1);
  out.plan2.assign(s.dual.begin(), s.dual.begin() + n2);
  for (double& v : out.plan1) v = std::max(v, 0.0);
  for (double& v : out.plan2) v = std::max(v, 0.0);
  return out;
}

// Exchanges the players and negates payoffs, so that the new player 1
// (formerly player 2) again minimizes.
inline ExtensiveForm swap_players(const ExtensiveForm& ef) {
  ExtensiveForm out = ef;
  for (EfNode& n : out.nodes) {
    if (n.kind == NodeKind::kPlayer) n.player = 3 - n.player;
    if (n.kind == NodeKind::kTerminal) n.payoff = -n.payoff;
  }
  for (InfoSet& h : out.infosets) h.player = 3 - h.player;
  return out;
}

// Behavioral strategy from a realization plan: b(h, a) = x(ha) / x(parent).
// Unreached information sets play uniformly.
inline std::vector<std::vector<double>> behavioral_from_plan(
    const ExtensiveForm& ef, const SequenceForm& sf, int player,
    const std::vector<double>& plan) {
  std::vector<std::vector<double>> out(ef.infosets.size());
  for (std::size_t h = 0; h < ef.infosets.size(); ++h) {
    const InfoSet& info = ef.infosets[h];
    if (info.player != player || sf.first_sequence[h] < 0) continue;
    const double parent = plan[sf.parent_sequence[h]];
    out[h].assign(info.num_actions, 1.0 / info.num_actions);
    if (parent <= 1e-15) continue;
    double sum = 0.0;
    for (int a = 0; a < info.num_actions; ++a) {
      out[h][a] = std::max(plan[sf.first_sequence[h] + a], 0.0);
      sum += out[h][a];
    }
    for (double& v : out[h]) v = sum > 0.0 ? v / sum : 1.0 / info.num_actions;
  }
  return out;
}

// Expected payoff and terminal distribution under behavioral strategies
// indexed by information set.
inline double expected_payoff(const ExtensiveForm& ef,
                              const std::vector<std::vector<double>>& b1,
                              const std::vector<std::vector<double>>& b2,
                              std::vector<double>* terminal_probs = nullptr) {
  if (terminal_probs) terminal_probs->assign(ef.nodes.size(), 0.0);
  double total = 0.0;
  std::vector<std::pair<int, double>> stack{{ef.root, 1.0}};
  while (!stack.empty()) {
    auto [node, p] = stack.back();
    stack.pop_back();
    const EfNode& n = ef.nodes[node];
    if (n.kind == NodeKind::kTerminal) {
      total += p * n.payoff;
      if (terminal_probs) (*terminal_probs)[node] = p;
      continue;
    }
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      double w = 0.0;
      if (n.kind == NodeKind::kChance) {
        w = n.probs[k];
      } else {
        const auto& b = n.player == 1 ? b1 : b2;
        w = b[n.infoset][k];
      }
      if (w > 0.0 && p > 0.0) stack.push_back({n.children[k], p * w});
    }
  }
  return total;
}

// Game value from the normal form, for instances with at most `cap` pure
// strategies per player. Returns nullopt when the cap is exceeded.
inline std::optional<double> normal_form_value(const ExtensiveForm& ef,
                                               std::int64_t cap = 64,
                                               const LpOptions& opt = {}) {
  std::vector<int> sets[2];
  std::int64_t counts[2] = {1, 1};
  for (std::size_t h = 0; h < ef.infosets.size(); ++h) {
    const int p = ef.infosets[h].player - 1;
    sets[p].push_back(static_cast<int>(h));
    counts[p] *= ef.infosets[h].num_actions;
    if (counts[p] > cap) return std::nullopt;
  }
  auto decode = [&](int player, std::int64_t idx) {
    std::vector<std::vector<double>> b(ef.infosets.size());
    for (int h : sets[player]) {
      const int na = ef.infosets[h].num_actions;
      b[h].assign(na, 0.0);
      b[h][idx % na] = 1.0;
      idx /= na;
    }
    return b;
  };
  std::vector<std::vector<double>> m(counts[0],
                                     std::vector<double>(counts[1]));
  for (std::int64_t i = 0; i < counts[0]; ++i) {
    auto b1 = decode(0, i);
    for (std::int64_t j = 0; j < counts[1]; ++j) {
      m[i][j] = expected_payoff(ef, b1, decode(1, j));
    }
  }
  return solve_matrix_game(m, opt).value;
}

// Graphviz rendering, for documentation of small trees.
inline std::string to_dot(const ExtensiveForm& ef) {
  std::ostringstream os;
  os << "digraph ef {\n  node [fontsize=10];\n";
  for (std::size_t i = 0; i < ef.nodes.size(); ++i) {
    const EfNode& n = ef.nodes[i];
    os << "  n" << i << " [";
    switch (n.kind) {
      case NodeKind::kChance: os << "shape=circle,label=\"c\""; break;
      case NodeKind::kPlayer:
        os << "shape=box,label=\"P" << n.player << " h" << n.infoset << "\"";
        break;
      case NodeKind::kTerminal:
        os << "shape=plaintext,label=\"" << n.payoff << "\"";
        break;
    }
    os << "];\n";
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      os << "  n" << i << " -> n" << n.children[k] << " [label=\"";
      if (n.kind == NodeKind::kChance) {
        os << n.probs[k];
      } else {
        os << k;
      }
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

// Convenience: value with the recall-closure keys, which always have
// perfect recall.
inline double oracle_value(const GameDefinition& g,
                           std::int64_t node_cap = kDefaultNodeCap,
                           const LpOptions& opt = {}) {
  return sequence_form_value(
             build_extensive_form(g, InfoKeyMode::kRecallClosure, node_cap),
             opt)
      .value;
}

}  // namespace cibgame

#endif  // CIBGAME_ORACLE_HPP_
