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

// Exhaustive references for strategy computations on small trees.

#ifndef CIBGAME_TESTS_REFERENCES_HPP_
#define CIBGAME_TESTS_REFERENCES_HPP_

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "cibgame/strategy.hpp"

namespace cibgame::testing {

// Probability of (t, x, u1, u2, player-2 information set) by recursion on
// the tree, with player-2 nodes identified through their parent.
inline void joint_reference(const ExtensiveForm& ef, const HistoryStrategy& s1,
                     const HistoryStrategy& s2, int node, double p,
                     std::map<std::string, double>& out) {
  const EfNode& n = ef.nodes[node];
  if (n.kind == NodeKind::kTerminal || p == 0.0) return;
  for (std::size_t k = 0; k < n.children.size(); ++k) {
    double w;
    if (n.kind == NodeKind::kChance) {
      w = n.probs[k];
    } else {
      const InfoSet& h = ef.infosets[n.infoset];
      w = (n.player == 1 ? s1 : s2).at(n.stage, h.key)[k];
      if (n.player == 2) {
        out[std::to_string(n.stage) + "|" + std::to_string(n.state) + "|" +
            std::to_string(n.parent_action) + "|" + std::to_string(k) + "|" +
            h.key] += p * w;
      }
    }
    joint_reference(ef, s1, s2, n.children[k], p * w, out);
  }
}

// Largest payoff player 2 can force against s1, over all pure strategies.
inline double pure_best_response_reference(const ExtensiveForm& ef,
                                    const HistoryStrategy& s1) {
  std::vector<int> sets;
  std::int64_t count = 1;
  for (std::size_t h = 0; h < ef.infosets.size(); ++h) {
    if (ef.infosets[h].player != 2) continue;
    sets.push_back(static_cast<int>(h));
    count *= ef.infosets[h].num_actions;
  }
  const auto b1 = behavior(ef, s1);
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < count; ++i) {
    std::vector<std::vector<double>> b2(ef.infosets.size());
    std::int64_t idx = i;
    for (int h : sets) {
      const int na = ef.infosets[h].num_actions;
      b2[h].assign(na, 0.0);
      b2[h][idx % na] = 1.0;
      idx /= na;
    }
    best = std::max(best, expected_payoff(ef, b1, b2));
  }
  return best;
}

}  // namespace cibgame::testing

#endif  // CIBGAME_TESTS_REFERENCES_HPP_
