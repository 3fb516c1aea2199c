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

// Finite-horizon two-player zero-sum games with asymmetric information.
//
// A game is described stage by stage. At stage t the system is in state x,
// player i holds private information p^i, and the players pick actions u1
// and u2. The joint stage kernel gives the probability of the next state, the
// next private informations and the common-information increment z:
//
//   K_t[x', p1', p2', z | x, p1, p2, u1, u2].
//
// Player 1 minimizes the total cost sum_t c_t(x_t, u1_t, u2_t); player 2
// maximizes it. All spaces are 0-based contiguous index ranges. Stages are
// numbered 0..T-1; "stage T" only carries the terminal belief shape.

#ifndef CIBGAME_MODEL_HPP_
#define CIBGAME_MODEL_HPP_

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cibgame/errors.hpp"

namespace cibgame {

inline constexpr double kStochasticTolerance = 1e-12;

struct StageSpaces {
  int states = 1;
  int actions1 = 1;
  int actions2 = 1;
  int private1 = 1;
  int private2 = 1;
  int increments = 1;  // |Z_{t+1}|

  bool operator==(const StageSpaces&) const = default;
};

// Shape of a common-information belief: X x P1 x P2, row-major.
struct BeliefShape {
  int states = 1;
  int private1 = 1;
  int private2 = 1;

  int size() const { return states * private1 * private2; }
  int index(int x, int p1, int p2) const {
    return (x * private1 + p1) * private2 + p2;
  }
  bool operator==(const BeliefShape&) const = default;
};

// Optional human-readable names, one list per space. Empty lists mean
// "unlabeled".
struct SpaceLabels {
  std::vector<std::string> states;
  std::vector<std::string> actions1;
  std::vector<std::string> actions2;
  std::vector<std::string> private1;
  std::vector<std::string> private2;
  std::vector<std::string> increments;

  bool empty() const {
    return states.empty() && actions1.empty() && actions2.empty() &&
           private1.empty() && private2.empty() && increments.empty();
  }
  bool operator==(const SpaceLabels&) const = default;
};

struct GameStage {
  StageSpaces spaces;
  // Flattened [x][p1][p2][u1][u2][x'][p1'][p2'][z].
  std::vector<double> kernel;
  // Flattened [x][u1][u2].
  std::vector<double> cost;
  SpaceLabels labels;
};

// One nonzero entry of a conditional kernel slice.
struct KernelOutcome {
  int next_state;
  int next_private1;
  int next_private2;
  int increment;
  double probability;
};

class GameDefinition {
 public:
  GameDefinition() = default;

  // Throws ValidationError on dimension mismatches. Stochasticity is not
  // checked here; see validate_game().
  GameDefinition(std::vector<GameStage> stages, BeliefShape terminal,
                 std::vector<double> initial)
      : stages_(std::move(stages)), terminal_(terminal),
        initial_(std::move(initial)) {
    if (stages_.empty()) throw ValidationError("horizon must be positive");
    for (int t = 0; t < horizon(); ++t) {
      const StageSpaces& s = stages_[t].spaces;
      if (s.states < 1 || s.actions1 < 1 || s.actions2 < 1 ||
          s.private1 < 1 || s.private2 < 1 || s.increments < 1) {
        throw ValidationError("stage " + std::to_string(t) +
                              ": every space needs at least one element");
      }
      const std::size_t want_kernel =
          source_size(t) * static_cast<std::size_t>(target_size(t));
      if (stages_[t].kernel.size() != want_kernel) {
        throw ValidationError("stage " + std::to_string(t) + ": kernel has " +
                              std::to_string(stages_[t].kernel.size()) +
                              " entries, expected " +
                              std::to_string(want_kernel));
      }
      const std::size_t want_cost =
          static_cast<std::size_t>(s.states) * s.actions1 * s.actions2;
      if (stages_[t].cost.size() != want_cost) {
        throw ValidationError("stage " + std::to_string(t) + ": cost has " +
                              std::to_string(stages_[t].cost.size()) +
                              " entries, expected " +
                              std::to_string(want_cost));
      }
    }
    if (terminal_.states < 1 || terminal_.private1 < 1 ||
        terminal_.private2 < 1) {
      throw ValidationError("terminal spaces need at least one element");
    }
    if (static_cast<int>(initial_.size()) != belief_shape(0).size()) {
      throw ValidationError("initial distribution has " +
                            std::to_string(initial_.size()) +
                            " entries, expected " +
                            std::to_string(belief_shape(0).size()));
    }
    BuildOutcomes();
  }

  int horizon() const { return static_cast<int>(stages_.size()); }
  const GameStage& stage(int t) const { return stages_.at(t); }
  const StageSpaces& spaces(int t) const { return stages_.at(t).spaces; }
  const std::vector<GameStage>& stages() const { return stages_; }
  const BeliefShape& terminal_shape() const { return terminal_; }
  std::span<const double> initial() const { return initial_; }

  // Belief shape at stage t, for t in [0, T].
  BeliefShape belief_shape(int t) const {
    if (t == horizon()) return terminal_;
    const StageSpaces& s = spaces(t);
    return {s.states, s.private1, s.private2};
  }

  // Number of conditioning tuples (x, p1, p2, u1, u2) at stage t.
  std::size_t source_size(int t) const {
    const StageSpaces& s = spaces(t);
    return static_cast<std::size_t>(s.states) * s.private1 * s.private2 *
           s.actions1 * s.actions2;
  }
  // Number of outcome tuples (x', p1', p2', z) at stage t.
  int target_size(int t) const {
    return belief_shape(t + 1).size() * spaces(t).increments;
  }

  std::size_t source_index(int t, int x, int p1, int p2, int u1,
                           int u2) const {
    const StageSpaces& s = spaces(t);
    return (((static_cast<std::size_t>(x) * s.private1 + p1) * s.private2 +
             p2) * s.actions1 + u1) * s.actions2 + u2;
  }
  int target_index(int t, int nx, int np1, int np2, int z) const {
    return belief_shape(t + 1).index(nx, np1, np2) * spaces(t).increments + z;
  }

  double kernel(int t, int x, int p1, int p2, int u1, int u2, int nx, int np1,
                int np2, int z) const {
    return stages_[t].kernel[source_index(t, x, p1, p2, u1, u2) *
                                 target_size(t) +
                             target_index(t, nx, np1, np2, z)];
  }

  double cost(int t, int x, int u1, int u2) const {
    const StageSpaces& s = spaces(t);
    return stages_[t].cost[(static_cast<std::size_t>(x) * s.actions1 + u1) *
                               s.actions2 + u2];
  }

  // Nonzero entries of the slice K_t[. | x, p1, p2, u1, u2].
  std::span<const KernelOutcome> outcomes(int t, int x, int p1, int p2,
                                          int u1, int u2) const {
    const std::size_t src = source_index(t, x, p1, p2, u1, u2);
    const auto& offs = outcome_offsets_[t];
    return std::span<const KernelOutcome>(outcomes_[t].data() + offs[src],
                                          offs[src + 1] - offs[src]);
  }

 private:
  void BuildOutcomes() {
    outcomes_.assign(horizon(), {});
    outcome_offsets_.assign(horizon(), {});
    for (int t = 0; t < horizon(); ++t) {
      const BeliefShape next = belief_shape(t + 1);
      const int nz = spaces(t).increments;
      const int width = target_size(t);
      const std::size_t sources = source_size(t);
      auto& out = outcomes_[t];
      auto& offs = outcome_offsets_[t];
      offs.reserve(sources + 1);
      offs.push_back(0);
      for (std::size_t src = 0; src < sources; ++src) {
        const double* row = stages_[t].kernel.data() + src * width;
        for (int tgt = 0; tgt < width; ++tgt) {
          if (row[tgt] == 0.0) continue;
          const int z = tgt % nz;
          int rest = tgt / nz;
          const int np2 = rest % next.private2;
          rest /= next.private2;
          const int np1 = rest % next.private1;
          const int nx = rest / next.private1;
          out.push_back({nx, np1, np2, z, row[tgt]});
        }
        offs.push_back(out.size());
      }
    }
  }

  std::vector<GameStage> stages_;
  BeliefShape terminal_;
  std::vector<double> initial_;
  std::vector<std::vector<KernelOutcome>> outcomes_;
  std::vector<std::vector<std::size_t>> outcome_offsets_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string tensor;     // "kernel", "cost", "initial", ...
  int stage = -1;         // -1 when not stage-specific
  std::vector<int> index; // position of the offending entry or slice
  double magnitude = 0.0; // offending value (entry or slice sum)
  std::string message;

  std::string describe() const {
    std::ostringstream os;
    os << tensor;
    if (stage >= 0) os << "[stage " << stage << "]";
    os << "(";
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (i) os << ",";
      os << index[i];
    }
    os << "): " << message << " (" << magnitude << ")";
    return os.str();
  }
};

inline std::vector<Violation> validate_game(const GameDefinition& g) {
  std::vector<Violation> out;
  for (int t = 0; t < g.horizon(); ++t) {
    const StageSpaces& s = g.spaces(t);
    const int width = g.target_size(t);
    for (int x = 0; x < s.states; ++x)
      for (int p1 = 0; p1 < s.private1; ++p1)
        for (int p2 = 0; p2 < s.private2; ++p2)
          for (int u1 = 0; u1 < s.actions1; ++u1)
            for (int u2 = 0; u2 < s.actions2; ++u2) {
              const std::size_t src = g.source_index(t, x, p1, p2, u1, u2);
              const double* row = g.stage(t).kernel.data() + src * width;
              double sum = 0.0;
              bool bad_entry = false;
              for (int k = 0; k < width; ++k) {
                if (!std::isfinite(row[k]) || row[k] < 0.0) {
                  out.push_back({"kernel", t, {x, p1, p2, u1, u2, k}, row[k],
                                 "negative or non-finite probability"});
                  bad_entry = true;
                }
                sum += row[k];
              }
              if (!bad_entry && std::abs(sum - 1.0) > kStochasticTolerance) {
                out.push_back({"kernel", t, {x, p1, p2, u1, u2}, sum,
                               "conditional slice does not sum to 1"});
              }
            }
    for (std::size_t k = 0; k < g.stage(t).cost.size(); ++k) {
      if (!std::isfinite(g.stage(t).cost[k])) {
        out.push_back({"cost", t, {static_cast<int>(k)}, g.stage(t).cost[k],
                       "non-finite cost"});
      }
    }
    const SpaceLabels& l = g.stage(t).labels;
    auto check_labels = [&](const std::vector<std::string>& names, int size,
                            const char* which) {
      if (!names.empty() && static_cast<int>(names.size()) != size) {
        out.push_back({std::string("labels.") + which, t, {},
                       static_cast<double>(names.size()),
                       "label count differs from space size"});
      }
    };
    check_labels(l.states, s.states, "states");
    check_labels(l.actions1, s.actions1, "actions1");
    check_labels(l.actions2, s.actions2, "actions2");
    check_labels(l.private1, s.private1, "private1");
    check_labels(l.private2, s.private2, "private2");
    check_labels(l.increments, s.increments, "increments");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < g.initial().size(); ++k) {
    const double v = g.initial()[k];
    if (!std::isfinite(v) || v < 0.0) {
      out.push_back({"initial", -1, {static_cast<int>(k)}, v,
                     "negative or non-finite probability"});
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kStochasticTolerance) {
    out.push_back({"initial", -1, {}, sum, "distribution does not sum to 1"});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structured dynamics: transition, per-player observations, and the
// deterministic information maps, folded into a joint kernel by
// assemble_kernel().

struct StructuredStage {
  int states = 1;
  int actions1 = 1;
  int actions2 = 1;
  int private1 = 1;
  int private2 = 1;
  int observations1 = 1;  // |Y1_{t+1}|
  int observations2 = 1;  // |Y2_{t+1}|
  int increments = 1;     // |Z_{t+1}|
  std::vector<double> transition;    // [x][u1][u2][x']
  std::vector<double> observation1;  // [x'][u1][u2][y1]
  std::vector<double> observation2;  // [x'][u1][u2][y2]
  std::vector<int> xi1;              // [p1][u1][y1] -> p1'
  std::vector<int> xi2;              // [p2][u2][y2] -> p2'
  std::vector<int> zeta;             // [p1][p2][u1][u2][y1][y2] -> z
  std::vector<double> cost;          // [x][u1][u2]
  SpaceLabels labels;
};

struct StructuredDynamics {
  std::vector<StructuredStage> stages;
  BeliefShape terminal;
};

namespace detail {

inline void check_size(const std::string& what, int t, std::size_t got,
                       std::size_t want) {
  if (got != want) {
    throw ValidationError("stage " + std::to_string(t) + ": " + what +
                          " has " + std::to_string(got) +
                          " entries, expected " + std::to_string(want));
  }
}

inline void check_row_stochastic(const std::string& what, int t,
                                 const std::vector<double>& v, int width) {
  for (std::size_t r = 0; r * width < v.size(); ++r) {
    double sum = 0.0;
    for (int k = 0; k < width; ++k) {
      const double p = v[r * width + k];
      if (!std::isfinite(p) || p < 0.0) {
        throw ValidationError("stage " + std::to_string(t) + ": " + what +
                              " row " + std::to_string(r) +
                              " has a negative or non-finite entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance) {
      throw ValidationError("stage " + std::to_string(t) + ": " + what +
                            " row " + std::to_string(r) + " sums to " +
                            std::to_string(sum));
    }
  }
}

}  // namespace detail

inline GameDefinition assemble_kernel(const StructuredDynamics& sd,
                                      std::vector<double> initial) {
  const int horizon = static_cast<int>(sd.stages.size());
  if (horizon == 0) throw ValidationError("horizon must be positive");
  std::vector<GameStage> stages(horizon);
  for (int t = 0; t < horizon; ++t) {
    const StructuredStage& s = sd.stages[t];
    BeliefShape next = sd.terminal;
    if (t + 1 < horizon) {
      next = {sd.stages[t + 1].states, sd.stages[t + 1].private1,
              sd.stages[t + 1].private2};
    }
    const std::size_t acts = static_cast<std::size_t>(s.actions1) * s.actions2;
    detail::check_size("transition", t, s.transition.size(),
                       s.states * acts * next.states);
    detail::check_size("observation1", t, s.observation1.size(),
                       next.states * acts * s.observations1);
    detail::check_size("observation2", t, s.observation2.size(),
                       next.states * acts * s.observations2);
    detail::check_size("xi1", t, s.xi1.size(),
                       static_cast<std::size_t>(s.private1) * s.actions1 *
                           s.observations1);
    detail::check_size("xi2", t, s.xi2.size(),
                       static_cast<std::size_t>(s.private2) * s.actions2 *
                           s.observations2);
    detail::check_size("zeta", t, s.zeta.size(),
                       static_cast<std::size_t>(s.private1) * s.private2 *
                           acts * s.observations1 * s.observations2);
    detail::check_size("cost", t, s.cost.size(), s.states * acts);
    detail::check_row_stochastic("transition", t, s.transition, next.states);
    detail::check_row_stochastic("observation1", t, s.observation1,
                                 s.observations1);
    detail::check_row_stochastic("observation2", t, s.observation2,
                                 s.observations2);
    auto in_range = [&](const std::vector<int>& map, int bound,
                        const char* what) {
      for (std::size_t k = 0; k < map.size(); ++k) {
        if (map[k] < 0 || map[k] >= bound) {
          throw ValidationError("stage " + std::to_string(t) + ": " + what +
                                " entry " + std::to_string(k) + " maps to " +
                                std::to_string(map[k]) +
                                ", outside [0, " + std::to_string(bound) + ")");
        }
      }
    };
    in_range(s.xi1, next.private1, "xi1");
    in_range(s.xi2, next.private2, "xi2");
    in_range(s.zeta, s.increments, "zeta");

    GameStage& out = stages[t];
    out.spaces = {s.states, s.actions1, s.actions2, s.private1, s.private2,
                  s.increments};
    out.cost = s.cost;
    out.labels = s.labels;
    const int width = next.size() * s.increments;
    out.kernel.assign(static_cast<std::size_t>(s.states) * s.private1 *
                          s.private2 * acts * width,
                      0.0);
    std::size_t src = 0;
    for (int x = 0; x < s.states; ++x)
      for (int p1 = 0; p1 < s.private1; ++p1)
        for (int p2 = 0; p2 < s.private2; ++p2)
          for (int u1 = 0; u1 < s.actions1; ++u1)
            for (int u2 = 0; u2 < s.actions2; ++u2, ++src) {
              double* row = out.kernel.data() + src * width;
              for (int nx = 0; nx < next.states; ++nx) {
                const double pt =
                    s.transition[((static_cast<std::size_t>(x) * s.actions1 +
                                   u1) * s.actions2 + u2) * next.states + nx];
                if (pt == 0.0) continue;
                const std::size_t obs_row =
                    (static_cast<std::size_t>(nx) * s.actions1 + u1) *
                        s.actions2 + u2;
                for (int y1 = 0; y1 < s.observations1; ++y1) {
                  const double po1 =
                      s.observation1[obs_row * s.observations1 + y1];
                  if (po1 == 0.0) continue;
                  for (int y2 = 0; y2 < s.observations2; ++y2) {
                    const double po2 =
                        s.observation2[obs_row * s.observations2 + y2];
                    if (po2 == 0.0) continue;
                    const int np1 =
                        s.xi1[(static_cast<std::size_t>(p1) * s.actions1 +
                               u1) * s.observations1 + y1];
                    const int np2 =
                        s.xi2[(static_cast<std::size_t>(p2) * s.actions2 +
                               u2) * s.observations2 + y2];
                    const int z = s.zeta[((((static_cast<std::size_t>(p1) *
                                                 s.private2 + p2) *
                                                s.actions1 + u1) *
                                               s.actions2 + u2) *
                                              s.observations1 + y1) *
                                             s.observations2 + y2];
                    row[next.index(nx, np1, np2) * s.increments + z] +=
                        pt * po1 * po2;
                  }
                }
              }
            }
  }
  return GameDefinition(std::move(stages), sd.terminal, std::move(initial));
}

// ---------------------------------------------------------------------------
// One-sided games: player 1 observes the state; player 2 sees a noisy
// observation y2 of the next state and its own past actions.

struct OneSidedStage {
  int states = 1;
  int actions1 = 1;
  int actions2 = 1;
  int observations = 1;              // |Y2_{t+1}|
  std::vector<double> transition;    // [x][u1][u2][x']
  std::vector<double> observation;   // [x'][u1][u2][y2]
  std::vector<double> cost;          // [x][u1][u2]
};

struct OneSidedGame {
  std::vector<OneSidedStage> stages;
  int terminal_states = 1;
  std::vector<double> initial;  // over X_0

  int horizon() const { return static_cast<int>(stages.size()); }
  int states(int t) const {
    return t == horizon() ? terminal_states : stages.at(t).states;
  }
  double cost(int t, int x, int u1, int u2) const {
    const OneSidedStage& s = stages[t];
    return s.cost[(static_cast<std::size_t>(x) * s.actions1 + u1) *
                      s.actions2 + u2];
  }
  double transition(int t, int x, int u1, int u2, int nx) const {
    const OneSidedStage& s = stages[t];
    return s.transition[((static_cast<std::size_t>(x) * s.actions1 + u1) *
                             s.actions2 + u2) * states(t + 1) + nx];
  }
  double observation(int t, int nx, int u1, int u2, int y) const {
    const OneSidedStage& s = stages[t];
    return s.observation[((static_cast<std::size_t>(nx) * s.actions1 + u1) *
                              s.actions2 + u2) * s.observations + y];
  }
  // P[x', y2 | x, u1, u2].
  double joint(int t, int x, int u1, int u2, int nx, int y) const {
    return transition(t, x, u1, u2, nx) * observation(t, nx, u1, u2, y);
  }
  int increments(int t) const {
    return stages[t].observations * stages[t].actions2;
  }
};

// Common-information increment of the lowered game: z = (y2, u2).
inline int one_sided_increment(int y2, int u2, int actions2) {
  return y2 * actions2 + u2;
}
inline std::pair<int, int> split_one_sided_increment(int z, int actions2) {
  return {z / actions2, z % actions2};
}

inline void validate_one_sided(const OneSidedGame& g) {
  if (g.horizon() == 0) throw ValidationError("horizon must be positive");
  for (int t = 0; t < g.horizon(); ++t) {
    const OneSidedStage& s = g.stages[t];
    if (s.states < 1 || s.actions1 < 1 || s.actions2 < 1 ||
        s.observations < 1) {
      throw ValidationError("stage " + std::to_string(t) +
                            ": every space needs at least one element");
    }
    const std::size_t acts = static_cast<std::size_t>(s.actions1) * s.actions2;
    detail::check_size("transition", t, s.transition.size(),
                       s.states * acts * g.states(t + 1));
    detail::check_size("observation2", t, s.observation.size(),
                       g.states(t + 1) * acts * s.observations);
    detail::check_size("cost", t, s.cost.size(), s.states * acts);
    detail::check_row_stochastic("transition", t, s.transition,
                                 g.states(t + 1));
    detail::check_row_stochastic("observation2", t, s.observation,
                                 s.observations);
    for (double c : s.cost) {
      if (!std::isfinite(c)) {
        throw ValidationError("stage " + std::to_string(t) +
                              ": non-finite cost");
      }
    }
  }
  detail::check_size("initial", -1, g.initial.size(), g.states(0));
  detail::check_row_stochastic("initial", -1, g.initial, g.states(0));
}

// Lowers a one-sided game to the general form: P1_t = X_t (diagonal
// embedding), |P2_t| = 1 and Z_{t+1} = Y2_{t+1} x U2_t.
inline GameDefinition lower_one_sided(const OneSidedGame& g) {
  validate_one_sided(g);
  const int horizon = g.horizon();
  std::vector<GameStage> stages(horizon);
  for (int t = 0; t < horizon; ++t) {
    const OneSidedStage& s = g.stages[t];
    const int nstates = g.states(t + 1);
    GameStage& out = stages[t];
    out.spaces = {s.states, s.actions1, s.actions2, s.states, 1,
                  s.observations * s.actions2};
    out.cost = s.cost;
    const BeliefShape next{nstates, nstates, 1};
    const int nz = out.spaces.increments;
    const int width = next.size() * nz;
    out.kernel.assign(static_cast<std::size_t>(s.states) * s.states *
                          s.actions1 * s.actions2 * width,
                      0.0);
    std::size_t src = 0;
    for (int x = 0; x < s.states; ++x)
      for (int p1 = 0; p1 < s.states; ++p1)
        for (int u1 = 0; u1 < s.actions1; ++u1)
          for (int u2 = 0; u2 < s.actions2; ++u2, ++src) {
            double* row = out.kernel.data() + src * width;
            for (int nx = 0; nx < nstates; ++nx)
              for (int y = 0; y < s.observations; ++y) {
                const double p = g.joint(t, x, u1, u2, nx, y);
                if (p == 0.0) continue;
                row[next.index(nx, nx, 0) * nz +
                    one_sided_increment(y, u2, s.actions2)] += p;
              }
          }
  }
  const int n0 = g.states(0);
  std::vector<double> initial(static_cast<std::size_t>(n0) * n0, 0.0);
  for (int x = 0; x < n0; ++x) initial[x * n0 + x] = g.initial[x];
  return GameDefinition(std::move(stages),
                        BeliefShape{g.terminal_states, g.terminal_states, 1},
                        std::move(initial));
}

// The structured description equivalent to a one-sided game: y1 is empty,
// xi1 reports the next state, xi2 is trivial and zeta = (y2, u2). Player 1's
// private information must track the state, so it is read off the
// observation channel y1 = x'.
inline StructuredDynamics one_sided_structured(const OneSidedGame& g) {
  validate_one_sided(g);
  StructuredDynamics sd;
  sd.terminal = {g.terminal_states, g.terminal_states, 1};
  for (int t = 0; t < g.horizon(); ++t) {
    const OneSidedStage& s = g.stages[t];
    const int nstates = g.states(t + 1);
    StructuredStage out;
    out.states = s.states;
    out.actions1 = s.actions1;
    out.actions2 = s.actions2;
    out.private1 = s.states;
    out.private2 = 1;
    out.observations1 = nstates;
    out.observations2 = s.observations;
    out.increments = s.observations * s.actions2;
    out.transition = s.transition;
    out.observation2 = s.observation;
    out.observation1.assign(
        static_cast<std::size_t>(nstates) * s.actions1 * s.actions2 * nstates,
        0.0);
    for (int nx = 0; nx < nstates; ++nx)
      for (int u1 = 0; u1 < s.actions1; ++u1)
        for (int u2 = 0; u2 < s.actions2; ++u2)
          out.observation1[((static_cast<std::size_t>(nx) * s.actions1 + u1) *
                                s.actions2 + u2) * nstates + nx] = 1.0;
    out.xi1.resize(static_cast<std::size_t>(s.states) * s.actions1 * nstates);
    for (int p = 0; p < s.states; ++p)
      for (int u1 = 0; u1 < s.actions1; ++u1)
        for (int y1 = 0; y1 < nstates; ++y1)
          out.xi1[(static_cast<std::size_t>(p) * s.actions1 + u1) * nstates +
                  y1] = y1;
    out.xi2.assign(static_cast<std::size_t>(s.actions2) * s.observations, 0);
    out.zeta.resize(static_cast<std::size_t>(s.states) * s.actions1 *
                    s.actions2 * nstates * s.observations);
    std::size_t k = 0;
    for (int p1 = 0; p1 < s.states; ++p1)
      for (int u1 = 0; u1 < s.actions1; ++u1)
        for (int u2 = 0; u2 < s.actions2; ++u2)
          for (int y1 = 0; y1 < nstates; ++y1)
            for (int y2 = 0; y2 < s.observations; ++y2)
              out.zeta[k++] = one_sided_increment(y2, u2, s.actions2);
    out.cost = s.cost;
    sd.stages.push_back(std::move(out));
  }
  return sd;
}

// Initial distribution of the lowered game, for use with assemble_kernel.
inline std::vector<double> lowered_initial(const OneSidedGame& g) {
  const int n0 = g.states(0);
  std::vector<double> initial(static_cast<std::size_t>(n0) * n0, 0.0);
  for (int x = 0; x < n0; ++x) initial[x * n0 + x] = g.initial[x];
  return initial;
}

}  // namespace cibgame

#endif  // CIBGAME_MODEL_HPP_
