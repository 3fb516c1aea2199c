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

// Common-information beliefs, prescriptions and the belief update.
//
// The update is split as in the usual filtering presentation: the joint
// measure over (z, x', p1', p2'), its z-marginal, and the normalized
// posterior. When the observed z has (numerically) zero probability the
// posterior is the uniform distribution.

#ifndef CIBGAME_BELIEF_HPP_
#define CIBGAME_BELIEF_HPP_

#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cibgame/errors.hpp"
#include "cibgame/model.hpp"

namespace cibgame {

inline constexpr double kZeroProbability = 1e-12;

class Belief {
 public:
  Belief() = default;
  Belief(int stage, BeliefShape shape, std::vector<double> data,
         bool sub_normalized = false)
      : stage_(stage), shape_(shape), data_(std::move(data)),
        sub_normalized_(sub_normalized) {
    if (static_cast<int>(data_.size()) != shape_.size()) {
      throw ValidationError("belief has " + std::to_string(data_.size()) +
                            " entries, expected " +
                            std::to_string(shape_.size()));
    }
    for (double v : data_) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ValidationError("belief entries must be finite and >= 0");
      }
    }
    if (!sub_normalized_ && std::abs(mass() - 1.0) > 1e-9) {
      throw ValidationError("proper belief has mass " +
                            std::to_string(mass()));
    }
  }

  static Belief uniform(int stage, BeliefShape shape) {
    return Belief(stage, shape,
                  std::vector<double>(shape.size(), 1.0 / shape.size()));
  }
  static Belief point(int stage, BeliefShape shape, int index) {
    std::vector<double> d(shape.size(), 0.0);
    d.at(index) = 1.0;
    return Belief(stage, shape, std::move(d));
  }
  // A belief over X_t only (|P1| = |P2| = 1).
  static Belief over_states(int stage, std::vector<double> d) {
    const int n = static_cast<int>(d.size());
    return Belief(stage, {n, 1, 1}, std::move(d));
  }

  int stage() const { return stage_; }
  const BeliefShape& shape() const { return shape_; }
  int size() const { return static_cast<int>(data_.size()); }
  std::span<const double> data() const { return data_; }
  const std::vector<double>& values() const { return data_; }
  double operator[](int k) const { return data_[k]; }
  double at(int x, int p1, int p2) const {
    return data_[shape_.index(x, p1, p2)];
  }
  double mass() const {
    return std::accumulate(data_.begin(), data_.end(), 0.0);
  }
  bool sub_normalized() const { return sub_normalized_; }

  bool operator==(const Belief&) const = default;

 private:
  int stage_ = 0;
  BeliefShape shape_;
  std::vector<double> data_;
  bool sub_normalized_ = false;
};

// gamma[p][u], rows stochastic.
class Prescription {
 public:
  Prescription() = default;
  Prescription(int stage, int player, int rows, int cols,
               std::vector<double> data)
      : stage_(stage), player_(player), rows_(rows), cols_(cols),
        data_(std::move(data)) {
    if (rows_ < 1 || cols_ < 1 ||
        static_cast<int>(data_.size()) != rows_ * cols_) {
      throw ValidationError("prescription shape mismatch");
    }
    for (int p = 0; p < rows_; ++p) {
      double s = 0.0;
      for (int u = 0; u < cols_; ++u) {
        const double v = data_[p * cols_ + u];
        if (!(v >= 0.0) || !std::isfinite(v)) {
          throw ValidationError("prescription entries must be >= 0");
        }
        s += v;
      }
      if (std::abs(s - 1.0) > 1e-9) {
        throw ValidationError("prescription row " + std::to_string(p) +
                              " sums to " + std::to_string(s));
      }
    }
  }

  static Prescription uniform(int stage, int player, int rows, int cols) {
    return Prescription(stage, player, rows, cols,
                        std::vector<double>(rows * cols, 1.0 / cols));
  }
  // Deterministic prescription: row p plays actions[p].
  static Prescription pure(int stage, int player, int cols,
                           const std::vector<int>& actions) {
    const int rows = static_cast<int>(actions.size());
    std::vector<double> d(rows * cols, 0.0);
    for (int p = 0; p < rows; ++p) d[p * cols + actions[p]] = 1.0;
    return Prescription(stage, player, rows, cols, std::move(d));
  }

  int stage() const { return stage_; }
  int player() const { return player_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int p, int u) const { return data_[p * cols_ + u]; }
  std::span<const double> row(int p) const {
    return std::span<const double>(data_).subspan(p * cols_, cols_);
  }
  const std::vector<double>& values() const { return data_; }

  bool operator==(const Prescription&) const = default;

 private:
  int stage_ = 0;
  int player_ = 1;
  int rows_ = 1;
  int cols_ = 1;
  std::vector<double> data_;
};

// Measure over Z_{t+1} x X_{t+1} x P1_{t+1} x P2_{t+1}, z-major.
struct JointMeasure {
  int stage = 0;  // stage of the belief it was produced from
  int increments = 1;
  BeliefShape next;
  std::vector<double> data;

  double at(int z, int flat_next) const {
    return data[static_cast<std::size_t>(z) * next.size() + flat_next];
  }
  double mass() const {
    return std::accumulate(data.begin(), data.end(), 0.0);
  }
};

namespace belief_internal {

inline void check_inputs(const Belief& pi, const Prescription& g1,
                         const Prescription& g2, const GameDefinition& g) {
  const int t = pi.stage();
  if (t < 0 || t >= g.horizon()) {
    throw ValidationError("belief stage " + std::to_string(t) +
                          " outside [0, T)");
  }
  if (g1.stage() != t || g2.stage() != t) {
    throw ValidationError("stage mismatch between belief and prescriptions");
  }
  const StageSpaces& s = g.spaces(t);
  if (!(pi.shape() == g.belief_shape(t))) {
    throw ValidationError("belief shape does not match the game at stage " +
                          std::to_string(t));
  }
  if (g1.rows() != s.private1 || g1.cols() != s.actions1 ||
      g2.rows() != s.private2 || g2.cols() != s.actions2) {
    throw ValidationError("prescription shape does not match the game");
  }
}

}  // namespace belief_internal

inline JointMeasure joint_update(const Belief& pi, const Prescription& g1,
                                 const Prescription& g2,
                                 const GameDefinition& g) {
  belief_internal::check_inputs(pi, g1, g2, g);
  const int t = pi.stage();
  const StageSpaces& s = g.spaces(t);
  JointMeasure out;
  out.stage = t;
  out.increments = s.increments;
  out.next = g.belief_shape(t + 1);
  const int nn = out.next.size();
  out.data.assign(static_cast<std::size_t>(s.increments) * nn, 0.0);
  for (int x = 0; x < s.states; ++x)
    for (int p1 = 0; p1 < s.private1; ++p1)
      for (int p2 = 0; p2 < s.private2; ++p2) {
        const double w = pi.at(x, p1, p2);
        if (w == 0.0) continue;
        for (int u1 = 0; u1 < s.actions1; ++u1) {
          const double w1 = w * g1(p1, u1);
          if (w1 == 0.0) continue;
          for (int u2 = 0; u2 < s.actions2; ++u2) {
            const double w2 = w1 * g2(p2, u2);
            if (w2 == 0.0) continue;
            for (const KernelOutcome& o : g.outcomes(t, x, p1, p2, u1, u2)) {
              out.data[static_cast<std::size_t>(o.increment) * nn +
                       out.next.index(o.next_state, o.next_private1,
                                      o.next_private2)] +=
                  w2 * o.probability;
            }
          }
        }
      }
  return out;
}

inline std::vector<double> marginal_z(const JointMeasure& j) {
  const int nn = j.next.size();
  std::vector<double> out(j.increments, 0.0);
  for (int z = 0; z < j.increments; ++z) {
    double s = 0.0;
    for (int k = 0; k < nn; ++k) s += j.at(z, k);
    out[z] = s;
  }
  return out;
}

inline std::vector<double> marginal_z(const Belief& pi, const Prescription& g1,
                                      const Prescription& g2,
                                      const GameDefinition& g) {
  return marginal_z(joint_update(pi, g1, g2, g));
}

// Posterior from a precomputed joint measure.
inline Belief next_belief(const JointMeasure& j, int z) {
  if (z < 0 || z >= j.increments) {
    throw ValidationError("increment " + std::to_string(z) + " out of range");
  }
  const int nn = j.next.size();
  double m = 0.0;
  for (int k = 0; k < nn; ++k) m += j.at(z, k);
  if (m <= kZeroProbability) return Belief::uniform(j.stage + 1, j.next);
  std::vector<double> d(nn);
  for (int k = 0; k < nn; ++k) d[k] = j.at(z, k) / m;
  return Belief(j.stage + 1, j.next, std::move(d));
}

inline Belief next_belief(const Belief& pi, const Prescription& g1,
                          const Prescription& g2, int z,
                          const GameDefinition& g) {
  return next_belief(joint_update(pi, g1, g2, g), z);
}

// ---------------------------------------------------------------------------
// One-sided specialization. Beliefs are over X_t; gamma1 has one row per
// state; z = (y2, u2).

// Q_t(pi, gamma1, (y2, u2); x').
inline std::vector<double> one_sided_q(const std::vector<double>& pi,
                                       const Prescription& g1, int y2, int u2,
                                       const OneSidedGame& g, int t) {
  const OneSidedStage& s = g.stages.at(t);
  const int nn = g.states(t + 1);
  std::vector<double> q(nn, 0.0);
  for (int x = 0; x < s.states; ++x) {
    if (pi[x] == 0.0) continue;
    for (int u1 = 0; u1 < s.actions1; ++u1) {
      const double w = pi[x] * g1(x, u1);
      if (w == 0.0) continue;
      for (int nx = 0; nx < nn; ++nx) {
        q[nx] += w * g.joint(t, x, u1, u2, nx, y2);
      }
    }
  }
  return q;
}

inline Belief one_sided_next_belief(const Belief& pi, const Prescription& g1,
                                    int z, const OneSidedGame& g) {
  const int t = pi.stage();
  if (t < 0 || t >= g.horizon()) {
    throw ValidationError("belief stage outside [0, T)");
  }
  const OneSidedStage& s = g.stages[t];
  if (pi.size() != s.states || g1.rows() != s.states ||
      g1.cols() != s.actions1 || g1.stage() != t) {
    throw ValidationError("one-sided belief/prescription shape mismatch");
  }
  if (z < 0 || z >= g.increments(t)) {
    throw ValidationError("increment out of range");
  }
  const auto [y2, u2] = split_one_sided_increment(z, s.actions2);
  std::vector<double> q = one_sided_q(pi.values(), g1, y2, u2, g, t);
  const double r = std::accumulate(q.begin(), q.end(), 0.0);
  const int nn = g.states(t + 1);
  if (r <= kZeroProbability) {
    return Belief::uniform(t + 1, {nn, 1, 1});
  }
  for (double& v : q) v /= r;
  return Belief(t + 1, {nn, 1, 1}, std::move(q));
}

// Same map with the full signature of the general update; gamma2 is accepted
// and never read.
inline Belief one_sided_next_belief(const Belief& pi, const Prescription& g1,
                                    const Prescription& /*g2*/, int z,
                                    const OneSidedGame& g) {
  return one_sided_next_belief(pi, g1, z, g);
}

// Embeds a belief over X_t into the lowered game's (x, p1 = x) diagonal.
inline Belief lift_one_sided_belief(const Belief& pi) {
  const int n = pi.size();
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int x = 0; x < n; ++x) d[x * n + x] = pi[x];
  return Belief(pi.stage(), {n, n, 1}, std::move(d), pi.sub_normalized());
}

// Projects a lowered-game belief back to X_t.
inline Belief project_one_sided_belief(const Belief& pi) {
  const BeliefShape& sh = pi.shape();
  std::vector<double> d(sh.states, 0.0);
  for (int x = 0; x < sh.states; ++x)
    for (int p1 = 0; p1 < sh.private1; ++p1)
      for (int p2 = 0; p2 < sh.private2; ++p2) d[x] += pi.at(x, p1, p2);
  return Belief(pi.stage(), {sh.states, 1, 1}, std::move(d),
                pi.sub_normalized());
}

inline Belief scale_belief(const Belief& pi, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("scale factor must lie in [0, 1]");
  }
  std::vector<double> d(pi.values());
  for (double& v : d) v *= alpha;
  return Belief(pi.stage(), pi.shape(), std::move(d), alpha != 1.0);
}

}  // namespace cibgame

#endif  // CIBGAME_BELIEF_HPP_
