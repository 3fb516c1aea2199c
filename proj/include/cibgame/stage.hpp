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

// Stage problems of the common-information dynamic program.
//
// One-sided stages are solved exactly by LP against a piecewise-linear convex
// continuation V_{t+1}(pi) = max_l <l, pi>. Because V_{t+1} is positively
// homogeneous, the continuation of an unnormalized posterior Q is simply
// max_l <l, Q>, which keeps both stage programs linear:
//
//   maximin: max_{q, lambda, nu} <pi, nu>
//            nu(x) <= sum_u2 q(u2) c(x,u1,u2)
//                     + sum_{u2,y,l} lambda(u2,y,l) sum_x' l(x') P[x',y|x,u1,u2]
//            sum_l lambda(u2,y,l) = q(u2),  sum q = 1.
//
//   minmax:  min_{gamma1, s, nu} nu
//            s(u2,y) >= <l, Q(pi, gamma1, (y,u2))>          for all l
//            c~(pi, gamma1, u2) + sum_y s(u2,y) <= nu        for all u2.
//
// The maximin program is solved by column generation over the alpha vectors
// and the minmax program by row generation; both stop only when pricing over
// the full alpha set finds nothing, so the result is the optimum of the full
// program.
//
// General stages at the horizon reduce to a matrix game over pure
// prescriptions. Earlier general stages are only estimated on prescription
// grids.

#ifndef CIBGAME_STAGE_HPP_
#define CIBGAME_STAGE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cibgame/belief.hpp"
#include "cibgame/errors.hpp"
#include "cibgame/lp.hpp"
#include "cibgame/model.hpp"

namespace cibgame {

struct AlphaVector {
  int stage = 0;
  std::vector<double> values;  // over X_stage

  bool operator==(const AlphaVector&) const = default;
};

class AlphaSet {
 public:
  AlphaSet() = default;
  AlphaSet(int stage, int dimension) : stage_(stage), dimension_(dimension) {}

  static AlphaSet zero(int stage, int dimension) {
    AlphaSet a(stage, dimension);
    a.add(std::vector<double>(dimension, 0.0));
    return a;
  }

  int stage() const { return stage_; }
  int dimension() const { return dimension_; }
  int size() const { return static_cast<int>(vectors_.size()); }
  bool empty() const { return vectors_.empty(); }
  const std::vector<double>& operator[](int k) const { return vectors_[k]; }
  const std::vector<std::vector<double>>& vectors() const { return vectors_; }
  AlphaVector alpha(int k) const { return {stage_, vectors_[k]}; }

  // Returns false (and keeps the set unchanged) on an exact duplicate.
  bool add(std::vector<double> v) {
    if (static_cast<int>(v.size()) != dimension_) {
      throw ValidationError("alpha vector dimension mismatch");
    }
    for (double e : v) {
      if (!std::isfinite(e)) throw ValidationError("non-finite alpha entry");
    }
    for (const auto& w : vectors_) {
      if (w == v) return false;
    }
    vectors_.push_back(std::move(v));
    return true;
  }

  bool operator==(const AlphaSet&) const = default;

 private:
  int stage_ = 0;
  int dimension_ = 0;
  std::vector<std::vector<double>> vectors_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// max_l <l, pi>. Works for sub-normalized (and unnormalized) pi.
inline double pwlc_eval(const AlphaSet& a, std::span<const double> pi) {
  if (a.empty()) throw ValidationError("pwlc_eval on an empty alpha set");
  if (static_cast<int>(pi.size()) != a.dimension()) {
    throw ValidationError("pwlc_eval dimension mismatch");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& l : a.vectors()) best = std::max(best, dot(l, pi));
  return best;
}

inline double pwlc_eval(const AlphaSet& a, const Belief& pi) {
  if (pi.stage() != a.stage()) {
    throw ValidationError("pwlc_eval stage mismatch");
  }
  return pwlc_eval(a, pi.data());
}

inline int pwlc_argmax(const AlphaSet& a, std::span<const double> pi) {
  int arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < a.size(); ++k) {
    const double v = dot(a[k], pi);
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  return arg;
}

// c~_t(pi, gamma1, gamma2).
inline double expected_stage_cost(const Belief& pi, const Prescription& g1,
                                  const Prescription& g2,
                                  const GameDefinition& g) {
  const int t = pi.stage();
  if (t < 0 || t >= g.horizon() || !(pi.shape() == g.belief_shape(t))) {
    throw ValidationError("expected_stage_cost: belief shape mismatch");
  }
  const StageSpaces& s = g.spaces(t);
  if (g1.rows() != s.private1 || g1.cols() != s.actions1 ||
      g2.rows() != s.private2 || g2.cols() != s.actions2) {
    throw ValidationError("expected_stage_cost: prescription shape mismatch");
  }
  double total = 0.0;
  for (int x = 0; x < s.states; ++x)
    for (int p1 = 0; p1 < s.private1; ++p1)
      for (int p2 = 0; p2 < s.private2; ++p2) {
        const double w = pi.at(x, p1, p2);
        if (w == 0.0) continue;
        for (int u1 = 0; u1 < s.actions1; ++u1) {
          const double w1 = w * g1(p1, u1);
          if (w1 == 0.0) continue;
          for (int u2 = 0; u2 < s.actions2; ++u2) {
            total += w1 * g2(p2, u2) * g.cost(t, x, u1, u2);
          }
        }
      }
  return total;
}

// One-sided form: pi over X_t, gamma1 indexed by state, gamma2 a single row.
inline double expected_stage_cost(const Belief& pi, const Prescription& g1,
                                  const Prescription& g2,
                                  const OneSidedGame& g) {
  const int t = pi.stage();
  const OneSidedStage& s = g.stages.at(t);
  if (pi.size() != s.states || g1.rows() != s.states ||
      g1.cols() != s.actions1 || g2.rows() != 1 || g2.cols() != s.actions2) {
    throw ValidationError("expected_stage_cost: one-sided shape mismatch");
  }
  double total = 0.0;
  for (int x = 0; x < s.states; ++x)
    for (int u1 = 0; u1 < s.actions1; ++u1)
      for (int u2 = 0; u2 < s.actions2; ++u2)
        total += pi[x] * g1(x, u1) * g2(0, u2) * g.cost(t, x, u1, u2);
  return total;
}

// ---------------------------------------------------------------------------
// One-sided stage LPs.

struct StageSolution {
  double value = 0.0;
  std::vector<double> support;  // nu* over X_t
  std::vector<double> q;        // over U2
  // lambda[u2][y2][l], l indexing the continuation alpha set.
  std::vector<std::vector<std::vector<double>>> lambda;
  Prescription gamma1;  // set by the minmax program only
  std::int64_t lp_iterations = 0;
  int lp_solves = 0;
};

namespace stage_internal {

// coef[x][u1][u2][y][l] = sum_x' l(x') P[x', y | x, u1, u2], computed lazily
// per alpha vector.
class ContinuationCoefficients {
 public:
  ContinuationCoefficients(const OneSidedGame& g, int t, const AlphaSet& next)
      : g_(g), t_(t), next_(next), s_(g.stages.at(t)),
        cache_(next.size()) {}

  const std::vector<double>& get(int l) {
    auto& c = cache_[l];
    if (!c.empty()) return c;
    const int nn = g_.states(t_ + 1);
    c.assign(static_cast<std::size_t>(s_.states) * s_.actions1 * s_.actions2 *
                 s_.observations,
             0.0);
    std::size_t k = 0;
    for (int x = 0; x < s_.states; ++x)
      for (int u1 = 0; u1 < s_.actions1; ++u1)
        for (int u2 = 0; u2 < s_.actions2; ++u2)
          for (int y = 0; y < s_.observations; ++y, ++k) {
            double v = 0.0;
            for (int nx = 0; nx < nn; ++nx) {
              v += next_[l][nx] * g_.joint(t_, x, u1, u2, nx, y);
            }
            c[k] = v;
          }
    return c;
  }
  double at(int l, int x, int u1, int u2, int y) {
    return get(l)[((static_cast<std::size_t>(x) * s_.actions1 + u1) *
                       s_.actions2 + u2) * s_.observations + y];
  }

 private:
  const OneSidedGame& g_;
  int t_;
  const AlphaSet& next_;
  const OneSidedStage& s_;
  std::vector<std::vector<double>> cache_;
};

// Weighted continuation: given weights mu[x][u1] (pi(x) gamma1(x;u1) for the
// minmax program, the row duals for the maximin one), returns the best alpha
// index and value for the unnormalized posterior of (u2, y).
inline std::pair<int, double> best_alpha(const OneSidedGame& g, int t,
                                         const AlphaSet& next,
                                         const std::vector<double>& mu,
                                         int u2, int y) {
  const OneSidedStage& s = g.stages[t];
  const int nn = g.states(t + 1);
  std::vector<double> q(nn, 0.0);
  for (int x = 0; x < s.states; ++x)
    for (int u1 = 0; u1 < s.actions1; ++u1) {
      const double w = mu[x * s.actions1 + u1];
      if (w == 0.0) continue;
      for (int nx = 0; nx < nn; ++nx) q[nx] += w * g.joint(t, x, u1, u2, nx, y);
    }
  const int l = pwlc_argmax(next, q);
  return {l, dot(next[l], q)};
}

inline void check_one_sided_inputs(const Belief& pi, const AlphaSet& next,
                                   const OneSidedGame& g, int t) {
  if (t < 0 || t >= g.horizon()) {
    throw ValidationError("stage index outside [0, T)");
  }
  if (pi.stage() != t || pi.size() != g.stages[t].states) {
    throw ValidationError("belief does not match stage " + std::to_string(t));
  }
  if (next.empty() || next.dimension() != g.states(t + 1) ||
      next.stage() != t + 1) {
    throw ValidationError("continuation alpha set does not match stage " +
                          std::to_string(t + 1));
  }
}

inline double pricing_tolerance(double scale) {
  return 1e-10 * (1.0 + std::abs(scale));
}

}  // namespace stage_internal

inline StageSolution one_sided_backup_maximin(
    const Belief& pi, const AlphaSet& next, const OneSidedGame& g, int t,
    const LpOptions& opt = LpOptions()) {
  stage_internal::check_one_sided_inputs(pi, next, g, t);
  const OneSidedStage& s = g.stages[t];
  const int nx = s.states, nu1 = s.actions1, nu2 = s.actions2,
            ny = s.observations;
  stage_internal::ContinuationCoefficients coef(g, t, next);

  // Initial columns: the best alpha for each (u2, y) under a uniform gamma1.
  std::vector<std::vector<int>> active(nu2 * ny);
  {
    std::vector<double> mu(nx * nu1);
    for (int x = 0; x < nx; ++x)
      for (int u1 = 0; u1 < nu1; ++u1) mu[x * nu1 + u1] = pi[x] / nu1;
    for (int u2 = 0; u2 < nu2; ++u2)
      for (int y = 0; y < ny; ++y) {
        active[u2 * ny + y].push_back(
            stage_internal::best_alpha(g, t, next, mu, u2, y).first);
      }
  }

  StageSolution out;
  while (true) {
    LinearProgram lp;
    std::vector<int> qv(nu2);
    for (int u2 = 0; u2 < nu2; ++u2) qv[u2] = lp.add_variable(0.0);
    std::vector<std::vector<int>> lv(nu2 * ny);
    for (int k = 0; k < nu2 * ny; ++k) {
      for (std::size_t a = 0; a < active[k].size(); ++a) {
        lv[k].push_back(lp.add_variable(0.0));
      }
    }
    std::vector<int> nv(nx);
    for (int x = 0; x < nx; ++x) nv[x] = lp.add_variable(pi[x], VarBound::kFree);
    for (int x = 0; x < nx; ++x)
      for (int u1 = 0; u1 < nu1; ++u1) {
        std::vector<LpTerm> terms{{nv[x], 1.0}};
        for (int u2 = 0; u2 < nu2; ++u2) {
          const double c = g.cost(t, x, u1, u2);
          if (c != 0.0) terms.push_back({qv[u2], -c});
          for (int y = 0; y < ny; ++y) {
            const int k = u2 * ny + y;
            for (std::size_t a = 0; a < active[k].size(); ++a) {
              const double v = coef.at(active[k][a], x, u1, u2, y);
              if (v != 0.0) terms.push_back({lv[k][a], -v});
            }
          }
        }
        lp.add_inequality(std::move(terms), 0.0);
      }
    {
      std::vector<LpTerm> terms;
      for (int u2 = 0; u2 < nu2; ++u2) terms.push_back({qv[u2], 1.0});
      lp.add_equality(std::move(terms), 1.0);
    }
    for (int u2 = 0; u2 < nu2; ++u2)
      for (int y = 0; y < ny; ++y) {
        const int k = u2 * ny + y;
        std::vector<LpTerm> terms{{qv[u2], -1.0}};
        for (int v : lv[k]) terms.push_back({v, 1.0});
        lp.add_equality(std::move(terms), 0.0);
      }
    LpSolution sol = solve_lp_or_throw(
        lp, "maximin backup at stage " + std::to_string(t), opt);
    out.lp_iterations += sol.iterations;
    ++out.lp_solves;

    // Pricing: the row duals are pi(x) gamma1(x; u1) of the opponent.
    std::vector<double> mu(sol.dual.begin(), sol.dual.begin() + nx * nu1);
    bool added = false;
    for (int u2 = 0; u2 < nu2; ++u2)
      for (int y = 0; y < ny; ++y) {
        const int k = u2 * ny + y;
        const double eta = sol.dual[nx * nu1 + 1 + k];
        auto [l, v] = stage_internal::best_alpha(g, t, next, mu, u2, y);
        if (v > eta + stage_internal::pricing_tolerance(eta) &&
            std::find(active[k].begin(), active[k].end(), l) ==
                active[k].end()) {
          active[k].push_back(l);
          added = true;
        }
      }
    if (added) continue;

    out.value = sol.value;
    out.q.resize(nu2);
    for (int u2 = 0; u2 < nu2; ++u2) out.q[u2] = sol.primal[qv[u2]];
    out.lambda.assign(nu2, std::vector<std::vector<double>>(
                               ny, std::vector<double>(next.size(), 0.0)));
    for (int u2 = 0; u2 < nu2; ++u2)
      for (int y = 0; y < ny; ++y) {
        const int k = u2 * ny + y;
        for (std::size_t a = 0; a < active[k].size(); ++a) {
          out.lambda[u2][y][active[k][a]] = sol.primal[lv[k][a]];
        }
      }
    // nu(x) raised to its largest feasible value for the chosen (q, lambda);
    // this only matters off the support of pi.
    out.support.resize(nx);
    for (int x = 0; x < nx; ++x) {
      double lowest = std::numeric_limits<double>::infinity();
      for (int u1 = 0; u1 < nu1; ++u1) {
        double rhs = 0.0;
        for (int u2 = 0; u2 < nu2; ++u2) {
          rhs += out.q[u2] * g.cost(t, x, u1, u2);
          for (int y = 0; y < ny; ++y) {
            const int k = u2 * ny + y;
            for (std::size_t a = 0; a < active[k].size(); ++a) {
              rhs += sol.primal[lv[k][a]] * coef.at(active[k][a], x, u1, u2, y);
            }
          }
        }
        lowest = std::min(lowest, rhs);
      }
      out.support[x] = pi[x] > 0.0 ? std::min(lowest, sol.primal[nv[x]])
                                   : lowest;
    }
    return out;
  }
}

inline StageSolution one_sided_backup_minmax(
    const Belief& pi, const AlphaSet& next, const OneSidedGame& g, int t,
    const LpOptions& opt = LpOptions()) {
  stage_internal::check_one_sided_inputs(pi, next, g, t);
  const OneSidedStage& s = g.stages[t];
  const int nx = s.states, nu1 = s.actions1, nu2 = s.actions2,
            ny = s.observations;
  stage_internal::ContinuationCoefficients coef(g, t, next);
  std::vector<int> support_states;
  for (int x = 0; x < nx; ++x) {
    if (pi[x] > 0.0) support_states.push_back(x);
  }

  std::vector<std::vector<int>> cuts(nu2 * ny);
  {
    std::vector<double> mu(nx * nu1);
    for (int x = 0; x < nx; ++x)
      for (int u1 = 0; u1 < nu1; ++u1) mu[x * nu1 + u1] = pi[x] / nu1;
    for (int u2 = 0; u2 < nu2; ++u2)
      for (int y = 0; y < ny; ++y) {
        cuts[u2 * ny + y].push_back(
            stage_internal::best_alpha(g, t, next, mu, u2, y).first);
      }
  }

  StageSolution out;
  while (true) {
    LinearProgram lp;
    // gamma1 only for states in the support of pi.
    std::vector<std::vector<int>> gv(nx);
    for (int x : support_states) {
      for (int u1 = 0; u1 < nu1; ++u1) gv[x].push_back(lp.add_variable(0.0));
    }
    std::vector<int> sv(nu2 * ny);
    for (int k = 0; k < nu2 * ny; ++k) {
      sv[k] = lp.add_variable(0.0, VarBound::kFree);
    }
    const int nuv = lp.add_variable(-1.0, VarBound::kFree);
    for (int u2 = 0; u2 < nu2; ++u2) {
      std::vector<LpTerm> terms;
      for (int x : support_states)
        for (int u1 = 0; u1 < nu1; ++u1) {
          const double c = pi[x] * g.cost(t, x, u1, u2);
          if (c != 0.0) terms.push_back({gv[x][u1], c});
        }
      for (int y = 0; y < ny; ++y) terms.push_back({sv[u2 * ny + y], 1.0});
      terms.push_back({nuv, -1.0});
      lp.add_inequality(std::move(terms), 0.0);
    }
    for (int u2 = 0; u2 < nu2; ++u2)
      for (int y = 0; y < ny; ++y) {
        const int k = u2 * ny + y;
        for (int l : cuts[k]) {
          std::vector<LpTerm> terms;
          for (int x : support_states)
            for (int u1 = 0; u1 < nu1; ++u1) {
              const double v = pi[x] * coef.at(l, x, u1, u2, y);
              if (v != 0.0) terms.push_back({gv[x][u1], v});
            }
          terms.push_back({sv[k], -1.0});
          lp.add_inequality(std::move(terms), 0.0);
        }
      }
    for (int x : support_states) {
      std::vector<LpTerm> terms;
      for (int u1 = 0; u1 < nu1; ++u1) terms.push_back({gv[x][u1], 1.0});
      lp.add_equality(std::move(terms), 1.0);
    }
    LpSolution sol = solve_lp_or_throw(
        lp, "minmax backup at stage " + std::to_string(t), opt);
    out.lp_iterations += sol.iterations;
    ++out.lp_solves;

    std::vector<double> gamma(static_cast<std::size_t>(nx) * nu1, 1.0 / nu1);
    for (int x : support_states) {
      double sum = 0.0;
      for (int u1 = 0; u1 < nu1; ++u1) {
        gamma[x * nu1 + u1] = std::max(sol.primal[gv[x][u1]], 0.0);
        sum += gamma[x * nu1 + u1];
      }
      for (int u1 = 0; u1 < nu1; ++u1) gamma[x * nu1 + u1] /= sum;
    }
    std::vector<double> mu(static_cast<std::size_t>(nx) * nu1);
    for (int x = 0; x < nx; ++x)
      for (int u1 = 0; u1 < nu1; ++u1)
        mu[x * nu1 + u1] = pi[x] * gamma[x * nu1 + u1];
    bool added = false;
    for (int u2 = 0; u2 < nu2; ++u2)
      for (int y = 0; y < ny; ++y) {
        const int k = u2 * ny + y;
        const double sk = sol.primal[sv[k]];
        auto [l, v] = stage_internal::best_alpha(g, t, next, mu, u2, y);
        if (v > sk + stage_internal::pricing_tolerance(sk) &&
            std::find(cuts[k].begin(), cuts[k].end(), l) == cuts[k].end()) {
          cuts[k].push_back(l);
          added = true;
        }
      }
    if (added) continue;
    out.value = -sol.value;
    out.gamma1 = Prescription(t, 1, nx, nu1, std::move(gamma));
    return out;
  }
}

// Stage value for a fixed player-1 prescription: max over u2 of
// c~(pi, gamma1, u2) + sum_y max_l <l, Q(pi, gamma1, (y, u2))>.
inline double one_sided_stage_objective(const Belief& pi,
                                        const Prescription& g1,
                                        const AlphaSet& next,
                                        const OneSidedGame& g, int t,
                                        std::vector<double>* per_action =
                                            nullptr) {
  stage_internal::check_one_sided_inputs(pi, next, g, t);
  const OneSidedStage& s = g.stages[t];
  std::vector<double> mu(static_cast<std::size_t>(s.states) * s.actions1);
  for (int x = 0; x < s.states; ++x)
    for (int u1 = 0; u1 < s.actions1; ++u1)
      mu[x * s.actions1 + u1] = pi[x] * g1(x, u1);
  double best = -std::numeric_limits<double>::infinity();
  if (per_action) per_action->assign(s.actions2, 0.0);
  for (int u2 = 0; u2 < s.actions2; ++u2) {
    double v = 0.0;
    for (int x = 0; x < s.states; ++x)
      for (int u1 = 0; u1 < s.actions1; ++u1)
        v += mu[x * s.actions1 + u1] * g.cost(t, x, u1, u2);
    for (int y = 0; y < s.observations; ++y) {
      v += stage_internal::best_alpha(g, t, next, mu, u2, y).second;
    }
    if (per_action) (*per_action)[u2] = v;
    best = std::max(best, v);
  }
  return best;
}

// ---------------------------------------------------------------------------
// General stages.

inline constexpr std::int64_t kDefaultPrescriptionCap = 4096;

struct TerminalStageSolution {
  double value = 0.0;
  Prescription gamma1;
  Prescription gamma2;
};

namespace stage_internal {

// Private-information rows that carry positive belief mass.
inline std::vector<int> relevant_rows(const Belief& pi, int player) {
  const BeliefShape& sh = pi.shape();
  const int rows = player == 1 ? sh.private1 : sh.private2;
  std::vector<int> out;
  for (int p = 0; p < rows; ++p) {
    double m = 0.0;
    for (int x = 0; x < sh.states; ++x) {
      if (player == 1) {
        for (int p2 = 0; p2 < sh.private2; ++p2) m += pi.at(x, p, p2);
      } else {
        for (int p1 = 0; p1 < sh.private1; ++p1) m += pi.at(x, p1, p);
      }
    }
    if (m > 0.0) out.push_back(p);
  }
  return out;
}

inline std::int64_t checked_power(std::int64_t base, std::size_t exp,
                                  std::int64_t cap, const char* what) {
  std::int64_t n = 1;
  for (std::size_t k = 0; k < exp; ++k) {
    n *= base;
    if (n > cap) {
      throw CapExceeded(std::string(what) + " exceeds the cap of " +
                        std::to_string(cap));
    }
  }
  return n;
}

// Pure prescriptions assigning an action to each relevant row; the other
// rows play uniformly. Enumerated in lexicographic order of the rows.
inline std::vector<Prescription> pure_prescriptions(
    int stage, int player, int rows, int actions,
    const std::vector<int>& relevant, std::int64_t cap) {
  const std::int64_t count = checked_power(actions, relevant.size(), cap,
                                           "pure prescription count");
  std::vector<Prescription> out;
  out.reserve(count);
  std::vector<int> choice(relevant.size(), 0);
  for (std::int64_t n = 0; n < count; ++n) {
    std::vector<double> d(static_cast<std::size_t>(rows) * actions,
                          1.0 / actions);
    for (std::size_t r = 0; r < relevant.size(); ++r) {
      for (int u = 0; u < actions; ++u) {
        d[relevant[r] * actions + u] = u == choice[r] ? 1.0 : 0.0;
      }
    }
    out.emplace_back(stage, player, rows, actions, std::move(d));
    for (int r = static_cast<int>(relevant.size()) - 1; r >= 0; --r) {
      if (++choice[r] < actions) break;
      choice[r] = 0;
    }
  }
  return out;
}

inline Prescription mix_prescriptions(const std::vector<Prescription>& pure,
                                      const std::vector<double>& weights) {
  const Prescription& first = pure.front();
  std::vector<double> d(first.values().size(), 0.0);
  for (std::size_t k = 0; k < pure.size(); ++k) {
    if (weights[k] == 0.0) continue;
    for (std::size_t e = 0; e < d.size(); ++e) {
      d[e] += weights[k] * pure[k].values()[e];
    }
  }
  // Renormalize rows against rounding.
  for (int p = 0; p < first.rows(); ++p) {
    double s = 0.0;
    for (int u = 0; u < first.cols(); ++u) s += d[p * first.cols() + u];
    for (int u = 0; u < first.cols(); ++u) d[p * first.cols() + u] /= s;
  }
  return Prescription(first.stage(), first.player(), first.rows(),
                      first.cols(), std::move(d));
}

}  // namespace stage_internal

// Exact stage game at the last stage, where the continuation is zero and
// c~ is bilinear in the two prescriptions.
inline TerminalStageSolution general_stage_game_T(
    const Belief& pi, const GameDefinition& g,
    std::int64_t cap = kDefaultPrescriptionCap,
    const LpOptions& opt = LpOptions()) {
  const int t = pi.stage();
  if (t != g.horizon() - 1) {
    throw ValidationError("general_stage_game_T needs the last stage");
  }
  if (!(pi.shape() == g.belief_shape(t))) {
    throw ValidationError("belief shape mismatch");
  }
  const StageSpaces& s = g.spaces(t);
  auto rows1 = stage_internal::relevant_rows(pi, 1);
  auto rows2 = stage_internal::relevant_rows(pi, 2);
  auto pure1 = stage_internal::pure_prescriptions(t, 1, s.private1, s.actions1,
                                                  rows1, cap);
  auto pure2 = stage_internal::pure_prescriptions(t, 2, s.private2, s.actions2,
                                                  rows2, cap);
  std::vector<std::vector<double>> m(pure1.size(),
                                     std::vector<double>(pure2.size()));
  for (std::size_t i = 0; i < pure1.size(); ++i)
    for (std::size_t j = 0; j < pure2.size(); ++j)
      m[i][j] = expected_stage_cost(pi, pure1[i], pure2[j], g);
  MatrixGameSolution mg = solve_matrix_game(m, opt);
  TerminalStageSolution out;
  out.value = mg.value;
  out.gamma1 = stage_internal::mix_prescriptions(pure1, mg.row_strategy);
  out.gamma2 = stage_internal::mix_prescriptions(pure2, mg.column_strategy);
  return out;
}

// Grid of prescriptions: each relevant row ranges over the simplex points
// with coordinates in multiples of 1/k; other rows are uniform.
inline std::vector<Prescription> prescription_grid(
    int stage, int player, int rows, int actions,
    const std::vector<int>& relevant, int k, std::int64_t cap) {
  // Simplex points of one row.
  std::vector<std::vector<int>> row_points;
  std::vector<int> cur(actions, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == actions - 1) {
      cur[pos] = left;
      row_points.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, k);
  const std::int64_t count = stage_internal::checked_power(
      static_cast<std::int64_t>(row_points.size()), relevant.size(), cap,
      "prescription grid size");
  std::vector<Prescription> out;
  out.reserve(count);
  std::vector<int> choice(relevant.size(), 0);
  for (std::int64_t n = 0; n < count; ++n) {
    std::vector<double> d(static_cast<std::size_t>(rows) * actions,
                          1.0 / actions);
    for (std::size_t r = 0; r < relevant.size(); ++r) {
      for (int u = 0; u < actions; ++u) {
        d[relevant[r] * actions + u] =
            static_cast<double>(row_points[choice[r]][u]) / k;
      }
    }
    out.emplace_back(stage, player, rows, actions, std::move(d));
    for (int r = static_cast<int>(relevant.size()) - 1; r >= 0; --r) {
      if (++choice[r] < static_cast<int>(row_points.size())) break;
      choice[r] = 0;
    }
  }
  return out;
}

struct StageBounds {
  double minmax = 0.0;
  double maxmin = 0.0;
  Prescription gamma1;  // grid minimizer of the max
  Prescription gamma2;  // grid maximizer of the min
  std::int64_t evaluations = 0;
};

using BeliefEvaluator = std::function<double(const Belief&)>;

// w_t(pi, gamma1, gamma2) = c~_t + sum_z P(z) V_{t+1}(F(pi, gamma1, gamma2, z)).
inline double stage_w(const Belief& pi, const Prescription& g1,
                      const Prescription& g2, const GameDefinition& g,
                      const BeliefEvaluator& next_value) {
  double w = expected_stage_cost(pi, g1, g2, g);
  if (pi.stage() + 1 >= g.horizon() && !next_value) return w;
  JointMeasure j = joint_update(pi, g1, g2, g);
  std::vector<double> pz = marginal_z(j);
  for (int z = 0; z < j.increments; ++z) {
    if (pz[z] <= kZeroProbability) continue;
    w += pz[z] * next_value(next_belief(j, z));
  }
  return w;
}

// Grid min-max and max-min of w_t. next_value may be empty at the last stage.
inline StageBounds general_stage_bounds(
    const Belief& pi, const BeliefEvaluator& next_value,
    const GameDefinition& g, int k,
    std::int64_t cap = std::int64_t{1} << 22) {
  if (k < 2) throw ValidationError("prescription grid resolution must be >= 2");
  const int t = pi.stage();
  if (t < 0 || t >= g.horizon() || !(pi.shape() == g.belief_shape(t))) {
    throw ValidationError("belief shape mismatch");
  }
  if (!next_value && t + 1 < g.horizon()) {
    throw ValidationError("a continuation is required before the last stage");
  }
  const StageSpaces& s = g.spaces(t);
  auto grid1 = prescription_grid(t, 1, s.private1, s.actions1,
                                 stage_internal::relevant_rows(pi, 1), k, cap);
  auto grid2 = prescription_grid(t, 2, s.private2, s.actions2,
                                 stage_internal::relevant_rows(pi, 2), k, cap);
  if (static_cast<double>(grid1.size()) * grid2.size() > cap) {
    throw CapExceeded("prescription grid product exceeds the cap of " +
                      std::to_string(cap));
  }
  std::vector<double> w(grid1.size() * grid2.size());
  for (std::size_t i = 0; i < grid1.size(); ++i)
    for (std::size_t j = 0; j < grid2.size(); ++j)
      w[i * grid2.size() + j] = stage_w(pi, grid1[i], grid2[j], g, next_value);
  StageBounds out;
  out.evaluations = static_cast<std::int64_t>(w.size());
  out.minmax = std::numeric_limits<double>::infinity();
  std::size_t arg1 = 0, arg2 = 0;
  for (std::size_t i = 0; i < grid1.size(); ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid2.size(); ++j) {
      mx = std::max(mx, w[i * grid2.size() + j]);
    }
    if (mx < out.minmax) {
      out.minmax = mx;
      arg1 = i;
    }
  }
  out.maxmin = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < grid2.size(); ++j) {
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid1.size(); ++i) {
      mn = std::min(mn, w[i * grid2.size() + j]);
    }
    if (mn > out.maxmin) {
      out.maxmin = mn;
      arg2 = j;
    }
  }
  out.gamma1 = grid1[arg1];
  out.gamma2 = grid2[arg2];
  return out;
}

}  // namespace cibgame

#endif  // CIBGAME_STAGE_HPP_
