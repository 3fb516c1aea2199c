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

// Backward induction drivers.
//
//  - solve_one_sided: point-based backups of the one-sided value function.
//    Every stored alpha vector is the support nu* of an exact stage LP, so
//    the result is a lower bound on the value.
//  - solve_general_bounds: grid estimates of the upper and lower value
//    functions of a general game, with barycentric interpolation between
//    belief grid points.
//  - solve_regression: fits max-of-m-affine value functions to sampled
//    backup values.

#ifndef CIBGAME_SOLVER_HPP_
#define CIBGAME_SOLVER_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cibgame/belief.hpp"
#include "cibgame/errors.hpp"
#include "cibgame/lp.hpp"
#include "cibgame/model.hpp"
#include "cibgame/stage.hpp"

namespace cibgame {

// Worker count from CIBGAME_THREADS (default 1).
inline int configured_threads() {
  const char* env = std::getenv("CIBGAME_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return std::clamp(n, 1, 256);
}

// Runs fn(i) for i in [0, n); results are written by index so the output
// does not depend on scheduling.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += threads) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Dirichlet(1, ..., 1) draw for (seed, stage, index). Draws for different
// indices are independent, so sample sets for growing N are nested.
inline std::vector<double> dirichlet_sample(std::uint64_t seed, int stage,
                                            int index, int dim) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stage),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(dim);
  double sum = 0.0;
  for (double& e : v) {
    e = -std::log(1.0 - u(rng));
    sum += e;
  }
  for (double& e : v) e /= sum;
  return v;
}

// ---------------------------------------------------------------------------
// One-sided point-based solver.

struct OneSidedConfig {
  int samples_per_stage = 200;
  std::uint64_t seed = 0;
  int bootstrap_sweeps = 1;
  int reachable_cap = 2000;
  int threads = 0;  // 0: CIBGAME_THREADS
  LpOptions lp;
};

// Where an alpha vector came from.
struct AlphaProvenance {
  int pass = 0;           // 0: preliminary, k: k-th bootstrap sweep
  std::string source;     // "vertex", "initial", "random", "reachable"
  int sample = 0;         // index within the stage's sample list
};

struct OneSidedValueFunction {
  // alpha[t] for t = 0..T; alpha[T] is the zero vector.
  std::vector<AlphaSet> alpha;
  std::vector<std::vector<AlphaProvenance>> provenance;
  // Beliefs backed up in the final pass, per stage 0..T-1.
  std::vector<std::vector<std::vector<double>>> samples;

  int horizon() const { return static_cast<int>(alpha.size()) - 1; }
  double value(int t, std::span<const double> pi) const {
    return pwlc_eval(alpha.at(t), pi);
  }
};

struct OneSidedStats {
  std::vector<int> samples_per_stage;
  std::vector<int> reachable_per_stage;
  std::vector<int> alphas_per_stage;
  std::int64_t lp_solves = 0;
  std::int64_t lp_iterations = 0;
};

struct OneSidedResult {
  OneSidedValueFunction vf;
  double value = 0.0;
  OneSidedStats stats;
};

namespace solver_internal {

struct Sample {
  std::vector<double> belief;
  std::string source;
};

inline void add_unique(std::vector<Sample>& list, std::vector<double> b,
                       const char* source) {
  for (const auto& s : list) {
    if (s.belief == b) return;
  }
  list.push_back({std::move(b), source});
}

inline std::vector<Sample> base_samples(const OneSidedGame& g, int t,
                                        const OneSidedConfig& cfg) {
  const int n = g.states(t);
  std::vector<Sample> out;
  for (int x = 0; x < n; ++x) {
    std::vector<double> v(n, 0.0);
    v[x] = 1.0;
    add_unique(out, std::move(v), "vertex");
  }
  if (t == 0) add_unique(out, g.initial, "initial");
  if (n > 1) {
    for (int i = 0; i < cfg.samples_per_stage; ++i) {
      add_unique(out, dirichlet_sample(cfg.seed, t, i, n), "random");
    }
  }
  return out;
}

// Backward pass over the given sample lists; fills vf.alpha[0..T-1].
inline void backward_pass(const OneSidedGame& g,
                          const std::vector<std::vector<Sample>>& samples,
                          int pass, const OneSidedConfig& cfg,
                          OneSidedValueFunction& vf, OneSidedStats& stats) {
  const int horizon = g.horizon();
  const int threads = cfg.threads > 0 ? cfg.threads : configured_threads();
  for (int t = horizon - 1; t >= 0; --t) {
    const auto& list = samples[t];
    std::vector<StageSolution> sols(list.size());
    parallel_for(static_cast<int>(list.size()), threads, [&](int i) {
      try {
        sols[i] = one_sided_backup_maximin(
            Belief(t, {g.states(t), 1, 1}, list[i].belief), vf.alpha[t + 1],
            g, t, cfg.lp);
      } catch (const SolverFailure& e) {
        throw SolverFailure(std::string(e.what()) + " (sample " +
                            std::to_string(i) + ", source " + list[i].source +
                            ")");
      }
    });
    AlphaSet a(t, g.states(t));
    std::vector<AlphaProvenance> prov;
    for (std::size_t i = 0; i < list.size(); ++i) {
      stats.lp_solves += sols[i].lp_solves;
      stats.lp_iterations += sols[i].lp_iterations;
      if (a.add(sols[i].support)) {
        prov.push_back({pass, list[i].source, static_cast<int>(i)});
      }
    }
    vf.alpha[t] = std::move(a);
    vf.provenance[t] = std::move(prov);
  }
}

// Beliefs reachable from the initial belief when player 1 follows the
// minmax prescriptions of the current value function.
inline std::vector<std::vector<std::vector<double>>> forward_reachable(
    const OneSidedGame& g, const OneSidedValueFunction& vf,
    const OneSidedConfig& cfg) {
  const int horizon = g.horizon();
  std::vector<std::vector<std::vector<double>>> reach(horizon);
  reach[0].push_back(g.initial);
  for (int t = 0; t + 1 < horizon; ++t) {
    for (const auto& b : reach[t]) {
      Belief pi(t, {g.states(t), 1, 1}, b);
      StageSolution s =
          one_sided_backup_minmax(pi, vf.alpha[t + 1], g, t, cfg.lp);
      for (int z = 0; z < g.increments(t); ++z) {
        const auto [y2, u2] =
            split_one_sided_increment(z, g.stages[t].actions2);
        auto q = one_sided_q(b, s.gamma1, y2, u2, g, t);
        double r = 0.0;
        for (double v : q) r += v;
        if (r <= kZeroProbability) continue;
        Belief next = one_sided_next_belief(pi, s.gamma1, z, g);
        auto& dst = reach[t + 1];
        if (std::find(dst.begin(), dst.end(), next.values()) == dst.end() &&
            static_cast<int>(dst.size()) < cfg.reachable_cap) {
          dst.push_back(next.values());
        }
      }
    }
  }
  return reach;
}

}  // namespace solver_internal

inline OneSidedResult solve_one_sided(const OneSidedGame& g,
                                      const OneSidedConfig& cfg = {}) {
  validate_one_sided(g);
  if (cfg.samples_per_stage < 0) {
    throw ValidationError("samples_per_stage must be >= 0");
  }
  const int horizon = g.horizon();
  OneSidedResult res;
  OneSidedValueFunction& vf = res.vf;
  vf.alpha.resize(horizon + 1);
  vf.provenance.resize(horizon + 1);
  vf.alpha[horizon] = AlphaSet::zero(horizon, g.states(horizon));
  vf.provenance[horizon] = {{0, "terminal", 0}};

  std::vector<std::vector<solver_internal::Sample>> samples(horizon);
  for (int t = 0; t < horizon; ++t) {
    samples[t] = solver_internal::base_samples(g, t, cfg);
  }
  solver_internal::backward_pass(g, samples, 0, cfg, vf, res.stats);

  std::vector<int> reachable(horizon, 0);
  for (int sweep = 1; sweep <= cfg.bootstrap_sweeps; ++sweep) {
    auto reach = solver_internal::forward_reachable(g, vf, cfg);
    for (int t = 0; t < horizon; ++t) {
      reachable[t] = static_cast<int>(reach[t].size());
      for (auto& b : reach[t]) {
        solver_internal::add_unique(samples[t], std::move(b), "reachable");
      }
    }
    solver_internal::backward_pass(g, samples, sweep, cfg, vf, res.stats);
  }

  vf.samples.resize(horizon);
  for (int t = 0; t < horizon; ++t) {
    for (const auto& s : samples[t]) vf.samples[t].push_back(s.belief);
    res.stats.samples_per_stage.push_back(
        static_cast<int>(samples[t].size()));
    res.stats.alphas_per_stage.push_back(vf.alpha[t].size());
  }
  res.stats.reachable_per_stage = reachable;
  res.value = pwlc_eval(vf.alpha[0], g.initial);
  return res;
}

// ---------------------------------------------------------------------------
// Regular simplex grids and barycentric (Freudenthal) interpolation.

class SimplexGrid {
 public:
  SimplexGrid() = default;
  SimplexGrid(int dim, int resolution) : dim_(dim), k_(resolution) {
    if (dim < 1 || resolution < 1) {
      throw ValidationError("simplex grid needs dim >= 1 and resolution >= 1");
    }
    // binom_[a][b] = C(a, b), enough for compositions of k into dim parts.
    const int top = k_ + dim_;
    binom_.assign(top + 1, std::vector<double>(dim_ + 1, 0.0));
    for (int a = 0; a <= top; ++a) {
      binom_[a][0] = 1.0;
      for (int b = 1; b <= std::min(a, dim_); ++b) {
        binom_[a][b] = binom_[a - 1][b - 1] + (b <= a - 1 ? binom_[a - 1][b]
                                                          : 0.0);
      }
    }
  }

  int dim() const { return dim_; }
  int resolution() const { return k_; }
  std::int64_t size() const { return compositions(k_, dim_); }

  // Point with index `rank` as integer counts summing to k.
  std::vector<int> point(std::int64_t rank) const {
    std::vector<int> c(dim_, 0);
    int left = k_;
    for (int i = 0; i < dim_ - 1; ++i) {
      const int parts = dim_ - i - 1;
      // Larger leading counts come first.
      int v = left;
      while (true) {
        const std::int64_t block = compositions(left - v, parts);
        if (rank < block) break;
        rank -= block;
        --v;
      }
      c[i] = v;
      left -= v;
    }
    c[dim_ - 1] = left;
    return c;
  }

  std::int64_t rank(const std::vector<int>& c) const {
    std::int64_t r = 0;
    int left = k_;
    for (int i = 0; i < dim_ - 1; ++i) {
      const int parts = dim_ - i - 1;
      for (int v = left; v > c[i]; --v) r += compositions(left - v, parts);
      left -= c[i];
    }
    return r;
  }

  std::vector<double> coordinates(std::int64_t rank) const {
    std::vector<int> c = point(rank);
    std::vector<double> b(dim_);
    for (int i = 0; i < dim_; ++i) b[i] = static_cast<double>(c[i]) / k_;
    return b;
  }

  // Grid vertices and weights of the Freudenthal simplex containing b.
  std::vector<std::pair<std::int64_t, double>> interpolation(
      std::span<const double> b) const {
    if (static_cast<int>(b.size()) != dim_) {
      throw ValidationError("interpolation dimension mismatch");
    }
    // Cumulative coordinates x_i = k * sum_{j >= i} b_j, x_0 = k.
    std::vector<double> x(dim_, 0.0);
    double acc = 0.0;
    for (int i = dim_ - 1; i >= 1; --i) {
      if (b[i] < -1e-12) {
        throw ValidationError("interpolation point outside the simplex");
      }
      acc += std::max(b[i], 0.0);
      x[i] = std::min(acc * k_, static_cast<double>(k_));
    }
    x[0] = k_;
    std::vector<int> base(dim_);
    std::vector<double> frac(dim_, 0.0);
    for (int i = 0; i < dim_; ++i) {
      base[i] = static_cast<int>(std::floor(x[i]));
      if (base[i] >= k_) base[i] = k_;
      frac[i] = x[i] - base[i];
      if (base[i] == k_) frac[i] = 0.0;
    }
    std::vector<int> order;
    for (int i = 1; i < dim_; ++i) order.push_back(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int c) { return frac[a] > frac[c]; });
    std::vector<std::pair<std::int64_t, double>> out;
    std::vector<int> w = base;
    auto emit = [&](double weight) {
      if (weight <= 0.0) return;
      std::vector<int> counts(dim_);
      for (int i = 0; i < dim_; ++i) {
        counts[i] = w[i] - (i + 1 < dim_ ? w[i + 1] : 0);
      }
      for (int c : counts) {
        if (c < 0) throw SolverFailure("interpolation left the simplex");
      }
      out.push_back({rank(counts), weight});
    };
    const int m = static_cast<int>(order.size());
    emit(1.0 - (m > 0 ? frac[order[0]] : 0.0));
    for (int j = 0; j < m; ++j) {
      w[order[j]] += 1;
      const double next = j + 1 < m ? frac[order[j + 1]] : 0.0;
      emit(frac[order[j]] - next);
    }
    return out;
  }

 private:
  // Number of compositions of n into `parts` nonnegative parts.
  std::int64_t compositions(int n, int parts) const {
    if (parts == 0) return n == 0 ? 1 : 0;
    return static_cast<std::int64_t>(binom_[n + parts - 1][parts - 1]);
  }

  int dim_ = 1;
  int k_ = 1;
  std::vector<std::vector<double>> binom_;
};

// ---------------------------------------------------------------------------
// General-model bounds.

struct GeneralConfig {
  int belief_grid = 25;
  int prescription_grid = 10;
  std::int64_t belief_grid_cap = 200000;
  std::int64_t prescription_cap = std::int64_t{1} << 22;
  std::int64_t pure_prescription_cap = kDefaultPrescriptionCap;
  int threads = 0;
  LpOptions lp;
};

struct GeneralValueTables {
  // Index t = 0..T-1; stage 0 has no table (only the initial belief).
  std::vector<SimplexGrid> grids;
  std::vector<std::vector<double>> upper;
  std::vector<std::vector<double>> lower;
  std::string interpolation = "freudenthal";

  double interpolate(int t, const std::vector<double>& table,
                     std::span<const double> b) const {
    double v = 0.0;
    for (const auto& [idx, w] : grids.at(t).interpolation(b)) {
      v += w * table[idx];
    }
    return v;
  }
};

struct GeneralBoundsResult {
  GeneralValueTables tables;
  double upper = 0.0;  // minmax estimate of E V^u_1
  double lower = 0.0;  // maxmin estimate of E V^l_1
  std::int64_t stage_evaluations = 0;
};

inline GeneralBoundsResult solve_general_bounds(const GameDefinition& g,
                                                const GeneralConfig& cfg = {}) {
  const auto violations = validate_game(g);
  if (!violations.empty()) {
    throw ValidationError("invalid game: " + violations.front().describe());
  }
  if (cfg.belief_grid < 1 || cfg.prescription_grid < 2) {
    throw ValidationError("grid resolutions out of range");
  }
  const int horizon = g.horizon();
  const int threads = cfg.threads > 0 ? cfg.threads : configured_threads();
  GeneralBoundsResult res;
  GeneralValueTables& tab = res.tables;
  tab.grids.resize(horizon);
  tab.upper.resize(horizon);
  tab.lower.resize(horizon);

  auto continuation = [&](int t, bool upper) -> BeliefEvaluator {
    if (t + 1 >= horizon) return {};
    return [&tab, t, upper](const Belief& b) {
      return tab.interpolate(t + 1, upper ? tab.upper[t + 1] : tab.lower[t + 1],
                             b.data());
    };
  };

  // Solves the stage problem at one belief; returns (upper, lower).
  auto stage_values = [&](const Belief& pi, std::int64_t& evals)
      -> std::pair<double, double> {
    const int t = pi.stage();
    if (t == horizon - 1) {
      const double v =
          general_stage_game_T(pi, g, cfg.pure_prescription_cap, cfg.lp).value;
      evals += 1;
      return {v, v};
    }
    const bool same = tab.upper[t + 1] == tab.lower[t + 1];
    StageBounds up = general_stage_bounds(pi, continuation(t, true), g,
                                          cfg.prescription_grid,
                                          cfg.prescription_cap);
    evals += up.evaluations;
    if (same) return {up.minmax, up.maxmin};
    StageBounds lo = general_stage_bounds(pi, continuation(t, false), g,
                                          cfg.prescription_grid,
                                          cfg.prescription_cap);
    evals += lo.evaluations;
    return {up.minmax, lo.maxmin};
  };

  for (int t = horizon - 1; t >= 1; --t) {
    const BeliefShape shape = g.belief_shape(t);
    SimplexGrid grid(shape.size(), cfg.belief_grid);
    if (grid.size() > cfg.belief_grid_cap) {
      throw CapExceeded("belief grid at stage " + std::to_string(t) + " has " +
                        std::to_string(grid.size()) + " points, cap " +
                        std::to_string(cfg.belief_grid_cap));
    }
    const int n = static_cast<int>(grid.size());
    std::vector<double> up(n), lo(n);
    std::vector<std::int64_t> evals(n, 0);
    parallel_for(n, threads, [&](int i) {
      Belief b(t, shape, grid.coordinates(i));
      auto [u, l] = stage_values(b, evals[i]);
      up[i] = u;
      lo[i] = l;
    });
    for (auto e : evals) res.stage_evaluations += e;
    tab.grids[t] = std::move(grid);
    tab.upper[t] = std::move(up);
    tab.lower[t] = std::move(lo);
  }
  Belief initial(0, g.belief_shape(0),
                 std::vector<double>(g.initial().begin(), g.initial().end()));
  std::int64_t evals = 0;
  auto [u, l] = stage_values(initial, evals);
  res.stage_evaluations += evals;
  res.upper = u;
  res.lower = l;
  return res;
}

// Bounds at a coarse and a fine grid level, with a refinement slack that
// widens the fine bracket. The slack adds two measured terms: the largest move
// of either bound between the levels, and, summed over tabulated stages, the
// largest gap between the coarse interpolant and the fine table at the fine
// grid points. Stage backups are non-expansive in the sup norm, so table error
// at stage t+1 moves stage-t values by at most that much.
struct GeneralBracket {
  GeneralBoundsResult coarse;
  GeneralBoundsResult fine;
  double bound_slack = 0.0;
  double table_slack = 0.0;
  double slack = 0.0;

  double lower() const { return fine.lower - slack; }
  double upper() const { return fine.upper + slack; }
};

inline GeneralBracket solve_general_bracket(const GameDefinition& g,
                                            const GeneralConfig& coarse,
                                            const GeneralConfig& fine) {
  GeneralBracket b;
  b.coarse = solve_general_bounds(g, coarse);
  b.fine = solve_general_bounds(g, fine);
  b.bound_slack = std::max(std::abs(b.fine.upper - b.coarse.upper),
                           std::abs(b.fine.lower - b.coarse.lower));
  const GeneralValueTables& c = b.coarse.tables;
  const GeneralValueTables& f = b.fine.tables;
  for (int t = 1; t < g.horizon(); ++t) {
    double worst = 0.0;
    for (std::int64_t i = 0; i < f.grids[t].size(); ++i) {
      const std::vector<double> pt = f.grids[t].coordinates(i);
      worst = std::max(worst,
                       std::abs(c.interpolate(t, c.upper[t], pt) - f.upper[t][i]));
      worst = std::max(worst,
                       std::abs(c.interpolate(t, c.lower[t], pt) - f.lower[t][i]));
    }
    b.table_slack += worst;
  }
  b.slack = b.bound_slack + b.table_slack;
  return b;
}

// ---------------------------------------------------------------------------
// Regression solver.

struct RegressionConfig {
  int pieces = 4;
  int samples = 100;
  std::uint64_t seed = 0;
  int epochs = 2000;
  double step = 0.5;       // initial step, scaled by 1 / (1 + epoch / decay)
  double decay = 200.0;
  int divergence_window = 10;
  LpOptions lp;
};

struct RegressionResult {
  std::vector<AlphaSet> alpha;       // t = 0..T, alpha[T] = {0}
  std::vector<double> training_mse;  // per stage 0..T-1
  std::vector<int> epochs_run;
  double value = 0.0;                // fitted value at the initial belief
};

namespace solver_internal {

inline double fit_mse(const std::vector<std::vector<double>>& pieces,
                      const std::vector<std::vector<double>>& xs,
                      const std::vector<double>& ys) {
  double err = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& l : pieces) best = std::max(best, dot(l, xs[i]));
    err += (best - ys[i]) * (best - ys[i]);
  }
  return err / static_cast<double>(xs.size());
}

}  // namespace solver_internal

inline RegressionResult solve_regression(const OneSidedGame& g,
                                         const RegressionConfig& cfg = {}) {
  validate_one_sided(g);
  if (cfg.pieces < 1) throw ValidationError("pieces must be >= 1");
  if (cfg.samples < 1) throw ValidationError("samples must be >= 1");
  const int horizon = g.horizon();
  RegressionResult res;
  res.alpha.resize(horizon + 1);
  res.alpha[horizon] = AlphaSet::zero(horizon, g.states(horizon));
  res.training_mse.assign(horizon, 0.0);
  res.epochs_run.assign(horizon, 0);

  for (int t = horizon - 1; t >= 0; --t) {
    const int n = g.states(t);
    std::vector<std::vector<double>> xs;
    for (int x = 0; x < n; ++x) {
      std::vector<double> v(n, 0.0);
      v[x] = 1.0;
      xs.push_back(std::move(v));
    }
    if (t == 0) xs.push_back(g.initial);
    for (int i = 0; static_cast<int>(xs.size()) < cfg.samples + n + (t == 0);
         ++i) {
      xs.push_back(dirichlet_sample(cfg.seed, t, i, n));
      if (n == 1) break;
    }
    std::vector<double> ys(xs.size());
    std::vector<std::vector<double>> candidates;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      Belief b(t, {n, 1, 1}, xs[i]);
      ys[i] = one_sided_backup_minmax(b, res.alpha[t + 1], g, t, cfg.lp).value;
      auto sup = one_sided_backup_maximin(b, res.alpha[t + 1], g, t, cfg.lp)
                     .support;
      if (std::find(candidates.begin(), candidates.end(), sup) ==
          candidates.end()) {
        candidates.push_back(std::move(sup));
      }
    }
    // Greedy initialization from the backup supports.
    std::vector<std::vector<double>> pieces;
    double err = std::numeric_limits<double>::infinity();
    while (static_cast<int>(pieces.size()) < cfg.pieces) {
      int best = -1;
      double best_err = err;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        pieces.push_back(candidates[c]);
        const double e = solver_internal::fit_mse(pieces, xs, ys);
        pieces.pop_back();
        if (e < best_err - 1e-15) {
          best_err = e;
          best = static_cast<int>(c);
        }
      }
      if (best < 0) break;
      pieces.push_back(candidates[best]);
      err = best_err;
    }
    // Subgradient descent on the squared error; keeps the best iterate.
    std::vector<std::vector<double>> best_pieces = pieces;
    double best_err = err;
    double prev = err;
    int rising = 0;
    int epoch = 0;
    for (; epoch < cfg.epochs && best_err > 1e-14; ++epoch) {
      std::vector<std::vector<double>> grad(pieces.size(),
                                            std::vector<double>(n, 0.0));
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const int k = [&] {
          int arg = 0;
          double v = -std::numeric_limits<double>::infinity();
          for (std::size_t p = 0; p < pieces.size(); ++p) {
            const double d = dot(pieces[p], xs[i]);
            if (d > v) {
              v = d;
              arg = static_cast<int>(p);
            }
          }
          return arg;
        }();
        const double r = dot(pieces[k], xs[i]) - ys[i];
        for (int x = 0; x < n; ++x) {
          grad[k][x] += 2.0 * r * xs[i][x] / static_cast<double>(xs.size());
        }
      }
      const double eta = cfg.step / (1.0 + epoch / cfg.decay);
      for (std::size_t p = 0; p < pieces.size(); ++p)
        for (int x = 0; x < n; ++x) pieces[p][x] -= eta * grad[p][x];
      const double e = solver_internal::fit_mse(pieces, xs, ys);
      if (!std::isfinite(e)) {
        throw SolverFailure("regression diverged at stage " +
                            std::to_string(t) + ", epoch " +
                            std::to_string(epoch) + ": non-finite error");
      }
      rising = e > prev ? rising + 1 : 0;
      if (rising >= cfg.divergence_window) {
        throw SolverFailure(
            "regression diverged at stage " + std::to_string(t) + ": error " +
            "rose for " + std::to_string(rising) + " epochs (from " +
            std::to_string(best_err) + " to " + std::to_string(e) +
            ", step " + std::to_string(eta) + ")");
      }
      prev = e;
      if (e < best_err) {
        best_err = e;
        best_pieces = pieces;
      }
    }
    AlphaSet a(t, n);
    for (auto& p : best_pieces) a.add(std::move(p));
    res.alpha[t] = std::move(a);
    res.training_mse[t] = best_err;
    res.epochs_run[t] = epoch;
  }
  res.value = pwlc_eval(res.alpha[0], g.initial);
  return res;
}

}  // namespace cibgame

#endif  // CIBGAME_SOLVER_HPP_
