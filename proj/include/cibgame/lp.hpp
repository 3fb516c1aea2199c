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

// Dense two-phase primal simplex.
//
//   maximize    c.v
//   subject to  A v <= b,  E v = f,  v_j >= 0 or free.
//
// Free variables are split into a difference of nonnegative parts. Every row
// gets one column that is a unit vector in the initial tableau (its slack, or
// an artificial when the row is an equality or had to be negated), and these
// columns are kept to the end so that the duals can be read off the final
// reduced costs.

#ifndef CIBGAME_LP_HPP_
#define CIBGAME_LP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cibgame/errors.hpp"

namespace cibgame {

enum class VarBound { kNonnegative, kFree };

struct LpTerm {
  int var;
  double coef;
};

struct LpRow {
  std::vector<LpTerm> terms;
  double rhs = 0.0;
};

class LinearProgram {
 public:
  int add_variable(double objective, VarBound bound = VarBound::kNonnegative) {
    objective_.push_back(objective);
    bounds_.push_back(bound);
    return num_variables() - 1;
  }
  int add_inequality(std::vector<LpTerm> terms, double rhs) {
    inequalities_.push_back({std::move(terms), rhs});
    return static_cast<int>(inequalities_.size()) - 1;
  }
  int add_equality(std::vector<LpTerm> terms, double rhs) {
    equalities_.push_back({std::move(terms), rhs});
    return static_cast<int>(equalities_.size()) - 1;
  }
  void set_objective(int var, double value) { objective_.at(var) = value; }

  int num_variables() const { return static_cast<int>(objective_.size()); }
  int num_inequalities() const {
    return static_cast<int>(inequalities_.size());
  }
  int num_equalities() const { return static_cast<int>(equalities_.size()); }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<VarBound>& bounds() const { return bounds_; }
  const std::vector<LpRow>& inequalities() const { return inequalities_; }
  const std::vector<LpRow>& equalities() const { return equalities_; }

  // Throws ValidationError on out-of-range variables or non-finite data.
  void check() const {
    auto finite = [](double v) { return std::isfinite(v); };
    for (double c : objective_) {
      if (!finite(c)) throw ValidationError("lp: non-finite objective");
    }
    auto check_rows = [&](const std::vector<LpRow>& rows) {
      for (const LpRow& r : rows) {
        if (!finite(r.rhs)) throw ValidationError("lp: non-finite rhs");
        for (const LpTerm& t : r.terms) {
          if (t.var < 0 || t.var >= num_variables()) {
            throw ValidationError("lp: row references unknown variable " +
                                  std::to_string(t.var));
          }
          if (!finite(t.coef)) {
            throw ValidationError("lp: non-finite coefficient");
          }
        }
      }
    };
    check_rows(inequalities_);
    check_rows(equalities_);
  }

 private:
  std::vector<double> objective_;
  std::vector<VarBound> bounds_;
  std::vector<LpRow> inequalities_;
  std::vector<LpRow> equalities_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  std::vector<double> primal;
  // Inequality rows first, then equality rows. Inequality duals are >= 0.
  std::vector<double> dual;
  std::int64_t iterations = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};


struct LpOptions {
  double feasibility_tolerance = 1e-9;
  double pivot_tolerance = 1e-10;
  std::int64_t max_iterations = 200000;
  // 0: silent; 1: phase summaries; 2: full tableau after every pivot.
  int verbosity = 0;
};

namespace lp_internal {

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0),
        basis_(rows, -1) {}

  double& at(int r, int c) {
    return data_[static_cast<std::size_t>(r) * (cols_ + 1) + c];
  }
  double at(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * (cols_ + 1) + c];
  }
  double& rhs(int r) { return at(r, cols_); }
  double rhs(int r) const { return at(r, cols_); }
  // Objective row is stored at index rows_: reduced costs d_j = z_j - c_j.
  double& cost(int c) { return at(rows_, c); }
  double cost(int c) const { return at(rows_, c); }
  double& objective() { return at(rows_, cols_); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::vector<int>& basis() { return basis_; }

  static constexpr double kCancellation = 1e-11;

  void pivot(int r, int c) {
    const int width = cols_ + 1;
    double* prow = &data_[static_cast<std::size_t>(r) * width];
    const double inv = 1.0 / prow[c];
    for (int j = 0; j < width; ++j) prow[j] *= inv;
    prow[c] = 1.0;
    for (int i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      double* row = &data_[static_cast<std::size_t>(i) * width];
      const double f = row[c];
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) {
        if (prow[j] == 0.0) continue;
        const double d = f * prow[j];
        const double v = row[j] - d;
        // Cancellation residue is flushed to an exact zero.
        row[j] = std::abs(v) <= kCancellation * std::abs(d) ? 0.0 : v;
      }
      row[c] = 0.0;
    }
    basis_[r] = c;
  }

  void dump(std::ostream& os, const char* title) const {
    os << "-- " << title << " (" << rows_ << "x" << cols_ << ")\n";
    for (int i = 0; i <= rows_; ++i) {
      os << (i == rows_ ? "  z |" : "    |");
      for (int j = 0; j <= cols_; ++j) {
        os << ' ' << std::setw(10) << std::setprecision(4) << at(i, j);
      }
      if (i < rows_) os << "   basis " << basis_[i];
      os << '\n';
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
  std::vector<int> basis_;
};

// Runs primal simplex on the current objective row. Columns with
// allowed[j] == false never enter.
inline LpStatus run_simplex(Tableau& tab, const std::vector<char>& allowed,
                            const LpOptions& opt, std::int64_t& iterations) {
  const int m = tab.rows();
  const int n = tab.cols();
  constexpr double kPivotShare = 1e-2;
  constexpr double kRayTolerance = 1e-7;
  std::vector<char> skip(n, 0);
  while (true) {
    if (iterations >= opt.max_iterations) return LpStatus::kIterationLimit;
    // Bland: the lowest-index improving column enters.
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      if (allowed[j] && !skip[j] && tab.cost(j) < -opt.feasibility_tolerance) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return LpStatus::kOptimal;

    // Two-pass ratio test: the bound allows each row a feasibility slack,
    // then the leaving row is picked among rows within it, avoiding tiny
    // pivot elements.
    double bound = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double a = tab.at(i, enter);
      if (a <= opt.pivot_tolerance) continue;
      const double slack = std::max(tab.rhs(i), 0.0) + opt.feasibility_tolerance;
      bound = std::min(bound, slack / a);
    }
    if (!std::isfinite(bound)) {
      // A ray whose reduced cost is within drift of zero is skipped until
      // the next pivot.
      if (tab.cost(enter) > -kRayTolerance) {
        skip[enter] = 1;
        continue;
      }
      return LpStatus::kUnbounded;
    }
    double amax = 0.0;
    for (int i = 0; i < m; ++i) {
      const double a = tab.at(i, enter);
      if (a <= opt.pivot_tolerance) continue;
      if (std::max(tab.rhs(i), 0.0) / a <= bound) amax = std::max(amax, a);
    }
    // Ties go to the lowest basic column index among well-sized pivots.
    int leave = -1;
    for (int i = 0; i < m; ++i) {
      const double a = tab.at(i, enter);
      if (a <= opt.pivot_tolerance || a < kPivotShare * amax) continue;
      if (std::max(tab.rhs(i), 0.0) / a > bound) continue;
      if (leave < 0 || tab.basis()[i] < tab.basis()[leave]) leave = i;
    }
    std::fill(skip.begin(), skip.end(), 0);
    // The leaving row may sit slightly below zero after earlier pivots.
    tab.rhs(leave) = std::max(tab.rhs(leave), 0.0);
    tab.pivot(leave, enter);
    ++iterations;
    if (opt.verbosity >= 2) {
      std::cerr << "pivot " << iterations << ": enter " << enter << " leave row "
                << leave << "\n";
      tab.dump(std::cerr, "tableau");
    }
  }
}

}  // namespace lp_internal

inline LpSolution solve_lp(const LinearProgram& lp,
                           const LpOptions& opt = LpOptions()) {
  lp.check();
  using lp_internal::Tableau;
  const int nv = lp.num_variables();
  const int mi = lp.num_inequalities();
  const int me = lp.num_equalities();
  const int m = mi + me;

  // Structural columns: one per nonnegative variable, two per free one.
  std::vector<int> pos_col(nv), neg_col(nv, -1);
  int ncols = 0;
  for (int j = 0; j < nv; ++j) {
    pos_col[j] = ncols++;
    if (lp.bounds()[j] == VarBound::kFree) neg_col[j] = ncols++;
  }
  const int structural = ncols;

  std::vector<double> sign(m, 1.0);
  std::vector<int> unit_col(m, -1);
  std::vector<char> is_artificial;
  for (int i = 0; i < m; ++i) {
    const LpRow& r = i < mi ? lp.inequalities()[i] : lp.equalities()[i - mi];
    if (r.rhs < 0.0) sign[i] = -1.0;
  }
  // Slack columns for inequality rows.
  std::vector<int> slack_col(mi, -1);
  for (int i = 0; i < mi; ++i) slack_col[i] = ncols++;
  // Artificials for rows without a usable unit column.
  for (int i = 0; i < m; ++i) {
    if (i < mi && sign[i] > 0.0) {
      unit_col[i] = slack_col[i];
    } else {
      unit_col[i] = ncols++;
    }
  }
  is_artificial.assign(ncols, 0);
  for (int i = 0; i < m; ++i) {
    if (unit_col[i] >= structural + mi) is_artificial[unit_col[i]] = 1;
  }

  Tableau tab(m, ncols);
  for (int i = 0; i < m; ++i) {
    const LpRow& r = i < mi ? lp.inequalities()[i] : lp.equalities()[i - mi];
    for (const LpTerm& t : r.terms) {
      tab.at(i, pos_col[t.var]) += sign[i] * t.coef;
      if (neg_col[t.var] >= 0) tab.at(i, neg_col[t.var]) -= sign[i] * t.coef;
    }
    if (i < mi) tab.at(i, slack_col[i]) = sign[i];
    tab.at(i, unit_col[i]) = 1.0;
    tab.rhs(i) = sign[i] * r.rhs;
    tab.basis()[i] = unit_col[i];
  }

  LpSolution sol;
  std::int64_t iterations = 0;
  std::vector<char> allowed(ncols, 1);

  // Phase 1: maximize -sum(artificials).
  bool any_artificial = false;
  for (int j = 0; j < ncols; ++j) any_artificial |= is_artificial[j] != 0;
  if (any_artificial) {
    for (int j = 0; j <= ncols; ++j) tab.cost(j) = 0.0;
    for (int i = 0; i < m; ++i) {
      if (!is_artificial[unit_col[i]]) continue;
      for (int j = 0; j <= ncols; ++j) tab.cost(j) -= tab.at(i, j);
    }
    for (int i = 0; i < m; ++i) tab.cost(unit_col[i]) = 0.0;
    if (opt.verbosity >= 2) tab.dump(std::cerr, "phase 1 start");
    const LpStatus s = lp_internal::run_simplex(tab, allowed, opt, iterations);
    sol.iterations = iterations;
    if (s == LpStatus::kIterationLimit) {
      sol.status = s;
      return sol;
    }
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) {
      if (is_artificial[tab.basis()[i]]) infeas += std::max(tab.rhs(i), 0.0);
    }
    if (opt.verbosity >= 1) {
      std::cerr << "lp phase 1: " << iterations << " pivots, infeasibility "
                << infeas << "\n";
    }
    if (infeas > opt.feasibility_tolerance * std::max(1, m)) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (!is_artificial[tab.basis()[i]]) continue;
      int best = -1;
      double best_abs = opt.pivot_tolerance * 1e3;
      for (int j = 0; j < ncols; ++j) {
        if (is_artificial[j]) continue;
        const double a = std::abs(tab.at(i, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best >= 0) {
        tab.pivot(i, best);
        ++iterations;
      }
    }
    for (int j = 0; j < ncols; ++j) {
      if (is_artificial[j]) allowed[j] = 0;
    }
  }

  // Phase 2: reduced costs d_j = c_B B^-1 a_j - c_j for the real objective.
  std::vector<double> col_cost(ncols, 0.0);
  for (int j = 0; j < nv; ++j) {
    col_cost[pos_col[j]] = lp.objective()[j];
    if (neg_col[j] >= 0) col_cost[neg_col[j]] = -lp.objective()[j];
  }
  for (int j = 0; j <= ncols; ++j) tab.cost(j) = j < ncols ? -col_cost[j] : 0.0;
  for (int i = 0; i < m; ++i) {
    const double cb = col_cost[tab.basis()[i]];
    if (cb == 0.0) continue;
    for (int j = 0; j <= ncols; ++j) tab.cost(j) += cb * tab.at(i, j);
  }
  if (opt.verbosity >= 2) tab.dump(std::cerr, "phase 2 start");
  const LpStatus s = lp_internal::run_simplex(tab, allowed, opt, iterations);
  sol.iterations = iterations;
  sol.status = s;
  if (opt.verbosity >= 1) {
    std::cerr << "lp phase 2: status " << to_string(s) << ", " << iterations
              << " pivots total\n";
  }
  if (s != LpStatus::kOptimal) return sol;

  std::vector<double> colval(ncols, 0.0);
  for (int i = 0; i < m; ++i) colval[tab.basis()[i]] = tab.rhs(i);
  sol.primal.assign(nv, 0.0);
  double value = 0.0;
  for (int j = 0; j < nv; ++j) {
    double v = std::max(colval[pos_col[j]], 0.0);
    if (neg_col[j] >= 0) v -= std::max(colval[neg_col[j]], 0.0);
    sol.primal[j] = v;
    value += lp.objective()[j] * v;
  }
  sol.value = value;
  // y'_i = d_{unit(i)} + c_{unit(i)}; unit columns carry zero cost.
  sol.dual.assign(m, 0.0);
  for (int i = 0; i < m; ++i) sol.dual[i] = sign[i] * tab.cost(unit_col[i]);
  for (int i = 0; i < mi; ++i) sol.dual[i] = std::max(sol.dual[i], 0.0);
  return sol;
}

// Solves an LP that must be feasible and bounded; throws SolverFailure with
// the given context otherwise.
inline LpSolution solve_lp_or_throw(const LinearProgram& lp,
                                    const std::string& context,
                                    const LpOptions& opt = LpOptions()) {
  LpSolution s = solve_lp(lp, opt);
  if (!s.optimal()) {
    throw SolverFailure(context + ": LP " + to_string(s.status) + " after " +
                        std::to_string(s.iterations) + " pivots");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Matrix games. The row player minimizes p' M q.

struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> row_strategy;
  std::vector<double> column_strategy;
};

namespace lp_internal {

inline void clamp_to_simplex(std::vector<double>& v) {
  double sum = 0.0;
  for (double& x : v) {
    x = std::max(x, 0.0);
    sum += x;
  }
  if (sum <= 0.0) {
    std::fill(v.begin(), v.end(), 1.0 / v.size());
    return;
  }
  for (double& x : v) x /= sum;
}

// min over p of max_j (p' M)_j, or its mirror for the column player.
inline std::pair<double, std::vector<double>> matrix_game_side(
    const std::vector<std::vector<double>>& m, bool rows,
    const LpOptions& opt, std::vector<double>* other) {
  const int r = static_cast<int>(m.size());
  const int c = static_cast<int>(m[0].size());
  const int own = rows ? r : c;
  const int opp = rows ? c : r;
  LinearProgram lp;
  for (int i = 0; i < own; ++i) lp.add_variable(0.0);
  // Row player: maximize -v, (p'M)_j - v <= 0. Column player: maximize w,
  // w - (Mq)_i <= 0.
  const int v = lp.add_variable(rows ? -1.0 : 1.0, VarBound::kFree);
  for (int j = 0; j < opp; ++j) {
    std::vector<LpTerm> terms;
    for (int i = 0; i < own; ++i) {
      const double a = rows ? m[i][j] : m[j][i];
      if (a != 0.0) terms.push_back({i, rows ? a : -a});
    }
    terms.push_back({v, rows ? -1.0 : 1.0});
    lp.add_inequality(std::move(terms), 0.0);
  }
  std::vector<LpTerm> simplex;
  for (int i = 0; i < own; ++i) simplex.push_back({i, 1.0});
  lp.add_equality(std::move(simplex), 1.0);
  LpSolution s = solve_lp_or_throw(lp, "matrix game", opt);
  std::vector<double> strat(s.primal.begin(), s.primal.begin() + own);
  clamp_to_simplex(strat);
  if (other) {
    other->assign(s.dual.begin(), s.dual.begin() + opp);
  }
  return {s.primal[v], strat};
}

}  // namespace lp_internal

inline MatrixGameSolution solve_matrix_game(
    const std::vector<std::vector<double>>& m,
    const LpOptions& opt = LpOptions()) {
  if (m.empty() || m[0].empty()) {
    throw ValidationError("solve_matrix_game: empty matrix");
  }
  const std::size_t cols = m[0].size();
  for (const auto& row : m) {
    if (row.size() != cols) {
      throw ValidationError("solve_matrix_game: ragged matrix");
    }
  }
  MatrixGameSolution out;
  std::vector<double> duals;
  auto [v, p] = lp_internal::matrix_game_side(m, true, opt, &duals);
  out.value = v;
  out.row_strategy = std::move(p);
  double mass = 0.0;
  for (double d : duals) mass += d;
  if (std::abs(mass - 1.0) <= 1e-9) {
    lp_internal::clamp_to_simplex(duals);
    out.column_strategy = std::move(duals);
  } else {
    out.column_strategy =
        lp_internal::matrix_game_side(m, false, opt, nullptr).second;
  }
  return out;
}

}  // namespace cibgame

#endif  // CIBGAME_LP_HPP_
