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

// Command-line front end. Every command produces a RunReport; `--json`
// prints it as JSON, otherwise as `key: value` lines. Exit codes: 0 on
// success, 2 on invalid input, 3 when a solver or the oracle refuses (caps,
// imperfect recall, LP failure).

#ifndef CIBGAME_CLI_HPP_
#define CIBGAME_CLI_HPP_

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "cibgame/errors.hpp"
#include "cibgame/io.hpp"
#include "cibgame/model.hpp"
#include "cibgame/oracle.hpp"
#include "cibgame/solver.hpp"
#include "cibgame/stage.hpp"
#include "cibgame/strategy.hpp"

namespace cibgame::cli {

using json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitRefused = 3;

struct RunReport {
  std::vector<std::string> command;
  json config = json::object();
  json values = json::object();
  // Wall-clock seconds per phase; the only non-reproducible field.
  json timing = json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> artifacts;
  std::string error;

  json to_json() const {
    json j = {{"command", command}, {"config", config}, {"values", values},
              {"seed", seed},       {"artifacts", artifacts},
              {"timing", timing}};
    if (!error.empty()) j["error"] = error;
    return j;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "command:";
    for (const auto& a : command) os << ' ' << a;
    os << '\n';
    if (!error.empty()) os << "error: " << error << '\n';
    for (const auto& [k, v] : values.items()) {
      os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
         << '\n';
    }
    for (const auto& a : artifacts) os << "wrote: " << a << '\n';
    for (const auto& [k, v] : timing.items()) {
      os << "time " << k << ": " << v.dump() << " s\n";
    }
    return os.str();
  }
};

struct RunResult {
  int exit_code = kExitOk;
  RunReport report;
};

struct Options {
  std::string game;
  int samples = 200;
  std::uint64_t seed = 0;
  int pieces = 0;  // > 0 selects the regression solver
  int belief_grid = 25;
  int prescription_grid = 10;
  std::string belief;
  int stage = 0;
  std::string strategy;
  std::vector<std::string> strategies;
  std::int64_t episodes = 10000;
  std::string out;
  std::int64_t node_cap = kDefaultNodeCap;
  int max_states = 8;
  int max_horizon = 4;
  bool declared = false;
  bool json = false;
};

namespace cli_internal {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline void check_caps(const GameDefinition& g, const Options& o) {
  if (g.horizon() > o.max_horizon) {
    throw CapExceeded("horizon " + std::to_string(g.horizon()) +
                      " exceeds --max-horizon " +
                      std::to_string(o.max_horizon));
  }
  for (int t = 0; t <= g.horizon(); ++t) {
    if (g.belief_shape(t).states > o.max_states) {
      throw CapExceeded("stage " + std::to_string(t) + " has " +
                        std::to_string(g.belief_shape(t).states) +
                        " states, above --max-states " +
                        std::to_string(o.max_states));
    }
  }
}

inline const OneSidedGame& require_one_sided(const GameFile& f,
                                             const std::string& what) {
  if (!f.one_sided) {
    throw ValidationError(what + " needs a one-sided game file");
  }
  return *f.one_sided;
}

inline std::vector<double> parse_vector(const std::string& text) {
  std::string s = text;
  for (char& c : s) {
    if (c == ',' || c == '[' || c == ']') c = ' ';
  }
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) {
      throw ValidationError("--belief: cannot parse \"" + tok + "\"");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("--belief is empty");
  return out;
}

inline void write_json(const std::string& path, const json& j,
                       RunReport& report) {
  std::ofstream f(path);
  if (!f) throw Error(path + ": cannot open for writing");
  f << j.dump(1) << '\n';
  if (!f) throw Error(path + ": write failed");
  report.artifacts.push_back(path);
}

inline OneSidedConfig one_sided_config(const Options& o) {
  OneSidedConfig cfg;
  cfg.samples_per_stage = o.samples;
  cfg.seed = o.seed;
  return cfg;
}

struct OneSidedSolve {
  std::vector<AlphaSet> alpha;
  OneSidedValueFunction vf;  // point-based solver only
  double value = 0.0;
};

// Point-based solver, or the regression solver when --pieces is given.
inline OneSidedSolve solve_one_sided_cmd(const OneSidedGame& g,
                                         const Options& o, RunReport& r) {
  OneSidedSolve out;
  Stopwatch sw;
  if (o.pieces > 0) {
    RegressionConfig cfg;
    cfg.pieces = o.pieces;
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    RegressionResult res = solve_regression(g, cfg);
    r.values["solver"] = "regression";
    r.values["value"] = res.value;
    r.values["training_mse"] = res.training_mse;
    r.values["epochs_run"] = res.epochs_run;
    out.alpha = std::move(res.alpha);
    out.value = res.value;
  } else {
    OneSidedResult res = solve_one_sided(g, one_sided_config(o));
    r.values["solver"] = "point-based";
    r.values["value"] = res.value;
    r.values["alphas_per_stage"] = res.stats.alphas_per_stage;
    r.values["samples_per_stage"] = res.stats.samples_per_stage;
    r.values["reachable_per_stage"] = res.stats.reachable_per_stage;
    r.values["lp_solves"] = res.stats.lp_solves;
    r.values["lp_iterations"] = res.stats.lp_iterations;
    out.alpha = res.vf.alpha;
    out.vf = std::move(res.vf);
    out.value = res.value;
  }
  r.timing["solve"] = sw.seconds();
  return out;
}

inline GeneralBoundsResult solve_general_cmd(const GameDefinition& g,
                                             const Options& o, RunReport& r) {
  GeneralConfig cfg;
  cfg.belief_grid = o.belief_grid;
  cfg.prescription_grid = o.prescription_grid;
  Stopwatch sw;
  GeneralBoundsResult res = solve_general_bounds(g, cfg);
  r.timing["solve"] = sw.seconds();
  r.values["solver"] = "general-bounds";
  r.values["upper"] = res.upper;
  r.values["lower"] = res.lower;
  r.values["stage_evaluations"] = res.stage_evaluations;
  return res;
}

inline SequenceFormSolution oracle_cmd(const GameDefinition& g,
                                       const Options& o, RunReport& r,
                                       ExtensiveForm* keep = nullptr) {
  Stopwatch sw;
  ExtensiveForm ef = build_extensive_form(
      g, o.declared ? InfoKeyMode::kDeclared : InfoKeyMode::kRecallClosure,
      o.node_cap);
  SequenceFormSolution sol = sequence_form_value(ef);
  r.timing["oracle"] = sw.seconds();
  r.values["oracle_value"] = sol.value;
  r.values["oracle_nodes"] = ef.nodes.size();
  r.values["oracle_infosets"] = {ef.num_infosets(1), ef.num_infosets(2)};
  r.values["oracle_lp"] = {{"rows", sol.lp_rows},
                           {"columns", sol.lp_columns},
                           {"iterations", sol.lp_iterations}};
  if (keep) *keep = std::move(ef);
  return sol;
}

// A strategy argument: a file path, "uniform", "equilibrium" (sequence-form
// solution) or, for player 1 in a one-sided game, "cib".
inline HistoryStrategy strategy_arg(const std::string& arg, int player,
                                    const GameFile& f, const ExtensiveForm& ef,
                                    const Options& o, RunReport& r) {
  if (arg == "uniform") return uniform_strategy(ef, player);
  if (arg == "equilibrium") {
    Stopwatch sw;
    const SequenceFormSolution sol = sequence_form_value(ef);
    r.timing["oracle"] = sw.seconds();
    return strategy_from_plan(ef, sol, player);
  }
  if (arg == "cib") {
    if (player != 1) throw ValidationError("\"cib\" is a player-1 strategy");
    const OneSidedGame& g = require_one_sided(f, "\"cib\"");
    OneSidedResult res = solve_one_sided(g, one_sided_config(o));
    return unroll_cib_strategy(extract_cib_strategy(g, res.vf), ef);
  }
  HistoryStrategy s = load_strategy(arg);
  if (s.player != player) {
    throw ValidationError(arg + ": expected a player-" +
                          std::to_string(player) + " strategy");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Commands.

inline int cmd_validate(const Options& o, RunReport& r) {
  const GameFile f = load_game(o.game);
  json list = json::array();
  for (const Violation& v : validate_game(f.game)) list.push_back(v.describe());
  if (f.one_sided) {
    try {
      validate_one_sided(*f.one_sided);
    } catch (const ValidationError& e) {
      list.push_back(e.what());
    }
  }
  r.values["one_sided"] = f.one_sided.has_value();
  r.values["horizon"] = f.game.horizon();
  r.values["violations"] = list;
  return list.empty() ? kExitOk : kExitInvalid;
}

inline int cmd_solve(const Options& o, RunReport& r) {
  const GameFile f = load_game(o.game);
  check_caps(f.game, o);
  if (f.one_sided) {
    OneSidedSolve s = solve_one_sided_cmd(*f.one_sided, o, r);
    if (!o.out.empty()) write_json(o.out, alpha_sets_to_json(s.alpha), r);
  } else {
    solve_general_cmd(f.game, o, r);
  }
  return kExitOk;
}

inline int cmd_value(const Options& o, RunReport& r) {
  const GameFile f = load_game(o.game);
  check_caps(f.game, o);
  const std::vector<double> b = parse_vector(o.belief);
  r.values["stage"] = o.stage;
  if (o.stage < 0 || o.stage >= f.game.horizon()) {
    throw ValidationError("--stage outside [0, T)");
  }
  if (f.one_sided) {
    const Belief pi = Belief::over_states(o.stage, b);
    if (pi.size() != f.one_sided->states(o.stage)) {
      throw ValidationError("--belief has the wrong length");
    }
    OneSidedSolve s = solve_one_sided_cmd(*f.one_sided, o, r);
    r.values["initial_value"] = s.value;
    r.values["value"] = pwlc_eval(s.alpha[o.stage], pi);
    return kExitOk;
  }
  const Belief pi(o.stage, f.game.belief_shape(o.stage), b);
  GeneralBoundsResult res = solve_general_cmd(f.game, o, r);
  if (o.stage == 0) {
    const auto init = f.game.initial();
    if (!std::equal(b.begin(), b.end(), init.begin(), init.end())) {
      throw ValidationError(
          "stage-0 bounds exist only at the initial belief of the game");
    }
    return kExitOk;
  }
  r.values["upper"] =
      res.tables.interpolate(o.stage, res.tables.upper[o.stage], b);
  r.values["lower"] =
      res.tables.interpolate(o.stage, res.tables.lower[o.stage], b);
  return kExitOk;
}

inline int cmd_oracle(const Options& o, RunReport& r) {
  const GameFile f = load_game(o.game);
  check_caps(f.game, o);
  r.config["keys"] = o.declared ? "declared" : "closure";
  oracle_cmd(f.game, o, r);
  return kExitOk;
}

inline int cmd_best_response(const Options& o, RunReport& r) {
  const GameFile f = load_game(o.game);
  check_caps(f.game, o);
  const ExtensiveForm ef =
      build_extensive_form(f.game, InfoKeyMode::kRecallClosure, o.node_cap);
  const bool keyword = o.strategy == "uniform" || o.strategy == "equilibrium" ||
                       o.strategy == "cib";
  const HistoryStrategy s = keyword ? strategy_arg(o.strategy, 1, f, ef, o, r)
                                    : load_strategy(o.strategy);
  Stopwatch sw;
  const BestResponse br = best_response(ef, s);
  r.timing["best_response"] = sw.seconds();
  r.values["responder"] = 3 - s.player;
  r.values["best_response_value"] = br.value;
  if (!o.out.empty()) write_json(o.out, strategy_to_json(br.strategy), r);
  return kExitOk;
}

inline int cmd_reduce(const Options& o, RunReport& r) {
  const GameFile f = load_game(o.game);
  require_one_sided(f, "reduce");
  check_caps(f.game, o);
  const HistoryStrategy s = load_strategy(o.strategy);
  Stopwatch sw;
  const HistoryStrategy reduced = reduce_strategy(f.game, s, o.node_cap);
  r.timing["reduce"] = sw.seconds();
  std::size_t rows = 0;
  for (const auto& t : reduced.tables) rows += t.size();
  r.values["rows"] = rows;
  if (o.out.empty()) {
    r.values["strategy"] = strategy_to_json(reduced);
  } else {
    write_json(o.out, strategy_to_json(reduced), r);
  }
  return kExitOk;
}

inline int cmd_simulate(const Options& o, RunReport& r) {
  if (o.strategies.size() != 2) {
    throw ValidationError("--strategies takes two entries, player 1 first");
  }
  const GameFile f = load_game(o.game);
  check_caps(f.game, o);
  const ExtensiveForm ef =
      build_extensive_form(f.game, InfoKeyMode::kRecallClosure, o.node_cap);
  const HistoryStrategy s1 = strategy_arg(o.strategies[0], 1, f, ef, o, r);
  const HistoryStrategy s2 = strategy_arg(o.strategies[1], 2, f, ef, o, r);
  Stopwatch sw;
  const SimulationResult sim = simulate(ef, s1, s2, o.seed, o.episodes);
  r.timing["simulate"] = sw.seconds();
  r.values["mean"] = sim.mean;
  r.values["standard_error"] = sim.standard_error;
  r.values["episodes"] = sim.episodes;
  r.values["expected_cost"] = expected_cost(ef, s1, s2);
  return kExitOk;
}

inline int cmd_export_alpha(const Options& o, RunReport& r) {
  const GameFile f = load_game(o.game);
  const OneSidedGame& g = require_one_sided(f, "export-alpha");
  check_caps(f.game, o);
  if (o.out.empty()) throw ValidationError("export-alpha needs --out");
  OneSidedSolve s = solve_one_sided_cmd(g, o, r);
  write_json(o.out, alpha_sets_to_json(s.alpha), r);
  return kExitOk;
}

inline int cmd_compare(const Options& o, RunReport& r) {
  const GameFile f = load_game(o.game);
  check_caps(f.game, o);
  Options closure = o;
  closure.declared = false;
  ExtensiveForm ef;
  const SequenceFormSolution sol = oracle_cmd(f.game, closure, r, &ef);
  if (f.one_sided) {
    OneSidedSolve s = solve_one_sided_cmd(*f.one_sided, o, r);
    r.values["solver_value"] = s.value;
    r.values["gap"] = sol.value - s.value;
    r.values["lower_bound_sound"] = s.value <= sol.value + 1e-7;
    if (o.pieces == 0) {
      Stopwatch sw;
      const HistoryStrategy s1 =
          unroll_cib_strategy(extract_cib_strategy(*f.one_sided, s.vf), ef);
      const BestResponse br = best_response(ef, s1);
      r.timing["exploitability"] = sw.seconds();
      r.values["best_response_value"] = br.value;
      r.values["exploitability"] = br.value - sol.value;
    }
  } else {
    const GeneralBoundsResult b = solve_general_cmd(f.game, o, r);
    r.values["bracket_contains_oracle"] =
        b.lower <= sol.value && sol.value <= b.upper;
  }
  return kExitOk;
}

}  // namespace cli_internal

// Parses `args` (without the program name) and runs one command.
inline RunResult run(const std::vector<std::string>& args,
                     std::ostream* help = nullptr) {
  using namespace cli_internal;
  RunResult result;
  RunReport& r = result.report;
  r.command = args;
  Options o;

  CLI::App app{"Finite-horizon zero-sum games with asymmetric information",
               "cibgame"};
  app.require_subcommand(1);
  app.add_flag("--json", o.json, "Print the report as JSON");
  app.fallthrough();

  auto add_game = [&](CLI::App* sub) {
    sub->add_option("game", o.game, "Game definition (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--node-cap", o.node_cap, "Extensive-form node cap");
    sub->add_option("--max-states", o.max_states, "Largest allowed |X_t|");
    sub->add_option("--max-horizon", o.max_horizon, "Largest allowed T");
  };
  auto add_solver = [&](CLI::App* sub) -> CLI::App* {
    sub->add_option("--samples", o.samples, "Belief samples per stage");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--pieces", o.pieces,
                    "Use the regression solver with this many pieces");
    sub->add_option("--belief-grid", o.belief_grid,
                    "General model: belief grid resolution");
    sub->add_option("--prescription-grid", o.prescription_grid,
                    "General model: prescription grid resolution");
    return sub;
  };

  std::function<int(const Options&, RunReport&)> command;
  auto sub = [&](const char* name, const char* about,
                 int (*fn)(const Options&, RunReport&)) {
    CLI::App* s = app.add_subcommand(name, about);
    s->callback([&command, fn] { command = fn; });
    add_game(s);
    return s;
  };

  sub("validate", "Check a game file", cmd_validate);
  add_solver(sub("solve", "Solve a game", cmd_solve))
      ->add_option("--out", o.out, "Write the alpha sets here");
  {
    CLI::App* s = sub("value", "Value at a belief", cmd_value);
    add_solver(s);
    s->add_option("--belief", o.belief, "Belief, comma separated")
        ->required();
    s->add_option("--stage", o.stage, "Stage of the belief (0-based)");
  }
  sub("oracle", "Sequence-form value", cmd_oracle)
      ->add_flag("--declared", o.declared,
                 "Use the declared information sets (may lack perfect "
                 "recall)");
  {
    CLI::App* s = sub("best-response", "Best response to a strategy",
                      cmd_best_response);
    add_solver(s);
    s->add_option("--strategy", o.strategy,
                  "Strategy file, or uniform, equilibrium or cib (player 1)")
        ->required();
    s->add_option("--out", o.out, "Write the best response here");
  }
  {
    CLI::App* s = sub("reduce", "Reduce a player-1 strategy", cmd_reduce);
    s->add_option("--strategy", o.strategy, "Strategy file")->required();
    s->add_option("--out", o.out, "Write the reduced strategy here");
  }
  {
    CLI::App* s = sub("simulate", "Monte-Carlo play", cmd_simulate);
    add_solver(s);
    s->add_option("--strategies", o.strategies,
                  "Two strategies: files, uniform, equilibrium or cib")
        ->required()
        ->expected(2);
    s->add_option("--episodes", o.episodes, "Episodes");
  }
  {
    CLI::App* s = sub("export-alpha", "Write the alpha sets",
                      cmd_export_alpha);
    add_solver(s);
    s->add_option("--out", o.out, "Output path")->required();
  }
  add_solver(sub("compare", "Solver, oracle and exploitability", cmd_compare));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    if (help) *help << app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    if (help) *help << app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    r.error = e.what();
    result.exit_code = kExitInvalid;
    return result;
  }

  r.seed = o.seed;
  r.config = {{"game", o.game},
              {"samples", o.samples},
              {"seed", o.seed},
              {"pieces", o.pieces},
              {"belief_grid", o.belief_grid},
              {"prescription_grid", o.prescription_grid},
              {"caps",
               {{"node_cap", o.node_cap},
                {"max_states", o.max_states},
                {"max_horizon", o.max_horizon}}},
              {"threads", configured_threads()}};
  try {
    result.exit_code = command(o, r);
  } catch (const ValidationError& e) {
    r.error = e.what();
    result.exit_code = kExitInvalid;
  } catch (const ImperfectRecall& e) {
    r.error = e.what();
    r.values["recall_witness"] = {e.first_history, e.second_history};
    result.exit_code = kExitRefused;
  } catch (const CapExceeded& e) {
    r.error = e.what();
    result.exit_code = kExitRefused;
  } catch (const SolverFailure& e) {
    r.error = e.what();
    result.exit_code = kExitRefused;
  } catch (const Error& e) {
    r.error = e.what();
    result.exit_code = kExitInvalid;
  }
  return result;
}

// Entry point for the executable: prints the report and returns the exit
// code.
inline int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  bool as_json = false;
  for (const auto& a : args) as_json |= a == "--json";
  if (args.empty()) args.push_back("--help");
  std::ostringstream help;
  RunResult res = run(args, &help);
  if (!help.str().empty()) {
    std::cout << help.str();
    return res.exit_code;
  }
  if (as_json) {
    std::cout << res.report.to_json().dump(2) << '\n';
  } else {
    std::cout << res.report.to_text();
  }
  if (!res.report.error.empty() && !as_json) {
    std::cerr << "error: " << res.report.error << '\n';
  }
  return res.exit_code;
}

}  // namespace cibgame::cli

#endif  // CIBGAME_CLI_HPP_
