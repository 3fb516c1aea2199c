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

// JSON game files.
//
// General form:
//   {"horizon": T,
//    "stages": [{"spaces": {"X":..,"U1":..,"U2":..,"P1":..,"P2":..,"Z":..},
//                "kernel": [x][p1][p2][u1][u2][x'][p1'][p2'][z],
//                "cost": [x][u1][u2]}, ...],
//    "initial": [x][p1][p2],
//    "terminal": {"X":..,"P1":..,"P2":..},            (optional, default 1)
//    "labels": [{"X": [...], "U1": [...], ...}, ...]} (optional, per stage)
// A stage may give "structured" instead of "kernel":
//   {"Y1":..,"Y2":..,"transition":[x][u1][u2][x'],
//    "observation1":[x'][u1][u2][y1], "observation2":[x'][u1][u2][y2],
//    "xi1":[p1][u1][y1], "xi2":[p2][u2][y2],
//    "zeta":[p1][p2][u1][u2][y1][y2]}
// The last stage may omit its kernel when the terminal spaces and Z all have
// one element.
//
// One-sided shorthand:
//   {"one_sided": true, "horizon": T,
//    "transition": [t][x][u1][u2][x'], "observation2": [t][x'][u1][u2][y2],
//    "cost": [t][x][u1][u2], "initial": [x]}
// The last transition/observation pair may be omitted (one terminal state).

#ifndef CIBGAME_IO_HPP_
#define CIBGAME_IO_HPP_

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cibgame/errors.hpp"
#include "cibgame/model.hpp"
#include "cibgame/stage.hpp"
#include "cibgame/strategy.hpp"

namespace cibgame {

using json = nlohmann::json;

struct GameFile {
  GameDefinition game;               // always populated
  std::optional<OneSidedGame> one_sided;
};

namespace io_internal {

// Flattens a nested array of the given shape in row-major order.
inline void flatten_into(const json& j, const std::vector<int>& dims,
                         std::size_t level, const std::string& path,
                         std::vector<double>& out) {
  if (level == dims.size()) {
    if (!j.is_number()) {
      throw ValidationError(path + ": expected a number");
    }
    out.push_back(j.get<double>());
    return;
  }
  if (!j.is_array()) throw ValidationError(path + ": expected an array");
  if (static_cast<int>(j.size()) != dims[level]) {
    throw ValidationError(path + ": expected " + std::to_string(dims[level]) +
                          " entries, got " + std::to_string(j.size()));
  }
  for (std::size_t k = 0; k < j.size(); ++k) {
    flatten_into(j[k], dims, level + 1, path + "[" + std::to_string(k) + "]",
                 out);
  }
}

inline std::vector<double> flatten(const json& j, const std::vector<int>& dims,
                                   const std::string& path) {
  std::vector<double> out;
  flatten_into(j, dims, 0, path, out);
  return out;
}

inline std::vector<int> flatten_int(const json& j, const std::vector<int>& dims,
                                    const std::string& path) {
  std::vector<double> d = flatten(j, dims, path);
  std::vector<int> out(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k] != static_cast<int>(d[k])) {
      throw ValidationError(path + ": expected integers");
    }
    out[k] = static_cast<int>(d[k]);
  }
  return out;
}

// Shape of a nested array, following first elements.
inline std::vector<int> shape_of(const json& j) {
  std::vector<int> dims;
  const json* cur = &j;
  while (cur->is_array()) {
    dims.push_back(static_cast<int>(cur->size()));
    if (cur->empty()) break;
    cur = &(*cur)[0];
  }
  return dims;
}

inline json nest(const std::vector<double>& flat, const std::vector<int>& dims,
                 std::size_t level, std::size_t& pos) {
  if (level == dims.size()) return flat[pos++];
  json arr = json::array();
  for (int k = 0; k < dims[level]; ++k) {
    arr.push_back(nest(flat, dims, level + 1, pos));
  }
  return arr;
}

inline json nest(const std::vector<double>& flat,
                 const std::vector<int>& dims) {
  std::size_t pos = 0;
  return nest(flat, dims, 0, pos);
}

inline int get_size(const json& obj, const char* key, const std::string& path,
                    int fallback = -1) {
  if (!obj.contains(key)) {
    if (fallback >= 0) return fallback;
    throw ValidationError(path + "." + key + ": missing");
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<int>() < 1) {
    throw ValidationError(path + "." + key + ": expected a positive integer");
  }
  return v.get<int>();
}

inline std::vector<std::string> get_labels(const json& obj, const char* key,
                                           const std::string& path) {
  if (!obj.contains(key)) return {};
  const json& v = obj.at(key);
  if (!v.is_array()) throw ValidationError(path + "." + key + ": expected array");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) {
      throw ValidationError(path + "." + key + ": expected strings");
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline SpaceLabels parse_labels(const json& obj, const std::string& path) {
  SpaceLabels l;
  l.states = get_labels(obj, "X", path);
  l.actions1 = get_labels(obj, "U1", path);
  l.actions2 = get_labels(obj, "U2", path);
  l.private1 = get_labels(obj, "P1", path);
  l.private2 = get_labels(obj, "P2", path);
  l.increments = get_labels(obj, "Z", path);
  return l;
}

inline json labels_to_json(const SpaceLabels& l) {
  json o = json::object();
  auto put = [&](const char* k, const std::vector<std::string>& v) {
    if (!v.empty()) o[k] = v;
  };
  put("X", l.states);
  put("U1", l.actions1);
  put("U2", l.actions2);
  put("P1", l.private1);
  put("P2", l.private2);
  put("Z", l.increments);
  return o;
}

inline OneSidedGame parse_one_sided(const json& j) {
  OneSidedGame g;
  if (!j.contains("horizon") || !j["horizon"].is_number_integer() ||
      j["horizon"].get<int>() < 1) {
    throw ValidationError("horizon: expected a positive integer");
  }
  const int horizon = j["horizon"].get<int>();
  for (const char* key : {"transition", "observation2", "cost", "initial"}) {
    if (!j.contains(key)) {
      throw ValidationError(std::string(key) + ": missing");
    }
  }
  const json& tr = j["transition"];
  const json& ob = j["observation2"];
  const json& co = j["cost"];
  if (!tr.is_array() || !ob.is_array() || !co.is_array()) {
    throw ValidationError("transition/observation2/cost: expected arrays");
  }
  if (static_cast<int>(co.size()) != horizon) {
    throw ValidationError("cost: expected " + std::to_string(horizon) +
                          " stages, got " + std::to_string(co.size()));
  }
  const bool tail_omitted = static_cast<int>(tr.size()) == horizon - 1;
  if (!tail_omitted && static_cast<int>(tr.size()) != horizon) {
    throw ValidationError("transition: expected " + std::to_string(horizon) +
                          " or " + std::to_string(horizon - 1) + " stages");
  }
  if (ob.size() != tr.size()) {
    throw ValidationError("observation2: expected " +
                          std::to_string(tr.size()) + " stages");
  }
  for (int t = 0; t < horizon; ++t) {
    const std::string ct = "cost[" + std::to_string(t) + "]";
    const std::vector<int> cdims = shape_of(co[t]);
    if (cdims.size() != 3) throw ValidationError(ct + ": expected [x][u1][u2]");
    OneSidedStage s;
    s.states = cdims[0];
    s.actions1 = cdims[1];
    s.actions2 = cdims[2];
    s.cost = flatten(co[t], cdims, ct);
    if (t < static_cast<int>(tr.size())) {
      const std::string tt = "transition[" + std::to_string(t) + "]";
      const std::vector<int> tdims = shape_of(tr[t]);
      if (tdims.size() != 4) {
        throw ValidationError(tt + ": expected [x][u1][u2][x']");
      }
      const int nn = tdims[3];
      s.transition = flatten(tr[t], {s.states, s.actions1, s.actions2, nn}, tt);
      const std::string ot = "observation2[" + std::to_string(t) + "]";
      const std::vector<int> odims = shape_of(ob[t]);
      if (odims.size() != 4) {
        throw ValidationError(ot + ": expected [x'][u1][u2][y2]");
      }
      s.observations = odims[3];
      s.observation =
          flatten(ob[t], {nn, s.actions1, s.actions2, s.observations}, ot);
      if (t + 1 < horizon) {
        const std::vector<int> next = shape_of(co[t + 1]);
        if (!next.empty() && next[0] != nn) {
          throw ValidationError(tt + ": next-state dimension " +
                                std::to_string(nn) + " differs from cost[" +
                                std::to_string(t + 1) + "] state count " +
                                std::to_string(next[0]));
        }
      } else {
        g.terminal_states = nn;
      }
    } else {
      s.observations = 1;
      s.transition.assign(static_cast<std::size_t>(s.states) * s.actions1 *
                              s.actions2,
                          1.0);
      s.observation = std::vector<double>(
          static_cast<std::size_t>(s.actions1) * s.actions2, 1.0);
      g.terminal_states = 1;
    }
    g.stages.push_back(std::move(s));
  }
  const json& init = j["initial"];
  g.initial = flatten(init, {g.states(0)}, "initial");
  validate_one_sided(g);
  return g;
}

inline StructuredStage parse_structured(const json& js, const StageSpaces& s,
                                        const BeliefShape& next,
                                        const std::string& path) {
  StructuredStage st;
  st.states = s.states;
  st.actions1 = s.actions1;
  st.actions2 = s.actions2;
  st.private1 = s.private1;
  st.private2 = s.private2;
  st.increments = s.increments;
  st.observations1 = get_size(js, "Y1", path, 1);
  st.observations2 = get_size(js, "Y2", path, 1);
  const int a1 = s.actions1, a2 = s.actions2;
  const int y1 = st.observations1, y2 = st.observations2;
  auto need = [&](const char* k) -> const json& {
    if (!js.contains(k)) {
      throw ValidationError(path + "." + k + ": missing");
    }
    return js.at(k);
  };
  st.transition = flatten(need("transition"),
                          {s.states, a1, a2, next.states}, path + ".transition");
  if (js.contains("observation1")) {
    st.observation1 = flatten(js["observation1"], {next.states, a1, a2, y1},
                              path + ".observation1");
  } else if (y1 == 1) {
    st.observation1.assign(static_cast<std::size_t>(next.states) * a1 * a2,
                           1.0);
  } else {
    throw ValidationError(path + ".observation1: missing");
  }
  if (js.contains("observation2")) {
    st.observation2 = flatten(js["observation2"], {next.states, a1, a2, y2},
                              path + ".observation2");
  } else if (y2 == 1) {
    st.observation2.assign(static_cast<std::size_t>(next.states) * a1 * a2,
                           1.0);
  } else {
    throw ValidationError(path + ".observation2: missing");
  }
  st.xi1 = flatten_int(need("xi1"), {s.private1, a1, y1}, path + ".xi1");
  st.xi2 = flatten_int(need("xi2"), {s.private2, a2, y2}, path + ".xi2");
  st.zeta = flatten_int(need("zeta"), {s.private1, s.private2, a1, a2, y1, y2},
                        path + ".zeta");
  return st;
}

inline GameDefinition parse_general(const json& j) {
  if (!j.contains("horizon") || !j["horizon"].is_number_integer() ||
      j["horizon"].get<int>() < 1) {
    throw ValidationError("horizon: expected a positive integer");
  }
  const int horizon = j["horizon"].get<int>();
  if (!j.contains("stages") || !j["stages"].is_array() ||
      static_cast<int>(j["stages"].size()) != horizon) {
    throw ValidationError("stages: expected an array of " +
                          std::to_string(horizon) + " stage objects");
  }
  std::vector<StageSpaces> spaces(horizon);
  for (int t = 0; t < horizon; ++t) {
    const std::string path = "stages[" + std::to_string(t) + "]";
    const json& st = j["stages"][t];
    if (!st.is_object() || !st.contains("spaces")) {
      throw ValidationError(path + ".spaces: missing");
    }
    const json& sp = st["spaces"];
    const std::string sp_path = path + ".spaces";
    spaces[t] = {get_size(sp, "X", sp_path), get_size(sp, "U1", sp_path),
                 get_size(sp, "U2", sp_path), get_size(sp, "P1", sp_path, 1),
                 get_size(sp, "P2", sp_path, 1), get_size(sp, "Z", sp_path, 1)};
  }
  BeliefShape terminal;
  if (j.contains("terminal")) {
    const json& tj = j["terminal"];
    terminal = {get_size(tj, "X", "terminal", 1),
                get_size(tj, "P1", "terminal", 1),
                get_size(tj, "P2", "terminal", 1)};
  }
  std::vector<GameStage> stages(horizon);
  for (int t = 0; t < horizon; ++t) {
    const std::string path = "stages[" + std::to_string(t) + "]";
    const json& st = j["stages"][t];
    const StageSpaces& s = spaces[t];
    const BeliefShape next =
        t + 1 < horizon
            ? BeliefShape{spaces[t + 1].states, spaces[t + 1].private1,
                          spaces[t + 1].private2}
            : terminal;
    GameStage& out = stages[t];
    out.spaces = s;
    if (!st.contains("cost")) throw ValidationError(path + ".cost: missing");
    out.cost = flatten(st["cost"], {s.states, s.actions1, s.actions2},
                       path + ".cost");
    if (st.contains("kernel")) {
      out.kernel = flatten(st["kernel"],
                           {s.states, s.private1, s.private2, s.actions1,
                            s.actions2, next.states, next.private1,
                            next.private2, s.increments},
                           path + ".kernel");
    } else if (st.contains("structured")) {
      StructuredDynamics one;
      one.terminal = next;
      one.stages.push_back(
          parse_structured(st["structured"], s, next, path + ".structured"));
      one.stages.back().cost = out.cost;
      const int n0 = s.states * s.private1 * s.private2;
      GameDefinition piece =
          assemble_kernel(one, std::vector<double>(n0, 1.0 / n0));
      out.kernel = piece.stage(0).kernel;
    } else if (t + 1 == horizon && next.size() == 1 && s.increments == 1) {
      out.kernel.assign(static_cast<std::size_t>(s.states) * s.private1 *
                            s.private2 * s.actions1 * s.actions2,
                        1.0);
    } else {
      throw ValidationError(path + ": needs \"kernel\" or \"structured\"");
    }
    if (st.contains("labels")) out.labels = parse_labels(st["labels"], path);
  }
  if (j.contains("labels")) {
    const json& lj = j["labels"];
    if (!lj.is_array() || static_cast<int>(lj.size()) != horizon) {
      throw ValidationError("labels: expected one object per stage");
    }
    for (int t = 0; t < horizon; ++t) {
      stages[t].labels =
          parse_labels(lj[t], "labels[" + std::to_string(t) + "]");
    }
  }
  if (!j.contains("initial")) throw ValidationError("initial: missing");
  std::vector<double> initial =
      flatten(j["initial"],
              {spaces[0].states, spaces[0].private1, spaces[0].private2},
              "initial");
  return GameDefinition(std::move(stages), terminal, std::move(initial));
}

}  // namespace io_internal

inline GameFile parse_game(const json& j) {
  if (!j.is_object()) throw ValidationError("game file: expected an object");
  GameFile out;
  if (j.value("one_sided", false)) {
    out.one_sided = io_internal::parse_one_sided(j);
    out.game = lower_one_sided(*out.one_sided);
  } else {
    out.game = io_internal::parse_general(j);
  }
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline GameFile load_game(const std::string& path) {
  json j = read_json_file(path);
  try {
    return parse_game(j);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline json game_to_json(const GameDefinition& g) {
  json j;
  j["horizon"] = g.horizon();
  j["stages"] = json::array();
  json labels = json::array();
  bool any_labels = false;
  for (int t = 0; t < g.horizon(); ++t) {
    const StageSpaces& s = g.spaces(t);
    const BeliefShape next = g.belief_shape(t + 1);
    json st;
    st["spaces"] = {{"X", s.states},     {"U1", s.actions1},
                    {"U2", s.actions2},  {"P1", s.private1},
                    {"P2", s.private2},  {"Z", s.increments}};
    st["kernel"] = io_internal::nest(
        g.stage(t).kernel,
        {s.states, s.private1, s.private2, s.actions1, s.actions2, next.states,
         next.private1, next.private2, s.increments});
    st["cost"] = io_internal::nest(g.stage(t).cost,
                                   {s.states, s.actions1, s.actions2});
    j["stages"].push_back(std::move(st));
    labels.push_back(io_internal::labels_to_json(g.stage(t).labels));
    any_labels |= !g.stage(t).labels.empty();
  }
  const BeliefShape term = g.terminal_shape();
  j["terminal"] = {{"X", term.states}, {"P1", term.private1},
                   {"P2", term.private2}};
  const BeliefShape s0 = g.belief_shape(0);
  j["initial"] = io_internal::nest(
      std::vector<double>(g.initial().begin(), g.initial().end()),
      {s0.states, s0.private1, s0.private2});
  if (any_labels) j["labels"] = labels;
  return j;
}

inline json one_sided_to_json(const OneSidedGame& g) {
  json j;
  j["one_sided"] = true;
  j["horizon"] = g.horizon();
  j["transition"] = json::array();
  j["observation2"] = json::array();
  j["cost"] = json::array();
  for (int t = 0; t < g.horizon(); ++t) {
    const OneSidedStage& s = g.stages[t];
    const int nn = g.states(t + 1);
    j["transition"].push_back(io_internal::nest(
        s.transition, {s.states, s.actions1, s.actions2, nn}));
    j["observation2"].push_back(io_internal::nest(
        s.observation, {nn, s.actions1, s.actions2, s.observations}));
    j["cost"].push_back(
        io_internal::nest(s.cost, {s.states, s.actions1, s.actions2}));
  }
  j["initial"] = g.initial;
  return j;
}

inline json alpha_sets_to_json(const std::vector<AlphaSet>& sets) {
  json arr = json::array();
  for (const AlphaSet& a : sets) {
    arr.push_back({{"stage", a.stage()}, {"vectors", a.vectors()}});
  }
  return arr;
}

inline std::vector<AlphaSet> alpha_sets_from_json(const json& j) {
  std::vector<AlphaSet> out;
  for (const auto& e : j) {
    const auto vecs = e.at("vectors").get<std::vector<std::vector<double>>>();
    if (vecs.empty()) throw ValidationError("alpha set without vectors");
    AlphaSet a(e.at("stage").get<int>(), static_cast<int>(vecs[0].size()));
    for (const auto& v : vecs) a.add(v);
    out.push_back(std::move(a));
  }
  return out;
}

// {"player": 1, "keys": "closure" | "declared", "stages": [{key: [p, ...]}]}
inline json strategy_to_json(const HistoryStrategy& s) {
  json stages = json::array();
  for (const auto& table : s.tables) {
    json t = json::object();
    for (const auto& [key, row] : table) t[key] = row;
    stages.push_back(std::move(t));
  }
  return {{"player", s.player},
          {"keys", s.keys == InfoKeyMode::kDeclared ? "declared" : "closure"},
          {"stages", std::move(stages)}};
}

inline HistoryStrategy strategy_from_json(const json& j) {
  HistoryStrategy s;
  try {
    s.player = j.at("player").get<int>();
    const std::string keys = j.value("keys", "closure");
    if (keys == "declared") {
      s.keys = InfoKeyMode::kDeclared;
    } else if (keys != "closure") {
      throw ValidationError("strategy: keys must be \"closure\" or \"declared\"");
    }
    for (const auto& stage : j.at("stages")) {
      std::map<std::string, std::vector<double>> table;
      for (const auto& [key, row] : stage.items()) {
        table[key] = row.get<std::vector<double>>();
      }
      s.tables.push_back(std::move(table));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("strategy: ") + e.what());
  }
  s.check();
  return s;
}

inline HistoryStrategy load_strategy(const std::string& path) {
  const json j = read_json_file(path);
  try {
    return strategy_from_json(j);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace cibgame

#endif  // CIBGAME_IO_HPP_
