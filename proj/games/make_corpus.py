#!/usr/bin/env python3
# Copyright 2026 The cibgame Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the JSON game corpus in this directory."""

import json
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))


def write(name, game):
  with open(os.path.join(HERE, name), "w") as f:
    json.dump(game, f, indent=1)
    f.write("\n")


def static_transition(n, a1, a2):
  return [[[[1.0 if nx == x else 0.0 for nx in range(n)] for _ in range(a2)]
           for _ in range(a1)] for x in range(n)]


def reveal_u1_observation(n, a1, a2):
  # y2 = u1, independent of the next state.
  return [[[[1.0 if y == u1 else 0.0 for y in range(a1)] for _ in range(a2)]
           for u1 in range(a1)] for _ in range(n)]


def noisy_state_observation(n, a1, a2, flip):
  out = []
  for nx in range(n):
    row = [1.0 - flip if y == nx else flip / (n - 1) for y in range(n)]
    out.append([[row[:] for _ in range(a2)] for _ in range(a1)])
  return out


def guess_cost(n, a2, hit=1.0):
  return [[[hit if u2 == x else 0.0 for u2 in range(a2)]] for x in range(n)]


def random_stochastic(rng, k, denom=None):
  w = [rng.random() + 0.05 for _ in range(k)]
  s = sum(w)
  p = [v / s for v in w]
  if denom:
    q = [round(v * denom) for v in p]
    q[-1] = denom - sum(q[:-1])
    if q[-1] < 0:
      q = [denom // k] * k
      q[-1] = denom - sum(q[:-1])
    p = [v / denom for v in q]
  else:
    p[-1] = 1.0 - sum(p[:-1])
  return p


def random_one_sided(seed, n, a1, a2, ny, horizon):
  rng = random.Random(seed)
  g = {"one_sided": True, "horizon": horizon, "transition": [],
       "observation2": [], "cost": []}
  for t in range(horizon):
    g["cost"].append([[[round(rng.uniform(-1, 1), 3) for _ in range(a2)]
                       for _ in range(a1)] for _ in range(n)])
    if t + 1 < horizon:
      g["transition"].append(
          [[[random_stochastic(rng, n, 20) for _ in range(a2)]
            for _ in range(a1)] for _ in range(n)])
      g["observation2"].append(
          [[[random_stochastic(rng, ny, 20) for _ in range(a2)]
            for _ in range(a1)] for _ in range(n)])
  g["initial"] = random_stochastic(rng, n, 10)
  return g


def main():
  # T = 1 matching pennies: player 2 is paid when the actions match.
  write("matching_pennies.json", {
      "one_sided": True, "horizon": 1, "transition": [], "observation2": [],
      "cost": [[[[1.0, 0.0], [0.0, 1.0]]]], "initial": [1.0]})

  # Static state; player 1 earns 0.3 for playing u1 = x, which player 2
  # observes before guessing x.
  write("revelation_t2.json", {
      "one_sided": True, "horizon": 2,
      "transition": [static_transition(2, 2, 1)],
      "observation2": [reveal_u1_observation(2, 2, 1)],
      "cost": [[[[-0.3 if u1 == x else 0.0] for u1 in range(2)]
                for x in range(2)],
               guess_cost(2, 2)],
      "initial": [0.5, 0.5]})

  # Two revealing rounds before the guess, with an unequal prior.
  write("revelation_t3.json", {
      "one_sided": True, "horizon": 3,
      "transition": [static_transition(2, 2, 1)] * 2,
      "observation2": [reveal_u1_observation(2, 2, 1)] * 2,
      "cost": [[[[-0.2 if u1 == x else 0.0] for u1 in range(2)]
                for x in range(2)]] * 2 + [guess_cost(2, 2)],
      "initial": [0.6, 0.4]})

  # Player 2 sees a noisy reading of player 1's action; both act at every
  # stage.
  write("noisy_guess_t2.json", {
      "one_sided": True, "horizon": 2,
      "transition": [static_transition(2, 2, 2)],
      "observation2": [[[[[0.8 if y == u1 else 0.2 for y in range(2)]
                          for _ in range(2)] for u1 in range(2)]
                        for _ in range(2)]],
      "cost": [[[[(0.5 if u2 == u1 else 0.0) +
                  (0.25 if x == 1 and u2 == 1 else 0.0) for u2 in range(2)]
                 for u1 in range(2)] for x in range(2)],
               [[[1.0 if u2 == x else 0.0 for u2 in range(2)]
                 for _ in range(2)] for x in range(2)]],
      "initial": [0.5, 0.5]})

  # Three states, player 2 observes the state through a noisy channel.
  write("three_state_t2.json", {
      "one_sided": True, "horizon": 2,
      "transition": [[[[[0.6 if nx == x else 0.2 for nx in range(3)]
                        if u1 == 0 else
                        [1.0 if nx == (x + 1) % 3 else 0.0 for nx in range(3)]
                        for _ in range(2)] for u1 in range(2)]
                      for x in range(3)]],
      "observation2": [noisy_state_observation(3, 2, 2, 0.3)],
      "cost": [[[[0.1 * x + (0.2 if u1 == u2 else 0.0) for u2 in range(2)]
                 for u1 in range(2)] for x in range(3)],
               [[[1.0 if (u2 == 0) == (x == 0) else 0.0 for u2 in range(2)]
                 for _ in range(2)] for x in range(3)]],
      "initial": [0.5, 0.3, 0.2]})

  # Player 1 steers the state; player 2 sees the previous action with noise.
  write("controlled_t3.json", {
      "one_sided": True, "horizon": 3,
      "transition": [[[[[0.9, 0.1] if u1 == 0 else [0.2, 0.8]
                        for _ in range(2)] for u1 in range(2)]
                      for _ in range(2)]] * 2,
      "observation2": [[[[[0.75, 0.25] if u1 == 0 else [0.25, 0.75]
                          for _ in range(2)] for u1 in range(2)]
                        for _ in range(2)]] * 2,
      "cost": [[[[0.3 if u2 == x else 0.0 for u2 in range(2)]
                 for _ in range(2)] for x in range(2)]] * 2 +
              [guess_cost(2, 2)],
      "initial": [0.5, 0.5]})

  write("random_a_t2.json", random_one_sided(11, 2, 2, 2, 2, 2))
  write("random_b_t2.json", random_one_sided(12, 3, 2, 2, 3, 2))
  write("random_c_t3.json", random_one_sided(13, 2, 2, 2, 2, 3))
  write("random_d_t2.json", random_one_sided(14, 2, 3, 3, 2, 2))

  # A general game: both players hold one private bit at stage 0, and
  # everything is revealed before stage 1.
  write("two_sided_t2.json", two_sided_general(21))


def two_sided_general(seed):
  rng = random.Random(seed)
  # Stage 0: X = {0, 1}, P1 = P2 = {0, 1}; z reveals (p1, p2, u1, u2).
  kernel = []
  for x in range(2):
    a = []
    for p1 in range(2):
      b = []
      for p2 in range(2):
        c = []
        for u1 in range(2):
          d = []
          for u2 in range(2):
            tr = random_stochastic(rng, 2, 25)
            z = ((p1 * 2 + p2) * 2 + u1) * 2 + u2
            # [x'][p1'][p2'][z] with |P'| = 1.
            d.append([[[[tr[nx] if zz == z else 0.0 for zz in range(16)]]]
                      for nx in range(2)])
          c.append(d)
        b.append(c)
      a.append(b)
    kernel.append(a)
  cost0 = [[[round(rng.uniform(-0.5, 0.5), 2) for _ in range(2)]
            for _ in range(2)] for _ in range(2)]
  cost1 = [[[round(rng.uniform(-1, 1), 2) for _ in range(2)]
            for _ in range(2)] for _ in range(2)]
  initial = [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
  w = random_stochastic(rng, 8, 20)
  k = 0
  for x in range(2):
    for p1 in range(2):
      for p2 in range(2):
        initial[x][p1][p2] = w[k]
        k += 1
  return {
      "horizon": 2,
      "stages": [
          {"spaces": {"X": 2, "U1": 2, "U2": 2, "P1": 2, "P2": 2, "Z": 16},
           "kernel": kernel, "cost": cost0},
          {"spaces": {"X": 2, "U1": 2, "U2": 2, "P1": 1, "P2": 1, "Z": 1},
           "cost": cost1},
      ],
      "initial": initial,
      "labels": [{"U1": ["left", "right"], "U2": ["left", "right"]},
                 {"U1": ["left", "right"], "U2": ["left", "right"]}],
  }


if __name__ == "__main__":
  main()
