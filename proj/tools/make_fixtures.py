#!/usr/bin/env python3
# Copyright 2026 The infodesign Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the shipped fixtures into fixtures/."""

import itertools
import json
import os
import sys


def joint(labels, n):
  return ["|".join(p) for p in itertools.product(labels, repeat=n)]


def make_game(agents, states, actions, types, signals, sources, principal,
              trans, state_init, type_prior, nonprincipal, reward,
              principal_reward, gamma, gamma_hat):
  """trans(g, acts) -> list; reward(i, acts, g, w, t) -> float;
  principal_reward(acts, g, types) -> float."""
  game = {
      "agents": agents,
      "states": states,
      "actions": actions,
      "types": types,
      "signals": signals,
      "sources": {"count": sources, "principal": principal},
      "transition": {},
      "state_init": state_init,
      "type_prior": type_prior,
      "nonprincipal_dist": nonprincipal,
      "rewards": {},
      "principal_reward": {},
      "gamma": gamma,
      "gamma_hat": gamma_hat,
  }
  acts = list(itertools.product(actions, repeat=agents))
  for g in states:
    game["transition"][g] = {"|".join(a): trans(g, a) for a in acts}
  for i in range(agents):
    table = {}
    for a in acts:
      for g in states:
        for w in signals:
          for t in types:
            table["|".join(list(a) + [g, w, t])] = reward(i, a, g, w, t)
    game["rewards"][str(i)] = table
  for a in acts:
    for g in states:
      for tj in itertools.product(types, repeat=agents):
        game["principal_reward"]["|".join(list(a) + [g] + list(tj))] = \
            principal_reward(a, g, tj)
  return game


PD = {("C", "C"): (3, 3), ("C", "D"): (0, 5), ("D", "C"): (5, 0),
      ("D", "D"): (1, 1)}


def pd2():
  def trans(g, a):
    p = 0.1 + 0.05 * sum(x == "D" for x in a)
    return [1 - p, p]

  def reward(i, a, g, w, t):
    return PD[a][i] - (1 if g == "g1" else 0)

  return make_game(2, ["g0", "g1"], ["C", "D"], ["t"], ["x", "y"], 1, 0,
                   trans, [0.5, 0.5], [1.0], {"": 1.0}, reward,
                   lambda a, g, tj: 1.0 if a == ("C", "C") else 0.0, 0.9, 0.9)


def pd1_static():
  return make_game(2, ["g"], ["C", "D"], ["t"], ["c", "d"], 1, 0,
                   lambda g, a: [1.0], [1.0], [1.0], {"": 1.0},
                   lambda i, a, g, w, t: PD[a][i],
                   lambda a, g, tj: 1.0 if a == ("C", "C") else 0.0, 0.0, 0.0)


def swap2():
  return make_game(1, ["g0", "g1"], ["a"], ["t"], ["s"], 1, 0,
                   lambda g, a: [0.0, 1.0] if g == "g0" else [1.0, 0.0],
                   [1.0, 0.0], [1.0], {"": 1.0},
                   lambda i, a, g, w, t: 1.0 if g == "g0" else 0.0,
                   lambda a, g, tj: 0.0, 0.9, 0.9)


CHICKEN = {("D", "D"): (0, 0), ("D", "C"): (7, 2), ("C", "D"): (2, 7),
           ("C", "C"): (6, 6)}


def chicken():
  return make_game(2, ["g"], ["D", "C"], ["t"], ["d", "c"], 1, 0,
                   lambda g, a: [1.0], [1.0], [1.0], {"": 1.0},
                   lambda i, a, g, w, t: CHICKEN[a][i],
                   lambda a, g, tj: float(sum(CHICKEN[a])), 0.0, 0.0)


def persuasion():
  # Agent 0 is the judge, agent 1 the defendant whose action reports its type.
  def reward(i, a, g, w, t):
    if i == 1:
      return 1.0 if (a[1] == "convict") == (t == "guilty") else 0.0
    return 1.0 if a[0] == a[1] else 0.0

  return make_game(2, ["g"], ["acquit", "convict"], ["innocent", "guilty"],
                   ["s0", "s1"], 1, 0, lambda g, a: [1.0], [1.0], [0.7, 0.3],
                   {"": 1.0}, reward,
                   lambda a, g, tj: 1.0 if a[0] == "convict" else 0.0, 0.0, 0.0)


def two_source():
  return make_game(1, ["g"], ["a"], ["t"], ["junk", "gem"], 2, 0,
                   lambda g, a: [1.0], [1.0], [1.0], {"junk": 0.0, "gem": 1.0},
                   lambda i, a, g, w, t: 1.0 if w == "gem" else 0.0,
                   lambda a, g, tj: 0.0, 0.5, 0.5)


def goal(table):
  return {"kind": "goal", "table": table}


def profile(rule, policy, selection="obedient"):
  out = {"kind": "profile"}
  if rule is not None:
    out["rule"] = rule
  out["selection"] = selection
  out["policy"] = policy
  return out


def main():
  root = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..",
                      "fixtures")
  os.makedirs(root, exist_ok=True)
  files = {
      "pd2.game.json": pd2(),
      "pd1_static.game.json": pd1_static(),
      "swap2.game.json": swap2(),
      "chicken.game.json": chicken(),
      "persuasion.game.json": persuasion(),
      "two_source.game.json": two_source(),
      "pd1_dd.goal.json": goal({"g": {"t|t": {"D|D": 1}}}),
      "pd1_cc.goal.json": goal({"g": {"t|t": {"C|C": 1}}}),
      "pd1_dd.profile.json": profile(
          {"g": {"t|t": {"c|c": 1}}},
          {"independent": {str(i): {"g": {w: {"t": {"D": 1}} for w in "cd"}}
                           for i in range(2)}}),
      "chicken_ce.goal.json": goal(
          {"g": {"t|t": {"C|C": 1 / 3, "D|C": 1 / 3, "C|D": 1 / 3}}}),
      "persuasion.goal.json": goal({"g": {
          tj: ({"convict|convict": 1} if tj.endswith("guilty") else
               {"convict|acquit": 3 / 7, "acquit|acquit": 4 / 7})
          for tj in joint(["innocent", "guilty"], 2)}}),
      "pd2_mixed.profile.json": profile(
          {g: {"t|t": {"x|x": 0.4, "x|y": 0.1, "y|x": 0.2, "y|y": 0.3}}
           for g in ["g0", "g1"]},
          {"independent": {
              "0": {"g0": {"x": {"t": {"C": 0.7, "D": 0.3}},
                           "y": {"t": {"C": 0.2, "D": 0.8}}},
                    "g1": {"x": {"t": {"C": 0.5, "D": 0.5}},
                           "y": {"t": {"C": 0.1, "D": 0.9}}}},
              "1": {"g0": {"x": {"t": {"C": 0.6, "D": 0.4}},
                           "y": {"t": {"C": 0.3, "D": 0.7}}},
                    "g1": {"x": {"t": {"C": 0.9, "D": 0.1}},
                           "y": {"t": {"C": 0.4, "D": 0.6}}}}}}),
      "swap2.profile.json": profile(
          {g: {"t": {"s": 1}} for g in ["g0", "g1"]},
          {"independent": {"0": {g: {"s": {"t": {"a": 1}}}
                                 for g in ["g0", "g1"]}}}),
      "two_source_obedient.profile.json": profile(
          {"g": {"t": {"junk": 1}}},
          {"independent": {"0": {"g": {w: {"t": {"a": 1}}
                                       for w in ["junk", "gem"]}}}}),
      "two_source_select_gem.profile.json": profile(
          {"g": {"t": {"junk": 1}}},
          {"independent": {"0": {"g": {w: {"t": {"a": 1}}
                                       for w in ["junk", "gem"]}}}},
          {"0": {"g": {b: {"t": (1 if b.endswith("gem") else 0)}
                       for b in joint(["junk", "gem"], 2)}}}),
  }
  for name, doc in files.items():
    with open(os.path.join(root, name), "w") as f:
      json.dump(doc, f, indent=2)
      f.write("\n")
  return 0


if __name__ == "__main__":
  sys.exit(main())
