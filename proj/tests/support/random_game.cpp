// Copyright 2026 The infodesign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "support/random_game.hpp"

namespace infodesign::testing {
namespace {

int Uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<std::string> Labels(const std::string& prefix, int k) {
  std::vector<std::string> out;
  for (int i = 0; i < k; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace

GameShape RandomShape(Rng& rng, int max_agents, int max_states, int max_actions,
                      int max_signals, int max_types, int max_sources) {
  GameShape s;
  s.agents = Uniform(rng, 1, max_agents);
  s.states = Uniform(rng, 1, max_states);
  s.actions = Uniform(rng, 2, max_actions);
  s.signals = Uniform(rng, 1, max_signals);
  s.types = Uniform(rng, 1, max_types);
  s.sources = Uniform(rng, 1, max_sources);
  return s;
}

std::vector<double> RandomSimplex(Rng& rng, int k, double sparse) {
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(k);
  double s = 0.0;
  for (int j = 0; j < k; ++j) {
    p[j] = (sparse > 0.0 && u(rng) < sparse) ? 0.0 : expo(rng);
    s += p[j];
  }
  if (s == 0.0) {
    p[Uniform(rng, 0, k - 1)] = 1.0;
    return p;
  }
  for (double& x : p) x /= s;
  return p;
}

GameSpec RandomGame(Rng& rng, const GameShape& sh) {
  GameSpec g;
  g.n_agents = sh.agents;
  g.states = Labels("g", sh.states);
  g.actions = Labels("a", sh.actions);
  g.types = Labels("t", sh.types);
  g.signals = Labels("w", sh.signals);
  g.n_sources = sh.sources;
  g.principal = Uniform(rng, 0, sh.sources - 1);
  g.gamma = sh.gamma;
  g.gamma_hat = sh.gamma_hat;
  const int S = g.num_states();
  const int NJA = g.num_joint_actions();
  for (int k = 0; k < S * NJA; ++k) {
    auto row = RandomSimplex(rng, S, sh.sparsity);
    g.transition.insert(g.transition.end(), row.begin(), row.end());
  }
  g.state_init = RandomSimplex(rng, S);
  g.type_prior = RandomSimplex(rng, sh.types);
  g.nonprincipal = RandomSimplex(rng, g.num_nonprincipal());
  std::uniform_real_distribution<double> r(-1.0, 1.0);
  const int O = g.num_signals();
  const int T = g.num_types();
  g.rewards.resize(static_cast<size_t>(g.n_agents) * NJA * S * O * T);
  for (int i = 0; i < g.n_agents; ++i)
    for (int ja = 0; ja < NJA; ++ja)
      for (int s = 0; s < S; ++s) {
        std::vector<double> by_type(T);
        for (double& v : by_type) v = r(rng);
        for (int w = 0; w < O; ++w)
          for (int t = 0; t < T; ++t) {
            size_t idx = (((static_cast<size_t>(i) * NJA + ja) * S + s) * O + w) * T + t;
            g.rewards[idx] = sh.signal_rewards ? r(rng) : by_type[t];
          }
      }
  g.principal_reward.resize(static_cast<size_t>(NJA) * S * g.num_joint_types());
  for (double& v : g.principal_reward) v = r(rng);
  ValidateGame(g);
  return g;
}

SignalingRule RandomRule(Rng& rng, const GameSpec& game, double sparse) {
  SignalingRule a = SignalingRule::Zero(game);
  const int NJW = game.num_joint_signals();
  for (int g = 0; g < game.num_states(); ++g)
    for (int tj = 0; tj < game.num_joint_types(); ++tj) {
      auto row = RandomSimplex(rng, NJW, sparse);
      for (int j = 0; j < NJW; ++j) a.at(g, tj, j) = row[j];
    }
  return a;
}

SelectionRule RandomSelection(Rng& rng, const GameSpec& game) {
  SelectionRule b = SelectionRule::Obedient(game);
  for (int& p : b.position) p = Uniform(rng, 0, game.n_sources - 1);
  return b;
}

Policy RandomIndependentPolicy(Rng& rng, const GameSpec& game, double sparse) {
  Policy pi = Policy::Independent(game);
  const int A = game.num_actions();
  for (int i = 0; i < game.n_agents; ++i)
    for (int g = 0; g < game.num_states(); ++g)
      for (int w = 0; w < game.num_signals(); ++w)
        for (int t = 0; t < game.num_types(); ++t) {
          auto row = RandomSimplex(rng, A, sparse);
          for (int a = 0; a < A; ++a) pi.OwnAt(i, g, w, t, a) = row[a];
        }
  return pi;
}

Policy RandomCorrelatedPolicy(Rng& rng, const GameSpec& game, double sparse) {
  Policy pi = Policy::Correlated(game);
  const int NJA = game.num_joint_actions();
  for (int g = 0; g < game.num_states(); ++g)
    for (int jw = 0; jw < game.num_joint_signals(); ++jw)
      for (int tj = 0; tj < game.num_joint_types(); ++tj) {
        auto row = RandomSimplex(rng, NJA, sparse);
        for (int ja = 0; ja < NJA; ++ja) pi.JointAt(g, jw, tj, ja) = row[ja];
      }
  return pi;
}

Goal RandomGoal(Rng& rng, const GameSpec& game, double sparse) {
  Goal k = Goal::Zero(game);
  const int NJA = game.num_joint_actions();
  for (int g = 0; g < game.num_states(); ++g)
    for (int tj = 0; tj < game.num_joint_types(); ++tj) {
      auto row = RandomSimplex(rng, NJA, sparse);
      for (int ja = 0; ja < NJA; ++ja) k.at(g, tj, ja) = row[ja];
    }
  return k;
}

std::string SourceDir() { return INFODESIGN_SOURCE_DIR; }

}  // namespace infodesign::testing
