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

#include "infodesign/strategy.hpp"

#include <cmath>
#include <string>

namespace infodesign {
namespace {

void CheckRow(const double* p, size_t n, const std::string& what) {
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (!(p[i] >= -kProbTol) || !std::isfinite(p[i])) {
      throw InputError(what + ": negative or non-finite probability");
    }
    sum += p[i];
  }
  if (std::fabs(sum - 1.0) > kProbTol) {
    throw InputError(what + ": row sums to " + std::to_string(sum));
  }
}

std::vector<PolicyDeviation> Tables(int cells, int base) {
  std::vector<PolicyDeviation> out;
  std::vector<int> cur(cells, 0);
  while (true) {
    out.push_back(cur);
    int p = cells - 1;
    while (p >= 0 && cur[p] == base - 1) {
      cur[p] = 0;
      --p;
    }
    if (p < 0) break;
    ++cur[p];
  }
  return out;
}

}  // namespace

SignalingRule SignalingRule::Zero(const GameSpec& game) {
  SignalingRule r;
  r.num_states = game.num_states();
  r.num_joint_types = game.num_joint_types();
  r.num_joint_signals = game.num_joint_signals();
  r.prob.assign(static_cast<size_t>(r.num_states) * r.num_joint_types *
                    r.num_joint_signals, 0.0);
  return r;
}

SignalingRule SignalingRule::Uniform(const GameSpec& game) {
  SignalingRule r = Zero(game);
  for (double& p : r.prob) p = 1.0 / r.num_joint_signals;
  return r;
}

SignalingRule SignalingRule::Constant(const GameSpec& game, int jwk) {
  SignalingRule r = Zero(game);
  for (int g = 0; g < r.num_states; ++g)
    for (int tj = 0; tj < r.num_joint_types; ++tj) r.at(g, tj, jwk) = 1.0;
  return r;
}

SelectionRule SelectionRule::Obedient(const GameSpec& game) {
  SelectionRule b;
  b.n_agents = game.n_agents;
  b.num_states = game.num_states();
  b.num_batches = game.num_batches();
  b.num_types = game.num_types();
  b.position.assign(static_cast<size_t>(b.n_agents) * b.num_states *
                        b.num_batches * b.num_types, game.principal);
  return b;
}

int JointSelection(const GameSpec& game, const SelectionRule& beta, int g,
                   int tj, int jwk, int jW) {
  int jw = 0;
  for (int i = 0; i < game.n_agents; ++i) {
    int b = game.AgentBatch(i, jwk, jW);
    jw = jw * game.num_signals() +
         SelectedSignal(game, beta, i, g, b, game.TypeOf(tj, i));
  }
  return jw;
}

double& Policy::JointAt(int g, int jw, int tj, int ja) {
  const int njw = IntPow(num_signals, n_agents);
  const int njt = IntPow(num_types, n_agents);
  const int nja = IntPow(num_actions, n_agents);
  return prob[((static_cast<size_t>(g) * njw + jw) * njt + tj) * nja + ja];
}

double Policy::Joint(const GameSpec& game, int g, int jw, int tj,
                     int ja) const {
  if (!independent()) {
    return prob[((static_cast<size_t>(g) * game.num_joint_signals() + jw) *
                     game.num_joint_types() + tj) * game.num_joint_actions() +
                ja];
  }
  double p = 1.0;
  for (int i = 0; i < n_agents && p > 0.0; ++i) {
    p *= Own(i, g, game.SignalOf(jw, i), game.TypeOf(tj, i),
             game.ActionOf(ja, i));
  }
  return p;
}

void Policy::JointRow(const GameSpec& game, int g, int jw, int tj,
                      double* out) const {
  const int nja = game.num_joint_actions();
  if (!independent()) {
    const double* row =
        &prob[((static_cast<size_t>(g) * game.num_joint_signals() + jw) *
                   game.num_joint_types() + tj) * nja];
    for (int ja = 0; ja < nja; ++ja) out[ja] = row[ja];
    return;
  }
  for (int ja = 0; ja < nja; ++ja) out[ja] = Joint(game, g, jw, tj, ja);
}

Policy Policy::Independent(const GameSpec& game) {
  Policy p;
  p.kind = Kind::kIndependent;
  p.n_agents = game.n_agents;
  p.num_states = game.num_states();
  p.num_signals = game.num_signals();
  p.num_types = game.num_types();
  p.num_actions = game.num_actions();
  p.prob.assign(static_cast<size_t>(p.n_agents) * p.num_states *
                    p.num_signals * p.num_types * p.num_actions, 0.0);
  return p;
}

Policy Policy::Correlated(const GameSpec& game) {
  Policy p;
  p.kind = Kind::kCorrelated;
  p.n_agents = game.n_agents;
  p.num_states = game.num_states();
  p.num_signals = game.num_signals();
  p.num_types = game.num_types();
  p.num_actions = game.num_actions();
  p.prob.assign(static_cast<size_t>(p.num_states) * game.num_joint_signals() *
                    game.num_joint_types() * game.num_joint_actions(), 0.0);
  return p;
}

Policy Policy::UniformIndependent(const GameSpec& game) {
  Policy p = Independent(game);
  for (double& x : p.prob) x = 1.0 / game.num_actions();
  return p;
}

Policy Policy::ConstantIndependent(const GameSpec& game, int action) {
  Policy p = Independent(game);
  for (int i = 0; i < p.n_agents; ++i)
    for (int g = 0; g < p.num_states; ++g)
      for (int w = 0; w < p.num_signals; ++w)
        for (int t = 0; t < p.num_types; ++t) p.OwnAt(i, g, w, t, action) = 1.0;
  return p;
}

Policy ToCorrelated(const GameSpec& game, const Policy& pi) {
  if (!pi.independent()) return pi;
  Policy out = Policy::Correlated(game);
  for (int g = 0; g < game.num_states(); ++g)
    for (int jw = 0; jw < game.num_joint_signals(); ++jw)
      for (int tj = 0; tj < game.num_joint_types(); ++tj)
        for (int ja = 0; ja < game.num_joint_actions(); ++ja)
          out.JointAt(g, jw, tj, ja) = pi.Joint(game, g, jw, tj, ja);
  return out;
}

BeliefSystem BeliefSystem::Zero(const GameSpec& game) {
  BeliefSystem mu;
  mu.n_agents = game.n_agents;
  mu.num_states = game.num_states();
  mu.num_signals = game.num_signals();
  mu.num_types = game.num_types();
  mu.num_others_signals = IntPow(game.num_signals(), game.n_agents - 1);
  mu.num_others_types = IntPow(game.num_types(), game.n_agents - 1);
  mu.prob.assign(static_cast<size_t>(mu.n_agents) * mu.num_states *
                     mu.num_signals * mu.num_types * mu.RowSize(), 0.0);
  return mu;
}

Goal Goal::Zero(const GameSpec& game) {
  Goal k;
  k.num_states = game.num_states();
  k.num_joint_types = game.num_joint_types();
  k.num_joint_actions = game.num_joint_actions();
  k.prob.assign(static_cast<size_t>(k.num_states) * k.num_joint_types *
                    k.num_joint_actions, 0.0);
  return k;
}

void ValidateRule(const GameSpec& game, const SignalingRule& alpha) {
  const int njw = game.num_joint_signals();
  if (alpha.num_states != game.num_states() ||
      alpha.num_joint_types != game.num_joint_types() ||
      alpha.num_joint_signals != njw ||
      alpha.prob.size() !=
          static_cast<size_t>(game.num_states()) * game.num_joint_types() * njw) {
    throw InputError("signaling rule dimensions do not match the game");
  }
  for (int g = 0; g < game.num_states(); ++g)
    for (int tj = 0; tj < game.num_joint_types(); ++tj)
      CheckRow(&alpha.prob[(static_cast<size_t>(g) * game.num_joint_types() +
                            tj) * njw], njw,
               "signaling rule row (" + game.states[g] + ", " +
                   JointLabel(game.types, tj, game.n_agents) + ")");
}

void ValidateSelection(const GameSpec& game, const SelectionRule& beta) {
  if (beta.n_agents != game.n_agents || beta.num_states != game.num_states() ||
      beta.num_batches != game.num_batches() ||
      beta.num_types != game.num_types() ||
      beta.position.size() != static_cast<size_t>(game.n_agents) *
                                  game.num_states() * game.num_batches() *
                                  game.num_types()) {
    throw InputError("selection rule dimensions do not match the game");
  }
  for (int p : beta.position) {
    if (p < 0 || p >= game.n_sources) {
      throw InputError("selection rule returns a position outside the batch");
    }
  }
}

void ValidatePolicy(const GameSpec& game, const Policy& pi) {
  if (pi.n_agents != game.n_agents || pi.num_states != game.num_states() ||
      pi.num_signals != game.num_signals() ||
      pi.num_types != game.num_types() ||
      pi.num_actions != game.num_actions()) {
    throw InputError("policy dimensions do not match the game");
  }
  if (pi.independent()) {
    const int na = game.num_actions();
    size_t rows = static_cast<size_t>(game.n_agents) * game.num_states() *
                  game.num_signals() * game.num_types();
    if (pi.prob.size() != rows * na) {
      throw InputError("policy table has the wrong size");
    }
    for (size_t r = 0; r < rows; ++r) {
      CheckRow(&pi.prob[r * na], na, "policy row " + std::to_string(r));
    }
  } else {
    const int nja = game.num_joint_actions();
    size_t rows = static_cast<size_t>(game.num_states()) *
                  game.num_joint_signals() * game.num_joint_types();
    if (pi.prob.size() != rows * nja) {
      throw InputError("policy table has the wrong size");
    }
    for (size_t r = 0; r < rows; ++r) {
      CheckRow(&pi.prob[r * nja], nja, "policy row " + std::to_string(r));
    }
  }
}

void ValidateBeliefs(const GameSpec& game, const BeliefSystem& mu) {
  BeliefSystem ref = BeliefSystem::Zero(game);
  if (mu.prob.size() != ref.prob.size() ||
      mu.num_others_signals != ref.num_others_signals ||
      mu.num_others_types != ref.num_others_types) {
    throw InputError("belief system dimensions do not match the game");
  }
  const size_t row = ref.RowSize();
  for (size_t r = 0; r * row < mu.prob.size(); ++r) {
    CheckRow(&mu.prob[r * row], row, "belief row " + std::to_string(r));
  }
}

void ValidateGoal(const GameSpec& game, const Goal& kappa) {
  const int nja = game.num_joint_actions();
  if (kappa.num_states != game.num_states() ||
      kappa.num_joint_types != game.num_joint_types() ||
      kappa.num_joint_actions != nja ||
      kappa.prob.size() !=
          static_cast<size_t>(game.num_states()) * game.num_joint_types() * nja) {
    throw InputError("goal dimensions do not match the game");
  }
  for (int g = 0; g < game.num_states(); ++g)
    for (int tj = 0; tj < game.num_joint_types(); ++tj)
      CheckRow(&kappa.prob[(static_cast<size_t>(g) * game.num_joint_types() +
                            tj) * nja], nja,
               "goal row (" + game.states[g] + ", " +
                   JointLabel(game.types, tj, game.n_agents) + ")");
}

double PolicyDeviationCount(const GameSpec& game) {
  return std::pow(static_cast<double>(game.num_actions()),
                  static_cast<double>(game.num_states()) * game.num_signals() *
                      game.num_types());
}

double SelectionDeviationCount(const GameSpec& game) {
  return std::pow(static_cast<double>(game.n_sources),
                  static_cast<double>(game.num_states()) * game.num_batches() *
                      game.num_types());
}

Deviations EnumerateDeviations(const GameSpec& game, int agent, double cap) {
  if (agent < 0 || agent >= game.n_agents) {
    throw InputError("agent index out of range");
  }
  double np = PolicyDeviationCount(game);
  double ns = SelectionDeviationCount(game);
  if (np > cap || ns > cap) {
    throw InputError("deviation space too large: " + std::to_string(np) +
                     " policy and " + std::to_string(ns) +
                     " selection tables exceed the cap of " +
                     std::to_string(cap));
  }
  Deviations d;
  d.policy = Tables(game.num_states() * game.num_signals() * game.num_types(),
                    game.num_actions());
  d.selection = Tables(
      game.num_states() * game.num_batches() * game.num_types(),
      game.n_sources);
  return d;
}

Policy WithPolicyDeviation(const GameSpec& game, const Policy& pi, int agent,
                           const PolicyDeviation& table) {
  const int O = game.num_signals();
  const int T = game.num_types();
  auto cell = [&](int g, int w, int t) {
    return table[(static_cast<size_t>(g) * O + w) * T + t];
  };
  if (pi.independent()) {
    Policy out = pi;
    for (int g = 0; g < game.num_states(); ++g)
      for (int w = 0; w < O; ++w)
        for (int t = 0; t < T; ++t)
          for (int a = 0; a < game.num_actions(); ++a)
            out.OwnAt(agent, g, w, t, a) = a == cell(g, w, t) ? 1.0 : 0.0;
    return out;
  }
  Policy out = Policy::Correlated(game);
  const int nja = game.num_joint_actions();
  const int na = game.num_actions();
  std::vector<double> row(nja);
  for (int g = 0; g < game.num_states(); ++g)
    for (int jw = 0; jw < game.num_joint_signals(); ++jw)
      for (int tj = 0; tj < game.num_joint_types(); ++tj) {
        pi.JointRow(game, g, jw, tj, row.data());
        int a_new = cell(g, game.SignalOf(jw, agent), game.TypeOf(tj, agent));
        for (int ja = 0; ja < nja; ++ja) {
          if (row[ja] == 0.0) continue;
          int ja2 = SetDigit(ja, agent, na, game.n_agents, a_new);
          out.JointAt(g, jw, tj, ja2) += row[ja];
        }
      }
  return out;
}

SelectionRule WithSelectionDeviation(const SelectionRule& beta, int agent,
                                     const SelectionDeviation& table) {
  SelectionRule out = beta;
  for (int g = 0; g < beta.num_states; ++g)
    for (int b = 0; b < beta.num_batches; ++b)
      for (int t = 0; t < beta.num_types; ++t)
        out.at(agent, g, b, t) =
            table[(static_cast<size_t>(g) * beta.num_batches + b) *
                      beta.num_types + t];
  return out;
}

}  // namespace infodesign
