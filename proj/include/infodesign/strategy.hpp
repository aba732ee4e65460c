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

#ifndef INFODESIGN_STRATEGY_HPP_
#define INFODESIGN_STRATEGY_HPP_

#include <cstdint>
#include <vector>

#include "infodesign/game.hpp"

namespace infodesign {

// alpha(joint principal signal | g, joint type).
struct SignalingRule {
  int num_states = 0;
  int num_joint_types = 0;
  int num_joint_signals = 0;
  std::vector<double> prob;  // [g][tj][jwk]

  double operator()(int g, int tj, int jwk) const {
    return prob[(static_cast<size_t>(g) * num_joint_types + tj) *
                    num_joint_signals + jwk];
  }
  double& at(int g, int tj, int jwk) {
    return prob[(static_cast<size_t>(g) * num_joint_types + tj) *
                    num_joint_signals + jwk];
  }

  static SignalingRule Zero(const GameSpec& game);
  static SignalingRule Uniform(const GameSpec& game);
  static SignalingRule Constant(const GameSpec& game, int jwk);
};

// beta_i(g, batch, own type) -> batch position.
struct SelectionRule {
  int n_agents = 0;
  int num_states = 0;
  int num_batches = 0;
  int num_types = 0;
  std::vector<int> position;  // [i][g][b][theta]

  int operator()(int i, int g, int b, int theta) const {
    return position[((static_cast<size_t>(i) * num_states + g) * num_batches +
                     b) * num_types + theta];
  }
  int& at(int i, int g, int b, int theta) {
    return position[((static_cast<size_t>(i) * num_states + g) * num_batches +
                     b) * num_types + theta];
  }

  static SelectionRule Obedient(const GameSpec& game);
};

// Selected signal of agent i.
inline int SelectedSignal(const GameSpec& game, const SelectionRule& beta,
                          int i, int g, int b, int theta) {
  return game.BatchSignal(b, beta(i, g, b, theta));
}

// Joint selected signal given the principal draw and the non-principal draw.
int JointSelection(const GameSpec& game, const SelectionRule& beta, int g,
                   int tj, int jwk, int jW);

struct Policy {
  enum class Kind { kIndependent, kCorrelated };
  Kind kind = Kind::kIndependent;
  int n_agents = 0;
  int num_states = 0;
  int num_signals = 0;
  int num_types = 0;
  int num_actions = 0;
  // Independent: [i][g][w][theta][a]. Correlated: [g][jw][tj][ja].
  std::vector<double> prob;

  bool independent() const { return kind == Kind::kIndependent; }
  double Own(int i, int g, int w, int theta, int a) const {
    return prob[(((static_cast<size_t>(i) * num_states + g) * num_signals + w) *
                     num_types + theta) * num_actions + a];
  }
  double& OwnAt(int i, int g, int w, int theta, int a) {
    return prob[(((static_cast<size_t>(i) * num_states + g) * num_signals + w) *
                     num_types + theta) * num_actions + a];
  }
  double& JointAt(int g, int jw, int tj, int ja);
  // pi(ja | g, jw, tj) for either representation.
  double Joint(const GameSpec& game, int g, int jw, int tj, int ja) const;
  // Fills out[ja] for every joint action.
  void JointRow(const GameSpec& game, int g, int jw, int tj,
                double* out) const;

  static Policy Independent(const GameSpec& game);  // zero table
  static Policy Correlated(const GameSpec& game);   // zero table
  static Policy UniformIndependent(const GameSpec& game);
  // Every agent plays `action` everywhere.
  static Policy ConstantIndependent(const GameSpec& game, int action);
};

// Same profile in correlated form.
Policy ToCorrelated(const GameSpec& game, const Policy& pi);

// mu_i(others' principal signals, others' types | g, own principal signal,
// own type).
struct BeliefSystem {
  int n_agents = 0;
  int num_states = 0;
  int num_signals = 0;
  int num_types = 0;
  int num_others_signals = 0;
  int num_others_types = 0;
  std::vector<double> prob;  // [i][g][w][theta][os][ot]

  double operator()(int i, int g, int w, int theta, int os, int ot) const {
    return prob[Offset(i, g, w, theta) +
                static_cast<size_t>(os) * num_others_types + ot];
  }
  size_t Offset(int i, int g, int w, int theta) const {
    return ((((static_cast<size_t>(i) * num_states + g) * num_signals + w) *
                 num_types + theta) * num_others_signals) * num_others_types;
  }
  size_t RowSize() const {
    return static_cast<size_t>(num_others_signals) * num_others_types;
  }
  static BeliefSystem Zero(const GameSpec& game);
};

// kappa(ja | g, tj).
struct Goal {
  int num_states = 0;
  int num_joint_types = 0;
  int num_joint_actions = 0;
  std::vector<double> prob;  // [g][tj][ja]

  double operator()(int g, int tj, int ja) const {
    return prob[(static_cast<size_t>(g) * num_joint_types + tj) *
                    num_joint_actions + ja];
  }
  double& at(int g, int tj, int ja) {
    return prob[(static_cast<size_t>(g) * num_joint_types + tj) *
                    num_joint_actions + ja];
  }
  static Goal Zero(const GameSpec& game);
};

struct Profile {
  SignalingRule alpha;
  SelectionRule beta;
  Policy pi;
};

// Throw InputError on size mismatch or rows off the simplex.
void ValidateRule(const GameSpec& game, const SignalingRule& alpha);
void ValidateSelection(const GameSpec& game, const SelectionRule& beta);
void ValidatePolicy(const GameSpec& game, const Policy& pi);
void ValidateBeliefs(const GameSpec& game, const BeliefSystem& mu);
void ValidateGoal(const GameSpec& game, const Goal& kappa);

// Deterministic deviation tables for one agent. A policy deviation maps
// (g, selected signal, own type) to an action; a selection deviation maps
// (g, batch, own type) to a batch position. Cells are ordered g-major.
using PolicyDeviation = std::vector<int>;     // [g][w][theta]
using SelectionDeviation = std::vector<int>;  // [g][b][theta]

struct Deviations {
  std::vector<PolicyDeviation> policy;
  std::vector<SelectionDeviation> selection;
};

inline constexpr double kDefaultDeviationCap = 1e6;

// Number of deterministic tables, as doubles so huge spaces do not overflow.
double PolicyDeviationCount(const GameSpec& game);
double SelectionDeviationCount(const GameSpec& game);

// Lexicographic order, first cell most significant. Throws InputError when
// either count exceeds `cap`.
Deviations EnumerateDeviations(const GameSpec& game, int agent,
                               double cap = kDefaultDeviationCap);

// Agent i follows `table`; the others keep pi. For a correlated pi the own
// component is remapped and the opponents' conditional is unchanged.
Policy WithPolicyDeviation(const GameSpec& game, const Policy& pi, int agent,
                           const PolicyDeviation& table);
SelectionRule WithSelectionDeviation(const SelectionRule& beta, int agent,
                                     const SelectionDeviation& table);

}  // namespace infodesign

#endif  // INFODESIGN_STRATEGY_HPP_
