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

#ifndef INFODESIGN_GAME_HPP_
#define INFODESIGN_GAME_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace infodesign {

// Malformed documents and violated invariants. The message names the
// offending field or key.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Normalization tolerance for every stochastic table.
inline constexpr double kProbTol = 1e-9;

int IntPow(int base, int exp);

// Joint indices are lexicographic with position 0 most significant, so agent
// 0's component varies slowest.
int Digit(int index, int pos, int base, int len);
int SetDigit(int index, int pos, int base, int len, int value);
// Index over the len-1 digits left after removing position pos.
int DropDigit(int index, int pos, int base, int len);
int InsertDigit(int rest, int pos, int base, int len, int value);

// A finite augmented Bayesian Markov game. Action, type and signal alphabets
// are shared by all agents. Tables are flat row-major arrays.
struct GameSpec {
  int n_agents = 1;
  std::vector<std::string> states;
  std::vector<std::string> actions;
  std::vector<std::string> types;
  std::vector<std::string> signals;
  int n_sources = 1;
  int principal = 0;
  std::vector<double> transition;        // [g][joint action][g']
  std::vector<double> state_init;        // [g]
  std::vector<double> type_prior;        // [type], per agent
  std::vector<double> nonprincipal;      // [W] over signals^((m-1)*n)
  std::vector<double> rewards;           // [i][joint action][g][signal][type]
  std::vector<double> principal_reward;  // [joint action][g][joint type]
  double gamma = 0.5;
  double gamma_hat = 0.5;

  int num_states() const { return static_cast<int>(states.size()); }
  int num_actions() const { return static_cast<int>(actions.size()); }
  int num_types() const { return static_cast<int>(types.size()); }
  int num_signals() const { return static_cast<int>(signals.size()); }
  int num_joint_actions() const { return IntPow(num_actions(), n_agents); }
  int num_joint_types() const { return IntPow(num_types(), n_agents); }
  int num_joint_signals() const { return IntPow(num_signals(), n_agents); }
  // Batches seen by one agent: one signal per source.
  int num_batches() const { return IntPow(num_signals(), n_sources); }
  int num_own_nonprincipal() const {
    return IntPow(num_signals(), n_sources - 1);
  }
  int num_nonprincipal() const {
    return IntPow(num_signals(), (n_sources - 1) * n_agents);
  }

  double Transition(int g, int ja, int g2) const {
    return transition[(static_cast<size_t>(g) * num_joint_actions() + ja) *
                          num_states() + g2];
  }
  double Reward(int i, int ja, int g, int w, int theta) const;
  double PrincipalReward(int ja, int g, int tj) const;

  double JointTypeProb(int tj) const;
  // Product of the prior over every agent but i.
  double OthersTypeProb(int i, int tj) const;
  // max |R_i| over all arguments.
  double RewardBound() const;
  bool SignalIndependentRewards() const;

  int ActionOf(int ja, int i) const {
    return Digit(ja, i, num_actions(), n_agents);
  }
  int TypeOf(int tj, int i) const {
    return Digit(tj, i, num_types(), n_agents);
  }
  int SignalOf(int jw, int i) const {
    return Digit(jw, i, num_signals(), n_agents);
  }

  // Agent i's batch given the joint principal signal and the non-principal
  // draw. Batch position p holds source p's signal.
  int AgentBatch(int i, int jwk, int jW) const;
  int MakeBatch(int wk, int own_np) const;
  int BatchSignal(int batch, int pos) const {
    return Digit(batch, pos, num_signals(), n_sources);
  }
  int BatchPrincipalSignal(int batch) const {
    return BatchSignal(batch, principal);
  }
  int BatchOwnNonprincipal(int batch) const;
  int OwnNonprincipal(int i, int jW) const;
  // Marginal of the non-principal distribution on agent i's own signals.
  double OwnNonprincipalProb(int i, int own_np) const;
};

void ValidateGame(const GameSpec& game);
GameSpec LoadGame(const std::string& text);
GameSpec LoadGameFile(const std::string& path);
std::string SerializeGame(const GameSpec& game);
// Bit-exact comparison of every field.
bool SameGame(const GameSpec& a, const GameSpec& b);

// "l0|l1|..." for a joint index of the given length.
std::string JointLabel(const std::vector<std::string>& labels, int index,
                       int len);

std::string ReadTextFile(const std::string& path);

}  // namespace infodesign

#endif  // INFODESIGN_GAME_HPP_
