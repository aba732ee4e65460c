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

#ifndef INFODESIGN_EQUILIBRIUM_HPP_
#define INFODESIGN_EQUILIBRIUM_HPP_

#include <string>
#include <vector>

#include "infodesign/dynamics.hpp"
#include "infodesign/game.hpp"
#include "infodesign/strategy.hpp"

namespace infodesign {

inline constexpr double kDefaultTol = 1e-6;
inline constexpr double kSupportTol = 1e-9;
inline constexpr int kDefaultTdev = 2;

// The deviation achieving the worst gain. An information set is
// (state, batch, own type, recommended action); batch is -1 when the check
// has no signals.
struct Witness {
  int agent = -1;
  std::string kind;  // "policy", "selection" or "compound"
  int state = -1;
  int batch = -1;
  int type = -1;
  int recommended = -1;
  int position = -1;
  int action = -1;
  int horizon = 0;  // compound window length
  double gain = 0.0;
};

struct EquilibriumReport {
  // max(worst_policy_gain, worst_selection_gain, compound_gain) <= tolerance.
  bool is_equilibrium = true;
  double worst_policy_gain = 0.0;
  double worst_selection_gain = 0.0;
  Witness witness;
  double tolerance = kDefaultTol;
  // Multi-period window; 0 when not evaluated.
  int t_dev = 0;
  double compound_gain = 0.0;
  bool consistent = true;
  double consistency_gap = 0.0;
  bool obedient = true;
  bool admissible = true;
  double admissibility_gap = 0.0;

  bool verified() const {
    return is_equilibrium && consistent && obedient && admissible;
  }
};

// max over (g, tj, ja) of |induced action marginal - kappa|.
double AdmissibilityGap(const GameSpec& game, const SignalingRule& alpha,
                        const SelectionRule& beta, const Policy& pi,
                        const Goal& kappa);
bool CheckAdmissibility(const GameSpec& game, const SignalingRule& alpha,
                        const SelectionRule& beta, const Policy& pi,
                        const Goal& kappa, double tol, double* gap = nullptr);

// Induced marginal P(ja | g, tj) of the profile.
Goal InducedGoal(const GameSpec& game, const SignalingRule& alpha,
                 const SelectionRule& beta, const Policy& pi);

bool CheckObedient(const GameSpec& game, const SelectionRule& beta);

// One-shot signal-and-action deviations at every on-support information set.
// Continuation values are those of the profile itself.
EquilibriumReport CheckPbme(const GameSpec& game, const SignalingRule& alpha,
                            const SelectionRule& beta, const Policy& pi,
                            const BeliefSystem& mu, double tol = kDefaultTol);

// CheckPbme plus obedience, admissibility against kappa and the compound
// window of t_dev periods.
EquilibriumReport CheckOPbme(const GameSpec& game, const SignalingRule& alpha,
                             const SelectionRule& beta, const Policy& pi,
                             const BeliefSystem& mu, const Goal& kappa,
                             double tol = kDefaultTol, int t_dev = kDefaultTdev);

// Largest gain, averaged over the opponents' types, of following the
// posterior-best one-shot deviation for up to t_dev consecutive periods.
double CompoundDeviationGain(const GameSpec& game, const SignalingRule& alpha,
                             const SelectionRule& beta, const Policy& pi,
                             int t_dev, Witness* witness = nullptr);

// Bayesian Markov Nash check on a game with one signal and one source;
// interim payoffs use the supplied beliefs over the opponents' types.
EquilibriumReport CheckBme(const GameSpec& game, const Policy& pi,
                           const BeliefSystem& mu, double tol = kDefaultTol);

// Correlated check of a goal. Requires rewards that do not depend on the
// selected signal.
EquilibriumReport CheckBmce(const GameSpec& game, const Goal& kappa,
                            double tol = kDefaultTol);

// Per-agent values J^kappa, [i][tj][g], under the kernel induced by kappa.
std::vector<double> GoalValues(const GameSpec& game, const Goal& kappa);

struct DeviationSlack {
  int agent = 0;
  std::vector<int> table;
  double slack = 0.0;   // U(equilibrium) - U(deviation)
  double weight = 0.0;  // prior-weighted occupancy mass of the deviation
  double value_gap = 0.0;  // same difference from direct value solves
};

struct SlackCertificate {
  std::vector<DeviationSlack> delta;  // policy deviations
  std::vector<DeviationSlack> zeta;   // selection deviations
  double min_delta = 0.0;
  double min_zeta = 0.0;
  double lagrangian_value = 0.0;
  // True when the deviation space exceeded the cap and a reduced set
  // (constant tables and single-cell switches) was used.
  bool reduced = false;
};

SlackCertificate ComputeSlacks(const GameSpec& game, const SignalingRule& alpha,
                               const SelectionRule& beta, const Policy& pi,
                               const BeliefSystem& mu,
                               double cap = kDefaultDeviationCap);

// Ex-ante value of agent i under a profile (d_g and the type prior).
double ProfileValue(const GameSpec& game, const SignalingRule& alpha,
                    const SelectionRule& beta, const Policy& pi, int i);

}  // namespace infodesign

#endif  // INFODESIGN_EQUILIBRIUM_HPP_
