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

#ifndef INFODESIGN_DESIGN_HPP_
#define INFODESIGN_DESIGN_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "infodesign/dynamics.hpp"
#include "infodesign/equilibrium.hpp"
#include "infodesign/game.hpp"
#include "infodesign/lp.hpp"
#include "infodesign/strategy.hpp"

namespace infodesign {

// The goal cannot be implemented: the design LP has no feasible point.
class InfeasibleGoal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No correlated goal passed verification.
class GoalNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OilLpOptions {
  bool incentives = true;
  double tol = kDefaultTol;
  // Agent continuation values [i][tj][g]; empty means the goal's own values.
  std::vector<double> continuation;
};

// Variables rho(tj, g, ja, jwk) on obedient cells only, for every joint type.
struct OilLp {
  LinearProgram lp;
  int num_joint_types = 0;
  int num_states = 0;
  int num_joint_actions = 0;
  int num_joint_signals = 0;
  int num_incentive_rows = 0;

  int Var(int tj, int g, int ja, int jwk) const {
    return ((tj * num_states + g) * num_joint_actions + ja) *
               num_joint_signals + jwk;
  }
};

OilLp BuildOilLp(const GameSpec& game, const Goal& kappa,
                 const OilLpOptions& options = {});

// Embeds an LP solution as an occupancy measure with jw = jwk.
OccupancyMeasure OccupancyFromLp(const GameSpec& game, const OilLp& oil,
                                 const std::vector<double>& x);

// alpha(jwk | g, tj) by conditional normalization; zero-mass rows become
// uniform and are counted in *uniform_rows.
SignalingRule RecoverRule(const GameSpec& game, const OccupancyMeasure& occ,
                          int* uniform_rows = nullptr);

struct EpsilonCertificate {
  std::vector<double> psi;  // [g][tj]
  std::vector<double> phi;  // [tj], max over states
  double Phi = 0.0;         // prior average of phi
  double Phi_mean = 0.0;    // prior and d_g average of psi
  double epsilon = 0.0;     // Phi / (1 - gamma_hat)
  double epsilon_agent = 0.0;  // Phi / (1 - gamma)
};

EpsilonCertificate ComputeEpsilon(const GameSpec& game,
                                  const SignalingRule& alpha,
                                  const SelectionRule& beta, const Policy& pi,
                                  const BeliefSystem& mu);

enum class DesignStatus { kVerified, kEpsilon, kInfeasible };
const char* DesignStatusName(DesignStatus s);

struct DesignOptions {
  double tol = kDefaultTol;
  int t_dev = kDefaultTdev;
  bool incentives = true;
  int restarts = 16;
  int steps = 200;
  double step = 0.1;
  std::uint64_t seed = 0;
  int lp_rounds = 5;
  bool compute_slacks = true;
  // 0 reads INFODESIGN_WORKERS, defaulting to the hardware concurrency.
  int workers = 0;
};

struct DesignResult {
  DesignStatus status = DesignStatus::kInfeasible;
  SignalingRule alpha;
  SelectionRule beta;
  Policy pi;
  OccupancyMeasure rho;
  EquilibriumReport verification;
  SlackCertificate slacks;
  EpsilonCertificate epsilon;
  LpResult lp;
  int lp_rounds = 0;
  int uniform_rule_rows = 0;
  int uniform_policy_rows = 0;
  bool refined = false;
  double principal_value = 0.0;
};

DesignResult DesignOil(const GameSpec& game, const Goal& kappa,
                       const DesignOptions& options = {});

struct DirectDesign {
  GameSpec game;  // single-source copy of the input game
  SignalingRule alpha;
  SelectionRule beta;
  Policy pi;
};

// Pushes the selected signals forward into a rule for the principal as the
// sole source. Throws InputError when (beta, pi) is not an equilibrium
// under alpha.
DirectDesign Directify(const GameSpec& game, const SignalingRule& alpha,
                       const SelectionRule& beta, const Policy& pi,
                       double tol = kDefaultTol);

double PrincipalPayoff(const GameSpec& game, const Goal& kappa);
double PrincipalPayoffProfile(const GameSpec& game, const SignalingRule& alpha,
                              const SelectionRule& beta, const Policy& pi);

struct GoalSelection {
  Goal kappa;
  double value = 0.0;
  std::string method;  // "lp", "lp-linearized" or "enumeration"
  int rounds = 0;
  int uniform_rows = 0;
  DesignResult design;
};

// Goal search only; `design` is left empty.
GoalSelection FindBestGoal(const GameSpec& game,
                           const DesignOptions& options = {});

// Maximizes the principal payoff over goals passing CheckBmce, then designs
// a rule for the best goal. Throws GoalNotFound when nothing verifies.
GoalSelection SelectGoal(const GameSpec& game,
                         const DesignOptions& options = {});

// Worker count from INFODESIGN_WORKERS, else the hardware concurrency.
int WorkerCount(int requested = 0);

}  // namespace infodesign

#endif  // INFODESIGN_DESIGN_HPP_
