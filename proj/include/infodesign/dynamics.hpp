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

#ifndef INFODESIGN_DYNAMICS_HPP_
#define INFODESIGN_DYNAMICS_HPP_

#include <vector>

#include "infodesign/game.hpp"
#include "infodesign/strategy.hpp"

namespace infodesign {

// One positive-probability realization of the period's signals.
struct Branch {
  int jwk = 0;   // joint principal signal
  int jW = 0;    // joint non-principal draw
  int jw = 0;    // joint selected signal
  double p = 0;  // alpha(jwk | g, tj) * P(jW)
};

// Signal branches per (g, tj) for a fixed (alpha, beta).
class SignalModel {
 public:
  SignalModel(const GameSpec& game, const SignalingRule& alpha,
              const SelectionRule& beta);
  const std::vector<Branch>& branches(int g, int tj) const {
    return branches_[static_cast<size_t>(g) * num_joint_types_ + tj];
  }

 private:
  int num_joint_types_;
  std::vector<std::vector<Branch>> branches_;
};

// Row-stochastic |G| x |G| matrix, row-major.
std::vector<double> InducedKernel(const GameSpec& game,
                                  const SignalingRule& alpha,
                                  const SelectionRule& beta, const Policy& pi,
                                  int tj);

// Expected per-period reward of agent i in each state given tj.
std::vector<double> ExpectedReward(const GameSpec& game, const SignalModel& sm,
                                   const Policy& pi, int i, int tj);

// Solves (I - discount * P) x = r for a row-major square P.
std::vector<double> SolveDiscounted(const std::vector<double>& P,
                                    const std::vector<double>& r,
                                    double discount);
// Discounted state visitation d solving (I - discount * P^T) d = d0.
std::vector<double> StateVisitation(const std::vector<double>& P,
                                    const std::vector<double>& d0,
                                    double discount);

BeliefSystem UpdateBeliefs(const GameSpec& game, const SignalingRule& alpha);
// max |mu - UpdateBeliefs(alpha)|.
double BeliefGap(const GameSpec& game, const SignalingRule& alpha,
                 const BeliefSystem& mu);

struct ValueBundle {
  int n_agents = 0;
  int num_states = 0;
  int num_signals = 0;
  int num_types = 0;
  int num_joint_types = 0;
  int num_joint_actions = 0;
  int iterations = 0;
  double residual = 0.0;
  // Values with the whole joint type known, [i][tj][g].
  std::vector<double> J_full;
  // [i][g][theta]
  std::vector<double> J;
  // [i][g][w][wk][theta]: w is the selected signal, wk the principal signal.
  std::vector<double> V;
  // [i][g][w][ja][wk][theta]
  std::vector<double> Q;

  double Jfull(int i, int tj, int g) const {
    return J_full[(static_cast<size_t>(i) * num_joint_types + tj) *
                      num_states + g];
  }
  double Jv(int i, int g, int theta) const {
    return J[(static_cast<size_t>(i) * num_states + g) * num_types + theta];
  }
  size_t VIndex(int i, int g, int w, int wk, int theta) const {
    return (((static_cast<size_t>(i) * num_states + g) * num_signals + w) *
                num_signals + wk) * num_types + theta;
  }
  size_t QIndex(int i, int g, int w, int ja, int wk, int theta) const {
    return ((((static_cast<size_t>(i) * num_states + g) * num_signals + w) *
                 num_joint_actions + ja) * num_signals + wk) * num_types +
           theta;
  }
};

inline constexpr double kDefaultValueTol = 1e-10;

// Successive approximation from zero. Throws std::runtime_error if the
// residual does not fall below tol within the contraction bound plus margin.
ValueBundle ComputeValues(const GameSpec& game, const SignalingRule& alpha,
                          const SelectionRule& beta, const Policy& pi,
                          const BeliefSystem& mu,
                          double tol = kDefaultValueTol);

// Iteration budget used by ComputeValues.
int ValueIterationLimit(double gamma, double reward_bound, double tol);

// Exact per-joint-type values by a direct linear solve, [i][tj][g].
std::vector<double> DirectValues(const GameSpec& game,
                                 const SignalingRule& alpha,
                                 const SelectionRule& beta, const Policy& pi);

// Ex-ante value of agent i: states from d_g, types from the prior.
double ExAnteValue(const GameSpec& game, const std::vector<double>& J_full,
                   int i);

struct OccupancyMeasure {
  int num_joint_types = 0;
  int num_states = 0;
  int num_joint_actions = 0;
  int num_joint_signals = 0;
  double gamma = 0.0;
  std::vector<double> rho;  // [tj][g][ja][jw][jwk]

  size_t Index(int tj, int g, int ja, int jw, int jwk) const {
    return (((static_cast<size_t>(tj) * num_states + g) * num_joint_actions +
             ja) * num_joint_signals + jw) * num_joint_signals + jwk;
  }
  double operator()(int tj, int g, int ja, int jw, int jwk) const {
    return rho[Index(tj, g, ja, jw, jwk)];
  }
  double Mass(int tj) const;
  static OccupancyMeasure Zero(const GameSpec& game, double gamma);
};

OccupancyMeasure OccupancyFromProfile(const GameSpec& game,
                                      const SignalingRule& alpha,
                                      const SelectionRule& beta,
                                      const Policy& pi);

// Largest violation of the flow identity over (tj, g, jwk).
double FlowResidual(const GameSpec& game, const SignalingRule& alpha,
                    const OccupancyMeasure& occ);

// sum over cells of R_i * rho, weighted by the joint type prior.
double OccupancyReward(const GameSpec& game, const OccupancyMeasure& occ,
                       int i);

// Correlated pi(ja | g, jw, tj) keyed by the selected joint signal; zero
// rows become uniform and are counted in *uniform_rows when given.
Policy PolicyFromOccupancy(const GameSpec& game, const OccupancyMeasure& occ,
                           int* uniform_rows = nullptr);

// rho^kappa(g, ja | tj) under the kappa-induced kernel, [g][ja].
std::vector<double> GoalOccupancy(const GameSpec& game, const Goal& kappa,
                                  int tj, double discount);
// State visitation under kappa, [g].
std::vector<double> GoalVisitation(const GameSpec& game, const Goal& kappa,
                                   int tj, double discount);
// Kernel induced by kappa for joint type tj.
std::vector<double> GoalKernel(const GameSpec& game, const Goal& kappa,
                               int tj);

// h_t = (g_0, jwk_0, jw_0, ja_0, ..., g_t, jwk_t).
struct SequenceEntry {
  std::vector<int> h;
  double lambda = 0.0;   // truncated sequential occupancy weight
  double start = 0.0;    // P(h_{0:t} = h) from the initial distribution
  std::vector<double> reward;  // R^{(t)} per agent
  std::vector<double> q;       // extended Q per agent
};

struct TruncatedSequenceDistribution {
  int t = 0;
  int t_max = 0;
  int tj = 0;
  double gamma = 0.0;
  // Bound on |sum R^{(t)} lambda - sum R rho| for any agent.
  double truncation_bound = 0.0;
  std::vector<SequenceEntry> entries;
};

inline constexpr size_t kDefaultSequenceCap = 2000000;

// Start times tau = 0, t, 2t, ... with tau <= t_max - t (stride 1 when t = 0),
// each weighted by gamma^tau.
TruncatedSequenceDistribution TruncatedSequentialOccupancy(
    const GameSpec& game, const SignalingRule& alpha, const SelectionRule& beta,
    const Policy& pi, const BeliefSystem& mu, int tj, int t, int t_max,
    size_t cap = kDefaultSequenceCap);

}  // namespace infodesign

#endif  // INFODESIGN_DYNAMICS_HPP_
