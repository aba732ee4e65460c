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

#ifndef INFODESIGN_SRC_INFO_SETS_HPP_
#define INFODESIGN_SRC_INFO_SETS_HPP_

#include <vector>

#include "infodesign/dynamics.hpp"
#include "infodesign/game.hpp"
#include "infodesign/strategy.hpp"

namespace infodesign::internal {

// Unnormalized weights and decision payoffs of agent i's information sets
// (batch, recommended action) at a fixed (g, own type).
struct InfoCells {
  int num_batches = 0;
  int num_actions = 0;
  int num_positions = 0;
  std::vector<double> weight;  // [b][a_rec]
  std::vector<double> payoff;  // [b][a_rec][s][a']
  std::vector<double> principal_mass;  // P(own principal signal), [wk]

  double& W(int b, int a) { return weight[static_cast<size_t>(b) * num_actions + a]; }
  double W(int b, int a) const {
    return weight[static_cast<size_t>(b) * num_actions + a];
  }
  size_t PayoffIndex(int b, int a, int s, int a2) const {
    return ((static_cast<size_t>(b) * num_actions + a) * num_positions + s) *
               num_actions + a2;
  }
};

// J is agent i's continuation, [tj][g]. When only_tj >= 0 only that joint
// type contributes and the prior factor over the opponents is dropped.
InfoCells AnalyzeInfo(const GameSpec& game, const SignalingRule& alpha,
                      const SignalModel& sm, const Policy& pi, int i, int g,
                      int theta, const double* J, int only_tj = -1);

// Whether (b, a_rec) passes the support thresholds.
bool OnSupport(const GameSpec& game, const InfoCells& cells, int i, int b,
               int a_rec, double support);

// Best deviation gain (normalized) at one cell, with the maximizing
// decision. Returns 0 with the equilibrium decision when nothing is strictly
// better.
struct Decision {
  int position = 0;
  int action = 0;
  double gain = 0.0;
};
Decision BestDecision(const InfoCells& cells, int b, int a_rec, int s_eq,
                      bool selection_only = false, bool policy_only = false);

}  // namespace infodesign::internal

#endif  // INFODESIGN_SRC_INFO_SETS_HPP_
