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

#ifndef INFODESIGN_SIM_HPP_
#define INFODESIGN_SIM_HPP_

#include <cstdint>
#include <ostream>
#include <vector>

#include "infodesign/dynamics.hpp"
#include "infodesign/game.hpp"
#include "infodesign/strategy.hpp"

namespace infodesign {

inline constexpr const char* kGeneratorName = "splitmix64-counter";

// Counter-based stream: the k-th uniform of (seed, stream) is a pure
// function of the three, so rollouts can run in any order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t NextU64();
  double Uniform();  // [0, 1) with 53 bits
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t SplitMix64(std::uint64_t x);

// First index whose cumulative mass exceeds u; the last positive entry on
// round-off.
int SampleIndex(const double* p, int n, double u);

struct Period {
  int g = 0;
  int jwk = 0;  // joint principal signal
  int jW = 0;   // joint non-principal draw
  int jw = 0;   // joint selected signal
  int ja = 0;
};

struct Trajectory {
  std::uint64_t seed = 0;
  std::uint64_t rollout = 0;
  int tj = 0;
  int horizon = 0;
  std::vector<Period> periods;
  std::vector<double> rewards;  // [t][i]

  double Reward(int t, int i, int n_agents) const {
    return rewards[static_cast<size_t>(t) * n_agents + i];
  }
};

// Smallest T >= 1 with gamma^T * R_max / (1 - gamma) < 1e-6.
int DefaultHorizon(const GameSpec& game);

// One episode: draw the joint type, then per period the principal signals,
// the non-principal batch, the selections, the actions, the rewards and the
// transition. Exactly one uniform per draw, in that order.
Trajectory Rollout(const GameSpec& game, const SignalingRule& alpha,
                   const SelectionRule& beta, const Policy& pi, int horizon,
                   std::uint64_t seed, std::uint64_t rollout = 0);

// gamma^t-weighted counts per joint type, divided by the number of
// trajectories with that joint type. Throws InputError on an empty list.
OccupancyMeasure EstimateOccupancy(const GameSpec& game,
                                   const std::vector<Trajectory>& trajectories,
                                   double gamma);

// Streaming version over rollouts 0..n-1, independent of the worker count.
OccupancyMeasure SimulateOccupancy(const GameSpec& game,
                                   const SignalingRule& alpha,
                                   const SelectionRule& beta, const Policy& pi,
                                   int n_rollouts, int horizon,
                                   std::uint64_t seed, int workers = 0);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  int n = 0;
};

// Discounted return per agent.
std::vector<Estimate> EmpiricalValue(const GameSpec& game,
                                     const SignalingRule& alpha,
                                     const SelectionRule& beta,
                                     const Policy& pi, int n_rollouts,
                                     int horizon, std::uint64_t seed,
                                     int workers = 0);

// Paired-seed estimate of agent i's discounted return under the deviating
// (beta_dev, pi_dev) minus the return under (beta, pi).
Estimate EmpiricalDeviationGain(const GameSpec& game,
                                const SignalingRule& alpha,
                                const SelectionRule& beta, const Policy& pi,
                                const SelectionRule& beta_dev,
                                const Policy& pi_dev, int agent,
                                int n_rollouts, int horizon,
                                std::uint64_t seed, int workers = 0);

// One JSON object per period.
void WriteTrajectoryJsonl(std::ostream& os, const GameSpec& game,
                          const Trajectory& traj);

}  // namespace infodesign

#endif  // INFODESIGN_SIM_HPP_
