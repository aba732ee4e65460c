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

#include "infodesign/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "infodesign/design.hpp"
#include "json.hpp"

namespace infodesign {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(SplitMix64(SplitMix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL))) {}

std::uint64_t CounterRng::NextU64() {
  ++counter_;
  return SplitMix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
}

double CounterRng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

int SampleIndex(const double* p, int n, double u) {
  double cum = 0.0;
  int last = -1;
  for (int k = 0; k < n; ++k) {
    if (p[k] <= 0.0) continue;
    last = k;
    cum += p[k];
    if (u < cum) return k;
  }
  return last < 0 ? 0 : last;
}

int DefaultHorizon(const GameSpec& game) {
  const double g = game.gamma;
  const double rmax = game.RewardBound();
  if (g <= 0.0 || rmax <= 0.0) return 1;
  int T = 1;
  double tail = g * rmax / (1.0 - g);
  while (tail >= 1e-6) {
    tail *= g;
    ++T;
  }
  return T;
}

namespace {

struct Sampler {
  const GameSpec& game;
  const SignalingRule& alpha;
  const SelectionRule& beta;
  const Policy& pi;
  std::vector<double> type_prob;
  std::vector<double> row;

  Sampler(const GameSpec& game_, const SignalingRule& alpha_,
          const SelectionRule& beta_, const Policy& pi_)
      : game(game_), alpha(alpha_), beta(beta_), pi(pi_),
        row(game_.num_joint_actions()) {
    for (int tj = 0; tj < game.num_joint_types(); ++tj) {
      type_prob.push_back(game.JointTypeProb(tj));
    }
  }

  // Calls visit(t, period, rewards) for each period; returns tj.
  template <typename Visit>
  int Run(int horizon, std::uint64_t seed, std::uint64_t rollout,
          std::vector<double>& rewards, Visit&& visit) {
    const int n = game.n_agents;
    const int S = game.num_states();
    const int NJW = game.num_joint_signals();
    const int NJA = game.num_joint_actions();
    CounterRng rng(seed, rollout);
    int tj = SampleIndex(type_prob.data(), game.num_joint_types(), rng.Uniform());
    int g = SampleIndex(game.state_init.data(), S, rng.Uniform());
    rewards.assign(n, 0.0);
    for (int t = 0; t < horizon; ++t) {
      Period p;
      p.g = g;
      p.jwk = SampleIndex(&alpha.prob[(static_cast<size_t>(g) * alpha.num_joint_types + tj) *
                                      NJW],
                          NJW, rng.Uniform());
      p.jW = SampleIndex(game.nonprincipal.data(), game.num_nonprincipal(),
                         rng.Uniform());
      p.jw = JointSelection(game, beta, g, tj, p.jwk, p.jW);
      pi.JointRow(game, g, p.jw, tj, row.data());
      p.ja = SampleIndex(row.data(), NJA, rng.Uniform());
      for (int i = 0; i < n; ++i) {
        rewards[i] = game.Reward(i, p.ja, g, game.SignalOf(p.jw, i),
                                 game.TypeOf(tj, i));
      }
      visit(t, p, rewards);
      g = SampleIndex(&game.transition[(static_cast<size_t>(g) * NJA + p.ja) * S], S,
                      rng.Uniform());
    }
    return tj;
  }
};

// Fixed-size blocks keep the summation order independent of the workers.
constexpr int kBlock = 1024;

template <typename Acc, typename Fill>
Acc BlockReduce(int n_rollouts, int workers, Acc zero, Fill fill) {
  const int blocks = (n_rollouts + kBlock - 1) / kBlock;
  std::vector<Acc> partial(blocks, zero);
  std::atomic<int> next{0};
  auto work = [&]() {
    for (int b = next++; b < blocks; b = next++) {
      int lo = b * kBlock;
      int hi = std::min(n_rollouts, lo + kBlock);
      fill(lo, hi, partial[b]);
    }
  };
  int w = std::max(1, std::min(WorkerCount(workers), blocks));
  std::vector<std::thread> pool;
  for (int k = 1; k < w; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  Acc out = zero;
  for (const Acc& p : partial) out += p;
  return out;
}

struct Moments {
  std::vector<double> sum, sq;
  int n = 0;
  Moments& operator+=(const Moments& o) {
    for (size_t k = 0; k < sum.size(); ++k) {
      sum[k] += o.sum[k];
      sq[k] += o.sq[k];
    }
    n += o.n;
    return *this;
  }
};

Estimate FromMoments(const Moments& m, size_t k) {
  Estimate e;
  e.n = m.n;
  if (m.n == 0) return e;
  e.mean = m.sum[k] / m.n;
  if (m.n > 1) {
    double var = (m.sq[k] - m.n * e.mean * e.mean) / (m.n - 1);
    e.se = std::sqrt(std::max(0.0, var) / m.n);
  }
  return e;
}

struct OccAcc {
  std::vector<double> rho;
  std::vector<double> count;
  OccAcc& operator+=(const OccAcc& o) {
    for (size_t k = 0; k < rho.size(); ++k) rho[k] += o.rho[k];
    for (size_t k = 0; k < count.size(); ++k) count[k] += o.count[k];
    return *this;
  }
};

OccupancyMeasure Normalize(const GameSpec& game, double gamma, OccAcc acc) {
  OccupancyMeasure occ = OccupancyMeasure::Zero(game, gamma);
  const size_t per_type = occ.rho.size() / game.num_joint_types();
  for (int tj = 0; tj < game.num_joint_types(); ++tj) {
    if (acc.count[tj] == 0.0) continue;
    for (size_t k = 0; k < per_type; ++k) {
      occ.rho[tj * per_type + k] = acc.rho[tj * per_type + k] / acc.count[tj];
    }
  }
  return occ;
}

}  // namespace

Trajectory Rollout(const GameSpec& game, const SignalingRule& alpha,
                   const SelectionRule& beta, const Policy& pi, int horizon,
                   std::uint64_t seed, std::uint64_t rollout) {
  if (horizon < 1) throw InputError("horizon must be at least 1");
  Trajectory traj;
  traj.seed = seed;
  traj.rollout = rollout;
  traj.horizon = horizon;
  Sampler sampler(game, alpha, beta, pi);
  std::vector<double> r;
  traj.tj = sampler.Run(horizon, seed, rollout, r,
                        [&](int, const Period& p, const std::vector<double>& rw) {
                          traj.periods.push_back(p);
                          traj.rewards.insert(traj.rewards.end(), rw.begin(), rw.end());
                        });
  return traj;
}

OccupancyMeasure EstimateOccupancy(const GameSpec& game,
                                   const std::vector<Trajectory>& trajectories,
                                   double gamma) {
  if (trajectories.empty()) {
    throw InputError("insufficient data: no trajectories");
  }
  OccupancyMeasure occ = OccupancyMeasure::Zero(game, gamma);
  OccAcc acc{std::vector<double>(occ.rho.size(), 0.0),
             std::vector<double>(game.num_joint_types(), 0.0)};
  for (const Trajectory& tr : trajectories) {
    acc.count[tr.tj] += 1.0;
    double disc = 1.0;
    for (const Period& p : tr.periods) {
      acc.rho[occ.Index(tr.tj, p.g, p.ja, p.jw, p.jwk)] += disc;
      disc *= gamma;
    }
  }
  return Normalize(game, gamma, std::move(acc));
}

OccupancyMeasure SimulateOccupancy(const GameSpec& game,
                                   const SignalingRule& alpha,
                                   const SelectionRule& beta, const Policy& pi,
                                   int n_rollouts, int horizon,
                                   std::uint64_t seed, int workers) {
  if (n_rollouts < 1) throw InputError("insufficient data: no rollouts");
  if (horizon < 1) throw InputError("horizon must be at least 1");
  OccupancyMeasure shape = OccupancyMeasure::Zero(game, game.gamma);
  OccAcc zero{std::vector<double>(shape.rho.size(), 0.0),
              std::vector<double>(game.num_joint_types(), 0.0)};
  const double gamma = game.gamma;
  OccAcc acc = BlockReduce(n_rollouts, workers, zero, [&](int lo, int hi, OccAcc& out) {
    Sampler sampler(game, alpha, beta, pi);
    std::vector<double> r;
    std::vector<std::pair<size_t, double>> cells;
    for (int k = lo; k < hi; ++k) {
      double disc = 1.0;
      cells.clear();
      int tj = sampler.Run(horizon, seed, static_cast<std::uint64_t>(k), r,
                           [&](int, const Period& p, const std::vector<double>&) {
                             cells.emplace_back(shape.Index(0, p.g, p.ja, p.jw, p.jwk),
                                                disc);
                             disc *= gamma;
                           });
      const size_t offset = shape.Index(tj, 0, 0, 0, 0);
      for (const auto& [idx, w] : cells) out.rho[offset + idx] += w;
      out.count[tj] += 1.0;
    }
  });
  return Normalize(game, gamma, std::move(acc));
}

std::vector<Estimate> EmpiricalValue(const GameSpec& game,
                                     const SignalingRule& alpha,
                                     const SelectionRule& beta,
                                     const Policy& pi, int n_rollouts,
                                     int horizon, std::uint64_t seed,
                                     int workers) {
  if (n_rollouts < 1) throw InputError("insufficient data: no rollouts");
  const int n = game.n_agents;
  Moments zero{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0};
  Moments m = BlockReduce(n_rollouts, workers, zero, [&](int lo, int hi, Moments& out) {
    Sampler sampler(game, alpha, beta, pi);
    std::vector<double> r, ret(n);
    for (int k = lo; k < hi; ++k) {
      std::fill(ret.begin(), ret.end(), 0.0);
      double disc = 1.0;
      sampler.Run(horizon, seed, static_cast<std::uint64_t>(k), r,
                  [&](int, const Period&, const std::vector<double>& rw) {
                    for (int i = 0; i < n; ++i) ret[i] += disc * rw[i];
                    disc *= game.gamma;
                  });
      for (int i = 0; i < n; ++i) {
        out.sum[i] += ret[i];
        out.sq[i] += ret[i] * ret[i];
      }
      ++out.n;
    }
  });
  std::vector<Estimate> out;
  for (int i = 0; i < n; ++i) out.push_back(FromMoments(m, i));
  return out;
}

Estimate EmpiricalDeviationGain(const GameSpec& game,
                                const SignalingRule& alpha,
                                const SelectionRule& beta, const Policy& pi,
                                const SelectionRule& beta_dev,
                                const Policy& pi_dev, int agent,
                                int n_rollouts, int horizon,
                                std::uint64_t seed, int workers) {
  if (n_rollouts < 1) throw InputError("insufficient data: no rollouts");
  if (agent < 0 || agent >= game.n_agents) throw InputError("agent out of range");
  Moments zero{{0.0}, {0.0}, 0};
  Moments m = BlockReduce(n_rollouts, workers, zero, [&](int lo, int hi, Moments& out) {
    Sampler eq(game, alpha, beta, pi);
    Sampler dev(game, alpha, beta_dev, pi_dev);
    std::vector<double> r;
    for (int k = lo; k < hi; ++k) {
      double ret[2] = {0.0, 0.0};
      Sampler* s[2] = {&eq, &dev};
      for (int v = 0; v < 2; ++v) {
        double disc = 1.0;
        s[v]->Run(horizon, seed, static_cast<std::uint64_t>(k), r,
                  [&](int, const Period&, const std::vector<double>& rw) {
                    ret[v] += disc * rw[agent];
                    disc *= game.gamma;
                  });
      }
      double d = ret[1] - ret[0];
      out.sum[0] += d;
      out.sq[0] += d * d;
      ++out.n;
    }
  });
  return FromMoments(m, 0);
}

void WriteTrajectoryJsonl(std::ostream& os, const GameSpec& game,
                          const Trajectory& traj) {
  const int n = game.n_agents;
  const int m = game.n_sources;
  for (size_t t = 0; t < traj.periods.size(); ++t) {
    const Period& p = traj.periods[t];
    nlohmann::ordered_json j;
    j["rollout"] = traj.rollout;
    j["t"] = t;
    j["types"] = nlohmann::ordered_json::array();
    j["state"] = game.states[p.g];
    j["batches"] = nlohmann::ordered_json::array();
    j["selected"] = nlohmann::ordered_json::array();
    j["actions"] = nlohmann::ordered_json::array();
    j["rewards"] = nlohmann::ordered_json::array();
    for (int i = 0; i < n; ++i) {
      j["types"].push_back(game.types[game.TypeOf(traj.tj, i)]);
      int b = game.AgentBatch(i, p.jwk, p.jW);
      auto batch = nlohmann::ordered_json::array();
      for (int s = 0; s < m; ++s) batch.push_back(game.signals[game.BatchSignal(b, s)]);
      j["batches"].push_back(std::move(batch));
      j["selected"].push_back(game.signals[game.SignalOf(p.jw, i)]);
      j["actions"].push_back(game.actions[game.ActionOf(p.ja, i)]);
      j["rewards"].push_back(traj.Reward(static_cast<int>(t), i, n));
    }
    os << j.dump() << "\n";
  }
}

}  // namespace infodesign
