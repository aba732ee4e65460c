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

#include "infodesign/dynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace infodesign {
namespace {

Eigen::MatrixXd ToMatrix(const std::vector<double>& P) {
  const int n = static_cast<int>(std::lround(std::sqrt(P.size())));
  Eigen::MatrixXd M(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) M(r, c) = P[static_cast<size_t>(r) * n + c];
  return M;
}

// Per-(i, tj, g) step: continuation sum_{g'} T(g' | g, ja) J(g').
double Continuation(const GameSpec& game, int g, int ja, const double* J) {
  double s = 0.0;
  for (int g2 = 0; g2 < game.num_states(); ++g2) {
    s += game.Transition(g, ja, g2) * J[g2];
  }
  return s;
}

}  // namespace

SignalModel::SignalModel(const GameSpec& game, const SignalingRule& alpha,
                         const SelectionRule& beta)
    : num_joint_types_(game.num_joint_types()) {
  branches_.resize(static_cast<size_t>(game.num_states()) * num_joint_types_);
  for (int g = 0; g < game.num_states(); ++g)
    for (int tj = 0; tj < num_joint_types_; ++tj) {
      auto& out = branches_[static_cast<size_t>(g) * num_joint_types_ + tj];
      for (int jwk = 0; jwk < game.num_joint_signals(); ++jwk) {
        double pa = alpha(g, tj, jwk);
        if (pa <= 0.0) continue;
        for (int jW = 0; jW < game.num_nonprincipal(); ++jW) {
          double pw = game.nonprincipal[jW];
          if (pw <= 0.0) continue;
          out.push_back(
              {jwk, jW, JointSelection(game, beta, g, tj, jwk, jW), pa * pw});
        }
      }
    }
}

std::vector<double> InducedKernel(const GameSpec& game,
                                  const SignalingRule& alpha,
                                  const SelectionRule& beta, const Policy& pi,
                                  int tj) {
  SignalModel sm(game, alpha, beta);
  const int S = game.num_states();
  const int nja = game.num_joint_actions();
  std::vector<double> P(static_cast<size_t>(S) * S, 0.0);
  std::vector<double> row(nja);
  for (int g = 0; g < S; ++g)
    for (const Branch& br : sm.branches(g, tj)) {
      pi.JointRow(game, g, br.jw, tj, row.data());
      for (int ja = 0; ja < nja; ++ja) {
        double w = br.p * row[ja];
        if (w == 0.0) continue;
        for (int g2 = 0; g2 < S; ++g2) {
          P[static_cast<size_t>(g) * S + g2] += w * game.Transition(g, ja, g2);
        }
      }
    }
  return P;
}

std::vector<double> ExpectedReward(const GameSpec& game, const SignalModel& sm,
                                   const Policy& pi, int i, int tj) {
  const int S = game.num_states();
  const int nja = game.num_joint_actions();
  const int theta = game.TypeOf(tj, i);
  std::vector<double> r(S, 0.0), row(nja);
  for (int g = 0; g < S; ++g)
    for (const Branch& br : sm.branches(g, tj)) {
      pi.JointRow(game, g, br.jw, tj, row.data());
      int w = game.SignalOf(br.jw, i);
      for (int ja = 0; ja < nja; ++ja) {
        if (row[ja] == 0.0) continue;
        r[g] += br.p * row[ja] * game.Reward(i, ja, g, w, theta);
      }
    }
  return r;
}

std::vector<double> SolveDiscounted(const std::vector<double>& P,
                                    const std::vector<double>& r,
                                    double discount) {
  Eigen::MatrixXd M = ToMatrix(P);
  const int n = static_cast<int>(M.rows());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - discount * M;
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(r.data(), n);
  Eigen::VectorXd x = A.partialPivLu().solve(b);
  return std::vector<double>(x.data(), x.data() + n);
}

std::vector<double> StateVisitation(const std::vector<double>& P,
                                    const std::vector<double>& d0,
                                    double discount) {
  Eigen::MatrixXd M = ToMatrix(P);
  const int n = static_cast<int>(M.rows());
  Eigen::MatrixXd A =
      Eigen::MatrixXd::Identity(n, n) - discount * M.transpose();
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(d0.data(), n);
  Eigen::VectorXd x = A.partialPivLu().solve(b);
  return std::vector<double>(x.data(), x.data() + n);
}

BeliefSystem UpdateBeliefs(const GameSpec& game, const SignalingRule& alpha) {
  BeliefSystem mu = BeliefSystem::Zero(game);
  const int n = game.n_agents;
  const int O = game.num_signals();
  const int T = game.num_types();
  const size_t row = mu.RowSize();
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < game.num_states(); ++g)
      for (int wk = 0; wk < O; ++wk)
        for (int th = 0; th < T; ++th) {
          double* out = &mu.prob[mu.Offset(i, g, wk, th)];
          double total = 0.0;
          for (int os = 0; os < mu.num_others_signals; ++os) {
            int jwk = InsertDigit(os, i, O, n, wk);
            for (int ot = 0; ot < mu.num_others_types; ++ot) {
              int tj = InsertDigit(ot, i, T, n, th);
              double w = game.OthersTypeProb(i, tj) * alpha(g, tj, jwk);
              out[static_cast<size_t>(os) * mu.num_others_types + ot] = w;
              total += w;
            }
          }
          for (size_t k = 0; k < row; ++k) {
            out[k] = total > 0.0 ? out[k] / total : 1.0 / row;
          }
        }
  return mu;
}

double BeliefGap(const GameSpec& game, const SignalingRule& alpha,
                 const BeliefSystem& mu) {
  BeliefSystem ref = UpdateBeliefs(game, alpha);
  if (ref.prob.size() != mu.prob.size()) {
    throw InputError("belief system dimensions do not match the game");
  }
  double gap = 0.0;
  for (size_t k = 0; k < ref.prob.size(); ++k) {
    gap = std::max(gap, std::fabs(ref.prob[k] - mu.prob[k]));
  }
  return gap;
}

int ValueIterationLimit(double gamma, double reward_bound, double tol) {
  constexpr int kMargin = 10;
  if (gamma <= 0.0 || reward_bound <= 0.0) return kMargin + 1;
  double k = std::log(tol * (1.0 - gamma) / reward_bound) / std::log(gamma);
  return std::max(0, static_cast<int>(std::ceil(k))) + kMargin;
}

ValueBundle ComputeValues(const GameSpec& game, const SignalingRule& alpha,
                          const SelectionRule& beta, const Policy& pi,
                          const BeliefSystem& mu, double tol) {
  if (!(tol > 0.0)) throw InputError("value tolerance must be positive");
  const int n = game.n_agents;
  const int S = game.num_states();
  const int O = game.num_signals();
  const int T = game.num_types();
  const int NJT = game.num_joint_types();
  const int NJA = game.num_joint_actions();
  const double gamma = game.gamma;

  ValueBundle vb;
  vb.n_agents = n;
  vb.num_states = S;
  vb.num_signals = O;
  vb.num_types = T;
  vb.num_joint_types = NJT;
  vb.num_joint_actions = NJA;

  SignalModel sm(game, alpha, beta);
  std::vector<std::vector<double>> P(NJT);
  std::vector<double> r(static_cast<size_t>(n) * NJT * S);
  for (int tj = 0; tj < NJT; ++tj) {
    P[tj] = InducedKernel(game, alpha, beta, pi, tj);
    for (int i = 0; i < n; ++i) {
      auto ri = ExpectedReward(game, sm, pi, i, tj);
      std::copy(ri.begin(), ri.end(),
                r.begin() + (static_cast<size_t>(i) * NJT + tj) * S);
    }
  }
  auto apply = [&](const std::vector<double>& x) {
    std::vector<double> y(x.size());
    for (int i = 0; i < n; ++i)
      for (int tj = 0; tj < NJT; ++tj) {
        size_t off = (static_cast<size_t>(i) * NJT + tj) * S;
        for (int g = 0; g < S; ++g) {
          double s = 0.0;
          for (int g2 = 0; g2 < S; ++g2) {
            s += P[tj][static_cast<size_t>(g) * S + g2] * x[off + g2];
          }
          y[off + g] = r[off + g] + gamma * s;
        }
      }
    return y;
  };
  auto sup_diff = [](const std::vector<double>& a,
                     const std::vector<double>& b) {
    double d = 0.0;
    for (size_t k = 0; k < a.size(); ++k) d = std::max(d, std::fabs(a[k] - b[k]));
    return d;
  };

  const int limit = ValueIterationLimit(gamma, game.RewardBound(), tol);
  std::vector<double> x(r.size(), 0.0);
  bool converged = false;
  for (int k = 1; k <= limit; ++k) {
    std::vector<double> y = apply(x);
    double diff = sup_diff(x, y);
    x = std::move(y);
    vb.iterations = k;
    if (diff <= tol) {
      converged = true;
      break;
    }
  }
  vb.residual = sup_diff(x, apply(x));
  if (!converged || vb.residual > tol) {
    throw std::runtime_error("value iteration did not converge within " +
                             std::to_string(limit) + " iterations (residual " +
                             std::to_string(vb.residual) + ")");
  }
  vb.J_full = std::move(x);

  vb.J.assign(static_cast<size_t>(n) * S * T, 0.0);
  for (int i = 0; i < n; ++i)
    for (int tj = 0; tj < NJT; ++tj) {
      double w = game.OthersTypeProb(i, tj);
      int th = game.TypeOf(tj, i);
      for (int g = 0; g < S; ++g) {
        vb.J[(static_cast<size_t>(i) * S + g) * T + th] += w * vb.Jfull(i, tj, g);
      }
    }

  vb.V.assign(static_cast<size_t>(n) * S * O * O * T, 0.0);
  vb.Q.assign(static_cast<size_t>(n) * S * O * NJA * O * T, 0.0);
  std::vector<double> acc_w(static_cast<size_t>(O) * NJA);
  std::vector<double> acc_c(static_cast<size_t>(O) * NJA);
  std::vector<double> fallback(NJA), row(NJA), cont(NJA);
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < S; ++g)
      for (int wk = 0; wk < O; ++wk)
        for (int th = 0; th < T; ++th) {
          std::fill(acc_w.begin(), acc_w.end(), 0.0);
          std::fill(acc_c.begin(), acc_c.end(), 0.0);
          std::fill(fallback.begin(), fallback.end(), 0.0);
          for (int ot = 0; ot < mu.num_others_types; ++ot) {
            int tj = InsertDigit(ot, i, T, n, th);
            const double* J =
                &vb.J_full[(static_cast<size_t>(i) * NJT + tj) * S];
            for (int ja = 0; ja < NJA; ++ja) cont[ja] = Continuation(game, g, ja, J);
            for (int os = 0; os < mu.num_others_signals; ++os) {
              double mw = mu(i, g, wk, th, os, ot);
              if (mw == 0.0) continue;
              for (int ja = 0; ja < NJA; ++ja) fallback[ja] += mw * cont[ja];
              int jwk = InsertDigit(os, i, O, n, wk);
              for (int jW = 0; jW < game.num_nonprincipal(); ++jW) {
                double pw = game.nonprincipal[jW];
                if (pw == 0.0) continue;
                int jw = JointSelection(game, beta, g, tj, jwk, jW);
                int w = game.SignalOf(jw, i);
                pi.JointRow(game, g, jw, tj, row.data());
                for (int ja = 0; ja < NJA; ++ja) {
                  double x2 = mw * pw * row[ja];
                  if (x2 == 0.0) continue;
                  acc_w[static_cast<size_t>(w) * NJA + ja] += x2;
                  acc_c[static_cast<size_t>(w) * NJA + ja] += x2 * cont[ja];
                }
              }
            }
          }
          for (int w = 0; w < O; ++w) {
            double vs = 0.0, ws = 0.0;
            for (int ja = 0; ja < NJA; ++ja) {
              double aw = acc_w[static_cast<size_t>(w) * NJA + ja];
              double c = aw > 0.0 ? acc_c[static_cast<size_t>(w) * NJA + ja] / aw
                                  : fallback[ja];
              double q = game.Reward(i, ja, g, w, th) + gamma * c;
              vb.Q[vb.QIndex(i, g, w, ja, wk, th)] = q;
              vs += aw * q;
              ws += aw;
            }
            vb.V[vb.VIndex(i, g, w, wk, th)] = ws > 0.0 ? vs / ws : 0.0;
          }
        }
  return vb;
}

std::vector<double> DirectValues(const GameSpec& game,
                                 const SignalingRule& alpha,
                                 const SelectionRule& beta, const Policy& pi) {
  const int S = game.num_states();
  const int NJT = game.num_joint_types();
  SignalModel sm(game, alpha, beta);
  std::vector<double> out(static_cast<size_t>(game.n_agents) * NJT * S);
  for (int tj = 0; tj < NJT; ++tj) {
    auto P = InducedKernel(game, alpha, beta, pi, tj);
    for (int i = 0; i < game.n_agents; ++i) {
      auto x = SolveDiscounted(P, ExpectedReward(game, sm, pi, i, tj),
                               game.gamma);
      std::copy(x.begin(), x.end(),
                out.begin() + (static_cast<size_t>(i) * NJT + tj) * S);
    }
  }
  return out;
}

double ExAnteValue(const GameSpec& game, const std::vector<double>& J_full,
                   int i) {
  const int S = game.num_states();
  const int NJT = game.num_joint_types();
  double v = 0.0;
  for (int tj = 0; tj < NJT; ++tj) {
    double pt = game.JointTypeProb(tj);
    for (int g = 0; g < S; ++g) {
      v += pt * game.state_init[g] *
           J_full[(static_cast<size_t>(i) * NJT + tj) * S + g];
    }
  }
  return v;
}

double OccupancyMeasure::Mass(int tj) const {
  size_t block = static_cast<size_t>(num_states) * num_joint_actions *
                 num_joint_signals * num_joint_signals;
  double m = 0.0;
  for (size_t k = 0; k < block; ++k) m += rho[tj * block + k];
  return m;
}

OccupancyMeasure OccupancyMeasure::Zero(const GameSpec& game, double gamma) {
  OccupancyMeasure occ;
  occ.num_joint_types = game.num_joint_types();
  occ.num_states = game.num_states();
  occ.num_joint_actions = game.num_joint_actions();
  occ.num_joint_signals = game.num_joint_signals();
  occ.gamma = gamma;
  occ.rho.assign(static_cast<size_t>(occ.num_joint_types) * occ.num_states *
                     occ.num_joint_actions * occ.num_joint_signals *
                     occ.num_joint_signals, 0.0);
  return occ;
}

OccupancyMeasure OccupancyFromProfile(const GameSpec& game,
                                      const SignalingRule& alpha,
                                      const SelectionRule& beta,
                                      const Policy& pi) {
  OccupancyMeasure occ = OccupancyMeasure::Zero(game, game.gamma);
  SignalModel sm(game, alpha, beta);
  const int NJA = game.num_joint_actions();
  std::vector<double> row(NJA);
  for (int tj = 0; tj < game.num_joint_types(); ++tj) {
    auto P = InducedKernel(game, alpha, beta, pi, tj);
    auto d = StateVisitation(P, game.state_init, game.gamma);
    for (int g = 0; g < game.num_states(); ++g) {
      if (d[g] == 0.0) continue;
      for (const Branch& br : sm.branches(g, tj)) {
        pi.JointRow(game, g, br.jw, tj, row.data());
        for (int ja = 0; ja < NJA; ++ja) {
          if (row[ja] == 0.0) continue;
          occ.rho[occ.Index(tj, g, ja, br.jw, br.jwk)] += d[g] * br.p * row[ja];
        }
      }
    }
  }
  return occ;
}

double FlowResidual(const GameSpec& game, const SignalingRule& alpha,
                    const OccupancyMeasure& occ) {
  const int S = game.num_states();
  const int NJA = game.num_joint_actions();
  const int NJW = game.num_joint_signals();
  double worst = 0.0;
  for (int tj = 0; tj < game.num_joint_types(); ++tj) {
    std::vector<double> inflow(game.state_init);
    std::vector<double> lhs(static_cast<size_t>(S) * NJW, 0.0);
    for (int g = 0; g < S; ++g)
      for (int ja = 0; ja < NJA; ++ja)
        for (int jw = 0; jw < NJW; ++jw)
          for (int jwk = 0; jwk < NJW; ++jwk) {
            double x = occ(tj, g, ja, jw, jwk);
            if (x == 0.0) continue;
            lhs[static_cast<size_t>(g) * NJW + jwk] += x;
            for (int g2 = 0; g2 < S; ++g2) {
              inflow[g2] += occ.gamma * game.Transition(g, ja, g2) * x;
            }
          }
    for (int g = 0; g < S; ++g)
      for (int jwk = 0; jwk < NJW; ++jwk) {
        double rhs = alpha(g, tj, jwk) * inflow[g];
        worst = std::max(worst,
                         std::fabs(lhs[static_cast<size_t>(g) * NJW + jwk] - rhs));
      }
  }
  return worst;
}

double OccupancyReward(const GameSpec& game, const OccupancyMeasure& occ,
                       int i) {
  const int NJW = game.num_joint_signals();
  double total = 0.0;
  for (int tj = 0; tj < game.num_joint_types(); ++tj) {
    double pt = game.JointTypeProb(tj);
    int th = game.TypeOf(tj, i);
    for (int g = 0; g < game.num_states(); ++g)
      for (int ja = 0; ja < game.num_joint_actions(); ++ja)
        for (int jw = 0; jw < NJW; ++jw) {
          double r = game.Reward(i, ja, g, game.SignalOf(jw, i), th);
          for (int jwk = 0; jwk < NJW; ++jwk) {
            total += pt * r * occ(tj, g, ja, jw, jwk);
          }
        }
  }
  return total;
}

Policy PolicyFromOccupancy(const GameSpec& game, const OccupancyMeasure& occ,
                           int* uniform_rows) {
  Policy pi = Policy::Correlated(game);
  const int NJA = game.num_joint_actions();
  const int NJW = game.num_joint_signals();
  int flagged = 0;
  std::vector<double> row(NJA);
  for (int g = 0; g < game.num_states(); ++g)
    for (int jw = 0; jw < NJW; ++jw)
      for (int tj = 0; tj < game.num_joint_types(); ++tj) {
        double total = 0.0;
        for (int ja = 0; ja < NJA; ++ja) {
          row[ja] = 0.0;
          for (int jwk = 0; jwk < NJW; ++jwk) row[ja] += occ(tj, g, ja, jw, jwk);
          total += row[ja];
        }
        if (total <= 0.0) ++flagged;
        for (int ja = 0; ja < NJA; ++ja) {
          pi.JointAt(g, jw, tj, ja) = total > 0.0 ? row[ja] / total : 1.0 / NJA;
        }
      }
  if (uniform_rows) *uniform_rows = flagged;
  return pi;
}

std::vector<double> GoalKernel(const GameSpec& game, const Goal& kappa,
                               int tj) {
  const int S = game.num_states();
  std::vector<double> P(static_cast<size_t>(S) * S, 0.0);
  for (int g = 0; g < S; ++g)
    for (int ja = 0; ja < game.num_joint_actions(); ++ja) {
      double k = kappa(g, tj, ja);
      if (k == 0.0) continue;
      for (int g2 = 0; g2 < S; ++g2) {
        P[static_cast<size_t>(g) * S + g2] += k * game.Transition(g, ja, g2);
      }
    }
  return P;
}

std::vector<double> GoalVisitation(const GameSpec& game, const Goal& kappa,
                                   int tj, double discount) {
  return StateVisitation(GoalKernel(game, kappa, tj), game.state_init,
                         discount);
}

std::vector<double> GoalOccupancy(const GameSpec& game, const Goal& kappa,
                                  int tj, double discount) {
  auto d = GoalVisitation(game, kappa, tj, discount);
  const int NJA = game.num_joint_actions();
  std::vector<double> out(static_cast<size_t>(game.num_states()) * NJA);
  for (int g = 0; g < game.num_states(); ++g)
    for (int ja = 0; ja < NJA; ++ja) {
      out[static_cast<size_t>(g) * NJA + ja] = d[g] * kappa(g, tj, ja);
    }
  return out;
}

TruncatedSequenceDistribution TruncatedSequentialOccupancy(
    const GameSpec& game, const SignalingRule& alpha, const SelectionRule& beta,
    const Policy& pi, const BeliefSystem& mu, int tj, int t, int t_max,
    size_t cap) {
  if (t < 0 || t_max < t) {
    throw InputError("sequence length must satisfy 0 <= t <= T_max");
  }
  const int n = game.n_agents;
  const int S = game.num_states();
  const int NJA = game.num_joint_actions();
  const int NJW = game.num_joint_signals();
  const double gamma = game.gamma;

  TruncatedSequenceDistribution out;
  out.t = t;
  out.t_max = t_max;
  out.tj = tj;
  out.gamma = gamma;
  if (t == 0) {
    out.truncation_bound = std::pow(gamma, t_max + 1) / (1.0 - gamma);
  } else {
    int blocks = (t_max - t) / t + 1;
    out.truncation_bound =
        std::pow(gamma, blocks * t) * game.RewardBound() / (1.0 - gamma);
  }

  ValueBundle vb = ComputeValues(game, alpha, beta, pi, mu);
  SignalModel sm(game, alpha, beta);
  auto P = InducedKernel(game, alpha, beta, pi, tj);

  // Discounted start weights over g_0.
  std::vector<double> start_w(S, 0.0), dist(game.state_init);
  const int stride = t == 0 ? 1 : t;
  for (int tau = 0; tau + t <= t_max; ++tau) {
    if (tau % stride == 0) {
      double disc = std::pow(gamma, tau);
      for (int g = 0; g < S; ++g) start_w[g] += disc * dist[g];
    }
    std::vector<double> next(S, 0.0);
    for (int g = 0; g < S; ++g)
      for (int g2 = 0; g2 < S; ++g2)
        next[g2] += dist[g] * P[static_cast<size_t>(g) * S + g2];
    dist = std::move(next);
  }

  // Value at the last node: E[R + gamma J(g') | g, jwk], per agent.
  std::vector<double> last(static_cast<size_t>(n) * S * NJW, 0.0);
  std::vector<double> row(NJA);
  for (int g = 0; g < S; ++g) {
    std::vector<double> mass(NJW, 0.0);
    for (const Branch& br : sm.branches(g, tj)) {
      mass[br.jwk] += br.p;
      pi.JointRow(game, g, br.jw, tj, row.data());
      for (int ja = 0; ja < NJA; ++ja) {
        if (row[ja] == 0.0) continue;
        for (int i = 0; i < n; ++i) {
          const double* J = &vb.J_full[(static_cast<size_t>(i) *
                                        game.num_joint_types() + tj) * S];
          double q = game.Reward(i, ja, g, game.SignalOf(br.jw, i),
                                 game.TypeOf(tj, i)) +
                     gamma * Continuation(game, g, ja, J);
          last[(static_cast<size_t>(i) * S + g) * NJW + br.jwk] +=
              br.p * row[ja] * q;
        }
      }
    }
    for (int jwk = 0; jwk < NJW; ++jwk)
      for (int i = 0; i < n; ++i) {
        double& v = last[(static_cast<size_t>(i) * S + g) * NJW + jwk];
        v = mass[jwk] > 0.0 ? v / mass[jwk] : 0.0;
      }
  }

  struct Acc {
    double path = 0.0;
    std::vector<double> reward;
  };
  std::map<std::vector<int>, Acc> table;
  std::vector<int> h;
  std::vector<double> reward(n, 0.0);

  // Depth-first over positive-probability paths from g.
  auto dfs = [&](auto&& self, int g, int step, double prob) -> void {
    if (step == t) {
      std::vector<double> mass(NJW, 0.0);
      for (const Branch& br : sm.branches(g, tj)) mass[br.jwk] += br.p;
      for (int jwk = 0; jwk < NJW; ++jwk) {
        if (mass[jwk] <= 0.0) continue;
        h.push_back(g);
        h.push_back(jwk);
        auto [it, inserted] = table.try_emplace(h);
        if (inserted) {
          it->second.reward = reward;
          if (table.size() > cap) {
            throw InputError("sequence space exceeds the cap of " +
                             std::to_string(cap) + " entries");
          }
        }
        it->second.path += prob * mass[jwk];
        h.resize(h.size() - 2);
      }
      return;
    }
    double disc = std::pow(gamma, step);
    for (const Branch& br : sm.branches(g, tj)) {
      pi.JointRow(game, g, br.jw, tj, row.data());
      std::vector<double> local(row);
      for (int ja = 0; ja < NJA; ++ja) {
        if (local[ja] == 0.0) continue;
        std::vector<double> saved(reward);
        for (int i = 0; i < n; ++i) {
          reward[i] += disc * game.Reward(i, ja, g, game.SignalOf(br.jw, i),
                                          game.TypeOf(tj, i));
        }
        for (int g2 = 0; g2 < S; ++g2) {
          double pt = game.Transition(g, ja, g2);
          if (pt == 0.0) continue;
          h.insert(h.end(), {g, br.jwk, br.jw, ja});
          self(self, g2, step + 1, prob * br.p * local[ja] * pt);
          h.resize(h.size() - 4);
        }
        reward = std::move(saved);
      }
    }
  };
  for (int g0 = 0; g0 < S; ++g0) {
    if (start_w[g0] == 0.0 && game.state_init[g0] == 0.0) continue;
    dfs(dfs, g0, 0, 1.0);
  }

  const double disc_t = std::pow(gamma, t);
  out.entries.reserve(table.size());
  for (auto& [key, acc] : table) {
    SequenceEntry e;
    e.h = key;
    e.lambda = start_w[key[0]] * acc.path;
    e.start = game.state_init[key[0]] * acc.path;
    e.reward = acc.reward;
    e.q.resize(n);
    int g_last = key[key.size() - 2];
    int jwk_last = key[key.size() - 1];
    for (int i = 0; i < n; ++i) {
      e.q[i] = acc.reward[i] +
               disc_t * last[(static_cast<size_t>(i) * S + g_last) * NJW +
                             jwk_last];
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace infodesign
