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

#include "support/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace infodesign::testing {
namespace {

// Digits of `index` in base `base`, most significant first.
std::vector<int> Digits(int index, int base, int len) {
  std::vector<int> d(len);
  for (int p = len - 1; p >= 0; --p) {
    d[p] = index % base;
    index /= base;
  }
  return d;
}

int FromDigits(const std::vector<int>& d, int base) {
  int x = 0;
  for (int v : d) x = x * base + v;
  return x;
}

double JointPolicy(const GameSpec& game, const Policy& pi, int g, int jw,
                   int tj, int ja) {
  if (!pi.independent()) return pi.Joint(game, g, jw, tj, ja);
  auto w = Digits(jw, game.num_signals(), game.n_agents);
  auto t = Digits(tj, game.num_types(), game.n_agents);
  auto a = Digits(ja, game.num_actions(), game.n_agents);
  double p = 1.0;
  for (int i = 0; i < game.n_agents; ++i) p *= pi.Own(i, g, w[i], t[i], a[i]);
  return p;
}

double TypeProb(const GameSpec& game, int tj, int skip = -1) {
  auto t = Digits(tj, game.num_types(), game.n_agents);
  double p = 1.0;
  for (int i = 0; i < game.n_agents; ++i) {
    if (i != skip) p *= game.type_prior[t[i]];
  }
  return p;
}

// Agent i's batch as a vector of signals, source order.
std::vector<int> Batch(const GameSpec& game, int i, int jwk, int jW) {
  const int n = game.n_agents, m = game.n_sources, O = game.num_signals();
  auto wk = Digits(jwk, O, n);
  auto W = Digits(jW, O, (m - 1) * n);
  std::vector<int> b(m);
  int next = 0;
  for (int p = 0; p < m; ++p) {
    b[p] = p == game.principal ? wk[i] : W[i * (m - 1) + next++];
  }
  return b;
}

}  // namespace

int OracleSelection(const GameSpec& game, const SelectionRule& beta, int g,
                    int tj, int jwk, int jW) {
  const int n = game.n_agents, O = game.num_signals();
  auto t = Digits(tj, game.num_types(), n);
  std::vector<int> w(n);
  for (int i = 0; i < n; ++i) {
    auto b = Batch(game, i, jwk, jW);
    w[i] = b[beta(i, g, FromDigits(b, O), t[i])];
  }
  return FromDigits(w, O);
}

std::vector<double> OracleValues(const GameSpec& game,
                                 const SignalingRule& alpha,
                                 const SelectionRule& beta, const Policy& pi) {
  const int n = game.n_agents, S = game.num_states();
  const int NJT = game.num_joint_types(), NJW = game.num_joint_signals();
  const int NJA = game.num_joint_actions(), NW = game.num_nonprincipal();
  std::vector<double> out(static_cast<size_t>(n) * NJT * S);
  for (int tj = 0; tj < NJT; ++tj) {
    auto t = Digits(tj, game.num_types(), n);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(S, S);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(S, n);
    for (int g = 0; g < S; ++g)
      for (int jwk = 0; jwk < NJW; ++jwk)
        for (int jW = 0; jW < NW; ++jW) {
          double p0 = alpha(g, tj, jwk) * game.nonprincipal[jW];
          if (p0 == 0.0) continue;
          int jw = OracleSelection(game, beta, g, tj, jwk, jW);
          auto w = Digits(jw, game.num_signals(), n);
          for (int ja = 0; ja < NJA; ++ja) {
            double p = p0 * JointPolicy(game, pi, g, jw, tj, ja);
            if (p == 0.0) continue;
            for (int g2 = 0; g2 < S; ++g2) P(g, g2) += p * game.Transition(g, ja, g2);
            for (int i = 0; i < n; ++i) R(g, i) += p * game.Reward(i, ja, g, w[i], t[i]);
          }
        }
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(S, S) - game.gamma * P;
    Eigen::MatrixXd J = M.fullPivLu().solve(R);
    for (int i = 0; i < n; ++i)
      for (int g = 0; g < S; ++g) out[(static_cast<size_t>(i) * NJT + tj) * S + g] = J(g, i);
  }
  return out;
}

StaticGains OracleStaticGains(const GameSpec& game, const SignalingRule& alpha,
                              const SelectionRule& beta, const Policy& pi) {
  const int n = game.n_agents, S = game.num_states(), m = game.n_sources;
  const int A = game.num_actions(), O = game.num_signals(), T = game.num_types();
  const int NJT = game.num_joint_types(), NJW = game.num_joint_signals();
  const int NJA = game.num_joint_actions(), NW = game.num_nonprincipal();
  const int NB = game.num_batches();
  StaticGains out;
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < S; ++g)
      for (int th = 0; th < T; ++th) {
        std::vector<double> weight(static_cast<size_t>(NB) * A, 0.0);
        std::vector<double> pay(static_cast<size_t>(NB) * A * m * A, 0.0);
        std::vector<double> wk_mass(O, 0.0), np_mass(IntPow(O, m - 1), 0.0);
        for (int jW = 0; jW < NW; ++jW) {
          auto W = Digits(jW, O, (m - 1) * n);
          std::vector<int> own(W.begin() + i * (m - 1), W.begin() + (i + 1) * (m - 1));
          np_mass[FromDigits(own, O)] += game.nonprincipal[jW];
        }
        for (int tj = 0; tj < NJT; ++tj) {
          auto t = Digits(tj, T, n);
          if (t[i] != th) continue;
          double d = TypeProb(game, tj, i);
          for (int jwk = 0; jwk < NJW; ++jwk) {
            wk_mass[Digits(jwk, O, n)[i]] += d * alpha(g, tj, jwk);
            for (int jW = 0; jW < NW; ++jW) {
              double p0 = d * alpha(g, tj, jwk) * game.nonprincipal[jW];
              if (p0 == 0.0) continue;
              auto b = Batch(game, i, jwk, jW);
              int bi = FromDigits(b, O);
              int jw = OracleSelection(game, beta, g, tj, jwk, jW);
              for (int ja = 0; ja < NJA; ++ja) {
                double p = p0 * JointPolicy(game, pi, g, jw, tj, ja);
                if (p == 0.0) continue;
                auto a = Digits(ja, A, n);
                int rec = a[i];
                weight[static_cast<size_t>(bi) * A + rec] += p;
                for (int s = 0; s < m; ++s)
                  for (int a2 = 0; a2 < A; ++a2) {
                    auto dev = a;
                    dev[i] = a2;
                    pay[((static_cast<size_t>(bi) * A + rec) * m + s) * A + a2] +=
                        p * game.Reward(i, FromDigits(dev, A), g, b[s], th);
                  }
              }
            }
          }
        }
        for (int bi = 0; bi < NB; ++bi) {
          auto b = Digits(bi, O, m);
          std::vector<int> own;
          for (int p = 0; p < m; ++p) {
            if (p != game.principal) own.push_back(b[p]);
          }
          if (wk_mass[b[game.principal]] <= 1e-9) continue;
          if (np_mass[FromDigits(own, O)] <= 1e-9) continue;
          double pb = 0.0;
          for (int a = 0; a < A; ++a) pb += weight[static_cast<size_t>(bi) * A + a];
          if (pb <= 0.0) continue;
          int s_eq = beta(i, g, bi, th);
          for (int rec = 0; rec < A; ++rec) {
            double w = weight[static_cast<size_t>(bi) * A + rec];
            if (w / pb <= 1e-9) continue;
            auto at = [&](int s, int a2) {
              return pay[((static_cast<size_t>(bi) * A + rec) * m + s) * A + a2] / w;
            };
            double eq = at(s_eq, rec);
            for (int s = 0; s < m; ++s)
              for (int a2 = 0; a2 < A; ++a2) {
                double gain = at(s, a2) - eq;
                if (s == s_eq) {
                  out.policy = std::max(out.policy, gain);
                } else {
                  out.selection = std::max(out.selection, gain);
                }
              }
          }
        }
      }
  return out;
}

double OracleMaxDeviationGain(const GameSpec& game, const SignalingRule& alpha,
                              const SelectionRule& beta, const Policy& pi) {
  const int n = game.n_agents, S = game.num_states(), m = game.n_sources;
  const int A = game.num_actions(), O = game.num_signals(), T = game.num_types();
  const int NJT = game.num_joint_types(), NJW = game.num_joint_signals();
  const int NJA = game.num_joint_actions(), NB = game.num_batches();
  auto J0 = OracleValues(game, alpha, beta, pi);
  auto ex_ante = [&](const std::vector<double>& J, int i) {
    double v = 0.0;
    for (int tj = 0; tj < NJT; ++tj)
      for (int g = 0; g < S; ++g)
        v += TypeProb(game, tj) * game.state_init[g] *
             J[(static_cast<size_t>(i) * NJT + tj) * S + g];
    return v;
  };
  const int sel_cells = S * NB * T, pol_cells = S * O * T;
  const int sel_count = IntPow(m, sel_cells), pol_count = IntPow(A, pol_cells);
  double best = -1e300;
  for (int i = 0; i < n; ++i) {
    double base = ex_ante(J0, i);
    for (int sc = 0; sc < sel_count; ++sc) {
      auto stab = Digits(sc, m, sel_cells);
      SelectionRule b2 = beta;
      for (int g = 0; g < S; ++g)
        for (int b = 0; b < NB; ++b)
          for (int th = 0; th < T; ++th)
            b2.at(i, g, b, th) = stab[(g * NB + b) * T + th];
      for (int pc = 0; pc < pol_count; ++pc) {
        auto ptab = Digits(pc, A, pol_cells);
        Policy p2 = Policy::Correlated(game);
        for (int g = 0; g < S; ++g)
          for (int jw = 0; jw < NJW; ++jw)
            for (int tj = 0; tj < NJT; ++tj) {
              int wi = Digits(jw, O, n)[i], ti = Digits(tj, T, n)[i];
              int ai = ptab[(g * O + wi) * T + ti];
              for (int ja = 0; ja < NJA; ++ja) {
                double p = JointPolicy(game, pi, g, jw, tj, ja);
                if (p == 0.0) continue;
                auto a = Digits(ja, A, n);
                a[i] = ai;
                p2.JointAt(g, jw, tj, FromDigits(a, A)) += p;
              }
            }
        best = std::max(best, ex_ante(OracleValues(game, alpha, b2, p2), i) - base);
      }
    }
  }
  return best;
}

}  // namespace infodesign::testing
