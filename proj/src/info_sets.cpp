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

#include "info_sets.hpp"

namespace infodesign::internal {

InfoCells AnalyzeInfo(const GameSpec& game, const SignalingRule& alpha,
                      const SignalModel& sm, const Policy& pi, int i, int g,
                      int theta, const double* J, int only_tj) {
  const int n = game.n_agents;
  const int S = game.num_states();
  const int A = game.num_actions();
  const int T = game.num_types();
  const int m = game.n_sources;
  const int NJA = game.num_joint_actions();
  const double gamma = game.gamma;

  InfoCells c;
  c.num_batches = game.num_batches();
  c.num_actions = A;
  c.num_positions = m;
  c.weight.assign(static_cast<size_t>(c.num_batches) * A, 0.0);
  c.payoff.assign(static_cast<size_t>(c.num_batches) * A * m * A, 0.0);
  c.principal_mass.assign(game.num_signals(), 0.0);

  std::vector<double> row(NJA), value(NJA);
  const int others = IntPow(T, n - 1);
  for (int ot = 0; ot < others; ++ot) {
    int tj = InsertDigit(ot, i, T, n, theta);
    if (only_tj >= 0 && tj != only_tj) continue;
    double d = only_tj >= 0 ? 1.0 : game.OthersTypeProb(i, tj);
    if (d == 0.0) continue;
    const double* Jt = J + static_cast<size_t>(tj) * S;
    for (int ja = 0; ja < NJA; ++ja) {
      double s = 0.0;
      for (int g2 = 0; g2 < S; ++g2) s += game.Transition(g, ja, g2) * Jt[g2];
      value[ja] = gamma * s;
    }
    for (const Branch& br : sm.branches(g, tj)) {
      int b = game.AgentBatch(i, br.jwk, br.jW);
      pi.JointRow(game, g, br.jw, tj, row.data());
      for (int ja = 0; ja < NJA; ++ja) {
        if (row[ja] == 0.0) continue;
        double w = d * br.p * row[ja];
        int a_rec = game.ActionOf(ja, i);
        c.W(b, a_rec) += w;
        for (int s = 0; s < m; ++s) {
          int w2 = game.BatchSignal(b, s);
          for (int a2 = 0; a2 < A; ++a2) {
            int ja2 = SetDigit(ja, i, A, n, a2);
            c.payoff[c.PayoffIndex(b, a_rec, s, a2)] +=
                w * (game.Reward(i, ja2, g, w2, theta) + value[ja2]);
          }
        }
      }
    }
  }
  // P(own principal signal | g, theta), weighted like the cells.
  for (int ot = 0; ot < others; ++ot) {
    int tj = InsertDigit(ot, i, T, n, theta);
    if (only_tj >= 0 && tj != only_tj) continue;
    double d = only_tj >= 0 ? 1.0 : game.OthersTypeProb(i, tj);
    for (int jwk = 0; jwk < game.num_joint_signals(); ++jwk) {
      c.principal_mass[game.SignalOf(jwk, i)] +=
          d * alpha(g, tj, jwk);
    }
  }
  return c;
}

bool OnSupport(const GameSpec& game, const InfoCells& cells, int i, int b,
               int a_rec, double support) {
  int wk = game.BatchPrincipalSignal(b);
  if (cells.principal_mass[wk] <= support) return false;
  if (game.OwnNonprincipalProb(i, game.BatchOwnNonprincipal(b)) <= support) {
    return false;
  }
  double pb = 0.0;
  for (int a = 0; a < cells.num_actions; ++a) pb += cells.W(b, a);
  if (pb <= 0.0) return false;
  return cells.W(b, a_rec) / pb > support;
}

Decision BestDecision(const InfoCells& cells, int b, int a_rec, int s_eq,
                      bool selection_only, bool policy_only) {
  Decision best{s_eq, a_rec, 0.0};
  double w = cells.W(b, a_rec);
  if (w <= 0.0) return best;
  double eq = cells.payoff[cells.PayoffIndex(b, a_rec, s_eq, a_rec)];
  for (int s = 0; s < cells.num_positions; ++s) {
    if (selection_only && s == s_eq) continue;
    if (policy_only && s != s_eq) continue;
    for (int a2 = 0; a2 < cells.num_actions; ++a2) {
      double gain =
          (cells.payoff[cells.PayoffIndex(b, a_rec, s, a2)] - eq) / w;
      if (gain > best.gain) best = {s, a2, gain};
    }
  }
  return best;
}

}  // namespace infodesign::internal
