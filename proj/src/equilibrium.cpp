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

#include "infodesign/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "info_sets.hpp"

namespace infodesign {

using internal::AnalyzeInfo;
using internal::BestDecision;
using internal::Decision;
using internal::InfoCells;
using internal::OnSupport;

Goal InducedGoal(const GameSpec& game, const SignalingRule& alpha,
                 const SelectionRule& beta, const Policy& pi) {
  Goal out = Goal::Zero(game);
  SignalModel sm(game, alpha, beta);
  const int NJA = game.num_joint_actions();
  std::vector<double> row(NJA);
  for (int g = 0; g < game.num_states(); ++g)
    for (int tj = 0; tj < game.num_joint_types(); ++tj)
      for (const Branch& br : sm.branches(g, tj)) {
        pi.JointRow(game, g, br.jw, tj, row.data());
        for (int ja = 0; ja < NJA; ++ja) out.at(g, tj, ja) += br.p * row[ja];
      }
  return out;
}

double AdmissibilityGap(const GameSpec& game, const SignalingRule& alpha,
                        const SelectionRule& beta, const Policy& pi,
                        const Goal& kappa) {
  Goal induced = InducedGoal(game, alpha, beta, pi);
  double gap = 0.0;
  for (size_t k = 0; k < induced.prob.size(); ++k) {
    gap = std::max(gap, std::fabs(induced.prob[k] - kappa.prob[k]));
  }
  return gap;
}

bool CheckAdmissibility(const GameSpec& game, const SignalingRule& alpha,
                        const SelectionRule& beta, const Policy& pi,
                        const Goal& kappa, double tol, double* gap) {
  double g = AdmissibilityGap(game, alpha, beta, pi, kappa);
  if (gap) *gap = g;
  return g <= tol;
}

bool CheckObedient(const GameSpec& game, const SelectionRule& beta) {
  if (game.n_sources == 1) return true;
  return std::all_of(beta.position.begin(), beta.position.end(),
                     [&](int p) { return p == game.principal; });
}

namespace {

void Finalize(EquilibriumReport& r) {
  r.is_equilibrium =
      std::max({r.worst_policy_gain, r.worst_selection_gain, r.compound_gain}) <=
      r.tolerance;
}

}  // namespace

EquilibriumReport CheckPbme(const GameSpec& game, const SignalingRule& alpha,
                            const SelectionRule& beta, const Policy& pi,
                            const BeliefSystem& mu, double tol) {
  EquilibriumReport rep;
  rep.tolerance = tol;
  rep.consistency_gap = BeliefGap(game, alpha, mu);
  rep.consistent = rep.consistency_gap <= tol;

  const int S = game.num_states();
  const int NJT = game.num_joint_types();
  auto J = DirectValues(game, alpha, beta, pi);
  SignalModel sm(game, alpha, beta);
  double worst = 0.0;
  for (int i = 0; i < game.n_agents; ++i) {
    const double* Ji = &J[static_cast<size_t>(i) * NJT * S];
    for (int g = 0; g < S; ++g)
      for (int th = 0; th < game.num_types(); ++th) {
        InfoCells cells = AnalyzeInfo(game, alpha, sm, pi, i, g, th, Ji);
        for (int b = 0; b < game.num_batches(); ++b)
          for (int a = 0; a < game.num_actions(); ++a) {
            if (!OnSupport(game, cells, i, b, a, kSupportTol)) continue;
            int s_eq = beta(i, g, b, th);
            Decision pol = BestDecision(cells, b, a, s_eq, false, true);
            Decision sel = BestDecision(cells, b, a, s_eq, true, false);
            rep.worst_policy_gain = std::max(rep.worst_policy_gain, pol.gain);
            rep.worst_selection_gain =
                std::max(rep.worst_selection_gain, sel.gain);
            for (const Decision* d : {&pol, &sel}) {
              if (d->gain > worst) {
                worst = d->gain;
                rep.witness = {i, d == &pol ? "policy" : "selection", g, b, th,
                               a, d->position, d->action, 1, d->gain};
              }
            }
          }
      }
  }
  Finalize(rep);
  return rep;
}

double CompoundDeviationGain(const GameSpec& game, const SignalingRule& alpha,
                             const SelectionRule& beta, const Policy& pi,
                             int t_dev, Witness* witness) {
  const int n = game.n_agents;
  const int S = game.num_states();
  const int T = game.num_types();
  const int A = game.num_actions();
  const int NJT = game.num_joint_types();
  const int NJA = game.num_joint_actions();
  const int NB = game.num_batches();
  auto J0 = DirectValues(game, alpha, beta, pi);
  SignalModel sm(game, alpha, beta);
  double best = 0.0;
  std::vector<double> row(NJA), cont(NJA);
  for (int i = 0; i < n; ++i) {
    std::vector<double> base(J0.begin() + static_cast<size_t>(i) * NJT * S,
                             J0.begin() + static_cast<size_t>(i + 1) * NJT * S);
    std::vector<double> cur = base;
    for (int step = 1; step <= t_dev; ++step) {
      std::vector<double> next(cur.size(), 0.0);
      for (int g = 0; g < S; ++g)
        for (int th = 0; th < T; ++th) {
          InfoCells cells = AnalyzeInfo(game, alpha, sm, pi, i, g, th, cur.data());
          std::vector<Decision> dec(static_cast<size_t>(NB) * A);
          for (int b = 0; b < NB; ++b)
            for (int a = 0; a < A; ++a) {
              dec[static_cast<size_t>(b) * A + a] =
                  BestDecision(cells, b, a, beta(i, g, b, th));
            }
          const int others = IntPow(T, n - 1);
          double avg = 0.0;
          for (int ot = 0; ot < others; ++ot) {
            int tj = InsertDigit(ot, i, T, n, th);
            const double* Jt = &cur[static_cast<size_t>(tj) * S];
            for (int ja = 0; ja < NJA; ++ja) {
              double s = 0.0;
              for (int g2 = 0; g2 < S; ++g2) s += game.Transition(g, ja, g2) * Jt[g2];
              cont[ja] = game.gamma * s;
            }
            double v = 0.0;
            for (const Branch& br : sm.branches(g, tj)) {
              int b = game.AgentBatch(i, br.jwk, br.jW);
              pi.JointRow(game, g, br.jw, tj, row.data());
              for (int ja = 0; ja < NJA; ++ja) {
                if (row[ja] == 0.0) continue;
                const Decision& d =
                    dec[static_cast<size_t>(b) * A + game.ActionOf(ja, i)];
                int ja2 = SetDigit(ja, i, A, n, d.action);
                v += br.p * row[ja] *
                     (game.Reward(i, ja2, g, game.BatchSignal(b, d.position), th) +
                      cont[ja2]);
              }
            }
            next[static_cast<size_t>(tj) * S + g] = v;
            avg += game.OthersTypeProb(i, tj) *
                   (v - base[static_cast<size_t>(tj) * S + g]);
          }
          if (avg > best) {
            best = avg;
            if (witness) {
              *witness = Witness{};
              witness->agent = i;
              witness->kind = "compound";
              witness->state = g;
              witness->type = th;
              witness->horizon = step;
              witness->gain = avg;
            }
          }
        }
      cur = std::move(next);
    }
  }
  return best;
}

EquilibriumReport CheckOPbme(const GameSpec& game, const SignalingRule& alpha,
                             const SelectionRule& beta, const Policy& pi,
                             const BeliefSystem& mu, const Goal& kappa,
                             double tol, int t_dev) {
  EquilibriumReport rep = CheckPbme(game, alpha, beta, pi, mu, tol);
  rep.obedient = CheckObedient(game, beta);
  rep.admissible =
      CheckAdmissibility(game, alpha, beta, pi, kappa, tol, &rep.admissibility_gap);
  rep.t_dev = t_dev;
  if (t_dev > 0) {
    Witness w;
    rep.compound_gain = CompoundDeviationGain(game, alpha, beta, pi, t_dev, &w);
    if (rep.compound_gain > std::max(rep.worst_policy_gain,
                                     rep.worst_selection_gain) &&
        rep.compound_gain > tol) {
      rep.witness = w;
    }
  }
  Finalize(rep);
  return rep;
}

std::vector<double> GoalValues(const GameSpec& game, const Goal& kappa) {
  const int S = game.num_states();
  const int NJT = game.num_joint_types();
  const int NJA = game.num_joint_actions();
  std::vector<double> out(static_cast<size_t>(game.n_agents) * NJT * S);
  for (int tj = 0; tj < NJT; ++tj) {
    auto P = GoalKernel(game, kappa, tj);
    for (int i = 0; i < game.n_agents; ++i) {
      std::vector<double> r(S, 0.0);
      int th = game.TypeOf(tj, i);
      for (int g = 0; g < S; ++g)
        for (int ja = 0; ja < NJA; ++ja)
          r[g] += kappa(g, tj, ja) * game.Reward(i, ja, g, 0, th);
      auto x = SolveDiscounted(P, r, game.gamma);
      std::copy(x.begin(), x.end(),
                out.begin() + (static_cast<size_t>(i) * NJT + tj) * S);
    }
  }
  return out;
}

EquilibriumReport CheckBmce(const GameSpec& game, const Goal& kappa,
                            double tol) {
  if (!game.SignalIndependentRewards()) {
    throw InputError("correlated check needs rewards that do not depend on "
                     "the selected signal");
  }
  ValidateGoal(game, kappa);
  EquilibriumReport rep;
  rep.tolerance = tol;
  const int n = game.n_agents;
  const int S = game.num_states();
  const int T = game.num_types();
  const int A = game.num_actions();
  const int NJT = game.num_joint_types();
  const int NJA = game.num_joint_actions();
  auto J = GoalValues(game, kappa);
  auto Q = [&](int i, int tj, int g, int ja) {
    const double* Jt = &J[(static_cast<size_t>(i) * NJT + tj) * S];
    double s = 0.0;
    for (int g2 = 0; g2 < S; ++g2) s += game.Transition(g, ja, g2) * Jt[g2];
    return game.Reward(i, ja, g, 0, game.TypeOf(tj, i)) + game.gamma * s;
  };
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < S; ++g)
      for (int th = 0; th < T; ++th) {
        std::vector<double> weight(A, 0.0);
        std::vector<double> diff(static_cast<size_t>(A) * A, 0.0);
        const int others = IntPow(T, n - 1);
        for (int ot = 0; ot < others; ++ot) {
          int tj = InsertDigit(ot, i, T, n, th);
          double d = game.OthersTypeProb(i, tj);
          for (int ja = 0; ja < NJA; ++ja) {
            double w = d * kappa(g, tj, ja);
            if (w == 0.0) continue;
            int a = game.ActionOf(ja, i);
            weight[a] += w;
            double q0 = Q(i, tj, g, ja);
            for (int a2 = 0; a2 < A; ++a2) {
              diff[static_cast<size_t>(a) * A + a2] +=
                  w * (Q(i, tj, g, SetDigit(ja, i, A, n, a2)) - q0);
            }
          }
        }
        for (int a = 0; a < A; ++a) {
          if (weight[a] <= kSupportTol) continue;
          for (int a2 = 0; a2 < A; ++a2) {
            double gain = diff[static_cast<size_t>(a) * A + a2] / weight[a];
            if (gain > rep.worst_policy_gain) {
              rep.worst_policy_gain = gain;
              rep.witness = {i, "policy", g, -1, th, a, 0, a2, 1, gain};
            }
          }
        }
      }
  Finalize(rep);
  return rep;
}

EquilibriumReport CheckBme(const GameSpec& game, const Policy& pi,
                           const BeliefSystem& mu, double tol) {
  if (game.num_signals() != 1 || game.n_sources != 1) {
    throw InputError("the Bayesian Markov Nash check needs a game with one "
                     "signal and one source");
  }
  ValidatePolicy(game, pi);
  ValidateBeliefs(game, mu);
  EquilibriumReport rep;
  rep.tolerance = tol;
  SignalingRule alpha = SignalingRule::Constant(game, 0);
  SelectionRule beta = SelectionRule::Obedient(game);
  rep.consistency_gap = BeliefGap(game, alpha, mu);
  rep.consistent = rep.consistency_gap <= tol;

  const int n = game.n_agents;
  const int S = game.num_states();
  const int T = game.num_types();
  const int A = game.num_actions();
  const int NJT = game.num_joint_types();
  const int NJA = game.num_joint_actions();
  auto J = DirectValues(game, alpha, beta, pi);
  std::vector<double> row(NJA);
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < S; ++g)
      for (int th = 0; th < T; ++th) {
        std::vector<double> weight(A, 0.0);
        std::vector<double> diff(static_cast<size_t>(A) * A, 0.0);
        for (int ot = 0; ot < mu.num_others_types; ++ot) {
          int tj = InsertDigit(ot, i, T, n, th);
          double belief = mu(i, g, 0, th, 0, ot);
          if (belief == 0.0) continue;
          const double* Jt = &J[(static_cast<size_t>(i) * NJT + tj) * S];
          auto q = [&](int ja) {
            double s = 0.0;
            for (int g2 = 0; g2 < S; ++g2) s += game.Transition(g, ja, g2) * Jt[g2];
            return game.Reward(i, ja, g, 0, th) + game.gamma * s;
          };
          pi.JointRow(game, g, 0, tj, row.data());
          for (int ja = 0; ja < NJA; ++ja) {
            double w = belief * row[ja];
            if (w == 0.0) continue;
            int a = game.ActionOf(ja, i);
            weight[a] += w;
            double q0 = q(ja);
            for (int a2 = 0; a2 < A; ++a2) {
              diff[static_cast<size_t>(a) * A + a2] +=
                  w * (q(SetDigit(ja, i, A, n, a2)) - q0);
            }
          }
        }
        double total = 0.0;
        for (double w : weight) total += w;
        for (int a = 0; a < A; ++a) {
          if (total <= 0.0 || weight[a] / total <= kSupportTol) continue;
          for (int a2 = 0; a2 < A; ++a2) {
            double gain = diff[static_cast<size_t>(a) * A + a2] / weight[a];
            if (gain > rep.worst_policy_gain) {
              rep.worst_policy_gain = gain;
              rep.witness = {i, "policy", g, 0, th, a, 0, a2, 1, gain};
            }
          }
        }
      }
  Finalize(rep);
  return rep;
}

double ProfileValue(const GameSpec& game, const SignalingRule& alpha,
                    const SelectionRule& beta, const Policy& pi, int i) {
  return ExAnteValue(game, DirectValues(game, alpha, beta, pi), i);
}

namespace {

// Constant tables plus single-cell switches away from `base`.
std::vector<std::vector<int>> ReducedTables(const std::vector<int>& base,
                                            int values) {
  std::vector<std::vector<int>> out;
  for (int v = 0; v < values; ++v) out.emplace_back(base.size(), v);
  for (size_t c = 0; c < base.size(); ++c)
    for (int v = 0; v < values; ++v) {
      if (v == base[c]) continue;
      std::vector<int> t = base;
      t[c] = v;
      out.push_back(std::move(t));
    }
  out.push_back(base);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Most likely own action per (g, w, theta) under pi; lowest index on ties.
std::vector<int> ModalTable(const GameSpec& game, const Policy& pi, int i) {
  const int S = game.num_states();
  const int O = game.num_signals();
  const int T = game.num_types();
  const int A = game.num_actions();
  std::vector<int> out(static_cast<size_t>(S) * O * T, 0);
  std::vector<double> row(game.num_joint_actions());
  for (int g = 0; g < S; ++g)
    for (int w = 0; w < O; ++w)
      for (int th = 0; th < T; ++th) {
        std::vector<double> marg(A, 0.0);
        if (pi.independent()) {
          for (int a = 0; a < A; ++a) marg[a] = pi.Own(i, g, w, th, a);
        } else {
          for (int jw = 0; jw < game.num_joint_signals(); ++jw) {
            if (game.SignalOf(jw, i) != w) continue;
            for (int tj = 0; tj < game.num_joint_types(); ++tj) {
              if (game.TypeOf(tj, i) != th) continue;
              pi.JointRow(game, g, jw, tj, row.data());
              for (int ja = 0; ja < game.num_joint_actions(); ++ja)
                marg[game.ActionOf(ja, i)] += row[ja];
            }
          }
        }
        out[(static_cast<size_t>(g) * O + w) * T + th] = static_cast<int>(
            std::max_element(marg.begin(), marg.end()) - marg.begin());
      }
  return out;
}

double WeightedMass(const GameSpec& game, const OccupancyMeasure& occ) {
  double m = 0.0;
  for (int tj = 0; tj < game.num_joint_types(); ++tj) {
    m += game.JointTypeProb(tj) * occ.Mass(tj);
  }
  return m;
}

}  // namespace

SlackCertificate ComputeSlacks(const GameSpec& game, const SignalingRule& alpha,
                               const SelectionRule& beta, const Policy& pi,
                               const BeliefSystem& mu, double cap) {
  (void)mu;
  SlackCertificate cert;
  const bool full = PolicyDeviationCount(game) <= cap &&
                    SelectionDeviationCount(game) <= cap;
  cert.reduced = !full;
  OccupancyMeasure occ_eq = OccupancyFromProfile(game, alpha, beta, pi);
  auto J_eq = DirectValues(game, alpha, beta, pi);
  bool have_delta = false, have_zeta = false;
  for (int i = 0; i < game.n_agents; ++i) {
    double U_eq = OccupancyReward(game, occ_eq, i);
    double V_eq = ExAnteValue(game, J_eq, i);
    std::vector<std::vector<int>> ptables, stables;
    if (full) {
      Deviations d = EnumerateDeviations(game, i, cap);
      ptables = std::move(d.policy);
      stables = std::move(d.selection);
    } else {
      ptables = ReducedTables(ModalTable(game, pi, i), game.num_actions());
      std::vector<int> obedient(static_cast<size_t>(game.num_states()) *
                                    game.num_batches() * game.num_types(),
                                game.principal);
      stables = ReducedTables(obedient, game.n_sources);
    }
    for (auto& t : ptables) {
      Policy dev = WithPolicyDeviation(game, pi, i, t);
      OccupancyMeasure occ = OccupancyFromProfile(game, alpha, beta, dev);
      DeviationSlack s;
      s.agent = i;
      s.table = std::move(t);
      s.slack = U_eq - OccupancyReward(game, occ, i);
      s.weight = WeightedMass(game, occ);
      s.value_gap = V_eq - ProfileValue(game, alpha, beta, dev, i);
      if (!have_delta || s.slack < cert.min_delta) cert.min_delta = s.slack;
      have_delta = true;
      cert.lagrangian_value += s.weight * (s.slack - s.value_gap);
      cert.delta.push_back(std::move(s));
    }
    for (auto& t : stables) {
      SelectionRule dev = WithSelectionDeviation(beta, i, t);
      OccupancyMeasure occ = OccupancyFromProfile(game, alpha, dev, pi);
      DeviationSlack s;
      s.agent = i;
      s.table = std::move(t);
      s.slack = U_eq - OccupancyReward(game, occ, i);
      s.weight = WeightedMass(game, occ);
      s.value_gap = V_eq - ProfileValue(game, alpha, dev, pi, i);
      if (!have_zeta || s.slack < cert.min_zeta) cert.min_zeta = s.slack;
      have_zeta = true;
      cert.lagrangian_value += s.weight * (s.slack - s.value_gap);
      cert.zeta.push_back(std::move(s));
    }
  }
  return cert;
}

}  // namespace infodesign
