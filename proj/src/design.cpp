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

#include "infodesign/design.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "info_sets.hpp"

namespace infodesign {
namespace {

std::string VarName(const GameSpec& game, int tj, int g, int ja, int jwk) {
  const int n = game.n_agents;
  return "rho[" + JointLabel(game.types, tj, n) + "," + game.states[g] + "," +
         JointLabel(game.actions, ja, n) + "," +
         JointLabel(game.signals, jwk, n) + "]";
}

double ContinuationOf(const GameSpec& game, int g, int ja, const double* J) {
  double s = 0.0;
  for (int g2 = 0; g2 < game.num_states(); ++g2) {
    s += game.Transition(g, ja, g2) * J[g2];
  }
  return s;
}

constexpr double kInadmissible = 1e6;

// Euclidean projection onto the probability simplex.
void ProjectSimplex(std::vector<double>& v) {
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(0.0, x - theta);
  double s = 0.0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
}

// Correlated policy that plays kappa's row regardless of the signal.
Policy GoalPolicy(const GameSpec& game, const Goal& kappa) {
  Policy pi = Policy::Correlated(game);
  for (int g = 0; g < game.num_states(); ++g)
    for (int jw = 0; jw < game.num_joint_signals(); ++jw)
      for (int tj = 0; tj < game.num_joint_types(); ++tj)
        for (int ja = 0; ja < game.num_joint_actions(); ++ja)
          pi.JointAt(g, jw, tj, ja) = kappa(g, tj, ja);
  return pi;
}

// Worst gain of a rule with the policy held fixed. An admissibility gap
// above tol is penalized so that no admissible rule ranks below it.
double Violation(const GameSpec& game, const SignalingRule& alpha,
                 const SelectionRule& beta, const Policy& pi,
                 const Goal& kappa, double tol) {
  BeliefSystem mu = UpdateBeliefs(game, alpha);
  EquilibriumReport r = CheckPbme(game, alpha, beta, pi, mu, tol);
  double gap = AdmissibilityGap(game, alpha, beta, pi, kappa);
  double gain = std::max(r.worst_policy_gain, r.worst_selection_gain);
  return gap > tol ? kInadmissible + gap : gain;
}

SignalingRule RandomRule(const GameSpec& game, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  SignalingRule a = SignalingRule::Zero(game);
  const int NJW = game.num_joint_signals();
  for (int g = 0; g < game.num_states(); ++g)
    for (int tj = 0; tj < game.num_joint_types(); ++tj) {
      double s = 0.0;
      for (int j = 0; j < NJW; ++j) s += (a.at(g, tj, j) = expo(rng));
      for (int j = 0; j < NJW; ++j) a.at(g, tj, j) /= s;
    }
  return a;
}

struct Branch2 {
  SignalingRule alpha;
  double violation = 0.0;
};

Branch2 AscentFrom(const GameSpec& game, SignalingRule alpha,
                   const SelectionRule& beta, const Policy& pi,
                   const Goal& kappa, const DesignOptions& opt) {
  const int NJW = game.num_joint_signals();
  double f = Violation(game, alpha, beta, pi, kappa, opt.tol);
  double step = opt.step;
  for (int it = 0; it < opt.steps && f > 0.0 && step > 1e-9; ++it) {
    bool improved = false;
    for (int g = 0; g < game.num_states(); ++g)
      for (int tj = 0; tj < game.num_joint_types(); ++tj)
        for (int j = 0; j < NJW; ++j)
          for (double sign : {1.0, -1.0}) {
            std::vector<double> row(NJW);
            for (int k = 0; k < NJW; ++k) row[k] = alpha(g, tj, k);
            row[j] += sign * step;
            ProjectSimplex(row);
            SignalingRule cand = alpha;
            for (int k = 0; k < NJW; ++k) cand.at(g, tj, k) = row[k];
            double fc = Violation(game, cand, beta, pi, kappa, opt.tol);
            if (fc < f) {
              f = fc;
              alpha = std::move(cand);
              improved = true;
            }
          }
    if (!improved) step *= 0.5;
  }
  return {std::move(alpha), f};
}

}  // namespace

int WorkerCount(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("INFODESIGN_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

const char* DesignStatusName(DesignStatus s) {
  switch (s) {
    case DesignStatus::kVerified:
      return "verified-OIL";
    case DesignStatus::kEpsilon:
      return "epsilon-OIL";
    case DesignStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

OilLp BuildOilLp(const GameSpec& game, const Goal& kappa,
                 const OilLpOptions& options) {
  ValidateGoal(game, kappa);
  const int n = game.n_agents;
  const int S = game.num_states();
  const int A = game.num_actions();
  const int T = game.num_types();
  const int O = game.num_signals();
  const int NJT = game.num_joint_types();
  const int NJA = game.num_joint_actions();
  const int NJW = game.num_joint_signals();
  const double gamma = game.gamma;

  OilLp oil;
  oil.num_joint_types = NJT;
  oil.num_states = S;
  oil.num_joint_actions = NJA;
  oil.num_joint_signals = NJW;
  const int N = NJT * S * NJA * NJW;
  oil.lp = LinearProgram(N);
  oil.lp.var_names.resize(N);
  for (int tj = 0; tj < NJT; ++tj) {
    double pt = game.JointTypeProb(tj);
    for (int g = 0; g < S; ++g)
      for (int ja = 0; ja < NJA; ++ja)
        for (int jwk = 0; jwk < NJW; ++jwk) {
          int v = oil.Var(tj, g, ja, jwk);
          oil.lp.var_names[v] = VarName(game, tj, g, ja, jwk);
          double r = 0.0;
          for (int i = 0; i < n; ++i) {
            r += game.Reward(i, ja, g, game.SignalOf(jwk, i), game.TypeOf(tj, i));
          }
          oil.lp.objective[v] = pt * r;
        }
  }

  // Signal-free flow.
  for (int tj = 0; tj < NJT; ++tj)
    for (int g = 0; g < S; ++g) {
      std::vector<double> row(N, 0.0);
      for (int g2 = 0; g2 < S; ++g2)
        for (int ja = 0; ja < NJA; ++ja) {
          double coef = (g2 == g ? 1.0 : 0.0) - gamma * game.Transition(g2, ja, g);
          if (coef == 0.0) continue;
          for (int jwk = 0; jwk < NJW; ++jwk) row[oil.Var(tj, g2, ja, jwk)] += coef;
        }
      oil.lp.AddEq(std::move(row), game.state_init[g]);
    }

  // Admissibility: the signal marginal of rho equals rho^kappa.
  std::vector<std::vector<double>> visit(NJT);
  for (int tj = 0; tj < NJT; ++tj) {
    auto rk = GoalOccupancy(game, kappa, tj, gamma);
    visit[tj] = GoalVisitation(game, kappa, tj, gamma);
    for (int g = 0; g < S; ++g)
      for (int ja = 0; ja < NJA; ++ja) {
        std::vector<double> row(N, 0.0);
        for (int jwk = 0; jwk < NJW; ++jwk) row[oil.Var(tj, g, ja, jwk)] = 1.0;
        oil.lp.AddEq(std::move(row), rk[static_cast<size_t>(g) * NJA + ja]);
      }
  }

  if (!options.incentives) return oil;
  std::vector<double> J = options.continuation.empty()
                              ? GoalValues(game, kappa)
                              : options.continuation;
  const double relax = 0.5 * options.tol;
  const int others = IntPow(T, n - 1);
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < S; ++g)
      for (int th = 0; th < T; ++th)
        for (int wk = 0; wk < O; ++wk)
          for (int np = 0; np < game.num_own_nonprincipal(); ++np) {
            double pnp = game.OwnNonprincipalProb(i, np);
            if (pnp <= kSupportTol) continue;
            int b = game.MakeBatch(wk, np);
            for (int a = 0; a < A; ++a)
              for (int s = 0; s < game.n_sources; ++s)
                for (int a2 = 0; a2 < A; ++a2) {
                  if (s == game.principal && a2 == a) continue;
                  int w2 = game.BatchSignal(b, s);
                  std::vector<double> row(N, 0.0);
                  bool any = false;
                  for (int ot = 0; ot < others; ++ot) {
                    int tj = InsertDigit(ot, i, T, n, th);
                    double dk = visit[tj][g];
                    if (dk <= 0.0) continue;
                    double coef = game.OthersTypeProb(i, tj) / dk * pnp;
                    const double* Jt =
                        &J[(static_cast<size_t>(i) * NJT + tj) * S];
                    for (int jwk = 0; jwk < NJW; ++jwk) {
                      if (game.SignalOf(jwk, i) != wk) continue;
                      for (int ja = 0; ja < NJA; ++ja) {
                        if (game.ActionOf(ja, i) != a) continue;
                        int ja2 = SetDigit(ja, i, A, n, a2);
                        double delta =
                            game.Reward(i, ja2, g, w2, th) +
                            gamma * ContinuationOf(game, g, ja2, Jt) -
                            game.Reward(i, ja, g, wk, th) -
                            gamma * ContinuationOf(game, g, ja, Jt) - relax;
                        row[oil.Var(tj, g, ja, jwk)] += coef * delta;
                        any = true;
                      }
                    }
                  }
                  if (any) {
                    oil.lp.AddUb(std::move(row), 0.0);
                    ++oil.num_incentive_rows;
                  }
                }
          }
  return oil;
}

OccupancyMeasure OccupancyFromLp(const GameSpec& game, const OilLp& oil,
                                 const std::vector<double>& x) {
  OccupancyMeasure occ = OccupancyMeasure::Zero(game, game.gamma);
  for (int tj = 0; tj < oil.num_joint_types; ++tj)
    for (int g = 0; g < oil.num_states; ++g)
      for (int ja = 0; ja < oil.num_joint_actions; ++ja)
        for (int jwk = 0; jwk < oil.num_joint_signals; ++jwk) {
          occ.rho[occ.Index(tj, g, ja, jwk, jwk)] = x[oil.Var(tj, g, ja, jwk)];
        }
  return occ;
}

SignalingRule RecoverRule(const GameSpec& game, const OccupancyMeasure& occ,
                          int* uniform_rows) {
  SignalingRule alpha = SignalingRule::Zero(game);
  const int NJW = game.num_joint_signals();
  int flagged = 0;
  for (int g = 0; g < game.num_states(); ++g)
    for (int tj = 0; tj < game.num_joint_types(); ++tj) {
      std::vector<double> mass(NJW, 0.0);
      double total = 0.0;
      for (int ja = 0; ja < game.num_joint_actions(); ++ja)
        for (int jw = 0; jw < NJW; ++jw)
          for (int jwk = 0; jwk < NJW; ++jwk) mass[jwk] += occ(tj, g, ja, jw, jwk);
      for (double v : mass) total += v;
      if (total <= 0.0) ++flagged;
      for (int jwk = 0; jwk < NJW; ++jwk) {
        alpha.at(g, tj, jwk) = total > 0.0 ? mass[jwk] / total : 1.0 / NJW;
      }
    }
  if (uniform_rows) *uniform_rows = flagged;
  return alpha;
}

EpsilonCertificate ComputeEpsilon(const GameSpec& game,
                                  const SignalingRule& alpha,
                                  const SelectionRule& beta, const Policy& pi,
                                  const BeliefSystem& mu) {
  (void)mu;
  const int n = game.n_agents;
  const int S = game.num_states();
  const int T = game.num_types();
  const int A = game.num_actions();
  const int NJT = game.num_joint_types();
  const int NB = game.num_batches();
  EpsilonCertificate cert;
  cert.psi.assign(static_cast<size_t>(S) * NJT, 0.0);
  cert.phi.assign(NJT, 0.0);
  auto J = DirectValues(game, alpha, beta, pi);
  SignalModel sm(game, alpha, beta);
  for (int i = 0; i < n; ++i) {
    const double* Ji = &J[static_cast<size_t>(i) * NJT * S];
    for (int g = 0; g < S; ++g)
      for (int th = 0; th < T; ++th) {
        auto post = internal::AnalyzeInfo(game, alpha, sm, pi, i, g, th, Ji);
        std::vector<double> regret(static_cast<size_t>(NB) * A, 0.0);
        for (int b = 0; b < NB; ++b)
          for (int a = 0; a < A; ++a) {
            regret[static_cast<size_t>(b) * A + a] =
                internal::BestDecision(post, b, a, beta(i, g, b, th)).gain;
          }
        for (int ot = 0; ot < IntPow(T, n - 1); ++ot) {
          int tj = InsertDigit(ot, i, T, n, th);
          auto own = internal::AnalyzeInfo(game, alpha, sm, pi, i, g, th, Ji, tj);
          double psi = 0.0;
          for (int b = 0; b < NB; ++b)
            for (int a = 0; a < A; ++a) {
              psi += own.W(b, a) * regret[static_cast<size_t>(b) * A + a];
            }
          cert.psi[static_cast<size_t>(g) * NJT + tj] += psi;
        }
      }
  }
  for (int tj = 0; tj < NJT; ++tj) {
    double pt = game.JointTypeProb(tj);
    for (int g = 0; g < S; ++g) {
      double v = cert.psi[static_cast<size_t>(g) * NJT + tj];
      cert.phi[tj] = std::max(cert.phi[tj], v);
      cert.Phi_mean += pt * game.state_init[g] * v;
    }
    cert.Phi += pt * cert.phi[tj];
  }
  cert.epsilon = cert.Phi / (1.0 - game.gamma_hat);
  cert.epsilon_agent = cert.Phi / (1.0 - game.gamma);
  return cert;
}

DesignResult DesignOil(const GameSpec& game, const Goal& kappa,
                       const DesignOptions& opt) {
  ValidateGoal(game, kappa);
  DesignResult res;
  res.beta = SelectionRule::Obedient(game);
  const bool signal_free = game.SignalIndependentRewards();

  std::vector<double> J;
  if (signal_free) {
    J = GoalValues(game, kappa);
  } else {
    J = DirectValues(game, SignalingRule::Uniform(game), res.beta,
                     GoalPolicy(game, kappa));
  }
  const int rounds = std::max(1, opt.lp_rounds);
  for (int round = 1; round <= rounds; ++round) {
    OilLpOptions lo;
    lo.incentives = opt.incentives;
    lo.tol = opt.tol;
    lo.continuation = J;
    OilLp oil = BuildOilLp(game, kappa, lo);
    res.lp = SolveLp(oil.lp);
    res.lp_rounds = round;
    if (res.lp.status != LpStatus::kOptimal) {
      res.status = DesignStatus::kInfeasible;
      return res;
    }
    res.rho = OccupancyFromLp(game, oil, res.lp.x);
    res.alpha = RecoverRule(game, res.rho, &res.uniform_rule_rows);
    res.pi = PolicyFromOccupancy(game, res.rho, &res.uniform_policy_rows);
    if (signal_free || !opt.incentives) break;
    auto J_new = DirectValues(game, res.alpha, res.beta, res.pi);
    double diff = 0.0;
    for (size_t k = 0; k < J.size(); ++k) diff = std::max(diff, std::fabs(J[k] - J_new[k]));
    J = std::move(J_new);
    if (diff <= 1e-9) break;
  }

  BeliefSystem mu = UpdateBeliefs(game, res.alpha);
  res.verification =
      CheckOPbme(game, res.alpha, res.beta, res.pi, mu, kappa, opt.tol, opt.t_dev);

  if (!res.verification.verified() && opt.restarts > 0) {
    res.refined = true;
    const int R = opt.restarts;
    std::vector<Branch2> out(R);
    std::atomic<int> next{0};
    auto work = [&]() {
      for (int r = next++; r < R; r = next++) {
        SignalingRule start =
            r == 0 ? res.alpha
                   : RandomRule(game, opt.seed * 1000003ULL + static_cast<std::uint64_t>(r));
        out[r] = AscentFrom(game, std::move(start), res.beta, res.pi, kappa, opt);
      }
    };
    int workers = std::min(WorkerCount(opt.workers), R);
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    int best = 0;
    for (int r = 1; r < R; ++r) {
      if (out[r].violation < out[best].violation ||
          (out[r].violation == out[best].violation &&
           out[r].alpha.prob < out[best].alpha.prob)) {
        best = r;
      }
    }
    SignalingRule refined = out[best].alpha;
    mu = UpdateBeliefs(game, refined);
    EquilibriumReport rep =
        CheckOPbme(game, refined, res.beta, res.pi, mu, kappa, opt.tol, opt.t_dev);
    double before = std::max({res.verification.worst_policy_gain,
                              res.verification.worst_selection_gain,
                              res.verification.compound_gain});
    double after = std::max({rep.worst_policy_gain, rep.worst_selection_gain,
                             rep.compound_gain});
    bool keeps_goal = rep.admissible || !res.verification.admissible;
    if (rep.verified() || (keeps_goal && after < before)) {
      res.alpha = std::move(refined);
      res.verification = rep;
    } else {
      mu = UpdateBeliefs(game, res.alpha);
    }
  }
  res.status = res.verification.verified() ? DesignStatus::kVerified
                                           : DesignStatus::kEpsilon;
  if (opt.compute_slacks) {
    res.slacks = ComputeSlacks(game, res.alpha, res.beta, res.pi, mu);
  }
  res.epsilon = ComputeEpsilon(game, res.alpha, res.beta, res.pi, mu);
  res.principal_value =
      PrincipalPayoffProfile(game, res.alpha, res.beta, res.pi);
  return res;
}

DirectDesign Directify(const GameSpec& game, const SignalingRule& alpha,
                       const SelectionRule& beta, const Policy& pi,
                       double tol) {
  ValidateRule(game, alpha);
  ValidateSelection(game, beta);
  ValidatePolicy(game, pi);
  BeliefSystem mu = UpdateBeliefs(game, alpha);
  EquilibriumReport rep = CheckPbme(game, alpha, beta, pi, mu, tol);
  if (!rep.is_equilibrium) {
    throw InputError("profile is not an equilibrium under the given rule "
                     "(worst gain " +
                     std::to_string(std::max(rep.worst_policy_gain,
                                             rep.worst_selection_gain)) +
                     ")");
  }
  DirectDesign d;
  d.game = game;
  d.game.n_sources = 1;
  d.game.principal = 0;
  d.game.nonprincipal = {1.0};
  d.alpha = SignalingRule::Zero(game);
  SignalModel sm(game, alpha, beta);
  for (int g = 0; g < game.num_states(); ++g)
    for (int tj = 0; tj < game.num_joint_types(); ++tj)
      for (const Branch& br : sm.branches(g, tj)) d.alpha.at(g, tj, br.jw) += br.p;
  d.beta = SelectionRule::Obedient(d.game);
  d.pi = pi;
  return d;
}

double PrincipalPayoff(const GameSpec& game, const Goal& kappa) {
  const int S = game.num_states();
  const int NJA = game.num_joint_actions();
  double z = 0.0;
  for (int tj = 0; tj < game.num_joint_types(); ++tj) {
    std::vector<double> u(S, 0.0);
    for (int g = 0; g < S; ++g)
      for (int ja = 0; ja < NJA; ++ja)
        u[g] += kappa(g, tj, ja) * game.PrincipalReward(ja, g, tj);
    auto V = SolveDiscounted(GoalKernel(game, kappa, tj), u, game.gamma_hat);
    double pt = game.JointTypeProb(tj);
    for (int g = 0; g < S; ++g) z += pt * game.state_init[g] * V[g];
  }
  return z;
}

double PrincipalPayoffProfile(const GameSpec& game, const SignalingRule& alpha,
                              const SelectionRule& beta, const Policy& pi) {
  const int S = game.num_states();
  const int NJA = game.num_joint_actions();
  SignalModel sm(game, alpha, beta);
  std::vector<double> row(NJA);
  double z = 0.0;
  for (int tj = 0; tj < game.num_joint_types(); ++tj) {
    std::vector<double> u(S, 0.0);
    for (int g = 0; g < S; ++g)
      for (const Branch& br : sm.branches(g, tj)) {
        pi.JointRow(game, g, br.jw, tj, row.data());
        for (int ja = 0; ja < NJA; ++ja)
          u[g] += br.p * row[ja] * game.PrincipalReward(ja, g, tj);
      }
    auto V = SolveDiscounted(InducedKernel(game, alpha, beta, pi, tj), u,
                             game.gamma_hat);
    double pt = game.JointTypeProb(tj);
    for (int g = 0; g < S; ++g) z += pt * game.state_init[g] * V[g];
  }
  return z;
}

namespace {

Goal GoalFromFlow(const GameSpec& game, const std::vector<double>& y,
                  int* uniform_rows) {
  const int S = game.num_states();
  const int NJA = game.num_joint_actions();
  Goal k = Goal::Zero(game);
  int flagged = 0;
  for (int tj = 0; tj < game.num_joint_types(); ++tj)
    for (int g = 0; g < S; ++g) {
      const double* y_row = &y[(static_cast<size_t>(tj) * S + g) * NJA];
      double mass = 0.0;
      for (int ja = 0; ja < NJA; ++ja) mass += std::max(0.0, y_row[ja]);
      // Simplex round-off leaves entries far below the support threshold.
      std::vector<double> row(NJA, 0.0);
      double total = 0.0;
      for (int ja = 0; ja < NJA; ++ja) {
        if (y_row[ja] > kSupportTol * mass) row[ja] = y_row[ja];
        total += row[ja];
      }
      if (total <= 0.0) ++flagged;
      for (int ja = 0; ja < NJA; ++ja)
        k.at(g, tj, ja) = total > 0.0 ? row[ja] / total : 1.0 / NJA;
    }
  if (uniform_rows) *uniform_rows = flagged;
  return k;
}

LinearProgram GoalLp(const GameSpec& game) {
  const int S = game.num_states();
  const int NJA = game.num_joint_actions();
  const int NJT = game.num_joint_types();
  LinearProgram lp(NJT * S * NJA);
  for (int tj = 0; tj < NJT; ++tj) {
    double pt = game.JointTypeProb(tj);
    for (int g = 0; g < S; ++g)
      for (int ja = 0; ja < NJA; ++ja) {
        int v = (tj * S + g) * NJA + ja;
        lp.objective[v] = pt * game.PrincipalReward(ja, g, tj);
        lp.var_names.push_back("rho[" + JointLabel(game.types, tj, game.n_agents) +
                               "," + game.states[g] + "," +
                               JointLabel(game.actions, ja, game.n_agents) + "]");
      }
    for (int g = 0; g < S; ++g) {
      std::vector<double> row(lp.num_vars, 0.0);
      for (int g2 = 0; g2 < S; ++g2)
        for (int ja = 0; ja < NJA; ++ja) {
          row[(tj * S + g2) * NJA + ja] +=
              (g2 == g ? 1.0 : 0.0) - game.gamma_hat * game.Transition(g2, ja, g);
        }
      lp.AddEq(std::move(row), game.state_init[g]);
    }
  }
  return lp;
}

// Linearized correlated-equilibrium rows around a previous goal.
void AddGoalIncentives(const GameSpec& game, const Goal& prev,
                       LinearProgram& lp) {
  const int n = game.n_agents;
  const int S = game.num_states();
  const int A = game.num_actions();
  const int T = game.num_types();
  const int NJA = game.num_joint_actions();
  const int NJT = game.num_joint_types();
  auto J = GoalValues(game, prev);
  std::vector<std::vector<double>> dhat(NJT);
  for (int tj = 0; tj < NJT; ++tj) {
    dhat[tj] = GoalVisitation(game, prev, tj, game.gamma_hat);
  }
  const int others = IntPow(T, n - 1);
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < S; ++g)
      for (int th = 0; th < T; ++th)
        for (int a = 0; a < A; ++a)
          for (int a2 = 0; a2 < A; ++a2) {
            if (a2 == a) continue;
            std::vector<double> row(lp.num_vars, 0.0);
            for (int ot = 0; ot < others; ++ot) {
              int tj = InsertDigit(ot, i, T, n, th);
              if (dhat[tj][g] <= 0.0) continue;
              double coef = game.OthersTypeProb(i, tj) / dhat[tj][g];
              const double* Jt = &J[(static_cast<size_t>(i) * NJT + tj) * S];
              for (int ja = 0; ja < NJA; ++ja) {
                if (game.ActionOf(ja, i) != a) continue;
                int ja2 = SetDigit(ja, i, A, n, a2);
                double delta = game.Reward(i, ja2, g, 0, th) +
                               game.gamma * ContinuationOf(game, g, ja2, Jt) -
                               game.Reward(i, ja, g, 0, th) -
                               game.gamma * ContinuationOf(game, g, ja, Jt);
                row[(tj * S + g) * NJA + ja] += coef * delta;
              }
            }
            lp.AddUb(std::move(row), 0.0);
          }
}

}  // namespace

GoalSelection FindBestGoal(const GameSpec& game, const DesignOptions& opt) {
  if (!game.SignalIndependentRewards()) {
    throw InputError("goal selection needs rewards that do not depend on the "
                     "selected signal");
  }
  GoalSelection sel;
  bool found = false;
  LinearProgram base = GoalLp(game);
  LpResult r = SolveLp(base);
  if (r.status == LpStatus::kOptimal) {
    Goal k = GoalFromFlow(game, r.x, &sel.uniform_rows);
    sel.rounds = 1;
    if (CheckBmce(game, k, opt.tol).is_equilibrium) {
      sel.kappa = k;
      sel.method = "lp";
      found = true;
    } else {
      Goal prev = k;
      for (int round = 2; round <= 11 && !found; ++round) {
        LinearProgram lp = base;
        AddGoalIncentives(game, prev, lp);
        LpResult rr = SolveLp(lp);
        sel.rounds = round;
        if (rr.status != LpStatus::kOptimal) break;
        Goal kk = GoalFromFlow(game, rr.x, &sel.uniform_rows);
        if (CheckBmce(game, kk, opt.tol).is_equilibrium) {
          sel.kappa = kk;
          sel.method = "lp-linearized";
          found = true;
        }
        prev = kk;
      }
    }
  }
  if (!found) {
    // Pure independent profiles, each table (g, own type) -> action.
    const int cells = game.num_states() * game.num_types();
    double per_agent = std::pow(static_cast<double>(game.num_actions()), cells);
    double total = std::pow(per_agent, game.n_agents);
    if (total <= kDefaultDeviationCap) {
      const int P = static_cast<int>(per_agent);
      const int count = static_cast<int>(total);
      double best_z = 0.0;
      for (int idx = 0; idx < count; ++idx) {
        Goal k = Goal::Zero(game);
        for (int g = 0; g < game.num_states(); ++g)
          for (int tj = 0; tj < game.num_joint_types(); ++tj) {
            int ja = 0;
            for (int i = 0; i < game.n_agents; ++i) {
              int table = Digit(idx, i, P, game.n_agents);
              int cell = g * game.num_types() + game.TypeOf(tj, i);
              int a = Digit(table, cell, game.num_actions(), cells);
              ja = ja * game.num_actions() + a;
            }
            k.at(g, tj, ja) = 1.0;
          }
        if (!CheckBmce(game, k, opt.tol).is_equilibrium) continue;
        double z = PrincipalPayoff(game, k);
        if (!found || z > best_z) {
          best_z = z;
          sel.kappa = k;
          found = true;
        }
      }
      sel.method = "enumeration";
    }
  }
  if (!found) {
    throw GoalNotFound("no goal passed the correlated check: the LP rounds "
                       "and the pure-profile enumeration found nothing");
  }
  sel.value = PrincipalPayoff(game, sel.kappa);
  return sel;
}

GoalSelection SelectGoal(const GameSpec& game, const DesignOptions& opt) {
  GoalSelection sel = FindBestGoal(game, opt);
  sel.design = DesignOil(game, sel.kappa, opt);
  return sel;
}

}  // namespace infodesign
