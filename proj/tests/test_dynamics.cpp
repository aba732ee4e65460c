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

#include <cmath>

#include "doctest.h"
#include "infodesign/design.hpp"
#include "infodesign/dynamics.hpp"
#include "infodesign/io.hpp"
#include "support/oracles.hpp"
#include "support/random_game.hpp"

using namespace infodesign;
using infodesign::testing::SourceDir;

namespace {

GameSpec Fixture(const std::string& name) {
  return LoadGameFile(SourceDir() + "/fixtures/" + name);
}

LoadedProfile FixtureProfile(const GameSpec& g, const std::string& name) {
  return LoadProfileFile(g, SourceDir() + "/fixtures/" + name);
}

double MaxDiff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double d = 0.0;
  for (size_t k = 0; k < a.size(); ++k) d = std::max(d, std::fabs(a[k] - b[k]));
  return d;
}

struct Case {
  GameSpec game;
  SignalingRule alpha;
  SelectionRule beta;
  Policy pi;
};

Case RandomCase(testing::Rng& rng, double gamma) {
  auto shape = testing::RandomShape(rng, 2, 3, 3, 2, 2, 2);
  shape.gamma = shape.gamma_hat = gamma;
  Case c;
  c.game = testing::RandomGame(rng, shape);
  c.alpha = testing::RandomRule(rng, c.game, 0.3);
  c.beta = testing::RandomSelection(rng, c.game);
  c.pi = rng() % 2 ? testing::RandomIndependentPolicy(rng, c.game, 0.3)
                   : testing::RandomCorrelatedPolicy(rng, c.game, 0.3);
  return c;
}

}  // namespace

TEST_CASE("swap chain values are known in closed form") {
  GameSpec g = Fixture("swap2.game.json");
  LoadedProfile p = FixtureProfile(g, "swap2.profile.json");
  auto vb = ComputeValues(g, *p.alpha, p.beta, p.pi, UpdateBeliefs(g, *p.alpha));
  const double j0 = 1.0 / (1.0 - 0.81);
  CHECK(vb.Jfull(0, 0, 0) == doctest::Approx(j0).epsilon(1e-9));
  CHECK(vb.Jfull(0, 0, 1) == doctest::Approx(0.9 * j0).epsilon(1e-9));
  CHECK(vb.residual <= 1e-8);
  CHECK(ExAnteValue(g, vb.J_full, 0) == doctest::Approx(j0).epsilon(1e-9));
}

TEST_CASE("value iteration matches the linear-solve oracle") {
  testing::Rng rng(11);
  for (int k = 0; k < 25; ++k) {
    Case c = RandomCase(rng, k % 2 ? 0.9 : 0.5);
    auto mu = UpdateBeliefs(c.game, c.alpha);
    auto vb = ComputeValues(c.game, c.alpha, c.beta, c.pi, mu);
    auto oracle = testing::OracleValues(c.game, c.alpha, c.beta, c.pi);
    CHECK(vb.residual <= 1e-8);
    CHECK(MaxDiff(vb.J_full, oracle) <= 1e-7);
    CHECK(MaxDiff(DirectValues(c.game, c.alpha, c.beta, c.pi), oracle) <= 1e-9);
  }
}

TEST_CASE("selection helper agrees with the oracle layout") {
  testing::Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    Case c = RandomCase(rng, 0.5);
    for (int g = 0; g < c.game.num_states(); ++g)
      for (int tj = 0; tj < c.game.num_joint_types(); ++tj)
        for (int jwk = 0; jwk < c.game.num_joint_signals(); ++jwk)
          for (int jW = 0; jW < c.game.num_nonprincipal(); ++jW) {
            CHECK(JointSelection(c.game, c.beta, g, tj, jwk, jW) ==
                  testing::OracleSelection(c.game, c.beta, g, tj, jwk, jW));
          }
  }
}

TEST_CASE("occupancy mass, flow and reward identities") {
  testing::Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    Case c = RandomCase(rng, k % 2 ? 0.9 : 0.5);
    auto occ = OccupancyFromProfile(c.game, c.alpha, c.beta, c.pi);
    for (int tj = 0; tj < c.game.num_joint_types(); ++tj) {
      CHECK(occ.Mass(tj) == doctest::Approx(1.0 / (1.0 - c.game.gamma)).epsilon(1e-9));
    }
    CHECK(FlowResidual(c.game, c.alpha, occ) <= 1e-9);
    auto J = DirectValues(c.game, c.alpha, c.beta, c.pi);
    for (int i = 0; i < c.game.n_agents; ++i) {
      CHECK(OccupancyReward(c.game, occ, i) ==
            doctest::Approx(ExAnteValue(c.game, J, i)).epsilon(1e-9));
    }
  }
}

TEST_CASE("policy and rule are recovered from their occupancy") {
  testing::Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    Case c = RandomCase(rng, 0.9);
    if (k % 2 == 0) c.beta = SelectionRule::Obedient(c.game);
    auto occ = OccupancyFromProfile(c.game, c.alpha, c.beta, c.pi);
    SignalingRule a2 = RecoverRule(c.game, occ);
    Policy p2 = PolicyFromOccupancy(c.game, occ);
    Policy full = ToCorrelated(c.game, c.pi);
    SignalModel sm(c.game, c.alpha, c.beta);
    for (int tj = 0; tj < c.game.num_joint_types(); ++tj)
      for (int g = 0; g < c.game.num_states(); ++g) {
        double visit = 0.0;
        for (int ja = 0; ja < c.game.num_joint_actions(); ++ja)
          for (int jw = 0; jw < c.game.num_joint_signals(); ++jw)
            for (int jwk = 0; jwk < c.game.num_joint_signals(); ++jwk)
              visit += occ(tj, g, ja, jw, jwk);
        if (visit <= 1e-12) continue;
        for (int jwk = 0; jwk < c.game.num_joint_signals(); ++jwk) {
          CHECK(a2(g, tj, jwk) == doctest::Approx(c.alpha(g, tj, jwk)).epsilon(1e-9));
        }
        for (const Branch& br : sm.branches(g, tj)) {
          if (br.p <= 0.0) continue;
          for (int ja = 0; ja < c.game.num_joint_actions(); ++ja) {
            CHECK(p2.Joint(c.game, g, br.jw, tj, ja) ==
                  doctest::Approx(full.Joint(c.game, g, br.jw, tj, ja)).epsilon(1e-9));
          }
        }
      }
  }
}

TEST_CASE("beliefs follow Bayes' rule") {
  GameSpec g = Fixture("pd2.game.json");
  LoadedProfile p = FixtureProfile(g, "pd2_mixed.profile.json");
  auto mu = UpdateBeliefs(g, *p.alpha);
  // Agent 0 at g0 with signal x: the other saw x with weight .4, y with .1.
  CHECK(mu(0, 0, 0, 0, 0, 0) == doctest::Approx(0.8));
  CHECK(mu(0, 0, 0, 0, 1, 0) == doctest::Approx(0.2));
  // Agent 1 with signal y: x|y has .1 and y|y has .3.
  CHECK(mu(1, 0, 1, 0, 0, 0) == doctest::Approx(0.25));
  CHECK(BeliefGap(g, *p.alpha, mu) == 0.0);
  auto off = mu;
  off.prob[0] += 0.1;
  CHECK(BeliefGap(g, *p.alpha, off) == doctest::Approx(0.1));
}

TEST_CASE("truncated sequences reproduce the values") {
  testing::Rng rng(21);
  for (int k = 0; k < 6; ++k) {
    auto shape = testing::RandomShape(rng, 2, 2, 2, 2, 1, 1);
    shape.gamma = shape.gamma_hat = 0.7;
    GameSpec game = testing::RandomGame(rng, shape);
    auto alpha = testing::RandomRule(rng, game);
    auto beta = SelectionRule::Obedient(game);
    auto pi = testing::RandomIndependentPolicy(rng, game);
    auto mu = UpdateBeliefs(game, alpha);
    auto J = DirectValues(game, alpha, beta, pi);
    auto occ = OccupancyFromProfile(game, alpha, beta, pi);
    for (int t : {1, 2}) {
      auto seq = TruncatedSequentialOccupancy(game, alpha, beta, pi, mu, 0, t, 12);
      for (int i = 0; i < game.n_agents; ++i) {
        double lhs = 0.0, start = 0.0;
        for (const auto& e : seq.entries) {
          lhs += e.reward[i] * e.lambda;
          start += e.q[i] * e.start;
        }
        double rho = 0.0;
        for (int g = 0; g < game.num_states(); ++g)
          for (int ja = 0; ja < game.num_joint_actions(); ++ja)
            for (int jw = 0; jw < game.num_joint_signals(); ++jw) {
              rho += game.Reward(i, ja, g, game.SignalOf(jw, i), 0) *
                     occ(0, g, ja, jw, jw);
            }
        double direct = 0.0;
        for (int g = 0; g < game.num_states(); ++g) {
          direct += game.state_init[g] * J[static_cast<size_t>(i) * game.num_states() + g];
        }
        CHECK(start == doctest::Approx(direct).epsilon(1e-8));
        CHECK(std::fabs(lhs - rho) <= seq.truncation_bound + 1e-9);
      }
    }
  }
}

TEST_CASE("sequence enumeration respects its cap") {
  GameSpec g = Fixture("pd2.game.json");
  LoadedProfile p = FixtureProfile(g, "pd2_mixed.profile.json");
  auto mu = UpdateBeliefs(g, *p.alpha);
  CHECK_THROWS_AS(
      TruncatedSequentialOccupancy(g, *p.alpha, p.beta, p.pi, mu, 0, 3, 30, 10),
      InputError);
  CHECK_THROWS_AS(
      TruncatedSequentialOccupancy(g, *p.alpha, p.beta, p.pi, mu, 0, 4, 3),
      InputError);
}
