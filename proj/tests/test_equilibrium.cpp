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
#include "infodesign/equilibrium.hpp"
#include "infodesign/io.hpp"
#include "support/oracles.hpp"
#include "support/random_game.hpp"

using namespace infodesign;
using infodesign::testing::SourceDir;

namespace {

GameSpec Fixture(const std::string& name) {
  return LoadGameFile(SourceDir() + "/fixtures/" + name);
}

// One agent, one state, two actions; a1 pays a hair more than a0.
GameSpec NearTie(double edge) {
  GameSpec g;
  g.states = {"g"};
  g.actions = {"a0", "a1"};
  g.types = {"t"};
  g.signals = {"s"};
  g.transition = {1.0, 1.0};
  g.state_init = {1.0};
  g.type_prior = {1.0};
  g.nonprincipal = {1.0};
  g.rewards = {1.0, 1.0 + edge};
  g.principal_reward = {0.0, 0.0};
  g.gamma = g.gamma_hat = 0.9;
  ValidateGame(g);
  return g;
}

}  // namespace

TEST_CASE("an obedient agent gives up a better second source") {
  GameSpec g = Fixture("two_source.game.json");
  LoadedProfile p =
      LoadProfileFile(g, SourceDir() + "/fixtures/two_source_obedient.profile.json");
  auto mu = UpdateBeliefs(g, *p.alpha);
  auto rep = CheckPbme(g, *p.alpha, p.beta, p.pi, mu);
  CHECK_FALSE(rep.is_equilibrium);
  CHECK(rep.worst_selection_gain == doctest::Approx(1.0));
  CHECK(rep.worst_policy_gain == 0.0);
  CHECK(rep.witness.kind == "selection");
  CHECK(rep.witness.batch == g.MakeBatch(0, 1));
  CHECK(rep.witness.position == 1);

  LoadedProfile q =
      LoadProfileFile(g, SourceDir() + "/fixtures/two_source_select_gem.profile.json");
  auto rep2 = CheckPbme(g, *q.alpha, q.beta, q.pi, UpdateBeliefs(g, *q.alpha));
  CHECK(rep2.is_equilibrium);
  CHECK_FALSE(CheckObedient(g, q.beta));
}

TEST_CASE("compound deviations catch gains below the one-shot tolerance") {
  GameSpec g = NearTie(0.7e-6);
  SignalingRule alpha = SignalingRule::Constant(g, 0);
  SelectionRule beta = SelectionRule::Obedient(g);
  Policy pi = Policy::ConstantIndependent(g, 0);
  auto mu = UpdateBeliefs(g, alpha);
  auto one = CheckPbme(g, alpha, beta, pi, mu);
  CHECK(one.is_equilibrium);
  CHECK(one.worst_policy_gain == doctest::Approx(0.7e-6).epsilon(1e-11));

  Goal kappa = InducedGoal(g, alpha, beta, pi);
  auto two = CheckOPbme(g, alpha, beta, pi, mu, kappa, kDefaultTol, 2);
  CHECK_FALSE(two.is_equilibrium);
  CHECK(two.compound_gain == doctest::Approx(0.7e-6 * 1.9).epsilon(1e-11));
  CHECK(two.witness.kind == "compound");
  CHECK(two.witness.horizon == 2);
  auto off = CheckOPbme(g, alpha, beta, pi, mu, kappa, kDefaultTol, 0);
  CHECK(off.is_equilibrium);
}

TEST_CASE("one-shot gains match the static oracle at zero discount") {
  testing::Rng rng(31);
  for (int k = 0; k < 60; ++k) {
    auto shape = testing::RandomShape(rng, 2, 2, 3, 2, 2, 2);
    shape.gamma = shape.gamma_hat = 0.0;
    GameSpec g = testing::RandomGame(rng, shape);
    auto alpha = testing::RandomRule(rng, g, 0.4);
    auto beta = testing::RandomSelection(rng, g);
    Policy pi = k % 2 ? testing::RandomIndependentPolicy(rng, g, 0.5)
                      : testing::RandomCorrelatedPolicy(rng, g, 0.5);
    auto rep = CheckPbme(g, alpha, beta, pi, UpdateBeliefs(g, alpha));
    auto oracle = testing::OracleStaticGains(g, alpha, beta, pi);
    CAPTURE(k);
    CHECK(rep.worst_policy_gain == doctest::Approx(oracle.policy).epsilon(1e-9));
    CHECK(rep.worst_selection_gain == doctest::Approx(oracle.selection).epsilon(1e-9));
  }
}

TEST_CASE("correlated check on the shipped goals") {
  GameSpec chicken = Fixture("chicken.game.json");
  Goal ce = LoadGoalFile(chicken, SourceDir() + "/fixtures/chicken_ce.goal.json");
  CHECK(CheckBmce(chicken, ce).is_equilibrium);

  GameSpec pers = Fixture("persuasion.game.json");
  Goal pk = LoadGoalFile(pers, SourceDir() + "/fixtures/persuasion.goal.json");
  auto rep = CheckBmce(pers, pk);
  CHECK(rep.is_equilibrium);

  GameSpec pd = Fixture("pd1_static.game.json");
  Goal cc = LoadGoalFile(pd, SourceDir() + "/fixtures/pd1_cc.goal.json");
  auto bad = CheckBmce(pd, cc);
  CHECK_FALSE(bad.is_equilibrium);
  CHECK(bad.worst_policy_gain > 0.5);
  Goal dd = LoadGoalFile(pd, SourceDir() + "/fixtures/pd1_dd.goal.json");
  CHECK(CheckBmce(pd, dd).is_equilibrium);

  CHECK_THROWS_AS(CheckBmce(Fixture("two_source.game.json"),
                            Goal::Zero(Fixture("two_source.game.json"))),
                  InputError);
}

TEST_CASE("Markov Nash check agrees with the general check on one signal") {
  testing::Rng rng(41);
  for (int k = 0; k < 30; ++k) {
    auto shape = testing::RandomShape(rng, 2, 3, 3, 1, 2, 1);
    shape.gamma = shape.gamma_hat = k % 3 == 0 ? 0.0 : 0.8;
    GameSpec g = testing::RandomGame(rng, shape);
    SignalingRule alpha = SignalingRule::Constant(g, 0);
    Policy pi = testing::RandomIndependentPolicy(rng, g, 0.6);
    auto mu = UpdateBeliefs(g, alpha);
    auto a = CheckBme(g, pi, mu);
    auto b = CheckPbme(g, alpha, SelectionRule::Obedient(g), pi, mu);
    CHECK(a.worst_policy_gain == doctest::Approx(b.worst_policy_gain).epsilon(1e-9));
    CHECK(a.is_equilibrium == b.is_equilibrium);
  }
  CHECK_THROWS_AS(CheckBme(Fixture("pd2.game.json"),
                           Policy::UniformIndependent(Fixture("pd2.game.json")),
                           BeliefSystem::Zero(Fixture("pd2.game.json"))),
                  InputError);
}

TEST_CASE("inconsistent beliefs are flagged") {
  GameSpec g = Fixture("pd2.game.json");
  LoadedProfile p = LoadProfileFile(g, SourceDir() + "/fixtures/pd2_mixed.profile.json");
  auto mu = UpdateBeliefs(g, *p.alpha);
  mu.prob[0] = 1.0 - mu.prob[0];
  auto rep = CheckPbme(g, *p.alpha, p.beta, p.pi, mu);
  CHECK_FALSE(rep.consistent);
  CHECK_FALSE(rep.verified());
}

TEST_CASE("slacks are nonnegative at an equilibrium and match value gaps") {
  GameSpec g = Fixture("pd1_static.game.json");
  LoadedProfile p = LoadProfileFile(g, SourceDir() + "/fixtures/pd1_dd.profile.json");
  auto mu = UpdateBeliefs(g, *p.alpha);
  REQUIRE(CheckPbme(g, *p.alpha, p.beta, p.pi, mu).is_equilibrium);
  auto cert = ComputeSlacks(g, *p.alpha, p.beta, p.pi, mu);
  CHECK_FALSE(cert.reduced);
  CHECK(cert.min_delta >= -1e-9);
  CHECK(cert.min_zeta >= -1e-9);
  for (const auto& d : cert.delta) {
    CHECK(d.slack == doctest::Approx(d.value_gap).epsilon(1e-9));
  }
  CHECK(std::fabs(cert.lagrangian_value) <= 1e-9);

  testing::Rng rng(8);
  for (int k = 0; k < 10; ++k) {
    auto shape = testing::RandomShape(rng, 2, 2, 2, 2, 1, 2);
    GameSpec h = testing::RandomGame(rng, shape);
    auto alpha = testing::RandomRule(rng, h);
    auto beta = testing::RandomSelection(rng, h);
    auto pi = testing::RandomIndependentPolicy(rng, h);
    auto c = ComputeSlacks(h, alpha, beta, pi, UpdateBeliefs(h, alpha));
    for (const auto* set : {&c.delta, &c.zeta})
      for (const auto& d : *set) {
        CHECK(d.slack == doctest::Approx(d.value_gap).epsilon(1e-8));
        CHECK(d.weight == doctest::Approx(1.0 / (1.0 - h.gamma)).epsilon(1e-9));
      }
  }
}

TEST_CASE("induced goals are admissible for their own profile") {
  testing::Rng rng(2);
  for (int k = 0; k < 10; ++k) {
    auto shape = testing::RandomShape(rng, 2, 3, 2, 2, 2, 2);
    GameSpec g = testing::RandomGame(rng, shape);
    auto alpha = testing::RandomRule(rng, g);
    auto beta = testing::RandomSelection(rng, g);
    auto pi = testing::RandomCorrelatedPolicy(rng, g);
    Goal kappa = InducedGoal(g, alpha, beta, pi);
    ValidateGoal(g, kappa);
    CHECK(AdmissibilityGap(g, alpha, beta, pi, kappa) == 0.0);
    Goal other = testing::RandomGoal(rng, g);
    double gap = 0.0;
    CHECK_FALSE(CheckAdmissibility(g, alpha, beta, pi, other, 1e-6, &gap));
    CHECK(gap > 1e-6);
  }
}
