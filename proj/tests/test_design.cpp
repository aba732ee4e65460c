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

#include <cstdlib>

#include "doctest.h"
#include "infodesign/design.hpp"
#include "infodesign/io.hpp"
#include "support/random_game.hpp"

using namespace infodesign;
using infodesign::testing::SourceDir;

namespace {

GameSpec Fixture(const std::string& name) {
  return LoadGameFile(SourceDir() + "/fixtures/" + name);
}

Goal FixtureGoal(const GameSpec& g, const std::string& name) {
  return LoadGoalFile(g, SourceDir() + "/fixtures/" + name);
}

// Probability that agent 0 plays action `a`, prior and d_g weighted.
double ActionFrequency(const GameSpec& g, const Goal& k, int agent, int a) {
  double f = 0.0;
  for (int tj = 0; tj < g.num_joint_types(); ++tj)
    for (int s = 0; s < g.num_states(); ++s)
      for (int ja = 0; ja < g.num_joint_actions(); ++ja) {
        if (g.ActionOf(ja, agent) != a) continue;
        f += g.JointTypeProb(tj) * g.state_init[s] * k(s, tj, ja);
      }
  return f;
}

}  // namespace

TEST_CASE("chicken correlated goal is implemented exactly") {
  GameSpec g = Fixture("chicken.game.json");
  Goal k = FixtureGoal(g, "chicken_ce.goal.json");
  DesignResult r = DesignOil(g, k);
  REQUIRE(r.status == DesignStatus::kVerified);
  CHECK(std::string(DesignStatusName(r.status)) == "verified-OIL");
  CHECK(r.verification.admissibility_gap <= 1e-6);
  CHECK(r.verification.obedient);
  CHECK(r.principal_value == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(PrincipalPayoff(g, k) == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(r.epsilon.epsilon <= 1e-9);
  CHECK(r.slacks.min_delta >= -1e-6);
}

TEST_CASE("mutual cooperation in a one-shot dilemma is infeasible") {
  GameSpec g = Fixture("pd1_static.game.json");
  Goal k = FixtureGoal(g, "pd1_cc.goal.json");
  DesignResult r = DesignOil(g, k);
  CHECK(r.status == DesignStatus::kInfeasible);
  CHECK(std::string(DesignStatusName(r.status)) == "infeasible");
  REQUIRE(r.lp.status == LpStatus::kInfeasible);
  OilLp oil = BuildOilLp(g, k);
  auto [viol, zb] = CertificateViolation(oil.lp, r.lp.certificate);
  CHECK(viol <= 1e-9);
  CHECK(zb < 0.0);

  Goal dd = FixtureGoal(g, "pd1_dd.goal.json");
  CHECK(DesignOil(g, dd).status == DesignStatus::kVerified);
}

TEST_CASE("persuasion goal convicts sixty percent of the time") {
  GameSpec g = Fixture("persuasion.game.json");
  Goal k = FixtureGoal(g, "persuasion.goal.json");
  DesignResult r = DesignOil(g, k);
  REQUIRE(r.status == DesignStatus::kVerified);
  Goal induced = InducedGoal(g, r.alpha, r.beta, r.pi);
  CHECK(ActionFrequency(g, induced, 0, 1) == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(r.principal_value == doctest::Approx(0.6).epsilon(1e-9));

  GoalSelection s = SelectGoal(g);
  CHECK(s.value == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(s.design.status == DesignStatus::kVerified);
  CHECK(CheckBmce(g, s.kappa).is_equilibrium);
}

TEST_CASE("goal selection in the dynamic dilemma") {
  GameSpec g = Fixture("pd2.game.json");
  GoalSelection s = FindBestGoal(g);
  CHECK(CheckBmce(g, s.kappa).is_equilibrium);
  CHECK(s.value == doctest::Approx(PrincipalPayoff(g, s.kappa)));
  CHECK_THROWS_AS(FindBestGoal(Fixture("two_source.game.json")), InputError);
}

TEST_CASE("without incentives the program only matches the goal") {
  GameSpec g = Fixture("pd1_static.game.json");
  Goal k = FixtureGoal(g, "pd1_cc.goal.json");
  OilLpOptions lo;
  lo.incentives = false;
  OilLp plain = BuildOilLp(g, k, lo);
  CHECK(plain.num_incentive_rows == 0);
  CHECK(BuildOilLp(g, k).num_incentive_rows > 0);
  DesignOptions opt;
  opt.incentives = false;
  DesignResult r = DesignOil(g, k, opt);
  CHECK(r.lp.status == LpStatus::kOptimal);
  CHECK(r.verification.admissible);
  CHECK(r.status == DesignStatus::kEpsilon);
  CHECK(r.epsilon.epsilon > 0.5);
}

TEST_CASE("occupancy from the program recovers the rule") {
  GameSpec g = Fixture("chicken.game.json");
  Goal k = FixtureGoal(g, "chicken_ce.goal.json");
  OilLp oil = BuildOilLp(g, k);
  LpResult lp = SolveLp(oil.lp);
  REQUIRE(lp.status == LpStatus::kOptimal);
  OccupancyMeasure occ = OccupancyFromLp(g, oil, lp.x);
  SignalingRule alpha = RecoverRule(g, occ);
  ValidateRule(g, alpha);
  CHECK(FlowResidual(g, alpha, occ) <= 1e-9);
}

TEST_CASE("directify collapses a second source") {
  GameSpec g = Fixture("two_source.game.json");
  LoadedProfile p =
      LoadProfileFile(g, SourceDir() + "/fixtures/two_source_select_gem.profile.json");
  DirectDesign d = Directify(g, *p.alpha, p.beta, p.pi);
  CHECK(d.game.n_sources == 1);
  CHECK(d.alpha(0, 0, 1) == doctest::Approx(1.0));
  Goal before = InducedGoal(g, *p.alpha, p.beta, p.pi);
  Goal after = InducedGoal(d.game, d.alpha, d.beta, d.pi);
  CHECK(before.prob == after.prob);
  auto rep = CheckPbme(d.game, d.alpha, d.beta, d.pi, UpdateBeliefs(d.game, d.alpha));
  CHECK(rep.is_equilibrium);
  CHECK(ProfileValue(d.game, d.alpha, d.beta, d.pi, 0) ==
        doctest::Approx(ProfileValue(g, *p.alpha, p.beta, p.pi, 0)));

  LoadedProfile q =
      LoadProfileFile(g, SourceDir() + "/fixtures/two_source_obedient.profile.json");
  CHECK_THROWS_AS(Directify(g, *q.alpha, q.beta, q.pi), InputError);
}

TEST_CASE("epsilon is zero on an exact equilibrium and grows with the gain") {
  GameSpec g = Fixture("pd1_static.game.json");
  LoadedProfile p = LoadProfileFile(g, SourceDir() + "/fixtures/pd1_dd.profile.json");
  auto mu = UpdateBeliefs(g, *p.alpha);
  CHECK(ComputeEpsilon(g, *p.alpha, p.beta, p.pi, mu).epsilon == 0.0);
  double last = 0.0;
  for (double w : {0.1, 0.4, 0.8}) {
    Policy mixed = testing::Mix(p.pi, Policy::ConstantIndependent(g, 0), w);
    auto e = ComputeEpsilon(g, *p.alpha, p.beta, mixed, mu);
    CHECK(e.epsilon > last);
    last = e.epsilon;
  }
}

TEST_CASE("design output does not depend on the worker count") {
  GameSpec g = Fixture("pd2.game.json");
  testing::Rng rng(4);
  Goal r = testing::RandomGoal(rng, g);
  DesignOptions one;
  one.workers = 1;
  one.restarts = 4;
  one.steps = 20;
  DesignOptions many = one;
  many.workers = 4;
  DesignResult a = DesignOil(g, r, one);
  DesignResult b = DesignOil(g, r, many);
  CHECK(a.status == b.status);
  CHECK(a.alpha.prob == b.alpha.prob);
}

TEST_CASE("worker count honours the environment") {
  CHECK(WorkerCount(3) == 3);
  setenv("INFODESIGN_WORKERS", "2", 1);
  CHECK(WorkerCount() == 2);
  unsetenv("INFODESIGN_WORKERS");
  CHECK(WorkerCount() >= 1);
}
