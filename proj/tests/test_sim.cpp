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
#include <sstream>

#include "doctest.h"
#include "infodesign/equilibrium.hpp"
#include "infodesign/io.hpp"
#include "infodesign/sim.hpp"
#include "json.hpp"
#include "support/random_game.hpp"

using namespace infodesign;
using infodesign::testing::SourceDir;

namespace {

struct Loaded {
  GameSpec game;
  LoadedProfile profile;
};

Loaded Load(const std::string& game, const std::string& profile) {
  Loaded l;
  l.game = LoadGameFile(SourceDir() + "/fixtures/" + game);
  l.profile = LoadProfileFile(l.game, SourceDir() + "/fixtures/" + profile);
  return l;
}

}  // namespace

TEST_CASE("counter generator is a pure function of its key") {
  CounterRng a(7, 3), b(7, 3), c(7, 4);
  for (int k = 0; k < 5; ++k) {
    std::uint64_t x = a.NextU64();
    CHECK(x == b.NextU64());
    CHECK(x != c.NextU64());
  }
  CHECK(a.counter() == 5);
  CounterRng u(1, 0);
  for (int k = 0; k < 1000; ++k) {
    double v = u.Uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  // splitmix64 reference output for state 0.
  CHECK(SplitMix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("inverse-CDF sampling") {
  const double p[3] = {0.2, 0.0, 0.8};
  CHECK(SampleIndex(p, 3, 0.0) == 0);
  CHECK(SampleIndex(p, 3, 0.199) == 0);
  CHECK(SampleIndex(p, 3, 0.2) == 2);
  CHECK(SampleIndex(p, 3, 0.999999) == 2);
}

TEST_CASE("default horizon makes the tail negligible") {
  Loaded l = Load("pd2.game.json", "pd2_mixed.profile.json");
  int T = DefaultHorizon(l.game);
  double rmax = l.game.RewardBound();
  CHECK(std::pow(0.9, T) * rmax / 0.1 < 1e-6);
  CHECK(std::pow(0.9, T - 1) * rmax / 0.1 >= 1e-6);
  GameSpec s = LoadGameFile(SourceDir() + "/fixtures/pd1_static.game.json");
  CHECK(DefaultHorizon(s) == 1);
}

TEST_CASE("rollouts are reproducible") {
  Loaded l = Load("pd2.game.json", "pd2_mixed.profile.json");
  const auto& p = l.profile;
  Trajectory a = Rollout(l.game, *p.alpha, p.beta, p.pi, 40, 99, 5);
  Trajectory b = Rollout(l.game, *p.alpha, p.beta, p.pi, 40, 99, 5);
  Trajectory c = Rollout(l.game, *p.alpha, p.beta, p.pi, 40, 99, 6);
  REQUIRE(a.periods.size() == 40);
  CHECK(a.rewards == b.rewards);
  bool differ = a.rewards != c.rewards;
  for (size_t t = 0; t < a.periods.size(); ++t) {
    CHECK(a.periods[t].ja == b.periods[t].ja);
    differ = differ || a.periods[t].g != c.periods[t].g;
  }
  CHECK(differ);
  CHECK_THROWS_AS(Rollout(l.game, *p.alpha, p.beta, p.pi, 0, 1), InputError);
}

TEST_CASE("estimates do not depend on the worker count") {
  Loaded l = Load("pd2.game.json", "pd2_mixed.profile.json");
  const auto& p = l.profile;
  auto a = SimulateOccupancy(l.game, *p.alpha, p.beta, p.pi, 3000, 30, 5, 1);
  auto b = SimulateOccupancy(l.game, *p.alpha, p.beta, p.pi, 3000, 30, 5, 3);
  CHECK(a.rho == b.rho);
  auto va = EmpiricalValue(l.game, *p.alpha, p.beta, p.pi, 3000, 30, 5, 1);
  auto vb = EmpiricalValue(l.game, *p.alpha, p.beta, p.pi, 3000, 30, 5, 4);
  CHECK(va[0].mean == vb[0].mean);
  CHECK(va[1].se == vb[1].se);
}

TEST_CASE("simulated occupancy of a deterministic chain is exact") {
  Loaded l = Load("swap2.game.json", "swap2.profile.json");
  const auto& p = l.profile;
  const int T = 25;
  auto occ = SimulateOccupancy(l.game, *p.alpha, p.beta, p.pi, 10, T, 1);
  CHECK(occ.Mass(0) == doctest::Approx((1.0 - std::pow(0.9, T)) / 0.1).epsilon(1e-12));
  double even = 0.0;
  for (int t = 0; t < T; t += 2) even += std::pow(0.9, t);
  CHECK(occ(0, 0, 0, 0, 0) == doctest::Approx(even).epsilon(1e-12));
}

TEST_CASE("empirical values agree with the analytic ones") {
  Loaded l = Load("pd2.game.json", "pd2_mixed.profile.json");
  const auto& p = l.profile;
  const int T = DefaultHorizon(l.game);
  auto est = EmpiricalValue(l.game, *p.alpha, p.beta, p.pi, 20000, T, 3);
  for (int i = 0; i < 2; ++i) {
    double exact = ProfileValue(l.game, *p.alpha, p.beta, p.pi, i);
    CHECK(std::fabs(est[i].mean - exact) <= 4.0 * est[i].se + 1e-6);
  }
}

TEST_CASE("paired deviation estimate of an identical profile is zero") {
  Loaded l = Load("pd2.game.json", "pd2_mixed.profile.json");
  const auto& p = l.profile;
  Estimate e = EmpiricalDeviationGain(l.game, *p.alpha, p.beta, p.pi, p.beta, p.pi,
                                      0, 500, 30, 2);
  CHECK(e.mean == 0.0);
  CHECK(e.se == 0.0);
  CHECK(e.n == 500);
  CHECK_THROWS_AS(EmpiricalDeviationGain(l.game, *p.alpha, p.beta, p.pi, p.beta,
                                         p.pi, 2, 10, 5, 1),
                  InputError);
}

TEST_CASE("estimators reject empty input") {
  Loaded l = Load("pd2.game.json", "pd2_mixed.profile.json");
  const auto& p = l.profile;
  try {
    EstimateOccupancy(l.game, {}, 0.9);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("insufficient data") != std::string::npos);
  }
  CHECK_THROWS_AS(SimulateOccupancy(l.game, *p.alpha, p.beta, p.pi, 0, 5, 1),
                  InputError);
  CHECK_THROWS_AS(EmpiricalValue(l.game, *p.alpha, p.beta, p.pi, 0, 5, 1), InputError);
}

TEST_CASE("trajectory estimate matches the batch estimator") {
  Loaded l = Load("pd2.game.json", "pd2_mixed.profile.json");
  const auto& p = l.profile;
  std::vector<Trajectory> trajs;
  for (int k = 0; k < 200; ++k) {
    trajs.push_back(Rollout(l.game, *p.alpha, p.beta, p.pi, 20, 8, k));
  }
  auto a = EstimateOccupancy(l.game, trajs, 0.9);
  auto b = SimulateOccupancy(l.game, *p.alpha, p.beta, p.pi, 200, 20, 8, 1);
  for (size_t k = 0; k < a.rho.size(); ++k) {
    CHECK(a.rho[k] == doctest::Approx(b.rho[k]).epsilon(1e-12));
  }
}

TEST_CASE("trajectories serialize one period per line") {
  GameSpec g = LoadGameFile(SourceDir() + "/fixtures/two_source.game.json");
  LoadedProfile p =
      LoadProfileFile(g, SourceDir() + "/fixtures/two_source_select_gem.profile.json");
  Trajectory t = Rollout(g, *p.alpha, p.beta, p.pi, 3, 1, 0);
  std::ostringstream os;
  WriteTrajectoryJsonl(os, g, t);
  std::istringstream in(os.str());
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j["t"] == count);
    CHECK(j["batches"][0] == nlohmann::json::array({"junk", "gem"}));
    CHECK(j["selected"][0] == "gem");
    CHECK(j["rewards"][0] == 1.0);
    ++count;
  }
  CHECK(count == 3);
}
