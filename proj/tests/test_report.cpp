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

#include <sstream>

#include "doctest.h"
#include "infodesign/io.hpp"
#include "infodesign/report.hpp"
#include "support/random_game.hpp"

using namespace infodesign;
using infodesign::testing::SourceDir;

TEST_CASE("report envelope") {
  OrderedJson r = MakeReport("verify", {{"game", "g.json"}}, {{"tol", 1e-6}},
                             {{"ok", true}});
  std::vector<std::string> keys;
  for (auto it = r.begin(); it != r.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"schema_version", "tool", "command",
                                         "config", "tolerances", "result"});
  CHECK(r["tool"]["version"] == "0.1.0");
  CHECK(r["tool"]["generator"] == "splitmix64-counter");
}

TEST_CASE("witness names labels rather than indices") {
  GameSpec g = LoadGameFile(SourceDir() + "/fixtures/two_source.game.json");
  Witness w{0, "selection", 0, g.MakeBatch(0, 1), 0, 0, 1, 0, 1, 1.0};
  OrderedJson j = WitnessToJson(g, w);
  CHECK(j["batch"] == "junk|gem");
  CHECK(j["state"] == "g");
  CHECK(j["action"] == "a");
  CHECK(WitnessToJson(g, Witness{}).is_null());
}

TEST_CASE("certificate multipliers are named by row") {
  LinearProgram lp(1);
  lp.AddEq({1}, 1);
  lp.AddUb({1}, 0.5);
  LpResult r = SolveLp(lp);
  OrderedJson j = LpToJson(lp, r);
  CHECK(j["status"] == "infeasible");
  CHECK(j["objective"].is_null());
  CHECK(j["certificate"]["z_dot_b"].get<double>() < 0.0);
  CHECK(j["certificate"]["multipliers"].contains("ub0"));
}

TEST_CASE("csv quoting and number formatting") {
  CsvTable t{{"a", "b"}, {{"1", "x,y"}, {"say \"hi\"", "2"}}};
  std::ostringstream os;
  WriteCsv(os, t);
  CHECK(os.str() == "a,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",2\n");
  CHECK(FormatDouble(0.1) == "0.1");
  CHECK(FormatDouble(1.0 / 3.0) == "0.3333333333333333");
}
