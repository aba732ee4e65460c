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

// Command-line front end. Exit codes: 0 ok or verified, 1 input error,
// 2 not an equilibrium, 3 infeasible.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "infodesign/design.hpp"
#include "infodesign/dynamics.hpp"
#include "infodesign/equilibrium.hpp"
#include "infodesign/game.hpp"
#include "infodesign/io.hpp"
#include "infodesign/lp.hpp"
#include "infodesign/report.hpp"
#include "infodesign/sim.hpp"

namespace {

using namespace infodesign;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNotEquilibrium = 2;
constexpr int kExitInfeasible = 3;

struct Config {
  std::string command;
  std::string game;
  std::string goal;
  std::string rule;
  std::string profile;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  int rollouts = 100000;
  int horizon = 0;
  int trajectories = 0;
  std::string out;
  std::string format = "json";
  int tdev = kDefaultTdev;
  int restarts = 16;
  std::string dump_lp;
  bool pbme = false;
  bool o_pbme = false;
  bool bmce = false;
  bool bme = false;
  bool no_incentives = false;
};

struct Output {
  OrderedJson result;
  CsvTable table;
  int code = kExitOk;
};

OrderedJson ConfigJson(const Config& c) {
  OrderedJson j;
  j["game"] = c.game;
  auto opt = [](const std::string& s) {
    return s.empty() ? OrderedJson(nullptr) : OrderedJson(s);
  };
  j["goal"] = opt(c.goal);
  j["rule"] = opt(c.rule);
  j["profile"] = opt(c.profile);
  j["seed"] = c.seed;
  j["rollouts"] = c.rollouts;
  j["horizon"] = c.horizon;
  j["tdev"] = c.tdev;
  j["restarts"] = c.restarts;
  j["incentives"] = !c.no_incentives;
  j["format"] = c.format;
  if (c.command == "verify") {
    j["check"] = c.pbme ? "pbme" : c.o_pbme ? "o-pbme" : c.bmce ? "bmce" : "bme";
  }
  return j;
}

OrderedJson TolerancesJson(const Config& c) {
  return {{"tol", c.tol},
          {"support", kSupportTol},
          {"lp", kLpTol},
          {"value", kDefaultValueTol},
          {"probability", kProbTol}};
}

std::string Timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct Inputs {
  GameSpec game;
  std::optional<Goal> goal;
  std::optional<LoadedProfile> profile;
  std::optional<SignalingRule> alpha;
};

Inputs Load(const Config& c, bool need_goal, bool need_profile, bool need_rule) {
  Inputs in;
  if (c.game.empty()) throw InputError("missing --game");
  in.game = LoadGameFile(c.game);
  if (!c.goal.empty()) in.goal = LoadGoalFile(in.game, c.goal);
  if (need_goal && !in.goal) throw InputError("missing --goal");
  if (!c.profile.empty()) in.profile = LoadProfileFile(in.game, c.profile);
  if (need_profile && !in.profile) throw InputError("missing --profile");
  if (!c.rule.empty()) {
    in.alpha = LoadRuleFile(in.game, c.rule);
  } else if (in.profile && in.profile->alpha) {
    in.alpha = in.profile->alpha;
  }
  if (need_rule && !in.alpha) {
    throw InputError("missing signaling rule: pass --rule or a profile with 'rule'");
  }
  return in;
}

BeliefSystem Beliefs(const Inputs& in) {
  if (in.profile && in.profile->mu) return *in.profile->mu;
  return UpdateBeliefs(in.game, *in.alpha);
}

Output RunValidate(const Config& c) {
  Inputs in = Load(c, false, false, false);
  const GameSpec& g = in.game;
  Output o;
  o.result = {{"valid", true},
              {"agents", g.n_agents},
              {"states", g.num_states()},
              {"actions", g.num_actions()},
              {"types", g.num_types()},
              {"signals", g.num_signals()},
              {"sources", g.n_sources},
              {"gamma", g.gamma},
              {"gamma_hat", g.gamma_hat},
              {"reward_bound", g.RewardBound()},
              {"signal_independent_rewards", g.SignalIndependentRewards()}};
  o.table.header = {"field", "value"};
  for (auto it = o.result.begin(); it != o.result.end(); ++it) {
    o.table.rows.push_back({it.key(), it.value().dump()});
  }
  return o;
}

Output RunValues(const Config& c) {
  Inputs in = Load(c, false, true, true);
  const GameSpec& g = in.game;
  ValueBundle v = ComputeValues(g, *in.alpha, in.profile->beta, in.profile->pi,
                                Beliefs(in));
  Output o;
  o.result = ValuesToJson(g, v);
  o.table.header = {"agent", "state", "type", "J"};
  for (int i = 0; i < g.n_agents; ++i)
    for (int s = 0; s < g.num_states(); ++s)
      for (int th = 0; th < g.num_types(); ++th) {
        o.table.rows.push_back({std::to_string(i), g.states[s], g.types[th],
                                FormatDouble(v.Jv(i, s, th))});
      }
  return o;
}

void EquilibriumTable(const OrderedJson& rep, CsvTable& t) {
  t.header = {"metric", "value"};
  for (auto it = rep.begin(); it != rep.end(); ++it) {
    if (it.key() == "witness") continue;
    t.rows.push_back({it.key(), it.value().dump()});
  }
}

Output RunVerify(const Config& c) {
  int flags = c.pbme + c.o_pbme + c.bmce + c.bme;
  if (flags != 1) {
    throw InputError("verify needs exactly one of --pbme, --o-pbme, --bmce, --bme");
  }
  Output o;
  EquilibriumReport rep;
  Inputs in;
  if (c.bmce) {
    in = Load(c, true, false, false);
    rep = CheckBmce(in.game, *in.goal, c.tol);
    o.code = rep.is_equilibrium ? kExitOk : kExitNotEquilibrium;
  } else if (c.bme) {
    in = Load(c, false, true, false);
    BeliefSystem mu = in.profile->mu ? *in.profile->mu
                                     : UpdateBeliefs(in.game, SignalingRule::Constant(in.game, 0));
    rep = CheckBme(in.game, in.profile->pi, mu, c.tol);
    o.code = rep.is_equilibrium && rep.consistent ? kExitOk : kExitNotEquilibrium;
  } else {
    in = Load(c, c.o_pbme, true, true);
    const LoadedProfile& p = *in.profile;
    BeliefSystem mu = Beliefs(in);
    if (c.pbme) {
      rep = CheckPbme(in.game, *in.alpha, p.beta, p.pi, mu, c.tol);
      o.code = rep.is_equilibrium && rep.consistent ? kExitOk : kExitNotEquilibrium;
    } else {
      rep = CheckOPbme(in.game, *in.alpha, p.beta, p.pi, mu, *in.goal, c.tol, c.tdev);
      o.code = rep.verified() ? kExitOk : kExitNotEquilibrium;
    }
  }
  o.result = EquilibriumToJson(in.game, rep);
  EquilibriumTable(o.result, o.table);
  return o;
}

DesignOptions Options(const Config& c) {
  DesignOptions d;
  d.tol = c.tol;
  d.t_dev = c.tdev;
  d.restarts = c.restarts;
  d.seed = c.seed;
  d.incentives = !c.no_incentives;
  return d;
}

void RuleTable(const GameSpec& g, const SignalingRule& a, CsvTable& t) {
  t.header = {"state", "types", "signals", "probability"};
  for (int s = 0; s < g.num_states(); ++s)
    for (int tj = 0; tj < g.num_joint_types(); ++tj)
      for (int jw = 0; jw < g.num_joint_signals(); ++jw) {
        t.rows.push_back({g.states[s], JointLabel(g.types, tj, g.n_agents),
                          JointLabel(g.signals, jw, g.n_agents),
                          FormatDouble(a(s, tj, jw))});
      }
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

std::string OutPath(const Config& c, const std::string& name) {
  return (std::filesystem::path(c.out.empty() ? "." : c.out) / name).string();
}

int DesignCode(DesignStatus s) {
  switch (s) {
    case DesignStatus::kVerified:
      return kExitOk;
    case DesignStatus::kEpsilon:
      return kExitNotEquilibrium;
    case DesignStatus::kInfeasible:
      return kExitInfeasible;
  }
  return kExitInput;
}

Output RunDesign(const Config& c) {
  Inputs in = Load(c, true, false, false);
  const GameSpec& g = in.game;
  DesignOptions opt = Options(c);
  if (!c.dump_lp.empty()) {
    OilLpOptions lo;
    lo.incentives = opt.incentives;
    lo.tol = opt.tol;
    WriteText(c.dump_lp, DumpLp(BuildOilLp(g, *in.goal, lo).lp));
  }
  DesignResult d = DesignOil(g, *in.goal, opt);
  Output o;
  o.result = DesignToJson(g, d);
  OilLpOptions lo;
  lo.incentives = opt.incentives;
  lo.tol = opt.tol;
  if (d.status == DesignStatus::kInfeasible) {
    // The certificate refers to the rows of the final LP round.
    OilLp oil = BuildOilLp(g, *in.goal, lo);
    o.result["lp"] = LpToJson(oil.lp, d.lp);
    o.table.header = {"metric", "value"};
    o.table.rows.push_back({"status", "infeasible"});
  } else {
    o.result["lp"] = {{"status", LpStatusName(d.lp.status)},
                      {"objective", d.lp.objective},
                      {"pivots", d.lp.pivots}};
    RuleTable(g, d.alpha, o.table);
  }
  o.code = DesignCode(d.status);
  return o;
}

Output RunSelectGoal(const Config& c) {
  Inputs in = Load(c, false, false, false);
  const GameSpec& g = in.game;
  Output o;
  try {
    GoalSelection s = SelectGoal(g, Options(c));
    o.result["goal"] = GoalToJson(g, s.kappa);
    o.result["value"] = s.value;
    o.result["method"] = s.method;
    o.result["rounds"] = s.rounds;
    o.result["uniform_rows"] = s.uniform_rows;
    o.result["design"] = DesignToJson(g, s.design);
    o.code = DesignCode(s.design.status);
    o.table.header = {"state", "types", "actions", "probability"};
    for (int st = 0; st < g.num_states(); ++st)
      for (int tj = 0; tj < g.num_joint_types(); ++tj)
        for (int ja = 0; ja < g.num_joint_actions(); ++ja) {
          o.table.rows.push_back({g.states[st], JointLabel(g.types, tj, g.n_agents),
                                  JointLabel(g.actions, ja, g.n_agents),
                                  FormatDouble(s.kappa(st, tj, ja))});
        }
  } catch (const GoalNotFound& e) {
    o.result["goal"] = nullptr;
    o.result["error"] = e.what();
    o.code = kExitInfeasible;
    o.table.header = {"metric", "value"};
    o.table.rows.push_back({"status", "goal-not-found"});
  }
  return o;
}

Output RunDirectify(const Config& c) {
  Inputs in = Load(c, false, true, true);
  const GameSpec& g = in.game;
  const LoadedProfile& p = *in.profile;
  Output o;
  EquilibriumReport pre =
      CheckPbme(g, *in.alpha, p.beta, p.pi, UpdateBeliefs(g, *in.alpha), c.tol);
  if (!pre.is_equilibrium) {
    o.result["input"] = EquilibriumToJson(g, pre);
    o.result["direct"] = nullptr;
    o.code = kExitNotEquilibrium;
    EquilibriumTable(o.result["input"], o.table);
    return o;
  }
  DirectDesign d = Directify(g, *in.alpha, p.beta, p.pi, c.tol);
  EquilibriumReport post = CheckPbme(d.game, d.alpha, d.beta, d.pi,
                                     UpdateBeliefs(d.game, d.alpha), c.tol);
  Goal before = InducedGoal(g, *in.alpha, p.beta, p.pi);
  double gap = AdmissibilityGap(d.game, d.alpha, d.beta, d.pi, before);
  o.result["input"] = EquilibriumToJson(g, pre);
  o.result["direct"] = EquilibriumToJson(d.game, post);
  o.result["induced_goal_gap"] = gap;
  o.result["game"] = nlohmann::ordered_json::parse(SerializeGame(d.game));
  o.result["rule"] = RuleToJson(d.game, d.alpha);
  o.result["profile"] = ProfileToJson(d.game, &d.alpha, d.beta, d.pi);
  o.code = post.is_equilibrium && gap <= c.tol ? kExitOk : kExitNotEquilibrium;
  RuleTable(d.game, d.alpha, o.table);
  return o;
}

Output RunSimulate(const Config& c) {
  Inputs in = Load(c, false, true, true);
  const GameSpec& g = in.game;
  const LoadedProfile& p = *in.profile;
  if (c.rollouts < 1) throw InputError("--rollouts must be >= 1");
  const int T = c.horizon > 0 ? c.horizon : DefaultHorizon(g);
  const double trunc =
      g.gamma > 0.0 ? std::pow(g.gamma, T) * g.RewardBound() / (1.0 - g.gamma) : 0.0;
  auto emp = EmpiricalValue(g, *in.alpha, p.beta, p.pi, c.rollouts, T, c.seed);
  auto J = DirectValues(g, *in.alpha, p.beta, p.pi);
  OccupancyMeasure est = SimulateOccupancy(g, *in.alpha, p.beta, p.pi, c.rollouts, T, c.seed);
  OccupancyMeasure ana = OccupancyFromProfile(g, *in.alpha, p.beta, p.pi);
  double l1 = 0.0;
  const size_t per_type = ana.rho.size() / g.num_joint_types();
  for (size_t k = 0; k < ana.rho.size(); ++k) {
    l1 += g.JointTypeProb(static_cast<int>(k / per_type)) * std::fabs(ana.rho[k] - est.rho[k]);
  }
  Output o;
  o.result["horizon"] = T;
  o.result["rollouts"] = c.rollouts;
  o.result["seed"] = c.seed;
  o.result["truncation_bound"] = trunc;
  OrderedJson agents = OrderedJson::array();
  for (int i = 0; i < g.n_agents; ++i) {
    double analytic = ExAnteValue(g, J, i);
    agents.push_back({{"agent", i},
                      {"empirical", emp[i].mean},
                      {"standard_error", emp[i].se},
                      {"analytic", analytic},
                      {"within_bound",
                       std::fabs(emp[i].mean - analytic) <= trunc + 3.0 * emp[i].se}});
  }
  o.result["values"] = std::move(agents);
  o.result["occupancy_l1"] = l1;
  o.result["occupancy_l1_normalized"] = (1.0 - g.gamma) * l1;
  o.table.header = {"types", "state", "actions", "selected", "principal", "analytic", "empirical"};
  const int NJW = g.num_joint_signals();
  for (int tj = 0; tj < g.num_joint_types(); ++tj)
    for (int s = 0; s < g.num_states(); ++s)
      for (int ja = 0; ja < g.num_joint_actions(); ++ja)
        for (int jw = 0; jw < NJW; ++jw)
          for (int jwk = 0; jwk < NJW; ++jwk) {
            double a = ana(tj, s, ja, jw, jwk), e = est(tj, s, ja, jw, jwk);
            if (a == 0.0 && e == 0.0) continue;
            o.table.rows.push_back({JointLabel(g.types, tj, g.n_agents), g.states[s],
                                    JointLabel(g.actions, ja, g.n_agents),
                                    JointLabel(g.signals, jw, g.n_agents),
                                    JointLabel(g.signals, jwk, g.n_agents),
                                    FormatDouble(a), FormatDouble(e)});
          }
  if (c.trajectories > 0) {
    std::ofstream f(OutPath(c, "trajectories.jsonl"), std::ios::binary);
    if (!f) throw InputError("cannot write trajectories.jsonl");
    for (int k = 0; k < c.trajectories; ++k) {
      WriteTrajectoryJsonl(f, g, Rollout(g, *in.alpha, p.beta, p.pi, T, c.seed, k));
    }
  }
  return o;
}

void AddCommon(CLI::App* app, Config& c) {
  app->add_option("--game", c.game, "game file")->required();
  app->add_option("--out", c.out, "output directory (default: stdout)");
  app->add_option("--format", c.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--tol", c.tol, "equilibrium tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information design for Bayesian Markov games"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Config c;

  auto* validate = app.add_subcommand("validate", "check a game file");
  AddCommon(validate, c);

  auto* values = app.add_subcommand("values", "values of a profile");
  AddCommon(values, c);
  values->add_option("--profile", c.profile, "profile file")->required();
  values->add_option("--rule", c.rule, "signaling rule file");

  auto* verify = app.add_subcommand("verify", "equilibrium checks");
  AddCommon(verify, c);
  verify->add_option("--profile", c.profile, "profile file");
  verify->add_option("--rule", c.rule, "signaling rule file");
  verify->add_option("--goal", c.goal, "goal file");
  verify->add_option("--tdev", c.tdev, "compound deviation window")->check(CLI::NonNegativeNumber);
  verify->add_flag("--pbme", c.pbme, "one-shot signal and action deviations");
  verify->add_flag("--o-pbme", c.o_pbme, "plus obedience, admissibility, compound window");
  verify->add_flag("--bmce", c.bmce, "correlated check of a goal");
  verify->add_flag("--bme", c.bme, "Nash check with one signal and one source");

  auto* design = app.add_subcommand("design", "signaling rule for a goal");
  AddCommon(design, c);
  design->add_option("--goal", c.goal, "goal file")->required();
  design->add_option("--tdev", c.tdev, "compound deviation window")->check(CLI::NonNegativeNumber);
  design->add_option("--restarts", c.restarts, "refinement restarts")->check(CLI::NonNegativeNumber);
  design->add_option("--seed", c.seed, "refinement seed");
  design->add_option("--dump-lp", c.dump_lp, "write the design LP in text form");
  design->add_flag("--no-incentives", c.no_incentives, "drop the incentive rows");

  auto* select = app.add_subcommand("select-goal", "best verified goal, then design");
  AddCommon(select, c);
  select->add_option("--tdev", c.tdev, "compound deviation window")->check(CLI::NonNegativeNumber);
  select->add_option("--restarts", c.restarts, "refinement restarts")->check(CLI::NonNegativeNumber);
  select->add_option("--seed", c.seed, "refinement seed");

  auto* directify = app.add_subcommand("directify", "single-source equivalent of an equilibrium");
  AddCommon(directify, c);
  directify->add_option("--profile", c.profile, "profile file")->required();
  directify->add_option("--rule", c.rule, "signaling rule file");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo cross-check");
  AddCommon(simulate, c);
  simulate->add_option("--profile", c.profile, "profile file")->required();
  simulate->add_option("--rule", c.rule, "signaling rule file");
  simulate->add_option("--seed", c.seed, "random seed");
  simulate->add_option("--rollouts", c.rollouts, "number of rollouts");
  simulate->add_option("--horizon", c.horizon, "periods per rollout (default from gamma)");
  simulate->add_option("--trajectories", c.trajectories,
                       "write the first K rollouts as JSON lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();

  Output out;
  try {
    if (c.command == "validate") out = RunValidate(c);
    else if (c.command == "values") out = RunValues(c);
    else if (c.command == "verify") out = RunVerify(c);
    else if (c.command == "design") out = RunDesign(c);
    else if (c.command == "select-goal") out = RunSelectGoal(c);
    else if (c.command == "directify") out = RunDirectify(c);
    else out = RunSimulate(c);

    std::string body;
    if (c.format == "csv") {
      std::ostringstream os;
      WriteCsv(os, out.table);
      body = os.str();
    } else {
      body = MakeReport(c.command, ConfigJson(c), TolerancesJson(c), out.result)
                 .dump(2) + "\n";
    }
    if (c.out.empty()) {
      std::cout << body;
    } else {
      std::filesystem::create_directories(c.out);
      const std::string ext = c.format == "csv" ? ".csv" : ".json";
      WriteText(OutPath(c, c.command + ext), body);
      OrderedJson meta = {{"command", c.command},
                          {"report", c.command + ext},
                          {"timestamp", Timestamp()},
                          {"workers", WorkerCount()}};
      WriteText(OutPath(c, c.command + ".meta.json"), meta.dump(2) + "\n");
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return out.code;
}
