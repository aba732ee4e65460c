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

#include "infodesign/report.hpp"

#include "infodesign/io.hpp"
#include "infodesign/sim.hpp"

namespace infodesign {

OrderedJson MakeReport(const std::string& command, OrderedJson config,
                       OrderedJson tolerances, OrderedJson result) {
  OrderedJson r;
  r["schema_version"] = kSchemaVersion;
  r["tool"] = {{"name", kToolName},
               {"version", kToolVersion},
               {"generator", kGeneratorName}};
  r["command"] = command;
  r["config"] = std::move(config);
  r["tolerances"] = std::move(tolerances);
  r["result"] = std::move(result);
  return r;
}

OrderedJson WitnessToJson(const GameSpec& game, const Witness& w) {
  if (w.agent < 0) return nullptr;
  OrderedJson j;
  j["agent"] = w.agent;
  j["kind"] = w.kind;
  j["state"] = game.states[w.state];
  j["batch"] = w.batch >= 0 ? OrderedJson(JointLabel(game.signals, w.batch, game.n_sources))
                            : OrderedJson(nullptr);
  j["type"] = game.types[w.type];
  j["recommended"] = w.recommended >= 0 ? OrderedJson(game.actions[w.recommended])
                                        : OrderedJson(nullptr);
  j["position"] = w.position >= 0 ? OrderedJson(w.position) : OrderedJson(nullptr);
  j["action"] = w.action >= 0 ? OrderedJson(game.actions[w.action]) : OrderedJson(nullptr);
  j["horizon"] = w.horizon;
  j["gain"] = w.gain;
  return j;
}

OrderedJson EquilibriumToJson(const GameSpec& game, const EquilibriumReport& r) {
  OrderedJson j;
  j["is_equilibrium"] = r.is_equilibrium;
  j["verified"] = r.verified();
  j["worst_policy_gain"] = r.worst_policy_gain;
  j["worst_selection_gain"] = r.worst_selection_gain;
  j["t_dev"] = r.t_dev;
  j["compound_gain"] = r.compound_gain;
  j["consistent"] = r.consistent;
  j["consistency_gap"] = r.consistency_gap;
  j["obedient"] = r.obedient;
  j["admissible"] = r.admissible;
  j["admissibility_gap"] = r.admissibility_gap;
  j["witness"] = WitnessToJson(game, r.witness);
  return j;
}

OrderedJson SlacksToJson(const SlackCertificate& s) {
  auto list = [](const std::vector<DeviationSlack>& v) {
    OrderedJson a = OrderedJson::array();
    for (const DeviationSlack& d : v) {
      a.push_back({{"agent", d.agent},
                   {"table", d.table},
                   {"slack", d.slack},
                   {"weight", d.weight},
                   {"value_gap", d.value_gap}});
    }
    return a;
  };
  OrderedJson j;
  j["reduced"] = s.reduced;
  j["min_delta"] = s.min_delta;
  j["min_zeta"] = s.min_zeta;
  j["lagrangian_value"] = s.lagrangian_value;
  j["delta"] = list(s.delta);
  j["zeta"] = list(s.zeta);
  return j;
}

OrderedJson EpsilonToJson(const GameSpec& game, const EpsilonCertificate& e) {
  OrderedJson j;
  j["epsilon"] = e.epsilon;
  j["epsilon_agent"] = e.epsilon_agent;
  j["Phi"] = e.Phi;
  j["Phi_mean"] = e.Phi_mean;
  OrderedJson phi = OrderedJson::object();
  const int NJT = game.num_joint_types();
  for (int tj = 0; tj < NJT; ++tj) {
    phi[JointLabel(game.types, tj, game.n_agents)] = e.phi[tj];
  }
  j["phi"] = std::move(phi);
  OrderedJson psi = OrderedJson::object();
  for (int g = 0; g < game.num_states(); ++g) {
    OrderedJson row = OrderedJson::object();
    for (int tj = 0; tj < NJT; ++tj) {
      row[JointLabel(game.types, tj, game.n_agents)] =
          e.psi[static_cast<size_t>(g) * NJT + tj];
    }
    psi[game.states[g]] = std::move(row);
  }
  j["psi"] = std::move(psi);
  return j;
}

OrderedJson ValuesToJson(const GameSpec& game, const ValueBundle& v) {
  OrderedJson j;
  j["iterations"] = v.iterations;
  j["residual"] = v.residual;
  OrderedJson agents = OrderedJson::array();
  for (int i = 0; i < game.n_agents; ++i) {
    OrderedJson a;
    a["agent"] = i;
    OrderedJson interim = OrderedJson::object();
    for (int g = 0; g < game.num_states(); ++g) {
      OrderedJson row = OrderedJson::object();
      for (int th = 0; th < game.num_types(); ++th) row[game.types[th]] = v.Jv(i, g, th);
      interim[game.states[g]] = std::move(row);
    }
    a["J"] = std::move(interim);
    OrderedJson full = OrderedJson::object();
    for (int tj = 0; tj < game.num_joint_types(); ++tj) {
      OrderedJson row = OrderedJson::object();
      for (int g = 0; g < game.num_states(); ++g) row[game.states[g]] = v.Jfull(i, tj, g);
      full[JointLabel(game.types, tj, game.n_agents)] = std::move(row);
    }
    a["J_full"] = std::move(full);
    a["ex_ante"] = ExAnteValue(game, v.J_full, i);
    agents.push_back(std::move(a));
  }
  j["agents"] = std::move(agents);
  return j;
}

OrderedJson LpToJson(const LinearProgram& lp, const LpResult& r) {
  OrderedJson j;
  j["status"] = LpStatusName(r.status);
  j["objective"] = r.status == LpStatus::kOptimal ? OrderedJson(r.objective)
                                                   : OrderedJson(nullptr);
  j["pivots"] = r.pivots;
  j["variables"] = lp.num_vars;
  j["equality_rows"] = lp.eq_rows.size();
  j["inequality_rows"] = lp.ub_rows.size();
  if (r.status == LpStatus::kInfeasible) {
    OrderedJson cert = OrderedJson::object();
    const size_t ne = lp.eq_rows.size();
    for (size_t k = 0; k < r.certificate.size(); ++k) {
      if (r.certificate[k] == 0.0) continue;
      std::string name = k < ne ? "eq" + std::to_string(k) : "ub" + std::to_string(k - ne);
      cert[name] = r.certificate[k];
    }
    auto [violation, ztb] = CertificateViolation(lp, r.certificate);
    j["certificate"] = {{"multipliers", std::move(cert)},
                        {"z_dot_b", ztb},
                        {"violation", violation}};
  }
  return j;
}

OrderedJson DesignToJson(const GameSpec& game, const DesignResult& d) {
  OrderedJson j;
  j["status"] = DesignStatusName(d.status);
  j["lp_rounds"] = d.lp_rounds;
  if (d.status == DesignStatus::kInfeasible) return j;
  j["refined"] = d.refined;
  j["uniform_rule_rows"] = d.uniform_rule_rows;
  j["uniform_policy_rows"] = d.uniform_policy_rows;
  j["principal_value"] = d.principal_value;
  j["verification"] = EquilibriumToJson(game, d.verification);
  j["epsilon"] = EpsilonToJson(game, d.epsilon);
  j["slacks"] = SlacksToJson(d.slacks);
  j["rule"] = RuleToJson(game, d.alpha);
  j["profile"] = ProfileToJson(game, nullptr, d.beta, d.pi);
  return j;
}

std::string FormatDouble(double v) { return OrderedJson(v).dump(); }

void WriteCsv(std::ostream& os, const CsvTable& table) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t k = 0; k < cells.size(); ++k) {
      if (k) os << ',';
      const std::string& c = cells[k];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        os << '"';
        for (char ch : c) {
          if (ch == '"') os << '"';
          os << ch;
        }
        os << '"';
      } else {
        os << c;
      }
    }
    os << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

}  // namespace infodesign
