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

#include "infodesign/io.hpp"

#include <functional>
#include <map>
#include <set>

#include "infodesign/equilibrium.hpp"

namespace infodesign {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

Json Parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("parse error at line " + std::to_string(line) +
                     ", column " + std::to_string(col) + ": " + e.what());
  }
}

// Label -> index for a joint label space.
class LabelIndex {
 public:
  LabelIndex(const std::vector<std::string>& labels, int len, std::string what)
      : what_(std::move(what)) {
    int count = IntPow(static_cast<int>(labels.size()), len);
    for (int k = 0; k < count; ++k) map_[JointLabel(labels, k, len)] = k;
  }
  int operator()(const std::string& key, const std::string& path) const {
    auto it = map_.find(key);
    if (it == map_.end()) {
      throw InputError(path + ": unknown " + what_ + " '" + key + "'");
    }
    return it->second;
  }

 private:
  std::string what_;
  std::map<std::string, int> map_;
};

const Json& Object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw InputError(path + ": expected an object");
  return j;
}

double Probability(const Json& j, const std::string& path) {
  if (!j.is_number()) throw InputError(path + ": expected a number");
  double p = j.get<double>();
  if (!(p >= 0.0 && p <= 1.0 + kProbTol)) {
    throw InputError(path + ": probability out of [0, 1]");
  }
  return p;
}

int AgentKey(const GameSpec& game, const std::string& key,
             const std::string& path) {
  for (int i = 0; i < game.n_agents; ++i) {
    if (key == std::to_string(i)) return i;
  }
  throw InputError(path + ": unknown agent '" + key + "'");
}

void CheckKind(const Json& doc, const std::string& kind,
               const std::set<std::string>& keys) {
  Object(doc, "document");
  if (!doc.contains("kind") || !doc["kind"].is_string() ||
      doc["kind"].get<std::string>() != kind) {
    throw InputError("field 'kind' must be \"" + kind + "\"");
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!keys.count(it.key())) throw InputError("unknown key '" + it.key() + "'");
  }
}

// {state: {types: {outcome: p}}}.
void ReadTable3(const Json& t, const std::string& path, const LabelIndex& l1,
                const LabelIndex& l2, const LabelIndex& l3,
                const std::function<void(int, int, int, double)>& put) {
  Object(t, path);
  for (auto a = t.begin(); a != t.end(); ++a) {
    std::string pa = path + "." + a.key();
    int i1 = l1(a.key(), path);
    for (auto b = Object(a.value(), pa).begin(); b != a.value().end(); ++b) {
      std::string pb = pa + "." + b.key();
      int i2 = l2(b.key(), pa);
      for (auto c = Object(b.value(), pb).begin(); c != b.value().end(); ++c) {
        int i3 = l3(c.key(), pb);
        put(i1, i2, i3, Probability(c.value(), pb + "." + c.key()));
      }
    }
  }
}

SignalingRule RuleFromTable(const GameSpec& game, const Json& t,
                            const std::string& path) {
  const int n = game.n_agents;
  SignalingRule alpha = SignalingRule::Zero(game);
  ReadTable3(t, path, LabelIndex(game.states, 1, "state"),
             LabelIndex(game.types, n, "joint type"),
             LabelIndex(game.signals, n, "joint signal"),
             [&](int g, int tj, int jw, double p) { alpha.at(g, tj, jw) = p; });
  ValidateRule(game, alpha);
  return alpha;
}

OrderedJson Table3(const std::vector<std::string>& l1,
                   const std::vector<std::string>& l2, int len2,
                   const std::vector<std::string>& l3, int len3,
                   const std::function<double(int, int, int)>& get) {
  OrderedJson out = OrderedJson::object();
  const int n2 = IntPow(static_cast<int>(l2.size()), len2);
  const int n3 = IntPow(static_cast<int>(l3.size()), len3);
  for (int a = 0; a < static_cast<int>(l1.size()); ++a) {
    OrderedJson ja = OrderedJson::object();
    for (int b = 0; b < n2; ++b) {
      OrderedJson jb = OrderedJson::object();
      for (int c = 0; c < n3; ++c) {
        double p = get(a, b, c);
        if (p != 0.0) jb[JointLabel(l3, c, len3)] = p;
      }
      ja[JointLabel(l2, b, len2)] = std::move(jb);
    }
    out[l1[a]] = std::move(ja);
  }
  return out;
}

}  // namespace

Goal LoadGoal(const GameSpec& game, const std::string& text) {
  Json doc = Parse(text);
  CheckKind(doc, "goal", {"kind", "table"});
  if (!doc.contains("table")) throw InputError("missing field 'table'");
  const int n = game.n_agents;
  Goal kappa = Goal::Zero(game);
  ReadTable3(doc["table"], "table", LabelIndex(game.states, 1, "state"),
             LabelIndex(game.types, n, "joint type"),
             LabelIndex(game.actions, n, "joint action"),
             [&](int g, int tj, int ja, double p) { kappa.at(g, tj, ja) = p; });
  ValidateGoal(game, kappa);
  return kappa;
}

SignalingRule LoadRule(const GameSpec& game, const std::string& text) {
  Json doc = Parse(text);
  CheckKind(doc, "signaling_rule", {"kind", "table"});
  if (!doc.contains("table")) throw InputError("missing field 'table'");
  return RuleFromTable(game, doc["table"], "table");
}

LoadedProfile LoadProfile(const GameSpec& game, const std::string& text) {
  Json doc = Parse(text);
  CheckKind(doc, "profile", {"kind", "rule", "selection", "policy", "beliefs"});
  const int n = game.n_agents;
  LoadedProfile out;
  if (doc.contains("rule")) out.alpha = RuleFromTable(game, doc["rule"], "rule");

  out.beta = SelectionRule::Obedient(game);
  if (doc.contains("selection")) {
    const Json& sel = doc["selection"];
    if (sel.is_string()) {
      if (sel.get<std::string>() != "obedient") {
        throw InputError("selection: expected \"obedient\" or a table");
      }
    } else {
      LabelIndex states(game.states, 1, "state");
      LabelIndex batches(game.signals, game.n_sources, "batch");
      LabelIndex types(game.types, 1, "type");
      for (auto a = Object(sel, "selection").begin(); a != sel.end(); ++a) {
        std::string pa = "selection." + a.key();
        int i = AgentKey(game, a.key(), "selection");
        for (auto s = Object(a.value(), pa).begin(); s != a.value().end(); ++s) {
          std::string ps = pa + "." + s.key();
          int g = states(s.key(), pa);
          for (auto b = Object(s.value(), ps).begin(); b != s.value().end(); ++b) {
            std::string pb = ps + "." + b.key();
            int bi = batches(b.key(), ps);
            for (auto t = Object(b.value(), pb).begin(); t != b.value().end(); ++t) {
              int th = types(t.key(), pb);
              if (!t.value().is_number_integer()) {
                throw InputError(pb + "." + t.key() + ": expected an integer position");
              }
              out.beta.at(i, g, bi, th) = t.value().get<int>();
            }
          }
        }
      }
      ValidateSelection(game, out.beta);
    }
  }

  if (!doc.contains("policy")) throw InputError("missing field 'policy'");
  const Json& pol = Object(doc["policy"], "policy");
  if (pol.size() != 1 || !(pol.contains("independent") || pol.contains("correlated"))) {
    throw InputError("policy: expected exactly one of 'independent' or 'correlated'");
  }
  if (pol.contains("independent")) {
    out.pi = Policy::Independent(game);
    const Json& t = Object(pol["independent"], "policy.independent");
    LabelIndex states(game.states, 1, "state");
    LabelIndex signals(game.signals, 1, "signal");
    LabelIndex types(game.types, 1, "type");
    LabelIndex actions(game.actions, 1, "action");
    for (auto a = t.begin(); a != t.end(); ++a) {
      std::string pa = "policy.independent." + a.key();
      int i = AgentKey(game, a.key(), "policy.independent");
      for (auto s = Object(a.value(), pa).begin(); s != a.value().end(); ++s) {
        int g = states(s.key(), pa);
        std::string ps = pa + "." + s.key();
        for (auto w = Object(s.value(), ps).begin(); w != s.value().end(); ++w) {
          std::string pw = ps + "." + w.key();
          int wi = signals(w.key(), ps);
          for (auto th = Object(w.value(), pw).begin(); th != w.value().end(); ++th) {
            std::string pt = pw + "." + th.key();
            int ti = types(th.key(), pw);
            for (auto ac = Object(th.value(), pt).begin(); ac != th.value().end(); ++ac) {
              int ai = actions(ac.key(), pt);
              out.pi.OwnAt(i, g, wi, ti, ai) = Probability(ac.value(), pt + "." + ac.key());
            }
          }
        }
      }
    }
  } else {
    out.pi = Policy::Correlated(game);
    const Json& t = Object(pol["correlated"], "policy.correlated");
    LabelIndex states(game.states, 1, "state");
    LabelIndex signals(game.signals, n, "joint signal");
    LabelIndex types(game.types, n, "joint type");
    LabelIndex actions(game.actions, n, "joint action");
    for (auto s = t.begin(); s != t.end(); ++s) {
      std::string ps = "policy.correlated." + s.key();
      int g = states(s.key(), "policy.correlated");
      for (auto w = Object(s.value(), ps).begin(); w != s.value().end(); ++w) {
        std::string pw = ps + "." + w.key();
        int jw = signals(w.key(), ps);
        for (auto th = Object(w.value(), pw).begin(); th != w.value().end(); ++th) {
          std::string pt = pw + "." + th.key();
          int tj = types(th.key(), pw);
          for (auto ac = Object(th.value(), pt).begin(); ac != th.value().end(); ++ac) {
            int ja = actions(ac.key(), pt);
            out.pi.JointAt(g, jw, tj, ja) = Probability(ac.value(), pt + "." + ac.key());
          }
        }
      }
    }
  }
  ValidatePolicy(game, out.pi);

  if (doc.contains("beliefs")) {
    BeliefSystem mu = BeliefSystem::Zero(game);
    LabelIndex states(game.states, 1, "state");
    LabelIndex signals(game.signals, 1, "signal");
    LabelIndex types(game.types, 1, "type");
    LabelIndex osig(game.signals, n - 1, "others' signals");
    LabelIndex otype(game.types, n - 1, "others' types");
    const Json& b = Object(doc["beliefs"], "beliefs");
    for (auto a = b.begin(); a != b.end(); ++a) {
      std::string pa = "beliefs." + a.key();
      int i = AgentKey(game, a.key(), "beliefs");
      for (auto s = Object(a.value(), pa).begin(); s != a.value().end(); ++s) {
        std::string ps = pa + "." + s.key();
        int g = states(s.key(), pa);
        for (auto w = Object(s.value(), ps).begin(); w != s.value().end(); ++w) {
          std::string pw = ps + "." + w.key();
          int wi = signals(w.key(), ps);
          for (auto th = Object(w.value(), pw).begin(); th != w.value().end(); ++th) {
            std::string pt = pw + "." + th.key();
            int ti = types(th.key(), pw);
            for (auto e = Object(th.value(), pt).begin(); e != th.value().end(); ++e) {
              const std::string& key = e.key();
              size_t slash = key.find('/');
              if (slash == std::string::npos) {
                throw InputError(pt + ": belief key '" + key + "' needs 'signals/types'");
              }
              int os = osig(key.substr(0, slash), pt);
              int ot = otype(key.substr(slash + 1), pt);
              mu.prob[mu.Offset(i, g, wi, ti) +
                      static_cast<size_t>(os) * mu.num_others_types + ot] =
                  Probability(e.value(), pt + "." + key);
            }
          }
        }
      }
    }
    ValidateBeliefs(game, mu);
    out.mu = std::move(mu);
  }
  return out;
}

Goal LoadGoalFile(const GameSpec& game, const std::string& path) {
  return LoadGoal(game, ReadTextFile(path));
}
SignalingRule LoadRuleFile(const GameSpec& game, const std::string& path) {
  return LoadRule(game, ReadTextFile(path));
}
LoadedProfile LoadProfileFile(const GameSpec& game, const std::string& path) {
  return LoadProfile(game, ReadTextFile(path));
}

OrderedJson GoalToJson(const GameSpec& game, const Goal& kappa) {
  const int n = game.n_agents;
  OrderedJson out;
  out["kind"] = "goal";
  out["table"] = Table3(game.states, game.types, n, game.actions, n,
                        [&](int g, int tj, int ja) { return kappa(g, tj, ja); });
  return out;
}

OrderedJson RuleToJson(const GameSpec& game, const SignalingRule& alpha) {
  const int n = game.n_agents;
  OrderedJson out;
  out["kind"] = "signaling_rule";
  out["table"] = Table3(game.states, game.types, n, game.signals, n,
                        [&](int g, int tj, int jw) { return alpha(g, tj, jw); });
  return out;
}

OrderedJson ProfileToJson(const GameSpec& game, const SignalingRule* alpha,
                          const SelectionRule& beta, const Policy& pi) {
  const int n = game.n_agents;
  OrderedJson out;
  out["kind"] = "profile";
  if (alpha) out["rule"] = RuleToJson(game, *alpha)["table"];
  if (CheckObedient(game, beta)) {
    out["selection"] = "obedient";
  } else {
    OrderedJson sel = OrderedJson::object();
    for (int i = 0; i < n; ++i) {
      OrderedJson ji = OrderedJson::object();
      for (int g = 0; g < game.num_states(); ++g) {
        OrderedJson jg = OrderedJson::object();
        for (int b = 0; b < game.num_batches(); ++b) {
          OrderedJson jb = OrderedJson::object();
          for (int th = 0; th < game.num_types(); ++th) jb[game.types[th]] = beta(i, g, b, th);
          jg[JointLabel(game.signals, b, game.n_sources)] = std::move(jb);
        }
        ji[game.states[g]] = std::move(jg);
      }
      sel[std::to_string(i)] = std::move(ji);
    }
    out["selection"] = std::move(sel);
  }
  OrderedJson pol;
  if (pi.independent()) {
    OrderedJson ind = OrderedJson::object();
    for (int i = 0; i < n; ++i) {
      OrderedJson& ji = ind[std::to_string(i)];
      for (int g = 0; g < game.num_states(); ++g)
        for (int w = 0; w < game.num_signals(); ++w)
          for (int th = 0; th < game.num_types(); ++th) {
            OrderedJson row = OrderedJson::object();
            for (int a = 0; a < game.num_actions(); ++a) {
              double p = pi.Own(i, g, w, th, a);
              if (p != 0.0) row[game.actions[a]] = p;
            }
            ji[game.states[g]][game.signals[w]][game.types[th]] = std::move(row);
          }
    }
    pol["independent"] = std::move(ind);
  } else {
    OrderedJson cor = OrderedJson::object();
    const int NJW = game.num_joint_signals();
    for (int g = 0; g < game.num_states(); ++g) {
      OrderedJson jg = OrderedJson::object();
      for (int jw = 0; jw < NJW; ++jw) {
        OrderedJson jwj = OrderedJson::object();
        for (int tj = 0; tj < game.num_joint_types(); ++tj) {
          OrderedJson row = OrderedJson::object();
          for (int ja = 0; ja < game.num_joint_actions(); ++ja) {
            double p = pi.Joint(game, g, jw, tj, ja);
            if (p != 0.0) row[JointLabel(game.actions, ja, n)] = p;
          }
          jwj[JointLabel(game.types, tj, n)] = std::move(row);
        }
        jg[JointLabel(game.signals, jw, n)] = std::move(jwj);
      }
      cor[game.states[g]] = std::move(jg);
    }
    pol["correlated"] = std::move(cor);
  }
  out["policy"] = std::move(pol);
  return out;
}

}  // namespace infodesign
