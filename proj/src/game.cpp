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

#include "infodesign/game.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace infodesign {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

const std::set<std::string>& TopLevelKeys() {
  static const std::set<std::string> keys = {
      "agents",           "states",     "actions",          "types",
      "signals",          "sources",    "transition",       "state_init",
      "type_prior",       "nonprincipal_dist", "rewards",   "principal_reward",
      "gamma",            "gamma_hat"};
  return keys;
}

std::vector<std::string> SplitKey(const std::string& key) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : key) {
    if (c == '|') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

const Json& Require(const Json& obj, const std::string& key,
                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw InputError("missing field '" + where + key + "'");
  }
  return *it;
}

double NumberAt(const Json& v, const std::string& where) {
  if (!v.is_number()) throw InputError("field '" + where + "' must be a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError("field '" + where + "' is not finite");
  return x;
}

int IntAt(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) {
    throw InputError("field '" + where + "' must be an integer");
  }
  return v.get<int>();
}

std::vector<std::string> Labels(const Json& doc, const std::string& key) {
  const Json& v = Require(doc, key, "");
  if (!v.is_array() || v.empty()) {
    throw InputError("field '" + key + "' must be a non-empty array of labels");
  }
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) {
      throw InputError("field '" + key + "[" + std::to_string(i) +
                       "]' must be a string");
    }
    std::string s = v[i].get<std::string>();
    if (s.empty() || s.find('|') != std::string::npos) {
      throw InputError("label '" + s + "' in '" + key +
                       "' must be non-empty and free of '|'");
    }
    if (!seen.insert(s).second) {
      throw InputError("duplicate label '" + s + "' in '" + key + "'");
    }
    out.push_back(s);
  }
  return out;
}

int LabelIndex(const std::vector<std::string>& labels, const std::string& s,
               const std::string& what, const std::string& where) {
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == s) return static_cast<int>(i);
  }
  throw InputError("unknown " + what + " '" + s + "' in key '" + where + "'");
}

std::vector<double> ProbVector(const Json& v, size_t n,
                               const std::string& where) {
  if (!v.is_array() || v.size() != n) {
    throw InputError("field '" + where + "' must be an array of length " +
                     std::to_string(n));
  }
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    out[i] = NumberAt(v[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

// Parses a '|'-joined key into a joint index over `len` components drawn from
// `labels`, starting at parts[offset].
int JointIndex(const std::vector<std::string>& parts, size_t offset, int len,
               const std::vector<std::string>& labels, const std::string& what,
               const std::string& key) {
  int idx = 0;
  for (int j = 0; j < len; ++j) {
    idx = idx * static_cast<int>(labels.size()) +
          LabelIndex(labels, parts[offset + j], what, key);
  }
  return idx;
}

void CheckDistribution(const double* p, size_t n, const std::string& where) {
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (!(p[i] >= 0.0)) {
      throw InputError("negative probability in " + where);
    }
    sum += p[i];
  }
  if (std::fabs(sum - 1.0) > kProbTol) {
    std::ostringstream os;
    os.precision(12);
    os << "probabilities in " << where << " sum to " << sum << ", not 1";
    throw InputError(os.str());
  }
}

std::string LineColumn(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

int IntPow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

int Digit(int index, int pos, int base, int len) {
  for (int p = len - 1; p > pos; --p) index /= base;
  return index % base;
}

int SetDigit(int index, int pos, int base, int len, int value) {
  int scale = IntPow(base, len - 1 - pos);
  int old = (index / scale) % base;
  return index + (value - old) * scale;
}

int DropDigit(int index, int pos, int base, int len) {
  int scale = IntPow(base, len - 1 - pos);
  int high = index / (scale * base);
  int low = index % scale;
  return high * scale + low;
}

int InsertDigit(int rest, int pos, int base, int len, int value) {
  int scale = IntPow(base, len - 1 - pos);
  int high = rest / scale;
  int low = rest % scale;
  return (high * base + value) * scale + low;
}

double GameSpec::Reward(int i, int ja, int g, int w, int theta) const {
  size_t idx = (((static_cast<size_t>(i) * num_joint_actions() + ja) *
                     num_states() + g) * num_signals() + w) * num_types() +
               theta;
  return rewards[idx];
}

double GameSpec::PrincipalReward(int ja, int g, int tj) const {
  return principal_reward[(static_cast<size_t>(ja) * num_states() + g) *
                              num_joint_types() + tj];
}

double GameSpec::JointTypeProb(int tj) const {
  double p = 1.0;
  for (int i = 0; i < n_agents; ++i) p *= type_prior[TypeOf(tj, i)];
  return p;
}

double GameSpec::OthersTypeProb(int i, int tj) const {
  double p = 1.0;
  for (int j = 0; j < n_agents; ++j) {
    if (j != i) p *= type_prior[TypeOf(tj, j)];
  }
  return p;
}

double GameSpec::RewardBound() const {
  double m = 0.0;
  for (double r : rewards) m = std::max(m, std::fabs(r));
  return m;
}

bool GameSpec::SignalIndependentRewards() const {
  for (int i = 0; i < n_agents; ++i)
    for (int ja = 0; ja < num_joint_actions(); ++ja)
      for (int g = 0; g < num_states(); ++g)
        for (int t = 0; t < num_types(); ++t)
          for (int w = 1; w < num_signals(); ++w)
            if (Reward(i, ja, g, w, t) != Reward(i, ja, g, 0, t)) return false;
  return true;
}

int GameSpec::MakeBatch(int wk, int own_np) const {
  int m = n_sources;
  int batch = 0;
  for (int p = 0; p < m; ++p) {
    int s;
    if (p == principal) {
      s = wk;
    } else {
      int jp = p < principal ? p : p - 1;
      s = Digit(own_np, jp, num_signals(), m - 1);
    }
    batch = batch * num_signals() + s;
  }
  return batch;
}

int GameSpec::OwnNonprincipal(int i, int jW) const {
  int m1 = n_sources - 1;
  int len = m1 * n_agents;
  int out = 0;
  for (int j = 0; j < m1; ++j) {
    out = out * num_signals() + Digit(jW, i * m1 + j, num_signals(), len);
  }
  return out;
}

int GameSpec::AgentBatch(int i, int jwk, int jW) const {
  return MakeBatch(SignalOf(jwk, i), OwnNonprincipal(i, jW));
}

int GameSpec::BatchOwnNonprincipal(int batch) const {
  return DropDigit(batch, principal, num_signals(), n_sources);
}

double GameSpec::OwnNonprincipalProb(int i, int own_np) const {
  double p = 0.0;
  for (int jW = 0; jW < num_nonprincipal(); ++jW) {
    if (OwnNonprincipal(i, jW) == own_np) p += nonprincipal[jW];
  }
  return p;
}

std::string JointLabel(const std::vector<std::string>& labels, int index,
                       int len) {
  std::string out;
  int base = static_cast<int>(labels.size());
  for (int j = 0; j < len; ++j) {
    if (j > 0) out.push_back('|');
    out += labels[Digit(index, j, base, len)];
  }
  return out;
}

void ValidateGame(const GameSpec& game) {
  if (game.n_agents < 1) throw InputError("field 'agents' must be >= 1");
  if (game.states.empty() || game.actions.empty() || game.types.empty() ||
      game.signals.empty()) {
    throw InputError("label sets 'states', 'actions', 'types', 'signals' must "
                     "be non-empty");
  }
  if (game.n_sources < 1) throw InputError("field 'sources.count' must be >= 1");
  if (game.principal < 0 || game.principal >= game.n_sources) {
    throw InputError("field 'sources.principal' must lie in 0..count-1");
  }
  if (!(game.gamma >= 0.0 && game.gamma < 1.0)) {
    throw InputError("field 'gamma' must satisfy 0 <= gamma < 1");
  }
  if (!(game.gamma_hat >= 0.0 && game.gamma_hat < 1.0)) {
    throw InputError("field 'gamma_hat' must satisfy 0 <= gamma_hat < 1");
  }
  const size_t S = game.num_states();
  const size_t NJA = game.num_joint_actions();
  if (game.transition.size() != S * NJA * S) {
    throw InputError("field 'transition' has the wrong size");
  }
  for (size_t g = 0; g < S; ++g) {
    for (size_t ja = 0; ja < NJA; ++ja) {
      CheckDistribution(&game.transition[(g * NJA + ja) * S], S,
                        "transition[" + game.states[g] + "][" +
                            JointLabel(game.actions, static_cast<int>(ja),
                                       game.n_agents) + "]");
    }
  }
  if (game.state_init.size() != S) {
    throw InputError("field 'state_init' has the wrong size");
  }
  CheckDistribution(game.state_init.data(), S, "state_init");
  if (game.type_prior.size() != game.types.size()) {
    throw InputError("field 'type_prior' has the wrong size");
  }
  CheckDistribution(game.type_prior.data(), game.types.size(), "type_prior");
  if (game.nonprincipal.size() != static_cast<size_t>(game.num_nonprincipal())) {
    throw InputError("field 'nonprincipal_dist' has the wrong size");
  }
  CheckDistribution(game.nonprincipal.data(), game.nonprincipal.size(),
                    "nonprincipal_dist");
  size_t nr = game.n_agents * NJA * S * game.signals.size() * game.types.size();
  if (game.rewards.size() != nr) {
    throw InputError("field 'rewards' has the wrong size");
  }
  for (double r : game.rewards) {
    if (!std::isfinite(r)) throw InputError("field 'rewards' has a non-finite entry");
  }
  if (game.principal_reward.size() != NJA * S * game.num_joint_types()) {
    throw InputError("field 'principal_reward' has the wrong size");
  }
  for (double r : game.principal_reward) {
    if (!std::isfinite(r)) {
      throw InputError("field 'principal_reward' has a non-finite entry");
    }
  }
}

GameSpec LoadGame(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("parse error at " + LineColumn(text, e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw InputError("game document must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!TopLevelKeys().count(it.key())) {
      throw InputError("unknown key '" + it.key() + "'");
    }
  }
  GameSpec game;
  game.n_agents = IntAt(Require(doc, "agents", ""), "agents");
  if (game.n_agents < 1) throw InputError("field 'agents' must be >= 1");
  game.states = Labels(doc, "states");
  game.actions = Labels(doc, "actions");
  game.types = Labels(doc, "types");
  game.signals = Labels(doc, "signals");

  const Json& src = Require(doc, "sources", "");
  if (!src.is_object()) throw InputError("field 'sources' must be an object");
  for (auto it = src.begin(); it != src.end(); ++it) {
    if (it.key() != "count" && it.key() != "principal") {
      throw InputError("unknown key 'sources." + it.key() + "'");
    }
  }
  game.n_sources = IntAt(Require(src, "count", "sources."), "sources.count");
  game.principal =
      IntAt(Require(src, "principal", "sources."), "sources.principal");
  if (game.n_sources < 1) throw InputError("field 'sources.count' must be >= 1");
  if (game.principal < 0 || game.principal >= game.n_sources) {
    throw InputError("field 'sources.principal' must lie in 0..count-1");
  }
  const int n = game.n_agents;
  const int S = game.num_states();
  const int NJA = game.num_joint_actions();

  const Json& tr = Require(doc, "transition", "");
  if (!tr.is_object()) throw InputError("field 'transition' must be an object");
  game.transition.assign(static_cast<size_t>(S) * NJA * S, 0.0);
  std::vector<char> seen(static_cast<size_t>(S) * NJA, 0);
  for (auto it = tr.begin(); it != tr.end(); ++it) {
    int g = LabelIndex(game.states, it.key(), "state", "transition." + it.key());
    if (!it->is_object()) {
      throw InputError("field 'transition." + it.key() + "' must be an object");
    }
    for (auto jt = it->begin(); jt != it->end(); ++jt) {
      std::string where = "transition." + it.key() + "." + jt.key();
      auto parts = SplitKey(jt.key());
      if (static_cast<int>(parts.size()) != n) {
        throw InputError("key '" + where + "' must name " + std::to_string(n) +
                         " actions");
      }
      int ja = JointIndex(parts, 0, n, game.actions, "action", where);
      auto row = ProbVector(*jt, S, where);
      std::copy(row.begin(), row.end(),
                game.transition.begin() + (static_cast<size_t>(g) * NJA + ja) * S);
      seen[static_cast<size_t>(g) * NJA + ja] = 1;
    }
  }
  for (int g = 0; g < S; ++g) {
    for (int ja = 0; ja < NJA; ++ja) {
      if (!seen[static_cast<size_t>(g) * NJA + ja]) {
        throw InputError("missing transition row for (" + game.states[g] + ", " +
                         JointLabel(game.actions, ja, n) + ")");
      }
    }
  }
  game.state_init = ProbVector(Require(doc, "state_init", ""), S, "state_init");
  game.type_prior = ProbVector(Require(doc, "type_prior", ""),
                               game.types.size(), "type_prior");

  const Json& np = Require(doc, "nonprincipal_dist", "");
  if (!np.is_object()) {
    throw InputError("field 'nonprincipal_dist' must be an object");
  }
  const int npl = (game.n_sources - 1) * n;
  game.nonprincipal.assign(game.num_nonprincipal(), 0.0);
  std::vector<char> np_seen(game.nonprincipal.size(), 0);
  for (auto it = np.begin(); it != np.end(); ++it) {
    std::string where = "nonprincipal_dist." + it.key();
    int idx = 0;
    if (npl > 0) {
      auto parts = SplitKey(it.key());
      if (static_cast<int>(parts.size()) != npl) {
        throw InputError("key '" + where + "' must name " +
                         std::to_string(npl) + " signals");
      }
      idx = JointIndex(parts, 0, npl, game.signals, "signal", where);
    } else if (!it.key().empty()) {
      throw InputError("key '" + where + "' must be empty with one source");
    }
    game.nonprincipal[idx] = NumberAt(*it, where);
    np_seen[idx] = 1;
  }
  for (size_t i = 0; i < np_seen.size(); ++i) {
    if (!np_seen[i]) {
      throw InputError("missing nonprincipal_dist entry '" +
                       (npl > 0 ? JointLabel(game.signals, static_cast<int>(i), npl)
                                : std::string()) + "'");
    }
  }

  const int NO = game.num_signals();
  const int NT = game.num_types();
  const Json& rw = Require(doc, "rewards", "");
  if (!rw.is_object()) throw InputError("field 'rewards' must be an object");
  game.rewards.assign(static_cast<size_t>(n) * NJA * S * NO * NT, 0.0);
  for (auto it = rw.begin(); it != rw.end(); ++it) {
    int i = -1;
    try {
      size_t used = 0;
      i = std::stoi(it.key(), &used);
      if (used != it.key().size()) i = -1;
    } catch (...) {
      i = -1;
    }
    if (i < 0 || i >= n) {
      throw InputError("unknown agent key 'rewards." + it.key() + "'");
    }
  }
  for (int i = 0; i < n; ++i) {
    std::string ak = std::to_string(i);
    const Json& table = Require(rw, ak, "rewards.");
    if (!table.is_object()) {
      throw InputError("field 'rewards." + ak + "' must be an object");
    }
    std::vector<char> got(static_cast<size_t>(NJA) * S * NO * NT, 0);
    for (auto it = table.begin(); it != table.end(); ++it) {
      std::string where = "rewards." + ak + "." + it.key();
      auto parts = SplitKey(it.key());
      if (static_cast<int>(parts.size()) != n + 3) {
        throw InputError("key '" + where +
                         "' must have the form actions|state|signal|type");
      }
      int ja = JointIndex(parts, 0, n, game.actions, "action", where);
      int g = LabelIndex(game.states, parts[n], "state", where);
      int w = LabelIndex(game.signals, parts[n + 1], "signal", where);
      int t = LabelIndex(game.types, parts[n + 2], "type", where);
      size_t local = ((static_cast<size_t>(ja) * S + g) * NO + w) * NT + t;
      game.rewards[static_cast<size_t>(i) * NJA * S * NO * NT + local] =
          NumberAt(*it, where);
      got[local] = 1;
    }
    for (size_t local = 0; local < got.size(); ++local) {
      if (!got[local]) {
        int t = static_cast<int>(local % NT);
        int w = static_cast<int>((local / NT) % NO);
        int g = static_cast<int>((local / NT / NO) % S);
        int ja = static_cast<int>(local / NT / NO / S);
        throw InputError("missing reward 'rewards." + ak + "." +
                         JointLabel(game.actions, ja, n) + "|" + game.states[g] +
                         "|" + game.signals[w] + "|" + game.types[t] + "'");
      }
    }
  }

  const int NJT = game.num_joint_types();
  const Json& pr = Require(doc, "principal_reward", "");
  if (!pr.is_object()) {
    throw InputError("field 'principal_reward' must be an object");
  }
  game.principal_reward.assign(static_cast<size_t>(NJA) * S * NJT, 0.0);
  std::vector<char> pgot(game.principal_reward.size(), 0);
  for (auto it = pr.begin(); it != pr.end(); ++it) {
    std::string where = "principal_reward." + it.key();
    auto parts = SplitKey(it.key());
    if (static_cast<int>(parts.size()) != 2 * n + 1) {
      throw InputError("key '" + where +
                       "' must have the form actions|state|types");
    }
    int ja = JointIndex(parts, 0, n, game.actions, "action", where);
    int g = LabelIndex(game.states, parts[n], "state", where);
    int tj = JointIndex(parts, n + 1, n, game.types, "type", where);
    size_t idx = (static_cast<size_t>(ja) * S + g) * NJT + tj;
    game.principal_reward[idx] = NumberAt(*it, where);
    pgot[idx] = 1;
  }
  for (size_t idx = 0; idx < pgot.size(); ++idx) {
    if (!pgot[idx]) {
      int tj = static_cast<int>(idx % NJT);
      int g = static_cast<int>((idx / NJT) % S);
      int ja = static_cast<int>(idx / NJT / S);
      throw InputError("missing principal reward '" +
                       JointLabel(game.actions, ja, n) + "|" + game.states[g] +
                       "|" + JointLabel(game.types, tj, n) + "'");
    }
  }
  game.gamma = NumberAt(Require(doc, "gamma", ""), "gamma");
  game.gamma_hat = NumberAt(Require(doc, "gamma_hat", ""), "gamma_hat");
  ValidateGame(game);
  return game;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

GameSpec LoadGameFile(const std::string& path) {
  return LoadGame(ReadTextFile(path));
}

std::string SerializeGame(const GameSpec& game) {
  const int n = game.n_agents;
  const int S = game.num_states();
  const int NJA = game.num_joint_actions();
  const int NO = game.num_signals();
  const int NT = game.num_types();
  const int NJT = game.num_joint_types();
  OrderedJson doc;
  doc["agents"] = n;
  doc["states"] = game.states;
  doc["actions"] = game.actions;
  doc["types"] = game.types;
  doc["signals"] = game.signals;
  doc["sources"] = {{"count", game.n_sources}, {"principal", game.principal}};
  OrderedJson tr = OrderedJson::object();
  for (int g = 0; g < S; ++g) {
    OrderedJson rows = OrderedJson::object();
    for (int ja = 0; ja < NJA; ++ja) {
      std::vector<double> row(S);
      for (int g2 = 0; g2 < S; ++g2) row[g2] = game.Transition(g, ja, g2);
      rows[JointLabel(game.actions, ja, n)] = row;
    }
    tr[game.states[g]] = rows;
  }
  doc["transition"] = tr;
  doc["state_init"] = game.state_init;
  doc["type_prior"] = game.type_prior;
  OrderedJson np = OrderedJson::object();
  const int npl = (game.n_sources - 1) * n;
  for (int idx = 0; idx < game.num_nonprincipal(); ++idx) {
    np[npl > 0 ? JointLabel(game.signals, idx, npl) : std::string()] =
        game.nonprincipal[idx];
  }
  doc["nonprincipal_dist"] = np;
  OrderedJson rw = OrderedJson::object();
  for (int i = 0; i < n; ++i) {
    OrderedJson table = OrderedJson::object();
    for (int ja = 0; ja < NJA; ++ja)
      for (int g = 0; g < S; ++g)
        for (int w = 0; w < NO; ++w)
          for (int t = 0; t < NT; ++t)
            table[JointLabel(game.actions, ja, n) + "|" + game.states[g] + "|" +
                  game.signals[w] + "|" + game.types[t]] =
                game.Reward(i, ja, g, w, t);
    rw[std::to_string(i)] = table;
  }
  doc["rewards"] = rw;
  OrderedJson pr = OrderedJson::object();
  for (int ja = 0; ja < NJA; ++ja)
    for (int g = 0; g < S; ++g)
      for (int tj = 0; tj < NJT; ++tj)
        pr[JointLabel(game.actions, ja, n) + "|" + game.states[g] + "|" +
           JointLabel(game.types, tj, n)] = game.PrincipalReward(ja, g, tj);
  doc["principal_reward"] = pr;
  doc["gamma"] = game.gamma;
  doc["gamma_hat"] = game.gamma_hat;
  return doc.dump(2) + "\n";
}

namespace {
bool SameBits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  return a.empty() ||
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}
}  // namespace

bool SameGame(const GameSpec& a, const GameSpec& b) {
  return a.n_agents == b.n_agents && a.states == b.states &&
         a.actions == b.actions && a.types == b.types &&
         a.signals == b.signals && a.n_sources == b.n_sources &&
         a.principal == b.principal && SameBits(a.transition, b.transition) &&
         SameBits(a.state_init, b.state_init) &&
         SameBits(a.type_prior, b.type_prior) &&
         SameBits(a.nonprincipal, b.nonprincipal) &&
         SameBits(a.rewards, b.rewards) &&
         SameBits(a.principal_reward, b.principal_reward) &&
         std::memcmp(&a.gamma, &b.gamma, sizeof(double)) == 0 &&
         std::memcmp(&a.gamma_hat, &b.gamma_hat, sizeof(double)) == 0;
}

}  // namespace infodesign
