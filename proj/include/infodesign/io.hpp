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

#ifndef INFODESIGN_IO_HPP_
#define INFODESIGN_IO_HPP_

#include <optional>
#include <string>

#include "infodesign/game.hpp"
#include "infodesign/strategy.hpp"
#include "json.hpp"

namespace infodesign {

// Strategy documents. Tables are keyed by labels ("C|D" for joint indices);
// missing probability entries are zero and every row must sum to one.
//
//   goal:    {"kind": "goal", "table": {state: {types: {actions: p}}}}
//   rule:    {"kind": "signaling_rule", "table": {state: {types: {signals: p}}}}
//   profile: {"kind": "profile", "rule": <table>?,
//             "selection": "obedient" | {agent: {state: {batch: {type: pos}}}},
//             "policy": {"independent": {agent: {state: {signal: {type: {action: p}}}}}}
//                     | {"correlated": {state: {signals: {types: {actions: p}}}}},
//             "beliefs": {agent: {state: {signal: {type: {"osig/otype": p}}}}}?}
//
// Agents are keyed "0", "1", .... Batches are joint signal labels in
// source order. Belief keys join the others' signals and types with '/'.

struct LoadedProfile {
  std::optional<SignalingRule> alpha;
  SelectionRule beta;
  Policy pi;
  std::optional<BeliefSystem> mu;
};

Goal LoadGoal(const GameSpec& game, const std::string& text);
SignalingRule LoadRule(const GameSpec& game, const std::string& text);
LoadedProfile LoadProfile(const GameSpec& game, const std::string& text);

Goal LoadGoalFile(const GameSpec& game, const std::string& path);
SignalingRule LoadRuleFile(const GameSpec& game, const std::string& path);
LoadedProfile LoadProfileFile(const GameSpec& game, const std::string& path);

// Zero entries are omitted.
nlohmann::ordered_json GoalToJson(const GameSpec& game, const Goal& kappa);
nlohmann::ordered_json RuleToJson(const GameSpec& game,
                                  const SignalingRule& alpha);
nlohmann::ordered_json ProfileToJson(const GameSpec& game,
                                     const SignalingRule* alpha,
                                     const SelectionRule& beta,
                                     const Policy& pi);

}  // namespace infodesign

#endif  // INFODESIGN_IO_HPP_
