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

#ifndef INFODESIGN_REPORT_HPP_
#define INFODESIGN_REPORT_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "infodesign/design.hpp"
#include "infodesign/dynamics.hpp"
#include "infodesign/equilibrium.hpp"
#include "infodesign/lp.hpp"
#include "json.hpp"

namespace infodesign {

using OrderedJson = nlohmann::ordered_json;

inline constexpr const char* kToolName = "infodesign";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// {schema_version, tool, command, config, tolerances, result}.
OrderedJson MakeReport(const std::string& command, OrderedJson config,
                       OrderedJson tolerances, OrderedJson result);

OrderedJson WitnessToJson(const GameSpec& game, const Witness& w);
OrderedJson EquilibriumToJson(const GameSpec& game, const EquilibriumReport& r);
OrderedJson SlacksToJson(const SlackCertificate& s);
OrderedJson EpsilonToJson(const GameSpec& game, const EpsilonCertificate& e);
OrderedJson ValuesToJson(const GameSpec& game, const ValueBundle& v);
// Certificate entries are named "eq<k>" / "ub<k>"; zeros are omitted.
OrderedJson LpToJson(const LinearProgram& lp, const LpResult& r);
OrderedJson DesignToJson(const GameSpec& game, const DesignResult& d);

// Plot-ready table.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
void WriteCsv(std::ostream& os, const CsvTable& table);
// Shortest round-trip decimal form, identical to the JSON output.
std::string FormatDouble(double v);

}  // namespace infodesign

#endif  // INFODESIGN_REPORT_HPP_
