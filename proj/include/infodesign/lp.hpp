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

#ifndef INFODESIGN_LP_HPP_
#define INFODESIGN_LP_HPP_

#include <string>
#include <vector>

namespace infodesign {

// maximize c.x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  x >= 0.
// Matrices are dense and row-major.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;
  std::vector<std::vector<double>> ub_rows;
  std::vector<double> ub_rhs;
  std::vector<std::string> var_names;  // optional

  explicit LinearProgram(int n = 0) : num_vars(n), objective(n, 0.0) {}
  void AddEq(std::vector<double> row, double rhs) {
    eq_rows.push_back(std::move(row));
    eq_rhs.push_back(rhs);
  }
  void AddUb(std::vector<double> row, double rhs) {
    ub_rows.push_back(std::move(row));
    ub_rhs.push_back(rhs);
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* LpStatusName(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  int pivots = 0;
  // For kInfeasible: multipliers z over (eq rows, then ub rows) with z_ub >= 0,
  // z^T A >= 0 componentwise and z^T b < 0.
  std::vector<double> certificate;
};

inline constexpr double kLpTol = 1e-9;

// Two-phase dense tableau simplex with Bland's rule: lowest-index entering
// column, ratio ties to the lowest-index basic variable.
LpResult SolveLp(const LinearProgram& lp, double tol = kLpTol);

// Largest violation of the certificate conditions; <= tol means valid, and
// the second value is z^T b.
std::pair<double, double> CertificateViolation(
    const LinearProgram& lp, const std::vector<double>& z);

// Largest constraint violation of x, including x >= 0.
double PrimalViolation(const LinearProgram& lp, const std::vector<double>& x);

// Plain-text dump, one constraint per line.
std::string DumpLp(const LinearProgram& lp);

}  // namespace infodesign

#endif  // INFODESIGN_LP_HPP_
