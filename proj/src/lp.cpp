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

#include "infodesign/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace infodesign {
namespace {

class Tableau {
 public:
  Tableau(int rows, int cols)
      : m_(rows), n_(cols), a_(static_cast<size_t>(rows) * (cols + 1), 0.0),
        basis_(rows, -1) {}

  double& at(int r, int c) { return a_[static_cast<size_t>(r) * (n_ + 1) + c]; }
  double at(int r, int c) const {
    return a_[static_cast<size_t>(r) * (n_ + 1) + c];
  }
  double& rhs(int r) { return at(r, n_); }
  double rhs(int r) const { return at(r, n_); }
  int rows() const { return m_; }
  int cols() const { return n_; }
  std::vector<int>& basis() { return basis_; }

  void Pivot(int pr, int pc) {
    double piv = at(pr, pc);
    for (int c = 0; c <= n_; ++c) at(pr, c) /= piv;
    at(pr, pc) = 1.0;
    for (int r = 0; r < m_; ++r) {
      if (r == pr) continue;
      double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  void DropRow(int r) {
    a_.erase(a_.begin() + static_cast<long>(r) * (n_ + 1),
             a_.begin() + static_cast<long>(r + 1) * (n_ + 1));
    basis_.erase(basis_.begin() + r);
    row_ids_.erase(row_ids_.begin() + r);
    --m_;
  }

  // Keeps the filled tableau as the reference for Refactor().
  void Snapshot() {
    orig_ = a_;
    row_ids_.resize(m_);
    std::iota(row_ids_.begin(), row_ids_.end(), 0);
  }

  // Rebuilds the tableau as B^-1 [A | b] from the reference rows, which
  // discards the round-off accumulated by the pivots since the last call.
  void Refactor() {
    if (m_ == 0) return;
    const size_t w = static_cast<size_t>(n_) + 1;
    Eigen::MatrixXd B(m_, m_);
    Eigen::MatrixXd M(m_, n_ + 1);
    for (int i = 0; i < m_; ++i) {
      const double* src = &orig_[static_cast<size_t>(row_ids_[i]) * w];
      for (int c = 0; c <= n_; ++c) M(i, c) = src[c];
      for (int k = 0; k < m_; ++k) B(i, k) = src[basis_[k]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) return;
    Eigen::MatrixXd T = lu.solve(M);
    for (int r = 0; r < m_; ++r)
      for (int c = 0; c <= n_; ++c) at(r, c) = T(r, c);
    for (int k = 0; k < m_; ++k)
      for (int r = 0; r < m_; ++r) at(r, basis_[k]) = r == k ? 1.0 : 0.0;
  }

  // Reduced cost of column c for minimization cost vector `cost`.
  double Reduced(const std::vector<double>& cost, int c) const {
    double d = cost[c];
    for (int r = 0; r < m_; ++r) d -= cost[basis_[r]] * at(r, c);
    return d;
  }

  // Bland iterations minimizing cost over columns < allowed. Returns false
  // when unbounded.
  bool Run(const std::vector<double>& cost, int allowed, double tol,
           int* pivots) {
    int since_refactor = 0;
    while (true) {
      if (since_refactor >= kRefactorEvery) {
        Refactor();
        since_refactor = 0;
      }
      int enter = -1;
      for (int c = 0; c < allowed; ++c) {
        if (IsBasic(c)) continue;
        if (Reduced(cost, c) < -tol) {
          enter = c;
          break;
        }
      }
      if (enter < 0) {
        if (since_refactor == 0) return true;
        // Confirm optimality on a fresh factorization.
        since_refactor = kRefactorEvery;
        continue;
      }
      // Minimum ratio first, then Bland's smallest basic index among the
      // rows that tie with it. Round-off negatives count as zero.
      double best = INFINITY;
      for (int r = 0; r < m_; ++r) {
        double v = at(r, enter);
        if (v > tol) best = std::min(best, std::max(0.0, rhs(r)) / v);
      }
      if (std::isinf(best)) return false;
      const double band = best * 1e-12 + 1e-15;
      int leave = -1;
      for (int r = 0; r < m_; ++r) {
        double v = at(r, enter);
        if (v <= tol || std::max(0.0, rhs(r)) / v > best + band) continue;
        if (leave < 0 || basis_[r] < basis_[leave]) leave = r;
      }
      Pivot(leave, enter);
      ++since_refactor;
      for (int r = 0; r < m_; ++r) {
        if (rhs(r) < 0.0 && rhs(r) > -tol) rhs(r) = 0.0;
      }
      ++*pivots;
      if (*pivots > 1000000) {
        throw std::runtime_error("simplex pivot limit exceeded");
      }
    }
  }

  bool IsBasic(int c) const {
    return std::find(basis_.begin(), basis_.end(), c) != basis_.end();
  }

 private:
  int m_;
  int n_;
  static constexpr int kRefactorEvery = 32;
  std::vector<double> a_;
  std::vector<int> basis_;
  std::vector<double> orig_;
  std::vector<int> row_ids_;
};

}  // namespace

const char* LpStatusName(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

LpResult SolveLp(const LinearProgram& lp, double tol) {
  const int n = lp.num_vars;
  const int me = static_cast<int>(lp.eq_rows.size());
  const int mu = static_cast<int>(lp.ub_rows.size());
  const int m = me + mu;
  if (static_cast<int>(lp.objective.size()) != n) {
    throw std::invalid_argument("objective length does not match num_vars");
  }
  for (const auto& r : lp.eq_rows)
    if (static_cast<int>(r.size()) != n)
      throw std::invalid_argument("equality row has the wrong length");
  for (const auto& r : lp.ub_rows)
    if (static_cast<int>(r.size()) != n)
      throw std::invalid_argument("inequality row has the wrong length");

  // Columns: originals, one slack per ub row, one artificial per row.
  const int slack0 = n;
  const int art0 = n + mu;
  const int cols = n + mu + m;
  Tableau tab(m, cols);
  std::vector<double> sign(m, 1.0);
  for (int r = 0; r < m; ++r) {
    const std::vector<double>& row = r < me ? lp.eq_rows[r] : lp.ub_rows[r - me];
    double b = r < me ? lp.eq_rhs[r] : lp.ub_rhs[r - me];
    double s = b < 0.0 ? -1.0 : 1.0;
    sign[r] = s;
    for (int c = 0; c < n; ++c) tab.at(r, c) = s * row[c];
    if (r >= me) tab.at(r, slack0 + (r - me)) = s;
    tab.at(r, art0 + r) = 1.0;
    tab.rhs(r) = s * b;
    tab.basis()[r] = art0 + r;
  }
  tab.Snapshot();

  LpResult res;
  std::vector<double> cost1(cols, 0.0);
  for (int r = 0; r < m; ++r) cost1[art0 + r] = 1.0;
  tab.Run(cost1, cols, tol, &res.pivots);

  double infeas = 0.0;
  for (int r = 0; r < tab.rows(); ++r) {
    if (tab.basis()[r] >= art0) infeas += tab.rhs(r);
  }
  double scale = 1.0;
  for (int r = 0; r < m; ++r) {
    scale = std::max(scale, std::fabs(r < me ? lp.eq_rhs[r] : lp.ub_rhs[r - me]));
  }
  if (infeas > tol * scale * 10) {
    res.status = LpStatus::kInfeasible;
    // y_r = reduced-cost multiplier of artificial r; z_r = -y_r * sign_r.
    res.certificate.assign(m, 0.0);
    for (int r = 0; r < m; ++r) {
      double y = cost1[art0 + r] - tab.Reduced(cost1, art0 + r);
      res.certificate[r] = -y * sign[r];
    }
    return res;
  }

  // Drive zero-level artificials out of the basis; drop redundant rows.
  for (int r = 0; r < tab.rows();) {
    if (tab.basis()[r] < art0) {
      ++r;
      continue;
    }
    int pc = -1;
    double big = tol;
    for (int c = 0; c < art0; ++c) {
      if (!tab.IsBasic(c) && std::fabs(tab.at(r, c)) > big) {
        pc = c;
        big = std::fabs(tab.at(r, c));
      }
    }
    if (pc >= 0) {
      tab.Pivot(r, pc);
      ++res.pivots;
      ++r;
    } else {
      tab.DropRow(r);
    }
  }

  std::vector<double> cost2(cols, 0.0);
  for (int c = 0; c < n; ++c) cost2[c] = -lp.objective[c];
  if (!tab.Run(cost2, art0, tol, &res.pivots)) {
    res.status = LpStatus::kUnbounded;
    return res;
  }
  res.status = LpStatus::kOptimal;
  res.x.assign(n, 0.0);
  for (int r = 0; r < tab.rows(); ++r) {
    int b = tab.basis()[r];
    if (b < n) res.x[b] = std::max(0.0, tab.rhs(r));
  }
  res.objective = 0.0;
  for (int c = 0; c < n; ++c) res.objective += lp.objective[c] * res.x[c];
  return res;
}

std::pair<double, double> CertificateViolation(const LinearProgram& lp,
                                               const std::vector<double>& z) {
  const int me = static_cast<int>(lp.eq_rows.size());
  const int mu = static_cast<int>(lp.ub_rows.size());
  if (static_cast<int>(z.size()) != me + mu) {
    throw std::invalid_argument("certificate length does not match the LP");
  }
  double viol = 0.0;
  std::vector<double> za(lp.num_vars, 0.0);
  double zb = 0.0;
  for (int r = 0; r < me + mu; ++r) {
    const auto& row = r < me ? lp.eq_rows[r] : lp.ub_rows[r - me];
    double b = r < me ? lp.eq_rhs[r] : lp.ub_rhs[r - me];
    if (r >= me) viol = std::max(viol, -z[r]);
    for (int c = 0; c < lp.num_vars; ++c) za[c] += z[r] * row[c];
    zb += z[r] * b;
  }
  for (double v : za) viol = std::max(viol, -v);
  return {viol, zb};
}

double PrimalViolation(const LinearProgram& lp, const std::vector<double>& x) {
  double viol = 0.0;
  for (double v : x) viol = std::max(viol, -v);
  for (size_t r = 0; r < lp.eq_rows.size(); ++r) {
    double s = 0.0;
    for (int c = 0; c < lp.num_vars; ++c) s += lp.eq_rows[r][c] * x[c];
    viol = std::max(viol, std::fabs(s - lp.eq_rhs[r]));
  }
  for (size_t r = 0; r < lp.ub_rows.size(); ++r) {
    double s = 0.0;
    for (int c = 0; c < lp.num_vars; ++c) s += lp.ub_rows[r][c] * x[c];
    viol = std::max(viol, s - lp.ub_rhs[r]);
  }
  return viol;
}

std::string DumpLp(const LinearProgram& lp) {
  std::ostringstream os;
  os.precision(17);
  auto name = [&](int c) {
    return c < static_cast<int>(lp.var_names.size()) ? lp.var_names[c]
                                                     : "x" + std::to_string(c);
  };
  auto terms = [&](const std::vector<double>& row) {
    std::ostringstream t;
    t.precision(17);
    bool first = true;
    for (int c = 0; c < lp.num_vars; ++c) {
      if (row[c] == 0.0) continue;
      t << (first ? "" : " ") << (row[c] < 0 ? "- " : (first ? "" : "+ "))
        << std::fabs(row[c]) << " " << name(c);
      first = false;
    }
    if (first) t << "0";
    return t.str();
  };
  os << "variables " << lp.num_vars << "\n";
  os << "maximize " << terms(lp.objective) << "\n";
  for (size_t r = 0; r < lp.eq_rows.size(); ++r) {
    os << "eq" << r << ": " << terms(lp.eq_rows[r]) << " = " << lp.eq_rhs[r]
       << "\n";
  }
  for (size_t r = 0; r < lp.ub_rows.size(); ++r) {
    os << "ub" << r << ": " << terms(lp.ub_rows[r]) << " <= " << lp.ub_rhs[r]
       << "\n";
  }
  os << "bounds all >= 0\n";
  return os.str();
}

}  // namespace infodesign
