// Copyright 2026 The nfvscale Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense two-phase tableau simplex with Bland's rule. Slow and independent of
// the library solver; used only as a test oracle.

#ifndef NFV_TESTS_SIMPLEX_ORACLE_HPP_
#define NFV_TESTS_SIMPLEX_ORACLE_HPP_

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Result {
  Status status = Status::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

// min c'x  s.t.  A_eq x = b_eq,  A_in x <= b_in,  x >= lower (finite or -inf).
inline Result simplex(const Eigen::VectorXd& c, const Eigen::MatrixXd& a_eq,
                      const Eigen::VectorXd& b_eq, const Eigen::MatrixXd& a_in,
                      const Eigen::VectorXd& b_in, const Eigen::VectorXd& lower) {
  const double eps = 1e-10;
  const int n = static_cast<int>(c.size());
  const int me = static_cast<int>(a_eq.rows());
  const int mi = static_cast<int>(a_in.rows());
  const int m = me + mi;
  // Columns: x+ (n), x- for free vars, slacks (mi), artificials (m).
  std::vector<int> free_col(n, -1);
  int nc = n;
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lower(j))) free_col[j] = nc++;
  }
  const int slack0 = nc;
  const int art0 = slack0 + mi;
  const int cols = art0 + m;
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lower(j))) shift(j) = lower(j);
  }
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, cols + 1);
  for (int r = 0; r < m; ++r) {
    const bool eq = r < me;
    const Eigen::RowVectorXd row = eq ? Eigen::RowVectorXd(a_eq.row(r)) : Eigen::RowVectorXd(a_in.row(r - me));
    double rhs = (eq ? b_eq(r) : b_in(r - me)) - row.dot(shift);
    for (int j = 0; j < n; ++j) {
      t(r, j) = row(j);
      if (free_col[j] >= 0) t(r, free_col[j]) = -row(j);
    }
    if (!eq) t(r, slack0 + r - me) = 1.0;
    if (rhs < 0) {
      t.row(r) *= -1.0;
      rhs = -rhs;
    }
    t(r, art0 + r) = 1.0;
    t(r, cols) = rhs;
  }
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) basis[r] = art0 + r;

  auto pivot = [&](int r, int col) {
    t.row(r) /= t(r, col);
    for (int i = 0; i < m; ++i) {
      if (i != r && t(i, col) != 0.0) t.row(i) -= t(i, col) * t.row(r);
    }
    basis[r] = col;
  };
  // Runs simplex on cost vector cost over allowed columns; false if unbounded.
  auto run = [&](const Eigen::VectorXd& cost, int allowed) {
    for (int iter = 0; iter < 100000; ++iter) {
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        double red = cost(j);
        for (int r = 0; r < m; ++r) red -= cost(basis[r]) * t(r, j);
        if (red < -eps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int r = 0; r < m; ++r) {
        if (t(r, enter) > eps) {
          const double ratio = t(r, cols) / t(r, enter);
          if (leave < 0 || ratio < best - 1e-12 ||
              (std::abs(ratio - best) <= 1e-12 && basis[r] < basis[leave])) {
            leave = r;
            best = ratio;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  };

  Result res;
  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(cols);
  c1.tail(m).setOnes();
  run(c1, cols);
  double infeas = 0.0;
  for (int r = 0; r < m; ++r) {
    if (basis[r] >= art0) infeas += t(r, cols);
  }
  if (infeas > 1e-7 * (1.0 + t.col(cols).cwiseAbs().maxCoeff())) return res;
  // Drive artificials out of the basis where possible.
  for (int r = 0; r < m; ++r) {
    if (basis[r] < art0) continue;
    for (int j = 0; j < art0; ++j) {
      if (std::abs(t(r, j)) > 1e-9) {
        pivot(r, j);
        break;
      }
    }
  }
  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(cols);
  for (int j = 0; j < n; ++j) {
    c2(j) = c(j);
    if (free_col[j] >= 0) c2(free_col[j]) = -c(j);
  }
  // Redundant rows keep a zero artificial in the basis; forbid artificials.
  if (!run(c2, art0)) {
    res.status = Status::kUnbounded;
    return res;
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(cols);
  for (int r = 0; r < m; ++r) z(basis[r]) = t(r, cols);
  res.x.resize(n);
  for (int j = 0; j < n; ++j) res.x(j) = shift(j) + z(j) - (free_col[j] >= 0 ? z(free_col[j]) : 0.0);
  res.objective = c.dot(res.x);
  res.status = Status::kOptimal;
  return res;
}

}  // namespace oracle

#endif  // NFV_TESTS_SIMPLEX_ORACLE_HPP_
