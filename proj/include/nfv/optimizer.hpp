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

// Primal-dual interior-point solver for linear programs and for convex
// programs whose objective adds shifted relative-entropy terms to a linear
// part.
//
//   min  c'v + sum_j w_j [(v_j + s_j) ln((v_j + s_j)/(r_j + s_j)) + r_j - v_j]
//   s.t. A_eq v = b_eq,  A_in v <= b_in,  v >= lower
//
// Multiplier signs follow the Lagrangian
//   f(v) - y'(A_eq v - b_eq) + lambda'(A_in v - b_in) - z'(v - lower)
// so stationarity reads grad f - A_eq' y + A_in' lambda - z = 0 with
// lambda, z >= 0 and y free.

#ifndef NFV_OPTIMIZER_HPP_
#define NFV_OPTIMIZER_HPP_

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace nfv {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

inline constexpr double kFree = -std::numeric_limits<double>::infinity();

struct LinearProgram {
  Eigen::VectorXd objective;
  SparseMatrix a_eq;
  Eigen::VectorXd b_eq;
  SparseMatrix a_in;
  Eigen::VectorXd b_in;
  Eigen::VectorXd lower;  // kFree marks an unbounded-below variable

  int num_vars() const { return static_cast<int>(objective.size()); }

  // Empty program over n variables with lower bounds 0 and no rows.
  static LinearProgram with_vars(int n);

  // Throws std::invalid_argument if the dimensions disagree or a bound is
  // +inf or NaN.
  void check() const;
};

struct EntropyTerm {
  int var = 0;
  double weight = 0.0;
  double reference = 0.0;
  double shift = 1.0;
};

struct EntropyRegularizedProgram {
  LinearProgram lp;
  std::vector<EntropyTerm> terms;

  // Objective value at v, entropy terms included.
  double value(const Eigen::VectorXd& v) const;
  void check() const;
};

double entropy_value(const EntropyTerm& term, double v);
double entropy_gradient(const EntropyTerm& term, double v);
double entropy_hessian(const EntropyTerm& term, double v);

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalError };

std::string to_string(SolveStatus status);

struct KktResiduals {
  double primal = 0.0;      // max absolute violation of the rows and bounds
  double dual = 0.0;        // max absolute stationarity residual
  double complementarity = 0.0;  // max_j |slack_j * multiplier_j|
  double gap = 0.0;         // primal objective minus dual objective
};

struct SolveResult {
  SolveStatus status = SolveStatus::kNumericalError;
  Eigen::VectorXd x;
  Eigen::VectorXd eq_duals;     // y, free
  Eigen::VectorXd in_duals;     // lambda >= 0
  Eigen::VectorXd bound_duals;  // z >= 0; zero for free variables
  double objective = 0.0;
  double dual_objective = 0.0;
  KktResiduals kkt;
  int iterations = 0;
  // Unbounded: an improving recession direction. Infeasible: the phase-1
  // artificial values (positive somewhere).
  Eigen::VectorXd certificate;
  std::string message;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

struct SolverOptions {
  double tol_feas = 1e-7;
  double tol_kkt = 1e-7;
  double tol_gap = 1e-7;
  int max_iterations = 200;
  // Run phase-1 and recession LPs to classify a failed solve.
  bool diagnose = true;
  // A stalled solve whose best iterate meets every tolerance times this
  // factor is reported optimal, with a message saying so.
  double acceptable = 1e4;
};

SolveResult solve_lp(const LinearProgram& lp, const SolverOptions& opts = {});
SolveResult solve_entropy(const EntropyRegularizedProgram& prog, const SolverOptions& opts = {});

// Writes the program in the text format described in docs/FORMATS.md.
void dump_program(std::ostream& out, const EntropyRegularizedProgram& prog);

}  // namespace nfv

#endif  // NFV_OPTIMIZER_HPP_
