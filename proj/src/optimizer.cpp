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

#include "nfv/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseQR>

namespace nfv {

using Eigen::VectorXd;

LinearProgram LinearProgram::with_vars(int n) {
  LinearProgram lp;
  lp.objective = VectorXd::Zero(n);
  lp.a_eq.resize(0, n);
  lp.b_eq.resize(0);
  lp.a_in.resize(0, n);
  lp.b_in.resize(0);
  lp.lower = VectorXd::Zero(n);
  return lp;
}

void LinearProgram::check() const {
  const Eigen::Index n = objective.size();
  if (a_eq.cols() != n || a_in.cols() != n || lower.size() != n) {
    throw std::invalid_argument("program: column counts disagree");
  }
  if (a_eq.rows() != b_eq.size() || a_in.rows() != b_in.size()) {
    throw std::invalid_argument("program: row counts disagree");
  }
  if (!objective.allFinite() || !b_eq.allFinite() || !b_in.allFinite()) {
    throw std::invalid_argument("program: non-finite data");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lower(j)) || lower(j) == std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("program: invalid lower bound");
    }
  }
}

double entropy_value(const EntropyTerm& t, double v) {
  const double a = v + t.shift;
  return t.weight * (a * std::log(a / (t.reference + t.shift)) + t.reference - v);
}

double entropy_gradient(const EntropyTerm& t, double v) {
  return t.weight * std::log((v + t.shift) / (t.reference + t.shift));
}

double entropy_hessian(const EntropyTerm& t, double v) { return t.weight / (v + t.shift); }

double EntropyRegularizedProgram::value(const VectorXd& v) const {
  double f = lp.objective.dot(v);
  for (const EntropyTerm& t : terms) f += entropy_value(t, v(t.var));
  return f;
}

void EntropyRegularizedProgram::check() const {
  lp.check();
  std::vector<bool> seen(static_cast<std::size_t>(lp.num_vars()), false);
  for (const EntropyTerm& t : terms) {
    if (t.var < 0 || t.var >= lp.num_vars()) throw std::invalid_argument("entropy term: bad variable");
    if (seen[static_cast<std::size_t>(t.var)]) {
      throw std::invalid_argument("entropy term: variable used twice");
    }
    seen[static_cast<std::size_t>(t.var)] = true;
    if (!(t.weight >= 0.0) || !(t.reference >= 0.0) || !(t.shift > 0.0)) {
      throw std::invalid_argument("entropy term: need weight >= 0, reference >= 0, shift > 0");
    }
    const double l = lp.lower(t.var);
    if (!std::isfinite(l) || l + t.shift <= 0.0) {
      throw std::invalid_argument("entropy term: variable needs a lower bound above -shift");
    }
  }
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kIterationLimit: return "iteration-limit";
    case SolveStatus::kNumericalError: return "numerical-error";
  }
  return "unknown";
}

namespace {

double inf_norm(const VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Rows of a that are linearly independent, found by a rank-revealing sparse
// QR of a'. Returned in increasing order.
std::vector<int> independent_rows(const SparseMatrix& a) {
  std::vector<int> rows;
  if (a.rows() == 0) return rows;
  SparseMatrix at = a.transpose();
  at.makeCompressed();
  Eigen::SparseQR<SparseMatrix, Eigen::COLAMDOrdering<int>> qr;
  qr.compute(at);
  if (qr.info() != Eigen::Success) {
    for (int i = 0; i < a.rows(); ++i) rows.push_back(i);
    return rows;
  }
  const auto rank = static_cast<int>(qr.rank());
  const auto& perm = qr.colsPermutation().indices();
  for (int i = 0; i < rank; ++i) rows.push_back(perm(i));
  std::sort(rows.begin(), rows.end());
  return rows;
}

// min g(u) s.t. A u = b, u >= 0, where g is c'u plus entropy terms on some
// columns. Built from the user's program by shifting finite bounds,
// splitting free variables and adding inequality slacks.
struct StandardForm {
  int n_orig = 0;
  std::vector<int> kept_eq;
  std::vector<int> pos;  // std column of each original variable
  std::vector<int> neg;  // negative part of a free variable, or -1
  int first_slack = 0;
  int n = 0;
  int m = 0;
  SparseMatrix a;
  SparseMatrix at;
  VectorXd b;
  VectorXd c;
  // Entropy on std column: v = offset + u.
  std::vector<int> ent_col;
  std::vector<double> ent_w, ent_r, ent_s, ent_off;

  double value(const VectorXd& u) const {
    double f = c.dot(u);
    for (std::size_t e = 0; e < ent_col.size(); ++e) {
      const double v = ent_off[e] + u(ent_col[e]);
      const double s = v + ent_s[e];
      f += ent_w[e] * (s * std::log(s / (ent_r[e] + ent_s[e])) + ent_r[e] - v);
    }
    return f;
  }
  VectorXd gradient(const VectorXd& u) const {
    VectorXd g = c;
    for (std::size_t e = 0; e < ent_col.size(); ++e) {
      const double v = ent_off[e] + u(ent_col[e]);
      g(ent_col[e]) += ent_w[e] * std::log((v + ent_s[e]) / (ent_r[e] + ent_s[e]));
    }
    return g;
  }
  VectorXd hessian(const VectorXd& u) const {
    VectorXd h = VectorXd::Zero(n);
    for (std::size_t e = 0; e < ent_col.size(); ++e) {
      const double v = ent_off[e] + u(ent_col[e]);
      h(ent_col[e]) += ent_w[e] / (v + ent_s[e]);
    }
    return h;
  }
};

StandardForm to_standard(const EntropyRegularizedProgram& prog) {
  const LinearProgram& lp = prog.lp;
  StandardForm sf;
  sf.n_orig = lp.num_vars();
  sf.kept_eq = independent_rows(lp.a_eq);
  sf.pos.resize(static_cast<std::size_t>(sf.n_orig));
  sf.neg.assign(static_cast<std::size_t>(sf.n_orig), -1);
  int col = 0;
  for (int j = 0; j < sf.n_orig; ++j) {
    sf.pos[static_cast<std::size_t>(j)] = col++;
    if (!std::isfinite(lp.lower(j))) sf.neg[static_cast<std::size_t>(j)] = col++;
  }
  sf.first_slack = col;
  const auto mi = static_cast<int>(lp.a_in.rows());
  const auto me = static_cast<int>(sf.kept_eq.size());
  sf.n = col + mi;
  sf.m = me + mi;

  VectorXd shift_l = VectorXd::Zero(sf.n_orig);
  for (int j = 0; j < sf.n_orig; ++j) {
    if (std::isfinite(lp.lower(j))) shift_l(j) = lp.lower(j);
  }

  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(lp.a_eq.nonZeros() + 2 * lp.a_in.nonZeros() + mi));
  std::vector<int> eq_map(static_cast<std::size_t>(lp.a_eq.rows()), -1);
  for (int r = 0; r < me; ++r) eq_map[static_cast<std::size_t>(sf.kept_eq[static_cast<std::size_t>(r)])] = r;
  auto add = [&](int row, int j, double v) {
    trip.emplace_back(row, sf.pos[static_cast<std::size_t>(j)], v);
    if (sf.neg[static_cast<std::size_t>(j)] >= 0) trip.emplace_back(row, sf.neg[static_cast<std::size_t>(j)], -v);
  };
  for (int j = 0; j < lp.a_eq.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(lp.a_eq, j); it; ++it) {
      const int r = eq_map[static_cast<std::size_t>(it.row())];
      if (r >= 0) add(r, static_cast<int>(it.col()), it.value());
    }
  }
  for (int j = 0; j < lp.a_in.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(lp.a_in, j); it; ++it) {
      add(me + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int i = 0; i < mi; ++i) trip.emplace_back(me + i, sf.first_slack + i, 1.0);
  sf.a.resize(sf.m, sf.n);
  sf.a.setFromTriplets(trip.begin(), trip.end());
  sf.a.makeCompressed();
  sf.at = sf.a.transpose();
  sf.at.makeCompressed();

  sf.b.resize(sf.m);
  const VectorXd beq_shift = lp.b_eq - lp.a_eq * shift_l;
  for (int r = 0; r < me; ++r) sf.b(r) = beq_shift(sf.kept_eq[static_cast<std::size_t>(r)]);
  if (mi > 0) sf.b.tail(mi) = lp.b_in - lp.a_in * shift_l;

  sf.c = VectorXd::Zero(sf.n);
  for (int j = 0; j < sf.n_orig; ++j) {
    sf.c(sf.pos[static_cast<std::size_t>(j)]) = lp.objective(j);
    if (sf.neg[static_cast<std::size_t>(j)] >= 0) sf.c(sf.neg[static_cast<std::size_t>(j)]) = -lp.objective(j);
  }
  for (const EntropyTerm& t : prog.terms) {
    if (t.weight == 0.0) continue;
    sf.ent_col.push_back(sf.pos[static_cast<std::size_t>(t.var)]);
    sf.ent_w.push_back(t.weight);
    sf.ent_r.push_back(t.reference);
    sf.ent_s.push_back(t.shift);
    sf.ent_off.push_back(lp.lower(t.var));
  }
  return sf;
}

// Normal-equation solver for A D A' with a diagonal D.
class NormalSolver {
 public:
  explicit NormalSolver(const StandardForm& sf) : sf_(sf) {}

  bool factor(const VectorXd& d) {
    if (sf_.m == 0) return true;
    SparseMatrix ad = sf_.a * d.asDiagonal();
    m0_ = ad * sf_.at;
    // Symmetric diagonal scaling, then a small shift for rank-deficient
    // (degenerate) systems; iterative refinement in solve() removes its bias.
    scale_.resize(sf_.m);
    for (int i = 0; i < sf_.m; ++i) {
      const double dii = m0_.coeff(i, i);
      scale_(i) = (dii > 0.0 && std::isfinite(dii)) ? 1.0 / std::sqrt(dii) : 1.0;
    }
    const SparseMatrix ms = scale_.asDiagonal() * m0_ * scale_.asDiagonal();
    for (double reg = 1e-14; reg <= 1e-2; reg *= 100.0) {
      SparseMatrix mr = ms;
      for (int i = 0; i < mr.rows(); ++i) mr.coeffRef(i, i) += reg;
      if (!analyzed_) {
        ldlt_.analyzePattern(mr);
        analyzed_ = true;
      }
      ldlt_.factorize(mr);
      if (ldlt_.info() == Eigen::Success && ldlt_.vectorD().minCoeff() > 0.0) return true;
    }
    return false;
  }

  VectorXd solve(const VectorXd& rhs) const {
    if (sf_.m == 0) return VectorXd();
    auto base = [&](const VectorXd& r) -> VectorXd {
      return scale_.cwiseProduct(ldlt_.solve(scale_.cwiseProduct(r)));
    };
    VectorXd x = base(rhs);
    for (int k = 0; k < 3; ++k) {
      const VectorXd r = rhs - m0_ * x;
      x += base(r);
    }
    return x;
  }

 private:
  const StandardForm& sf_;
  SparseMatrix m0_;
  VectorXd scale_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  bool analyzed_ = false;
};

double max_step(const VectorXd& v, const VectorXd& dv) {
  double a = 1.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (dv(j) < 0.0) a = std::min(a, -v(j) / dv(j));
  }
  return a;
}

struct IpmOutcome {
  bool converged = false;
  bool acceptable = false;  // best iterate within opts.acceptable of the tolerances
  bool numerical = false;
  int iterations = 0;
  VectorXd u, y, z;
};

IpmOutcome run_ipm(const StandardForm& sf, const SolverOptions& opts) {
  IpmOutcome out;
  const int n = sf.n;
  const int m = sf.m;
  const bool nonlinear = !sf.ent_col.empty();
  NormalSolver ns(sf);

  // Mehrotra starting point.
  VectorXd u(n), y(m), z(n);
  {
    if (!ns.factor(VectorXd::Ones(n))) {
      out.numerical = true;
      return out;
    }
    u = m > 0 ? VectorXd(sf.at * ns.solve(sf.b)) : VectorXd::Zero(n);
    const VectorXd g = sf.gradient(u.cwiseMax(1.0));
    y = m > 0 ? ns.solve(sf.a * g) : VectorXd();
    z = m > 0 ? VectorXd(g - sf.at * y) : g;
    const double du = std::max(-1.5 * (n > 0 ? u.minCoeff() : 0.0), 0.0);
    const double dz = std::max(-1.5 * (n > 0 ? z.minCoeff() : 0.0), 0.0);
    u.array() += du;
    z.array() += dz;
    const double uz = u.dot(z);
    const double su = u.sum();
    const double sz = z.sum();
    u.array() += (su > 0 && sz > 0) ? 0.5 * uz / sz : 1.0;
    z.array() += (su > 0 && sz > 0) ? 0.5 * uz / su : 1.0;
    for (int j = 0; j < n; ++j) {
      if (!(u(j) > 0.0)) u(j) = 1.0;
      if (!(z(j) > 0.0)) z(j) = 1.0;
    }
  }

  const double bnorm = 1.0 + inf_norm(sf.b);
  const double cnorm = 1.0 + inf_norm(sf.c);
  // Late iterations can lose accuracy once mu underflows the conditioning of
  // the normal equations, so the best iterate seen is what gets returned.
  double best_merit = std::numeric_limits<double>::infinity();
  int best_it = 0;
  VectorXd best_u = u, best_y = y, best_z = z;
  for (int it = 0; it <= opts.max_iterations; ++it) {
    out.iterations = it;
    const VectorXd g = sf.gradient(u);
    const VectorXd rp = m > 0 ? VectorXd(sf.b - sf.a * u) : VectorXd();
    const VectorXd rd = m > 0 ? VectorXd(g - sf.at * y - z) : VectorXd(g - z);
    const double mu = n > 0 ? u.dot(z) / n : 0.0;
    const double pres = inf_norm(rp) / bnorm;
    const double dres = inf_norm(rd) / cnorm;
    const double gap = u.dot(z) / (1.0 + std::abs(sf.value(u)));
    const double merit = std::max({pres / opts.tol_feas, dres / opts.tol_kkt, gap / opts.tol_gap});
    if (merit < best_merit) {
      best_merit = merit;
      best_it = it;
      best_u = u;
      best_y = y;
      best_z = z;
    }
    if (merit <= 1.0) {
      out.converged = true;
      break;
    }
    if (it == opts.max_iterations || it - best_it >= 8) break;
    if (!u.allFinite() || !z.allFinite() || (m > 0 && !y.allFinite()) || inf_norm(u) > 1e14 ||
        inf_norm(z) > 1e14 || (m > 0 && inf_norm(y) > 1e14)) {
      break;
    }

    const VectorXd h = sf.hessian(u);
    const VectorXd d = (h.array() + z.array() / u.array()).inverse().matrix();
    if (!ns.factor(d)) {
      out.numerical = true;
      break;
    }
    auto direction = [&](const VectorXd& rc, VectorXd& du, VectorXd& dy, VectorXd& dz) {
      const VectorXd t = rd + (rc.array() / u.array()).matrix();
      if (m > 0) {
        dy = ns.solve(rp + sf.a * d.cwiseProduct(t));
        du = d.cwiseProduct(VectorXd(sf.at * dy) - t);
      } else {
        du = -d.cwiseProduct(t);
      }
      dz = (-(rc.array()) - z.array() * du.array()).matrix().cwiseQuotient(u);
    };
    VectorXd du, dy, dz;
    VectorXd rc = u.cwiseProduct(z);
    direction(rc, du, dy, dz);
    double ap = max_step(u, du);
    double ad = max_step(z, dz);
    if (nonlinear) ap = ad = std::min(ap, ad);
    const double mu_aff = (u + ap * du).dot(z + ad * dz) / n;
    const double sigma = std::pow(std::max(0.0, mu_aff) / mu, 3.0);
    rc.array() += du.array() * dz.array() - sigma * mu;
    direction(rc, du, dy, dz);
    if (!du.allFinite() || !dz.allFinite() || (m > 0 && !dy.allFinite())) {
      out.numerical = true;
      break;
    }
    ap = std::min(1.0, 0.995 * max_step(u, du));
    ad = std::min(1.0, 0.995 * max_step(z, dz));
    if (nonlinear) ap = ad = std::min(ap, ad);
    u += ap * du;
    if (m > 0) y += ad * dy;
    z += ad * dz;
    // Both halves of a split free variable drift upward together; pull them
    // back without changing their difference.
    for (std::size_t j = 0; j < sf.neg.size(); ++j) {
      if (sf.neg[j] < 0) continue;
      const double lo = std::min(u(sf.pos[j]), u(sf.neg[j]));
      if (lo > 1.0) {
        u(sf.pos[j]) -= lo - 1.0;
        u(sf.neg[j]) -= lo - 1.0;
      }
    }
  }
  u = std::move(best_u);
  y = std::move(best_y);
  z = std::move(best_z);
  // Primal polish: project the remaining row residual out along D A'. The
  // entropy gradient moves with u, so the polished point is kept only if its
  // merit is no worse.
  if (m > 0 && !out.numerical && best_merit > 1.0) {
    auto merit_at = [&](const VectorXd& v) {
      const VectorXd rp = sf.b - sf.a * v;
      const VectorXd rd = sf.gradient(v) - sf.at * y - z;
      return std::max({inf_norm(rp) / bnorm / opts.tol_feas, inf_norm(rd) / cnorm / opts.tol_kkt,
                       v.dot(z) / (1.0 + std::abs(sf.value(v))) / opts.tol_gap});
    };
    VectorXd p = u;
    for (int k = 0; k < 3; ++k) {
      const VectorXd rp = sf.b - sf.a * p;
      const double before = inf_norm(rp);
      if (before <= 1e-15 * bnorm) break;
      const VectorXd d = (sf.hessian(p).array() + z.array() / p.array()).inverse().matrix();
      if (!ns.factor(d)) break;
      const VectorXd du = d.cwiseProduct(VectorXd(sf.at * ns.solve(rp)));
      const double a = std::min(1.0, 0.99 * max_step(p, du));
      const VectorXd trial = p + a * du;
      if (!(inf_norm(VectorXd(sf.b - sf.a * trial)) < before)) break;
      p = trial;
    }
    const double polished = merit_at(p);
    if (polished < best_merit) {
      u = std::move(p);
      best_merit = polished;
    }
  }
  out.converged = best_merit <= 1.0;
  out.acceptable = best_merit <= opts.acceptable;
  out.u = std::move(u);
  out.y = std::move(y);
  out.z = std::move(z);
  return out;
}

// Fills x, duals, objective values and residuals in the user's space.
void map_back(const EntropyRegularizedProgram& prog, const StandardForm& sf, const IpmOutcome& ipm,
              SolveResult& res) {
  const LinearProgram& lp = prog.lp;
  const int n = sf.n_orig;
  res.x.resize(n);
  res.bound_duals = VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const double up = ipm.u(sf.pos[ju]);
    if (sf.neg[ju] >= 0) {
      res.x(j) = up - ipm.u(sf.neg[ju]);
    } else {
      res.x(j) = lp.lower(j) + up;
      res.bound_duals(j) = ipm.z(sf.pos[ju]);
    }
  }
  res.eq_duals = VectorXd::Zero(lp.a_eq.rows());
  for (std::size_t r = 0; r < sf.kept_eq.size(); ++r) {
    res.eq_duals(sf.kept_eq[r]) = ipm.y(static_cast<Eigen::Index>(r));
  }
  const auto mi = static_cast<int>(lp.a_in.rows());
  res.in_duals.resize(mi);
  for (int i = 0; i < mi; ++i) res.in_duals(i) = ipm.z(sf.first_slack + i);
  res.iterations = ipm.iterations;

  // Residuals.
  const VectorXd req = lp.a_eq * res.x - lp.b_eq;
  const VectorXd rin = lp.a_in * res.x - lp.b_in;
  double primal = inf_norm(req);
  for (int i = 0; i < mi; ++i) primal = std::max(primal, rin(i));
  double comp = 0.0;
  for (int i = 0; i < mi; ++i) comp = std::max(comp, std::abs(res.in_duals(i) * rin(i)));
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower(j))) {
      primal = std::max(primal, lp.lower(j) - res.x(j));
      comp = std::max(comp, std::abs(res.bound_duals(j) * (res.x(j) - lp.lower(j))));
    }
  }
  VectorXd grad = lp.objective;
  for (const EntropyTerm& t : prog.terms) grad(t.var) += entropy_gradient(t, res.x(t.var));
  const VectorXd aty = lp.a_eq.transpose() * res.eq_duals;
  const VectorXd atl = lp.a_in.transpose() * res.in_duals;
  const VectorXd stat = grad - aty + atl - res.bound_duals;
  res.kkt.primal = std::max(0.0, primal);
  res.kkt.dual = inf_norm(stat);
  res.kkt.complementarity = comp;

  res.objective = prog.value(res.x);
  double dual = lp.b_eq.dot(res.eq_duals) - lp.b_in.dot(res.in_duals);
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower(j))) dual += lp.lower(j) * res.bound_duals(j);
  }
  for (const EntropyTerm& t : prog.terms) {
    if (t.weight == 0.0) continue;
    const double a = aty(t.var) - atl(t.var) + res.bound_duals(t.var) - lp.objective(t.var);
    dual += a * t.shift + t.weight * (t.reference + t.shift) * (1.0 - std::exp(a / t.weight));
  }
  res.dual_objective = dual;
  res.kkt.gap = res.objective - res.dual_objective;
}

SolveResult solve_impl(const EntropyRegularizedProgram& prog, const SolverOptions& opts);

// Phase-1: minimise the total artificial violation. Returns the artificial
// values, or an empty vector if the phase-1 solve itself failed.
VectorXd phase_one(const LinearProgram& lp, const SolverOptions& opts, double& value) {
  const int n = lp.num_vars();
  const auto me = static_cast<int>(lp.a_eq.rows());
  const auto mi = static_cast<int>(lp.a_in.rows());
  const int na = 2 * me + mi;
  LinearProgram p = LinearProgram::with_vars(n + na);
  p.lower.head(n) = lp.lower;
  p.objective.tail(na).setOnes();
  std::vector<Triplet> te, ti;
  for (int j = 0; j < lp.a_eq.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(lp.a_eq, j); it; ++it) te.emplace_back(it.row(), it.col(), it.value());
  }
  for (int r = 0; r < me; ++r) {
    te.emplace_back(r, n + 2 * r, 1.0);
    te.emplace_back(r, n + 2 * r + 1, -1.0);
  }
  for (int j = 0; j < lp.a_in.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(lp.a_in, j); it; ++it) ti.emplace_back(it.row(), it.col(), it.value());
  }
  for (int r = 0; r < mi; ++r) ti.emplace_back(r, n + 2 * me + r, -1.0);
  p.a_eq.resize(me, n + na);
  p.a_eq.setFromTriplets(te.begin(), te.end());
  p.b_eq = lp.b_eq;
  p.a_in.resize(mi, n + na);
  p.a_in.setFromTriplets(ti.begin(), ti.end());
  p.b_in = lp.b_in;
  SolverOptions o = opts;
  o.diagnose = false;
  const SolveResult r = solve_impl({p, {}}, o);
  if (!r.optimal()) return VectorXd();
  value = r.objective;
  return r.x.tail(na);
}

// Recession direction: min c'd over A_eq d = 0, A_in d <= 0, d >= 0 where the
// variable is bounded below, |d| <= 1, entropy variables fixed at 0.
VectorXd recession(const EntropyRegularizedProgram& prog, const SolverOptions& opts, double& value) {
  const LinearProgram& lp = prog.lp;
  const int n = lp.num_vars();
  std::vector<bool> fixed(static_cast<std::size_t>(n), false);
  for (const EntropyTerm& t : prog.terms) {
    if (t.weight > 0.0) fixed[static_cast<std::size_t>(t.var)] = true;
  }
  std::vector<int> map(static_cast<std::size_t>(n), -1);
  int nr = 0;
  for (int j = 0; j < n; ++j) {
    if (!fixed[static_cast<std::size_t>(j)]) map[static_cast<std::size_t>(j)] = nr++;
  }
  LinearProgram p = LinearProgram::with_vars(nr);
  for (int j = 0; j < n; ++j) {
    const int c = map[static_cast<std::size_t>(j)];
    if (c < 0) continue;
    p.objective(c) = lp.objective(j);
    p.lower(c) = std::isfinite(lp.lower(j)) ? 0.0 : -1.0;
  }
  auto restrict = [&](const SparseMatrix& a, SparseMatrix& out, int extra) {
    std::vector<Triplet> t;
    for (int j = 0; j < a.outerSize(); ++j) {
      for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
        const int c = map[static_cast<std::size_t>(it.col())];
        if (c >= 0) t.emplace_back(it.row(), c, it.value());
      }
    }
    for (int c = 0; c < extra; ++c) t.emplace_back(a.rows() + c, c, 1.0);
    out.resize(a.rows() + extra, nr);
    out.setFromTriplets(t.begin(), t.end());
  };
  restrict(lp.a_eq, p.a_eq, 0);
  p.b_eq = VectorXd::Zero(lp.a_eq.rows());
  restrict(lp.a_in, p.a_in, nr);
  p.b_in = VectorXd::Zero(lp.a_in.rows() + nr);
  p.b_in.tail(nr).setOnes();
  SolverOptions o = opts;
  o.diagnose = false;
  const SolveResult r = solve_impl({p, {}}, o);
  if (!r.optimal()) return VectorXd();
  value = r.objective;
  VectorXd d = VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const int c = map[static_cast<std::size_t>(j)];
    if (c >= 0) d(j) = r.x(c);
  }
  return d;
}

SolveResult solve_impl(const EntropyRegularizedProgram& prog, const SolverOptions& opts) {
  const StandardForm sf = to_standard(prog);
  const IpmOutcome ipm = run_ipm(sf, opts);
  SolveResult res;
  if (ipm.u.size() == sf.n) map_back(prog, sf, ipm, res);
  res.iterations = ipm.iterations;
  const double bscale = 1.0 + std::max(inf_norm(prog.lp.b_eq), inf_norm(prog.lp.b_in));
  if (ipm.converged || ipm.acceptable) {
    // Dropped equality rows must be consistent with the kept ones.
    const double slack = ipm.converged ? 10.0 : 10.0 * opts.acceptable;
    if (res.kkt.primal <= slack * opts.tol_feas * bscale) {
      res.status = SolveStatus::kOptimal;
      res.message = ipm.converged ? "converged" : "converged to reduced accuracy";
      return res;
    }
    res.status = SolveStatus::kInfeasible;
    res.message = "dependent equality rows are inconsistent";
    return res;
  }
  res.status = ipm.numerical ? SolveStatus::kNumericalError : SolveStatus::kIterationLimit;
  res.message = ipm.numerical ? "normal equations could not be factored" : "iteration limit";
  if (!opts.diagnose) return res;

  double infeas = 0.0;
  VectorXd art = phase_one(prog.lp, opts, infeas);
  if (art.size() > 0 && infeas > 1e-6 * bscale) {
    res.status = SolveStatus::kInfeasible;
    res.certificate = art;
    res.message = "phase-1 optimum " + std::to_string(infeas) + " > 0";
    return res;
  }
  double ray = 0.0;
  VectorXd d = recession(prog, opts, ray);
  if (d.size() > 0 && ray < -1e-7) {
    res.status = SolveStatus::kUnbounded;
    res.certificate = d;
    res.message = "improving recession direction found";
  }
  return res;
}

}  // namespace

SolveResult solve_lp(const LinearProgram& lp, const SolverOptions& opts) {
  EntropyRegularizedProgram prog{lp, {}};
  prog.check();
  return solve_impl(prog, opts);
}

SolveResult solve_entropy(const EntropyRegularizedProgram& prog, const SolverOptions& opts) {
  prog.check();
  return solve_impl(prog, opts);
}

void dump_program(std::ostream& out, const EntropyRegularizedProgram& prog) {
  const LinearProgram& lp = prog.lp;
  out << std::setprecision(17);
  out << "nfvprog 1\n";
  out << "vars " << lp.num_vars() << " eq " << lp.a_eq.rows() << " in " << lp.a_in.rows()
      << " entropy " << prog.terms.size() << "\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.objective(j) != 0.0) out << "c " << j << " " << lp.objective(j) << "\n";
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (!std::isfinite(lp.lower(j))) {
      out << "lb " << j << " -inf\n";
    } else if (lp.lower(j) != 0.0) {
      out << "lb " << j << " " << lp.lower(j) << "\n";
    }
  }
  auto rows = [&](const char* tag, const SparseMatrix& a, const VectorXd& b, const char* rhs) {
    SparseMatrix r = a;  // row-major entry order in the dump
    std::vector<Triplet> t;
    for (int j = 0; j < r.outerSize(); ++j) {
      for (SparseMatrix::InnerIterator it(r, j); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    }
    std::sort(t.begin(), t.end(), [](const Triplet& x, const Triplet& y) {
      return x.row() != y.row() ? x.row() < y.row() : x.col() < y.col();
    });
    for (const Triplet& e : t) out << tag << " " << e.row() << " " << e.col() << " " << e.value() << "\n";
    for (Eigen::Index i = 0; i < b.size(); ++i) out << rhs << " " << i << " " << b(i) << "\n";
  };
  rows("aeq", lp.a_eq, lp.b_eq, "beq");
  rows("ain", lp.a_in, lp.b_in, "bin");
  for (const EntropyTerm& t : prog.terms) {
    out << "ent " << t.var << " " << t.weight << " " << t.reference << " " << t.shift << "\n";
  }
}

}  // namespace nfv
