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


#include "nfv/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "nfv/orfa.hpp"

namespace nfv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_integer_algorithm(Algorithm a) { return a != Algorithm::kOrfa; }

template <typename T>
bool has(const std::vector<T>& v, T x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return in;
}

struct Oracles {
  double relaxation = kNaN;
  double exact = kNaN;
  double exact_bound = kNaN;
  double certificate = kNaN;
};

void price(ResultRow& row, const Oracles& o) {
  row.relaxation = o.relaxation;
  row.exact = o.exact;
  row.exact_bound = o.exact_bound;
  row.certificate = o.certificate;
  row.denominator_kind = "none";
  row.denominator = kNaN;
  if (is_integer_algorithm(row.algorithm)) {
    if (!std::isnan(o.exact)) {
      row.denominator_kind = "exact";
      row.denominator = o.exact;
    } else if (!std::isnan(o.exact_bound) || !std::isnan(o.relaxation)) {
      row.denominator_kind = "lower_bound";
      row.denominator = std::isnan(o.exact_bound) ? o.relaxation
                        : std::isnan(o.relaxation) ? o.exact_bound
                                                   : std::max(o.exact_bound, o.relaxation);
    }
  } else if (!std::isnan(o.relaxation)) {
    row.denominator_kind = "relaxation";
    row.denominator = o.relaxation;
  }
  if (row.denominator_kind == "none" && !std::isnan(o.certificate)) {
    row.denominator_kind = "certificate";
    row.denominator = o.certificate;
  }
  row.ratio = row.feasible && !std::isnan(row.denominator) ? safe_ratio(row.cost.total(), row.denominator) : kNaN;
}

std::vector<ResultRow> run_point(const ExperimentSpec& spec, double value, std::uint64_t seed) {
  const ExperimentPoint p = prepare_point(spec, value, seed);
  const ProblemInstance& inst = p.instance;
  const bool coa_needed = has(spec.algorithms, Algorithm::kCoa);
  CoaRun coa;
  std::vector<OrfaStep> steps;
  if (coa_needed) {
    coa = run_coa(inst, p.slots, seed);
    for (const CoaStep& s : coa.steps) steps.push_back(s.fractional);
  } else {
    steps = run_orfa(inst, p.slots);
  }
  const std::vector<FractionalPlan> plans = plans_of(steps);
  const BoundIngredients bounds =
      coa_needed ? coa.bounds : bound_ingredients(inst, p.slots, instance_clusters(inst).radius, plans);

  std::vector<ResultRow> rows;
  std::vector<std::vector<Eigen::MatrixXi>> starts;  // integer plans seen, for the exact search
  for (Algorithm a : spec.algorithms) {
    ResultRow row;
    row.sweep_value = value;
    row.seed = seed;
    row.algorithm = a;
    row.bounds = bounds;
    switch (a) {
      case Algorithm::kOrfa:
        for (std::size_t t = 0; t < steps.size(); ++t) {
          row.cost += cost_of_plan(inst, p.slots[t], steps[t].plan,
                                   t == 0 ? Eigen::MatrixXd::Zero(inst.num_vnfs(), inst.num_datacenters())
                                          : steps[t - 1].plan.q);
        }
        break;
      case Algorithm::kCoa:
        row.cost = coa.integer_total;
        starts.emplace_back();
        for (const CoaStep& s : coa.steps) starts.back().push_back(s.integer.q);
        break;
      case Algorithm::kIrr:
      case Algorithm::kGr: {
        const BaselineRun b =
            run_baseline(inst, p.slots, plans, a == Algorithm::kIrr ? Baseline::kNearest : Baseline::kCeiling);
        row.feasible = b.feasible;
        row.infeasible_slot = b.infeasible_slot;
        if (b.feasible) {
          row.cost = b.total;
          starts.emplace_back();
          for (const IntegerPlan& ip : b.plans) starts.back().push_back(ip.q);
        }
        break;
      }
    }
    rows.push_back(std::move(row));
  }

  Oracles o;
  if (has(spec.oracles, Oracle::kRelaxation)) {
    const RelaxationResult rel = solve_relaxation(inst, p.slots);
    if (rel.status == SolveStatus::kOptimal) o.relaxation = rel.objective;
  }
  if (has(spec.oracles, Oracle::kExact)) {
    const ExactResult ex = solve_exact(inst, p.slots, spec.exact, starts);
    if (ex.optimal) o.exact = ex.objective;
    if (std::isfinite(ex.bound)) o.exact_bound = ex.bound;
  }
  if (has(spec.oracles, Oracle::kCertificate)) o.certificate = build_dual_certificate(inst, p.slots, steps).objective;
  for (ResultRow& row : rows) price(row, o);
  return rows;
}

void number(std::ostream& out, double v) {
  if (std::isnan(v)) {
    out << "undefined";
  } else if (std::isinf(v)) {
    out << (v > 0 ? "inf" : "-inf");
  } else {
    out << v;
  }
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kOrfa: return "ORFA";
    case Algorithm::kCoa: return "COA";
    case Algorithm::kIrr: return "IRR";
    case Algorithm::kGr: return "GR";
  }
  return "?";
}

std::string to_string(Oracle o) {
  switch (o) {
    case Oracle::kRelaxation: return "relaxation";
    case Oracle::kExact: return "exact";
    case Oracle::kCertificate: return "certificate";
  }
  return "?";
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::kNone: return "none";
    case SweepParam::kDatacenters: return "datacenters";
    case SweepParam::kSlots: return "slots";
    case SweepParam::kShock: return "shock";
    case SweepParam::kEpsilon: return "epsilon";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& s) {
  for (Algorithm a : {Algorithm::kOrfa, Algorithm::kCoa, Algorithm::kIrr, Algorithm::kGr}) {
    if (lower(s) == lower(to_string(a))) return a;
  }
  throw std::invalid_argument("unknown algorithm \"" + s + "\" (expected ORFA, COA, IRR or GR)");
}

Oracle parse_oracle(const std::string& s) {
  for (Oracle o : {Oracle::kRelaxation, Oracle::kExact, Oracle::kCertificate}) {
    if (lower(s) == to_string(o)) return o;
  }
  throw std::invalid_argument("unknown oracle \"" + s + "\" (expected relaxation, exact or certificate)");
}

SweepParam parse_sweep(const std::string& s) {
  for (SweepParam p : {SweepParam::kNone, SweepParam::kDatacenters, SweepParam::kSlots, SweepParam::kShock,
                       SweepParam::kEpsilon}) {
    if (lower(s) == to_string(p)) return p;
  }
  throw std::invalid_argument("unknown sweep \"" + s + "\" (expected datacenters, slots, shock or epsilon)");
}

void ExperimentSpec::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("experiment: " + m); };
  if (algorithms.empty()) fail("no algorithm selected");
  if (oracles.empty()) fail("no oracle selected");
  if (seeds.empty()) fail("no seed given");
  if (jobs < 1) fail("jobs must be positive");
  if (sweep == SweepParam::kNone && !values.empty()) fail("sweep values given without a sweep parameter");
  if (sweep != SweepParam::kNone && values.empty()) fail("sweep " + to_string(sweep) + " has no values");
  const bool from_file = !instance_path.empty();
  if (!from_file && !trace_path.empty()) fail("a trace file needs an instance file");
  if (from_file && (sweep == SweepParam::kDatacenters || sweep == SweepParam::kSlots)) {
    fail("sweep " + to_string(sweep) + " needs a generated instance");
  }
  if (!trace_path.empty() && sweep == SweepParam::kShock) fail("sweep shock needs generated traffic");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) fail("sweep values must be positive");
    if ((sweep == SweepParam::kDatacenters || sweep == SweepParam::kSlots) && v != std::floor(v)) {
      fail("sweep " + to_string(sweep) + " needs integer values");
    }
  }
  if (!from_file) workload.validate();
}

ExperimentPoint prepare_point(const ExperimentSpec& spec, double value, std::uint64_t seed) {
  WorkloadConfig cfg = spec.workload;
  cfg.seed = seed;
  switch (spec.sweep) {
    case SweepParam::kNone: break;
    case SweepParam::kDatacenters: cfg.num_datacenters = static_cast<int>(value); break;
    case SweepParam::kSlots: cfg.horizon = static_cast<int>(value); break;
    case SweepParam::kShock: cfg.shock_level = value; break;
    case SweepParam::kEpsilon: cfg.epsilon = value; break;
  }
  ExperimentPoint p;
  if (spec.instance_path.empty()) {
    Workload w = generate_workload(cfg);
    p.instance = std::move(w.instance);
    p.slots = std::move(w.trace.slots);
    return p;
  }
  std::ifstream in = open_input(spec.instance_path);
  p.instance = read_instance_json(in);
  if (spec.sweep == SweepParam::kEpsilon) p.instance.epsilon = value;
  if (!spec.trace_path.empty()) {
    std::ifstream tr = open_input(spec.trace_path);
    p.slots = read_trace_csv(tr, p.instance);
  } else {
    cfg.horizon = p.instance.horizon;
    p.slots = generate_traffic(cfg, p.instance, seed).slots;
  }
  return p;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<double> values = spec.values;
  if (values.empty()) values.push_back(kNaN);
  struct Task {
    double value;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double v : values) {
    for (std::uint64_t s : spec.seeds) tasks.push_back({v, s});
  }
  std::vector<std::vector<ResultRow>> out(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t n = next++; n < tasks.size(); n = next++) {
      try {
        out[n] = run_point(spec, tasks[n].value, tasks[n].seed);
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << "sweep value " << tasks[n].value << " seed " << tasks[n].seed << ": " << e.what();
        const std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::make_exception_ptr(std::runtime_error(os.str()));
      }
    }
  };
  const int threads = std::min<int>(spec.jobs, static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  for (int n = 1; n < threads; ++n) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  std::vector<ResultRow> rows;
  for (auto& r : out) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  // Keyed by first appearance so the output follows the row order.
  std::vector<SummaryRow> out;
  std::vector<std::vector<double>> ratios, costs;
  for (const ResultRow& r : rows) {
    std::size_t n = 0;
    while (n < out.size() &&
           !(out[n].algorithm == r.algorithm &&
             (out[n].sweep_value == r.sweep_value || (std::isnan(out[n].sweep_value) && std::isnan(r.sweep_value))))) {
      ++n;
    }
    if (n == out.size()) {
      out.push_back({r.sweep_value, r.algorithm});
      ratios.emplace_back();
      costs.emplace_back();
    }
    ++out[n].runs;
    if (!r.feasible) {
      ++out[n].infeasible;
      continue;
    }
    costs[n].push_back(r.cost.total());
    if (!std::isnan(r.ratio)) ratios[n].push_back(r.ratio);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? kNaN : s / static_cast<double>(v.size());
  };
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n].rated = static_cast<int>(ratios[n].size());
    out[n].mean_ratio = mean(ratios[n]);
    out[n].mean_cost = mean(costs[n]);
    double ss = 0.0;
    for (double x : ratios[n]) ss += (x - out[n].mean_ratio) * (x - out[n].mean_ratio);
    out[n].stddev_ratio = ratios[n].size() < 2 ? 0.0 : std::sqrt(ss / static_cast<double>(ratios[n].size() - 1));
  }
  return out;
}

void write_results_csv(std::ostream& out, SweepParam sweep, const std::vector<ResultRow>& rows) {
  const auto old_precision = out.precision(12);
  out << "sweep,sweep_value,seed,algorithm,status,ratio,denominator_kind,denominator,total,running,deploy,"
         "transfer,delay,relaxation,exact,exact_bound,certificate,eta,phi,phi1,phi2,phi3,fractional_bound,"
         "integer_bound\n";
  for (const ResultRow& r : rows) {
    out << to_string(sweep) << ',';
    if (!std::isnan(r.sweep_value)) out << r.sweep_value;
    out << ',' << r.seed << ',' << to_string(r.algorithm) << ',' << (r.feasible ? "ok" : "infeasible") << ',';
    if (r.feasible) {
      number(out, r.ratio);
    } else {
      out << "infeasible";
    }
    out << ',' << r.denominator_kind << ',';
    number(out, r.denominator);
    for (double v : {r.cost.total(), r.cost.running, r.cost.deploy, r.cost.transfer, r.cost.delay}) {
      out << ',';
      if (r.feasible) number(out, v);
    }
    for (double v : {r.relaxation, r.exact, r.exact_bound, r.certificate, r.bounds.eta, r.bounds.phi, r.bounds.phi1,
                     r.bounds.phi2, r.bounds.phi3, r.bounds.fractional_bound(), r.bounds.integer_bound()}) {
      out << ',';
      number(out, v);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void write_summary_json(std::ostream& out, SweepParam sweep, const std::vector<SummaryRow>& summary) {
  using nlohmann::json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json points = json::array();
  for (const SummaryRow& s : summary) {
    points.push_back({{"sweep_value", num(s.sweep_value)},
                      {"algorithm", to_string(s.algorithm)},
                      {"runs", s.runs},
                      {"infeasible", s.infeasible},
                      {"infeasible_rate", s.runs > 0 ? static_cast<double>(s.infeasible) / s.runs : 0.0},
                      {"rated", s.rated},
                      {"mean_ratio", num(s.mean_ratio)},
                      {"stddev_ratio", num(s.stddev_ratio)},
                      {"mean_cost", num(s.mean_cost)}});
  }
  out << json{{"sweep", to_string(sweep)}, {"points", points}}.dump(2) << '\n';
}

}  // namespace nfv
