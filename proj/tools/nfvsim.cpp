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

// nfvsim: experiment runner and instance tools.
//
//   nfvsim run --generate --sweep shock --values 1,10,100 --seeds 1-10 --out out/
//   nfvsim run --instance inst.json --trace trace.csv --oracles exact --out out/
//   nfvsim generate --datacenters 6 --out gen/
//   nfvsim validate --instance inst.json [--trace trace.csv]
//   nfvsim cluster --instance inst.json

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nfv/clustering.hpp"
#include "nfv/experiment.hpp"
#include "nfv/workload.hpp"

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
               item.end());
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "3", "1,4,7" or "1-10" (inclusive ranges, mixable: "1-3,8").
std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const std::string& item : split_list(s)) {
    const std::size_t dash = item.find('-');
    std::size_t used = 0;
    if (dash == std::string::npos) {
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument("bad seed '" + item + "'");
      continue;
    }
    const std::string a = item.substr(0, dash);
    const std::string b = item.substr(dash + 1);
    std::size_t ua = 0, ub = 0;
    const std::uint64_t lo = std::stoull(a, &ua);
    const std::uint64_t hi = std::stoull(b, &ub);
    if (ua != a.size() || ub != b.size() || hi < lo) throw std::invalid_argument("bad seed range '" + item + "'");
    for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("no seeds given");
  return out;
}

std::vector<double> parse_values(const std::string& s) {
  std::vector<double> out;
  for (const std::string& item : split_list(s)) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad sweep value '" + item + "'");
  }
  return out;
}

// Knobs shared by run and generate.
void add_workload_options(CLI::App* app, nfv::WorkloadConfig& cfg, bool& desk) {
  app->add_flag("--desk", desk, "desk-scale preset for oracle-checked runs (applied before the knobs below)");
  app->add_option("--datacenters", cfg.num_datacenters, "number of datacenters")->capture_default_str();
  app->add_option("--chains", cfg.num_chains, "number of service chains (one flow each)")->capture_default_str();
  app->add_option("--min-chain-length", cfg.min_chain_length)->capture_default_str();
  app->add_option("--max-chain-length", cfg.max_chain_length, "clipped to the catalog size")->capture_default_str();
  app->add_option("--slots", cfg.horizon, "time slots")->capture_default_str();
  app->add_option("--shock", cfg.shock_level, "flash-crowd rate multiplier")->capture_default_str();
  app->add_option("--epsilon", cfg.epsilon, "regularizer epsilon")->capture_default_str();
  app->add_option("--base-rate", cfg.base_rate, "mean per-flow rate, Mbps")->capture_default_str();
  app->add_option("--deploy-ratio", cfg.deploy_ratio, "deployment cost over running cost")->capture_default_str();
  app->add_option("--flash-windows", cfg.flash_windows, "flash crowds per flow")->capture_default_str();
  app->add_option("--flash-length", cfg.flash_length, "slots per flash crowd")->capture_default_str();
}

nfv::WorkloadConfig desk_config() {
  nfv::WorkloadConfig cfg;
  cfg.num_datacenters = 4;
  cfg.num_chains = 3;
  cfg.horizon = 6;
  cfg.flash_length = 2;
  return cfg;
}

// CLI11 writes defaults into cfg before parsing; the preset overwrites only
// fields the user left alone.
void apply_desk(CLI::App* app, nfv::WorkloadConfig& cfg) {
  const nfv::WorkloadConfig d = desk_config();
  auto untouched = [&](const char* name) { return app->count(name) == 0; };
  if (untouched("--datacenters")) cfg.num_datacenters = d.num_datacenters;
  if (untouched("--chains")) cfg.num_chains = d.num_chains;
  if (untouched("--slots")) cfg.horizon = d.horizon;
  if (untouched("--flash-length")) cfg.flash_length = d.flash_length;
}

nfv::ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nfv::read_instance_json(in);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out.precision(10);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nfvsim: online VNF chain scaling simulator"};
  app.require_subcommand(1);

  // run
  nfv::ExperimentSpec spec;
  bool generate = false;
  bool desk = false;
  std::string algorithms = "orfa,coa,irr,gr";
  std::string oracles = "relaxation";
  std::string sweep = "none";
  std::string values;
  std::string seeds = "1";
  std::string out_dir;
  spec.jobs = std::max(1u, std::thread::hardware_concurrency());
  CLI::App* run = app.add_subcommand("run", "run algorithms over a sweep and write results.csv and summary.json");
  auto* inst_opt = run->add_option("--instance", spec.instance_path, "instance JSON");
  run->add_flag("--generate", generate, "generate the instance (default when --instance is absent)")
      ->excludes(inst_opt);
  run->add_option("--trace", spec.trace_path, "trace CSV for --instance")->needs(inst_opt);
  run->add_option("--algorithms", algorithms, "comma list of orfa, coa, irr, gr")->capture_default_str();
  run->add_option("--oracles", oracles, "comma list of relaxation, exact, certificate")->capture_default_str();
  run->add_option("--sweep", sweep, "none, datacenters, slots, shock or epsilon")->capture_default_str();
  run->add_option("--values", values, "comma list of sweep values");
  run->add_option("--seeds", seeds, "seed list or range, e.g. 1-10")->capture_default_str();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--exact-time-limit", spec.exact.time_limit_s, "seconds per exact solve")->capture_default_str();
  run->add_option("--exact-node-limit", spec.exact.node_limit, "nodes per exact solve")->capture_default_str();
  run->add_option("--exact-gap", spec.exact.relative_gap, "relative gap accepted as optimal")->capture_default_str();
  run->add_option("--jobs", spec.jobs, "parallel runs")->check(CLI::PositiveNumber);
  add_workload_options(run, spec.workload, desk);

  // generate
  nfv::WorkloadConfig gen_cfg;
  bool gen_desk = false;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate", "write a generated instance.json and trace.csv");
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--out", gen_out, "output directory")->required();
  add_workload_options(gen, gen_cfg, gen_desk);

  // validate
  std::string val_instance;
  std::string val_trace;
  CLI::App* val = app.add_subcommand("validate", "check an instance JSON (and trace CSV)");
  val->add_option("--instance", val_instance)->required();
  val->add_option("--trace", val_trace);

  // cluster
  std::string cl_instance;
  CLI::App* cl = app.add_subcommand("cluster", "print the datacenter clusters of an instance as CSV");
  cl->add_option("--instance", cl_instance)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (desk) apply_desk(run, spec.workload);
      for (const std::string& a : split_list(algorithms)) spec.algorithms.push_back(nfv::parse_algorithm(a));
      for (const std::string& o : split_list(oracles)) spec.oracles.push_back(nfv::parse_oracle(o));
      spec.sweep = nfv::parse_sweep(sweep);
      spec.values = parse_values(values);
      spec.seeds = parse_seeds(seeds);
      spec.validate();
      if (spec.instance_path.empty()) spec.workload.validate();

      const std::vector<nfv::ResultRow> rows = nfv::run_experiment(spec);
      const std::vector<nfv::SummaryRow> summary = nfv::summarize(rows);
      fs::create_directories(out_dir);
      std::ofstream res = open_out(fs::path(out_dir) / "results.csv");
      nfv::write_results_csv(res, spec.sweep, rows);
      std::ofstream sum = open_out(fs::path(out_dir) / "summary.json");
      nfv::write_summary_json(sum, spec.sweep, summary);
      for (const nfv::SummaryRow& s : summary) {
        if (spec.sweep != nfv::SweepParam::kNone) std::cout << nfv::to_string(spec.sweep) << '=' << s.sweep_value << ' ';
        std::cout << nfv::to_string(s.algorithm)
                  << " runs=" << s.runs << " infeasible=" << s.infeasible << " mean_ratio=" << s.mean_ratio
                  << " sd=" << s.stddev_ratio << '\n';
      }
      return 0;
    }
    if (*gen) {
      if (gen_desk) apply_desk(gen, gen_cfg);
      gen_cfg.seed = gen_seed;
      gen_cfg.validate();
      const nfv::Workload w = nfv::generate_workload(gen_cfg);
      fs::create_directories(gen_out);
      std::ofstream inst = open_out(fs::path(gen_out) / "instance.json");
      nfv::write_instance_json(inst, w.instance);
      std::ofstream trace = open_out(fs::path(gen_out) / "trace.csv");
      nfv::write_trace_csv(trace, w.trace.slots);
      std::cout << "wrote " << w.instance.num_datacenters() << " datacenters, " << w.instance.num_flows()
                << " flows, " << w.trace.slots.size() << " slots to " << gen_out << '\n';
      return 0;
    }
    if (*val) {
      const nfv::ProblemInstance inst = load_instance(val_instance);
      std::size_t slots = 0;
      if (!val_trace.empty()) {
        std::ifstream in(val_trace);
        if (!in) throw std::runtime_error("cannot open " + val_trace);
        slots = nfv::read_trace_csv(in, inst).size();
      }
      std::cout << "ok: " << inst.num_datacenters() << " datacenters, " << inst.num_vnfs() << " vnfs, "
                << inst.num_flows() << " flows, alpha " << inst.delay.alpha();
      if (!val_trace.empty()) std::cout << ", " << slots << " slots";
      std::cout << '\n';
      return 0;
    }
    if (*cl) {
      nfv::write_clusters_csv(std::cout, nfv::cluster(load_instance(cl_instance)));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "nfvsim: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
