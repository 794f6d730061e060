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


#include "nfv/workload.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nfv {

namespace {

using nlohmann::json;

struct Hub {
  double x, y, weight;
};

// Coordinates in km on a flat map; weights are relative populations.
constexpr Hub kHubs[] = {
    {-7400, 4500, 3.0},  {-8700, 4600, 2.0}, {-12200, 4200, 2.0}, {-9700, 3600, 1.5},
    {0, 5700, 3.0},      {900, 5600, 2.0},   {250, 5400, 2.0},    {-400, 4400, 1.0},
    {15500, 3900, 3.0},  {11400, 150, 2.0},  {8100, 2100, 2.0},   {14100, 4100, 1.5},
};
constexpr double kHubSpreadKm = 250.0;

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

// Box-Muller; std::normal_distribution differs between standard libraries.
double normal(Rng& rng) {
  const double u = 1.0 - rng.uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * rng.uniform());
}

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + std::min(hi - lo, static_cast<int>(rng.uniform() * (hi - lo + 1)));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("workload config: " + what);
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("instance json: missing \"") + key + "\"");
  return j.at(key).get<T>();
}

}  // namespace

void WorkloadConfig::validate() const {
  require(num_datacenters >= 1, "num_datacenters must be positive");
  require(num_chains >= 1, "num_chains must be positive");
  require(min_chain_length >= 1 && min_chain_length <= max_chain_length,
          "chain length range must satisfy 1 <= min <= max");
  require(min_chain_length <= static_cast<int>(default_vnf_catalog().size()),
          "min_chain_length exceeds the catalog size");
  require(shock_level > 0.0, "shock_level must be positive");
  require(horizon >= 1, "horizon must be positive");
  require(delay_lo > 0.0 && delay_lo <= delay_hi, "delay multiplier range must satisfy 0 < lo <= hi");
  require(epsilon > 0.0, "epsilon must be positive");
  require(base_rate > 0.0, "base_rate must be positive");
  require(mbps_per_unit > 0.0, "mbps_per_unit must be positive");
  require(diurnal_amplitude >= 0.0 && diurnal_amplitude < 1.0, "diurnal_amplitude must be in [0, 1)");
  require(diurnal_period >= 1, "diurnal_period must be positive");
  require(rate_noise >= 0.0, "rate_noise must be nonnegative");
  require(flash_windows >= 0 && flash_length >= 1, "flash windows need a positive length");
  require(instance_price > 0.0, "instance_price must be positive");
  require(price_spread >= 0.0 && price_spread < 1.0, "price_spread must be in [0, 1)");
  require(deploy_ratio >= 0.0, "deploy_ratio must be nonnegative");
  require(ingress_cost >= 0.0 && egress_cost >= 0.0, "transfer costs must be nonnegative");
  require(km_per_delay_unit > 0.0, "km_per_delay_unit must be positive");
}

Point sample_population(Rng& rng) {
  double total = 0.0;
  for (const Hub& h : kHubs) total += h.weight;
  double pick = rng.uniform() * total;
  const Hub* hub = &kHubs[0];
  for (const Hub& h : kHubs) {
    hub = &h;
    if ((pick -= h.weight) < 0.0) break;
  }
  const double dx = normal(rng) * kHubSpreadKm;
  const double dy = normal(rng) * kHubSpreadKm;
  return {hub->x + dx, hub->y + dy};
}

Eigen::MatrixXd delay_matrix(const std::vector<Point>& points, double km_per_unit, double lo, double hi,
                             Rng& rng) {
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const auto& p = points[static_cast<std::size_t>(a)];
      const auto& q = points[static_cast<std::size_t>(b)];
      const double d = std::hypot(p.x - q.x, p.y - q.y) / km_per_unit;
      const double ab = uniform(rng, lo, hi);
      const double ba = uniform(rng, lo, hi);
      l(a, b) = l(b, a) = d * 0.5 * (ab + ba);
    }
  }
  return l;
}

Topology generate_topology(const WorkloadConfig& cfg, int num_endpoints, std::uint64_t seed) {
  Rng rng = Rng(seed).split({1});
  Topology topo;
  for (int i = 0; i < cfg.num_datacenters; ++i) topo.datacenters.push_back(sample_population(rng));
  for (int e = 0; e < num_endpoints; ++e) topo.endpoints.push_back(sample_population(rng));
  std::vector<Point> all = topo.datacenters;
  all.insert(all.end(), topo.endpoints.begin(), topo.endpoints.end());
  Eigen::MatrixXd l = delay_matrix(all, cfg.km_per_delay_unit, cfg.delay_lo, cfg.delay_hi, rng);
  const double alpha = all.size() < 3 ? 1.0 : estimate_alpha(l);
  topo.delay = DelayMatrix(std::move(l), alpha);
  return topo;
}

std::vector<CatalogEntry> default_vnf_catalog() {
  return {
      {"Firewall", "m4.xlarge", 900.0, 0.8, 1.0, 2.0},
      {"Proxy", "m4.xlarge", 900.0, 1.0, 1.0, 2.0},
      {"NAT", "m4.large", 900.0, 1.0, 1.0, 1.0},
      {"IDS", "m4.2xlarge", 600.0, 0.8, 1.0, 4.0},
  };
}

Trace generate_traffic(const WorkloadConfig& cfg, const ProblemInstance& inst, std::uint64_t seed) {
  const int T = cfg.horizon;
  const int K = inst.num_flows();
  Trace tr;
  tr.base.assign(static_cast<std::size_t>(T), std::vector<double>(static_cast<std::size_t>(K), 0.0));
  tr.flash.assign(static_cast<std::size_t>(T), std::vector<bool>(static_cast<std::size_t>(K), false));
  const int len = std::min(cfg.flash_length, T);
  for (int k = 0; k < K; ++k) {
    Rng rng = Rng(seed).split({2, static_cast<std::uint64_t>(k)});
    const double mean = cfg.base_rate / cfg.mbps_per_unit * uniform(rng, 0.5, 1.5);
    const double phase = uniform(rng, 0.0, cfg.diurnal_period);
    for (int t = 0; t < T; ++t) {
      const double wave = 1.0 + cfg.diurnal_amplitude * std::sin(2.0 * std::numbers::pi * (t + phase) / cfg.diurnal_period);
      const double noise = std::max(0.0, 1.0 + cfg.rate_noise * normal(rng));
      tr.base[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = mean * wave * noise;
    }
    for (int w = 0; w < cfg.flash_windows; ++w) {
      const int start = uniform_int(rng, 0, T - len);
      for (int t = start; t < start + len; ++t) tr.flash[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = true;
    }
  }
  for (int t = 0; t < T; ++t) {
    std::vector<double> rates(static_cast<std::size_t>(K));
    for (std::size_t k = 0; k < rates.size(); ++k) {
      const double b = tr.base[static_cast<std::size_t>(t)][k];
      rates[k] = tr.flash[static_cast<std::size_t>(t)][k] ? b * cfg.shock_level : b;
    }
    tr.slots.push_back(make_slot(inst, t + 1, std::move(rates)));
  }
  return tr;
}

Workload generate_workload(const WorkloadConfig& cfg) {
  cfg.validate();
  Workload w;
  w.topology = generate_topology(cfg, 2 * cfg.num_chains, cfg.seed);
  ProblemInstance& inst = w.instance;
  inst.horizon = cfg.horizon;
  inst.epsilon = cfg.epsilon;
  inst.delay = w.topology.delay;

  Rng prices = Rng(cfg.seed).split({3});
  const int I = cfg.num_datacenters;
  std::vector<double> price(static_cast<std::size_t>(I));
  for (int i = 0; i < I; ++i) {
    price[static_cast<std::size_t>(i)] = cfg.instance_price * uniform(prices, 1.0 - cfg.price_spread, 1.0 + cfg.price_spread);
    inst.datacenters.push_back({i, cfg.ingress_cost * uniform(prices, 0.5, 1.5), cfg.egress_cost * uniform(prices, 0.5, 1.5)});
  }
  const std::vector<CatalogEntry> catalog = default_vnf_catalog();
  for (std::size_t m = 0; m < catalog.size(); ++m) {
    VnfType v;
    v.id = static_cast<int>(m);
    v.name = catalog[m].name;
    for (int i = 0; i < I; ++i) {
      const double c = catalog[m].cost_units * price[static_cast<std::size_t>(i)];
      v.capacity.push_back(catalog[m].capacity / cfg.mbps_per_unit);
      v.running_cost.push_back(c);
      v.deploy_cost.push_back(cfg.deploy_ratio * c);
    }
    inst.vnfs.push_back(std::move(v));
  }

  Rng chains = Rng(cfg.seed).split({4});
  const int M = static_cast<int>(catalog.size());
  const int hi = std::min(cfg.max_chain_length, M);
  for (int k = 0; k < cfg.num_chains; ++k) {
    std::vector<int> order(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) order[static_cast<std::size_t>(m)] = m;
    for (int a = M - 1; a > 0; --a) std::swap(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(uniform_int(chains, 0, a))]);
    order.resize(static_cast<std::size_t>(uniform_int(chains, cfg.min_chain_length, hi)));
    std::vector<double> beta;
    for (int m : order) beta.push_back(uniform(chains, catalog[static_cast<std::size_t>(m)].beta_lo, catalog[static_cast<std::size_t>(m)].beta_hi));
    inst.chains.push_back(ServiceChain::from_sequence(k, order, beta));
    inst.flows.push_back({k, I + 2 * k, I + 2 * k + 1, k});
  }
  w.trace = generate_traffic(cfg, inst, cfg.seed);
  return w;
}

void write_instance_json(std::ostream& out, const ProblemInstance& inst) {
  json j;
  j["horizon"] = inst.horizon;
  j["epsilon"] = inst.epsilon;
  j["datacenters"] = json::array();
  for (const Datacenter& d : inst.datacenters) {
    j["datacenters"].push_back({{"id", d.id}, {"ingress_cost", d.ingress_cost}, {"egress_cost", d.egress_cost}});
  }
  json rows = json::array();
  const Eigen::MatrixXd& l = inst.delay.matrix();
  for (Eigen::Index a = 0; a < l.rows(); ++a) {
    std::vector<double> row;
    for (Eigen::Index b = 0; b < l.cols(); ++b) row.push_back(l(a, b));
    rows.push_back(row);
  }
  j["delay"] = {{"alpha", inst.delay.alpha()}, {"matrix", rows}};
  j["vnfs"] = json::array();
  for (const VnfType& v : inst.vnfs) {
    j["vnfs"].push_back({{"id", v.id},
                         {"name", v.name},
                         {"capacity", v.capacity},
                         {"deploy_cost", v.deploy_cost},
                         {"running_cost", v.running_cost}});
  }
  j["chains"] = json::array();
  for (const ServiceChain& c : inst.chains) j["chains"].push_back({{"id", c.id()}, {"vnfs", c.vnfs()}, {"beta", c.beta()}});
  j["flows"] = json::array();
  for (const FlowSpec& f : inst.flows) {
    j["flows"].push_back({{"id", f.id}, {"source", f.source}, {"destination", f.destination}, {"chain", f.chain}});
  }
  out << j.dump(1) << '\n';
}

ProblemInstance read_instance_json(std::istream& in) {
  ProblemInstance inst;
  try {
    const json j = json::parse(in);
    inst.horizon = field<int>(j, "horizon");
    inst.epsilon = field<double>(j, "epsilon");
    for (const json& d : field<json>(j, "datacenters")) {
      inst.datacenters.push_back({field<int>(d, "id"), field<double>(d, "ingress_cost"), field<double>(d, "egress_cost")});
    }
    const json delay = field<json>(j, "delay");
    const auto rows = field<std::vector<std::vector<double>>>(delay, "matrix");
    Eigen::MatrixXd l(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t a = 0; a < rows.size(); ++a) {
      if (rows[a].size() != rows.size()) throw std::invalid_argument("instance json: delay matrix is not square");
      for (std::size_t b = 0; b < rows.size(); ++b) l(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = rows[a][b];
    }
    inst.delay = DelayMatrix(std::move(l), field<double>(delay, "alpha"));
    for (const json& v : field<json>(j, "vnfs")) {
      VnfType t;
      t.id = field<int>(v, "id");
      t.name = v.value("name", "vnf" + std::to_string(t.id));
      t.capacity = field<std::vector<double>>(v, "capacity");
      t.deploy_cost = field<std::vector<double>>(v, "deploy_cost");
      t.running_cost = v.value("running_cost", std::vector<double>{});
      inst.vnfs.push_back(std::move(t));
    }
    for (const json& c : field<json>(j, "chains")) {
      inst.chains.push_back(ServiceChain::from_sequence(field<int>(c, "id"), field<std::vector<int>>(c, "vnfs"),
                                                        field<std::vector<double>>(c, "beta")));
    }
    for (const json& f : field<json>(j, "flows")) {
      inst.flows.push_back({field<int>(f, "id"), field<int>(f, "source"), field<int>(f, "destination"), field<int>(f, "chain")});
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance json: ") + e.what());
  }
  const ValidationReport rep = validate_instance(inst);
  if (!rep.ok()) {
    throw std::invalid_argument("instance json: " + rep.violations[0].kind + ": " + rep.violations[0].detail);
  }
  return inst;
}

void write_trace_csv(std::ostream& out, const std::vector<SlotInput>& slots) {
  out << "t,flow_id,rate\n";
  std::ostringstream os;
  os.precision(17);
  for (const SlotInput& s : slots) {
    for (std::size_t k = 0; k < s.rate.size(); ++k) os << s.t << ',' << k << ',' << s.rate[k] << '\n';
  }
  out << os.str();
}

std::vector<SlotInput> read_trace_csv(std::istream& in, const ProblemInstance& inst) {
  const int T = inst.horizon;
  const int K = inst.num_flows();
  std::vector<std::vector<double>> rate(static_cast<std::size_t>(T), std::vector<double>(static_cast<std::size_t>(K), 0.0));
  std::vector<std::vector<bool>> seen(static_cast<std::size_t>(T), std::vector<bool>(static_cast<std::size_t>(K), false));
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line) || line.substr(0, line.find_last_not_of("\r") + 1) != "t,flow_id,rate") {
    throw std::invalid_argument("trace csv: expected header t,flow_id,rate");
  }
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("trace csv line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c, ',')) fail("expected 3 fields");
    int t = 0, k = 0;
    double r = 0.0;
    try {
      std::size_t pa = 0, pb = 0, pc = 0;
      t = std::stoi(a, &pa);
      k = std::stoi(b, &pb);
      r = std::stod(c, &pc);
      if (pa != a.size() || pb != b.size() || pc != c.size()) fail("trailing characters");
    } catch (const std::logic_error&) {
      fail("unparsable number");
    }
    if (t < 1 || t > T) fail("slot " + std::to_string(t) + " outside [1, " + std::to_string(T) + "]");
    if (k < 0 || k >= K) fail("unknown flow " + std::to_string(k));
    if (!(r >= 0.0) || !std::isfinite(r)) fail("rate must be finite and nonnegative");
    auto&& s = seen[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(k)];
    if (s) fail("duplicate row for slot " + std::to_string(t) + " flow " + std::to_string(k));
    s = true;
    rate[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(k)] = r;
  }
  std::vector<SlotInput> slots;
  for (int t = 1; t <= T; ++t) slots.push_back(make_slot(inst, t, rate[static_cast<std::size_t>(t - 1)]));
  return slots;
}

}  // namespace nfv
