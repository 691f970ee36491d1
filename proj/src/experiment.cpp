#include "qnet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "qnet/errors.hpp"
#include "qnet/rng.hpp"

#ifndef QNET_VERSION
#define QNET_VERSION "0.0.0"
#endif

namespace qnet {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw InvalidConfig(key + ": " + what);
}

std::string join_key(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Strict object reader: every key must be consumed by one of the getters.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string prefix)
      : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) fail(prefix_.empty() ? "config" : prefix_,
                                "must be an object");
    for (const auto& item : obj_.items()) unknown_.insert(item.key());
  }

  const json* find(const std::string& key) {
    unknown_.erase(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string path(const std::string& key) const {
    return join_key(prefix_, key);
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(path(key), "must be a number");
      out = v->get<double>();
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(path(key), "must be an integer");
      if constexpr (std::is_unsigned_v<Int>) {
        if (!v->is_number_unsigned()) fail(path(key), "must be non-negative");
      }
      out = v->get<Int>();
    }
  }

  void finish() const {
    if (!unknown_.empty()) fail(path(*unknown_.begin()), "unknown key");
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::set<std::string> unknown_;
};

void read_range(ObjectReader& r, const std::string& key, Range& out) {
  const json* v = r.find(key);
  if (v == nullptr) return;
  if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() ||
      !(*v)[1].is_number()) {
    fail(r.path(key), "must be a [min, max] pair of numbers");
  }
  out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
}

TopologyConfig read_topology(const json& doc, const std::string& prefix) {
  TopologyConfig t;
  ObjectReader r(doc, prefix);
  r.integer("node_count", t.node_count);
  r.integer("seed", t.seed);
  if (const json* model = r.find("model")) {
    const std::string mprefix = r.path("model");
    ObjectReader m(*model, mprefix);
    std::string type = "waxman";
    if (const json* ty = m.find("type")) {
      if (!ty->is_string()) fail(m.path("type"), "must be a string");
      type = ty->get<std::string>();
    }
    if (type == "waxman") {
      Waxman w;
      m.number("alpha", w.alpha);
      m.number("beta", w.beta);
      m.number("area_km", w.area_km);
      t.model = w;
    } else if (type == "erdos_renyi") {
      ErdosRenyi e;
      m.number("edge_probability", e.edge_probability);
      t.model = e;
    } else {
      fail(m.path("type"), "unknown model '" + type +
                               "' (expected waxman or erdos_renyi)");
    }
    m.finish();
  }
  if (const json* ranges = r.find("param_ranges")) {
    ObjectReader p(*ranges, r.path("param_ranges"));
    read_range(p, "length_km", t.param_ranges.length_km);
    read_range(p, "p_success", t.param_ranges.p_success);
    read_range(p, "tau_p_s", t.param_ranges.tau_p_s);
    read_range(p, "tau_d_s", t.param_ranges.tau_d_s);
    read_range(p, "base_fidelity", t.param_ranges.base_fidelity);
    read_range(p, "coherence_time_s", t.param_ranges.coherence_time_s);
    p.finish();
  }
  r.finish();
  return t;
}

ordered_json range_json(const Range& r) { return ordered_json::array({r.min, r.max}); }

ordered_json topology_config_json(const TopologyConfig& t) {
  ordered_json model;
  if (const auto* w = std::get_if<Waxman>(&t.model)) {
    model = {{"type", "waxman"},
             {"alpha", w->alpha},
             {"beta", w->beta},
             {"area_km", w->area_km}};
  } else {
    model = {{"type", "erdos_renyi"},
             {"edge_probability",
              std::get<ErdosRenyi>(t.model).edge_probability}};
  }
  const auto& p = t.param_ranges;
  ordered_json ranges = {{"length_km", range_json(p.length_km)},
                         {"p_success", range_json(p.p_success)},
                         {"tau_p_s", range_json(p.tau_p_s)},
                         {"tau_d_s", range_json(p.tau_d_s)},
                         {"base_fidelity", range_json(p.base_fidelity)},
                         {"coherence_time_s", range_json(p.coherence_time_s)}};
  return {{"model", model}, {"param_ranges", ranges}, {"seed", t.seed}};
}

// Rethrows the active exception with `prefix` prepended, keeping its type.
[[noreturn]] void rethrow_annotated(const std::string& prefix) {
  try {
    throw;
  } catch (const InvalidConfig& e) {
    throw InvalidConfig(prefix + e.what());
  } catch (const ZeroProbability&) {
    throw;
  } catch (const UnknownNode& e) {
    throw UnknownNode(prefix + e.what());
  } catch (const NotAPath& e) {
    throw NotAPath(prefix + e.what());
  } catch (const Unreachable& e) {
    throw Unreachable(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (network_sizes.empty()) fail("network_sizes", "must not be empty");
  for (std::size_t size : network_sizes) {
    if (size < 2) {
      fail("network_sizes", "every size must be >= 2, got " +
                                std::to_string(size));
    }
    const auto in_range = [&](std::int64_t idx) {
      const auto n = static_cast<std::int64_t>(size);
      return idx >= -n && idx < n;
    };
    if (!in_range(source)) {
      fail("source", "index " + std::to_string(source) +
                         " outside a network of " + std::to_string(size));
    }
    if (!in_range(destination)) {
      fail("destination", "index " + std::to_string(destination) +
                              " outside a network of " + std::to_string(size));
    }
    if (resolve_node(source, size) == resolve_node(destination, size)) {
      fail("destination", "resolves to the source node for size " +
                              std::to_string(size));
    }
  }
  if (protocols.empty()) fail("protocols", "must not be empty");
  if (repetitions < 1) fail("repetitions", "must be positive");
  TopologyConfig probe = topology;
  probe.node_count = 2;
  try {
    probe.validate();
  } catch (const InvalidConfig& e) {
    throw InvalidConfig(std::string("topology.") + e.what());
  }
  ga.validate();
  ql.validate();
}

NodeId resolve_node(std::int64_t index, std::size_t node_count) {
  const auto n = static_cast<std::int64_t>(node_count);
  return static_cast<NodeId>(index < 0 ? n + index : index);
}

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t size,
                       std::size_t repetition) {
  return derive_seed(master_seed, {size, repetition});
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                unsigned threads) {
  config.validate();

  std::vector<std::size_t> sizes = config.network_sizes;
  std::vector<Protocol> protocols = config.protocols;
  std::sort(protocols.begin(), protocols.end());
  protocols.erase(std::unique(protocols.begin(), protocols.end()),
                  protocols.end());

  struct Cell {
    std::size_t size;
    std::size_t repetition;
  };
  std::vector<Cell> cells;
  for (std::size_t size : sizes) {
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      cells.push_back({size, rep});
    }
  }
  std::vector<std::vector<ReportRow>> results(cells.size());

  auto run_cell = [&](const Cell& cell) {
    const std::uint64_t seed = run_seed(config.master_seed, cell.size,
                                        cell.repetition);
    TopologyConfig topo = config.topology;
    topo.node_count = cell.size;
    topo.seed = derive_seed(seed, {1, config.topology.seed});
    GaConfig ga = config.ga;
    ga.seed = derive_seed(seed, {2, config.ga.seed});
    QlConfig ql = config.ql;
    ql.seed = derive_seed(seed, {3, config.ql.seed});

    const NetworkGraph graph = generate_network(topo);
    const std::uint64_t hash = topology_hash(graph);
    const NodeId src = resolve_node(config.source, cell.size);
    const NodeId dst = resolve_node(config.destination, cell.size);

    std::vector<ReportRow> rows;
    for (Protocol p : protocols) {
      RouteResult r = route(p, graph, src, dst, ga, ql);
      ReportRow row;
      row.size = cell.size;
      row.protocol = p;
      row.repetition = cell.repetition;
      row.fidelity = r.metrics.fidelity;
      row.exec_time_s = r.exec_time_s;
      row.path_length = r.metrics.path_length;
      row.node_sequence = std::move(r.metrics.node_sequence);
      row.reached_destination = r.reached_destination;
      row.run_seed = seed;
      row.topology_hash = hash;
      rows.push_back(std::move(row));
    }
    return rows;
  };

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        try {
          results[i] = run_cell(cells[i]);
        } catch (const Error&) {
          rethrow_annotated("size " + std::to_string(cells[i].size) +
                            ", repetition " +
                            std::to_string(cells[i].repetition) + ": ");
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next = cells.size();
      }
    }
  };
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  ExperimentReport report;
  for (auto& rows : results) {
    for (auto& row : rows) report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ReportRow& a, const ReportRow& b) {
                     return std::tie(a.size, a.protocol, a.repetition) <
                            std::tie(b.size, b.protocol, b.repetition);
                   });
  report.metadata.config = config_to_json(config);
  report.metadata.tool_version = QNET_VERSION;
  report.metadata.timestamp = utc_timestamp();
  return report;
}

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig c;
  ObjectReader r(doc, "");
  if (const json* sizes = r.find("network_sizes")) {
    if (!sizes->is_array()) fail("network_sizes", "must be an array");
    c.network_sizes.clear();
    for (const auto& s : *sizes) {
      if (!s.is_number_unsigned()) {
        fail("network_sizes", "entries must be non-negative integers");
      }
      c.network_sizes.push_back(s.get<std::size_t>());
    }
  }
  if (const json* topo = r.find("topology")) {
    c.topology = read_topology(*topo, "topology");
  }
  if (const json* protocols = r.find("protocols")) {
    if (!protocols->is_array()) fail("protocols", "must be an array");
    c.protocols.clear();
    for (const auto& p : *protocols) {
      auto parsed = p.is_string() ? parse_protocol(p.get<std::string>())
                                  : std::nullopt;
      if (!parsed) {
        fail("protocols", "unknown protocol " + p.dump() +
                              " (expected dijkstra, bellman-ford, genetic, "
                              "qlearning)");
      }
      c.protocols.push_back(*parsed);
    }
  }
  if (const json* ga = r.find("ga")) {
    ObjectReader g(*ga, "ga");
    g.integer("population_size", c.ga.population_size);
    g.integer("generations", c.ga.generations);
    g.number("crossover_rate", c.ga.crossover_rate);
    g.number("mutation_rate", c.ga.mutation_rate);
    g.integer("elitism_count", c.ga.elitism_count);
    g.integer("seed", c.ga.seed);
    g.finish();
  }
  if (const json* ql = r.find("ql")) {
    ObjectReader q(*ql, "ql");
    q.integer("episodes", c.ql.episodes);
    q.number("learning_rate", c.ql.learning_rate);
    q.number("discount", c.ql.discount);
    q.number("epsilon", c.ql.epsilon);
    q.number("step_penalty", c.ql.step_penalty);
    q.number("goal_reward", c.ql.goal_reward);
    q.integer("max_steps_factor", c.ql.max_steps_factor);
    q.integer("seed", c.ql.seed);
    q.finish();
  }
  r.integer("source", c.source);
  r.integer("destination", c.destination);
  r.integer("repetitions", c.repetitions);
  r.integer("master_seed", c.master_seed);
  r.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw InvalidConfig(std::string("config: ") + e.what());
  }
  return config_from_json(doc);
}

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json protocols = ordered_json::array();
  for (Protocol p : c.protocols) protocols.push_back(std::string(to_string(p)));
  return {
      {"network_sizes", c.network_sizes},
      {"topology", topology_config_json(c.topology)},
      {"protocols", protocols},
      {"ga",
       {{"population_size", c.ga.population_size},
        {"generations", c.ga.generations},
        {"crossover_rate", c.ga.crossover_rate},
        {"mutation_rate", c.ga.mutation_rate},
        {"elitism_count", c.ga.elitism_count},
        {"seed", c.ga.seed}}},
      {"ql",
       {{"episodes", c.ql.episodes},
        {"learning_rate", c.ql.learning_rate},
        {"discount", c.ql.discount},
        {"epsilon", c.ql.epsilon},
        {"step_penalty", c.ql.step_penalty},
        {"goal_reward", c.ql.goal_reward},
        {"max_steps_factor", c.ql.max_steps_factor},
        {"seed", c.ql.seed}}},
      {"source", c.source},
      {"destination", c.destination},
      {"repetitions", c.repetitions},
      {"master_seed", c.master_seed},
  };
}

std::string join_path(const std::vector<NodeId>& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out += '-';
    out += std::to_string(path[i]);
  }
  return out;
}

std::string csv_line(const ReportRow& row) {
  char fid[32];
  char time[32];
  std::snprintf(fid, sizeof fid, "%.4f", row.fidelity);
  std::snprintf(time, sizeof time, "%.6g", row.exec_time_s);
  std::ostringstream out;
  out << row.size << ',' << to_string(row.protocol) << ',' << row.repetition
      << ',' << join_path(row.node_sequence) << ',' << fid << ',' << time
      << ',' << row.path_length << ','
      << (row.reached_destination ? "true" : "false") << ',' << row.run_seed;
  return out.str();
}

void write_csv(std::ostream& out, const ExperimentReport& report) {
  out << kCsvHeader << '\n';
  for (const auto& row : report.rows) out << csv_line(row) << '\n';
}

ordered_json report_to_json(const ExperimentReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"size", r.size},
                    {"protocol", std::string(to_string(r.protocol))},
                    {"repetition", r.repetition},
                    {"node_sequence", r.node_sequence},
                    {"fidelity", r.fidelity},
                    {"exec_time_s", r.exec_time_s},
                    {"path_length", r.path_length},
                    {"reached_destination", r.reached_destination},
                    {"run_seed", r.run_seed},
                    {"topology_hash", r.topology_hash}});
  }
  return {{"rows", rows},
          {"metadata",
           {{"config", report.metadata.config},
            {"tool_version", report.metadata.tool_version},
            {"timestamp", report.metadata.timestamp}}}};
}

void write_json(std::ostream& out, const ExperimentReport& report) {
  out << report_to_json(report).dump(2) << '\n';
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::string& destination) {
  auto write = [&](std::ostream& out) {
    if (format == ReportFormat::Csv) {
      write_csv(out, report);
    } else {
      write_json(out, report);
    }
    out.flush();
    if (!out) throw IoError("write to '" + destination + "' failed");
  };
  if (destination == "-") {
    write(std::cout);
    return;
  }
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + destination + "' for writing");
  write(file);
}

ExperimentReport report_from_json(const json& doc) {
  ExperimentReport report;
  try {
    for (const auto& r : doc.at("rows")) {
      ReportRow row;
      row.size = r.at("size").get<std::size_t>();
      auto protocol = parse_protocol(r.at("protocol").get<std::string>());
      if (!protocol) fail("rows.protocol", "unknown protocol");
      row.protocol = *protocol;
      row.repetition = r.at("repetition").get<std::size_t>();
      row.node_sequence = r.at("node_sequence").get<std::vector<NodeId>>();
      row.fidelity = r.at("fidelity").get<double>();
      row.exec_time_s = r.at("exec_time_s").get<double>();
      row.path_length = r.at("path_length").get<std::size_t>();
      row.reached_destination = r.at("reached_destination").get<bool>();
      row.run_seed = r.at("run_seed").get<std::uint64_t>();
      row.topology_hash = r.at("topology_hash").get<std::uint64_t>();
      report.rows.push_back(std::move(row));
    }
    const auto& meta = doc.at("metadata");
    report.metadata.config = meta.at("config");
    report.metadata.tool_version = meta.at("tool_version").get<std::string>();
    report.metadata.timestamp = meta.at("timestamp").get<std::string>();
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("report: ") + e.what());
  }
  return report;
}

std::vector<ReportRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw InvalidConfig("report: missing or unexpected CSV header");
  }
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() != 9) {
      throw InvalidConfig("report: CSV line has " + std::to_string(cols.size()) +
                          " columns, expected 9");
    }
    try {
      ReportRow row;
      row.size = std::stoull(cols[0]);
      auto protocol = parse_protocol(cols[1]);
      if (!protocol) fail("report.protocol", "unknown protocol " + cols[1]);
      row.protocol = *protocol;
      row.repetition = std::stoull(cols[2]);
      std::stringstream path(cols[3]);
      std::string node;
      while (std::getline(path, node, '-')) row.node_sequence.push_back(std::stoull(node));
      row.fidelity = std::stod(cols[4]);
      row.exec_time_s = std::stod(cols[5]);
      row.path_length = std::stoull(cols[6]);
      if (cols[7] != "true" && cols[7] != "false") {
        fail("report.reached", "expected true or false");
      }
      row.reached_destination = cols[7] == "true";
      row.run_seed = std::stoull(cols[8]);
      rows.push_back(std::move(row));
    } catch (const std::logic_error& e) {
      throw InvalidConfig(std::string("report: bad CSV field: ") + e.what());
    }
  }
  return rows;
}

}  // namespace qnet
