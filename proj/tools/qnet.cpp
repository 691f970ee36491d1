// qnet: command-line front end for the quantum network routing simulator.
//
// Exit codes: 0 success, 1 runtime error, 2 usage/config error,
// 3 unreachable destination, 4 validation check failed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qnet/entanglement.hpp"
#include "qnet/errors.hpp"
#include "qnet/experiment.hpp"
#include "qnet/routing.hpp"
#include "qnet/topology.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnreachable = 3;
constexpr int kExitCheckFailed = 4;

struct SimulateArgs {
  std::string config;
  std::string format = "csv";
  std::string out = "-";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

struct RouteArgs {
  std::string topology_file;
  std::string protocol;
  qnet::NodeId src = 0;
  qnet::NodeId dst = 0;
  std::uint64_t seed = 0;
};

struct RateCheckArgs {
  std::uint64_t trials = 1'000'000;
  std::uint64_t cases = 100;
  std::uint64_t seed = 2024;
};

struct DumpArgs {
  std::string config;
  std::size_t nodes = 10;
  std::string model = "waxman";
  double edge_probability = qnet::ErdosRenyi{}.edge_probability;
  double alpha = qnet::Waxman{}.alpha;
  double beta = qnet::Waxman{}.beta;
  double area_km = qnet::Waxman{}.area_km;
  std::uint64_t seed = 0;
  std::string out = "-";
  bool model_given = false;
};

struct ValidateArgs {
  std::string config;
  std::string topology_file;
};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qnet::InvalidConfig("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw qnet::InvalidConfig(path + ": " + e.what());
  }
}

void write_text(const std::string& out, const std::string& text) {
  if (out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file || !(file << text)) {
    throw qnet::IoError("cannot write '" + out + "'");
  }
}

int cmd_simulate(const SimulateArgs& args) {
  qnet::ExperimentConfig config;
  try {
    if (!args.config.empty()) {
      config = qnet::config_from_json(read_json_file(args.config));
    }
    if (args.seed) config.master_seed = *args.seed;
  } catch (const qnet::InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  const auto format = args.format == "json" ? qnet::ReportFormat::Json
                                            : qnet::ReportFormat::Csv;
  auto report = qnet::run_experiment(config, args.threads);
  qnet::emit_report(report, format, args.out);
  return kExitOk;
}

int cmd_route(const RouteArgs& args) {
  auto protocol = qnet::parse_protocol(args.protocol);
  if (!protocol) {
    std::cerr << "unknown protocol '" << args.protocol
              << "' (expected dijkstra, bellman-ford, genetic, qlearning)\n";
    return kExitUsage;
  }
  std::optional<qnet::NetworkGraph> graph;
  try {
    graph = qnet::topology_from_json(read_json_file(args.topology_file));
  } catch (const qnet::InvalidConfig& e) {
    std::cerr << "topology error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (args.src >= graph->node_count() || args.dst >= graph->node_count() ||
      args.src == args.dst) {
    std::cerr << "--src and --dst must be distinct nodes below "
              << graph->node_count() << '\n';
    return kExitUsage;
  }
  qnet::GaConfig ga;
  ga.seed = args.seed;
  qnet::QlConfig ql;
  ql.seed = args.seed;
  try {
    auto result = qnet::route(*protocol, *graph, args.src, args.dst, ga, ql);
    qnet::ReportRow row;
    row.size = graph->node_count();
    row.protocol = *protocol;
    row.fidelity = result.metrics.fidelity;
    row.exec_time_s = result.exec_time_s;
    row.path_length = result.metrics.path_length;
    row.node_sequence = std::move(result.metrics.node_sequence);
    row.reached_destination = result.reached_destination;
    row.run_seed = args.seed;
    std::cout << qnet::kCsvHeader << '\n' << qnet::csv_line(row) << '\n';
  } catch (const qnet::Unreachable& e) {
    std::cerr << "unreachable: " << e.what() << '\n';
    return kExitUnreachable;
  }
  return kExitOk;
}

int cmd_rate_check(const RateCheckArgs& args) {
  auto rows = qnet::rate_check(args.cases, args.trials, args.seed);
  qnet::write_rate_check_csv(std::cout, rows);
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.agrees() ? 0 : 1;
  if (failed > 0) {
    std::cerr << failed << " of " << rows.size()
              << " cases differ from the closed form by more than 4 standard "
                 "errors\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_dump_topology(const DumpArgs& args) {
  qnet::TopologyConfig topo;
  try {
    if (!args.config.empty()) {
      topo = qnet::config_from_json(read_json_file(args.config)).topology;
    }
    if (args.config.empty() || args.model_given) {
      if (args.model == "waxman") {
        topo.model = qnet::Waxman{args.alpha, args.beta, args.area_km};
      } else if (args.model == "erdos_renyi") {
        topo.model = qnet::ErdosRenyi{args.edge_probability};
      } else {
        std::cerr << "--model: expected waxman or erdos_renyi\n";
        return kExitUsage;
      }
    }
    topo.node_count = args.nodes;
    topo.seed = args.seed;
    topo.validate();
  } catch (const qnet::InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  auto graph = qnet::generate_network(topo);
  write_text(args.out, qnet::topology_to_json(graph).dump(2) + "\n");
  return kExitOk;
}

int cmd_validate(const ValidateArgs& args) {
  if (args.config.empty() && args.topology_file.empty()) {
    std::cerr << "validate: pass --config and/or --topology-file\n";
    return kExitUsage;
  }
  try {
    if (!args.config.empty()) {
      qnet::config_from_json(read_json_file(args.config));
      std::cout << args.config << ": ok\n";
    }
    if (!args.topology_file.empty()) {
      auto graph = qnet::topology_from_json(read_json_file(args.topology_file));
      std::cout << args.topology_file << ": ok (" << graph.node_count()
                << " nodes, " << graph.link_count() << " links, "
                << (graph.is_connected() ? "connected" : "disconnected")
                << ")\n";
    }
  } catch (const qnet::InvalidConfig& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum network routing simulator"};
  app.set_version_flag("--version", std::string("qnet ") + QNET_VERSION);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Run the network-size x protocol sweep and emit a report");
  simulate->add_option("--config", sim.config,
                       "Experiment config (JSON, comments allowed); defaults "
                       "apply when omitted")
      ->check(CLI::ExistingFile);
  simulate->add_option("--format", sim.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--out", sim.out, "Output path, '-' for stdout");
  simulate->add_option("--seed", sim.seed, "Override master_seed");
  simulate->add_option("--threads", sim.threads,
                       "Worker threads for independent cells")
      ->check(CLI::PositiveNumber);

  RouteArgs rt;
  auto* route = app.add_subcommand(
      "route", "Route one request over a topology file and print a CSV row");
  route->add_option("--topology-file", rt.topology_file, "Topology JSON")
      ->required();
  route->add_option("--protocol", rt.protocol,
                    "dijkstra, bellman-ford, genetic or qlearning")
      ->required();
  route->add_option("--src", rt.src, "Source node")->required();
  route->add_option("--dst", rt.dst, "Destination node")->required();
  route->add_option("--seed", rt.seed, "Seed for genetic/qlearning");

  RateCheckArgs rc;
  auto* rate = app.add_subcommand(
      "rate-check",
      "Compare closed-form generation time against Monte-Carlo on random links");
  rate->add_option("--trials", rc.trials, "Monte-Carlo trials per link")
      ->check(CLI::PositiveNumber);
  rate->add_option("--cases", rc.cases, "Number of random links")
      ->check(CLI::PositiveNumber);
  rate->add_option("--seed", rc.seed, "Seed");

  DumpArgs dump;
  auto* dump_cmd = app.add_subcommand(
      "dump-topology", "Generate a network and write its JSON description");
  dump_cmd->add_option("--config", dump.config,
                       "Take the topology section of an experiment config");
  dump_cmd->add_option("--nodes", dump.nodes, "Node count");
  dump_cmd->add_option("--model", dump.model, "waxman or erdos_renyi");
  dump_cmd->add_option("--edge-probability", dump.edge_probability,
                       "Erdos-Renyi link probability");
  dump_cmd->add_option("--alpha", dump.alpha, "Waxman alpha");
  dump_cmd->add_option("--beta", dump.beta, "Waxman beta");
  dump_cmd->add_option("--area-km", dump.area_km, "Waxman square side, km");
  dump_cmd->add_option("--seed", dump.seed, "Topology seed");
  dump_cmd->add_option("--out", dump.out, "Output path, '-' for stdout");

  ValidateArgs val;
  auto* validate = app.add_subcommand(
      "validate", "Check an experiment config and/or a topology file");
  validate->add_option("--config", val.config, "Experiment config");
  validate->add_option("--topology-file", val.topology_file, "Topology JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  dump.model_given = dump_cmd->get_option("--model")->count() > 0 ||
                     dump_cmd->get_option("--edge-probability")->count() > 0 ||
                     dump_cmd->get_option("--alpha")->count() > 0 ||
                     dump_cmd->get_option("--beta")->count() > 0 ||
                     dump_cmd->get_option("--area-km")->count() > 0;

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*route) return cmd_route(rt);
    if (*rate) return cmd_rate_check(rc);
    if (*dump_cmd) return cmd_dump_topology(dump);
    if (*validate) return cmd_validate(val);
  } catch (const qnet::Unreachable& e) {
    std::cerr << "unreachable: " << e.what() << '\n';
    return kExitUnreachable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
