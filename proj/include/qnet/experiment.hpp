#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnet/routing.hpp"
#include "qnet/topology.hpp"

namespace qnet {

// The sweep over network sizes x protocols x repetitions.
//
// Per (size, repetition) the run seed is derive_seed(master_seed, {size, rep})
// and every random component draws from its own substream of it:
//   topology  derive_seed(run_seed, {1, topology.seed})
//   genetic   derive_seed(run_seed, {2, ga.seed})
//   qlearning derive_seed(run_seed, {3, ql.seed})
// One graph is generated per (size, repetition) and shared by all protocols.
struct ExperimentConfig {
  std::vector<std::size_t> network_sizes{10, 20, 50, 100};
  TopologyConfig topology;  // node_count is replaced per sweep entry
  std::vector<Protocol> protocols{std::begin(kAllProtocols),
                                  std::end(kAllProtocols)};
  GaConfig ga;
  QlConfig ql;
  // Node indices; negative values count from the end (-1 is node n-1).
  std::int64_t source = 0;
  std::int64_t destination = -1;
  std::size_t repetitions = 1;
  std::uint64_t master_seed = 0;

  void validate() const;  // throws InvalidConfig naming the key
};

struct ReportRow {
  std::size_t size = 0;
  Protocol protocol = Protocol::Dijkstra;
  std::size_t repetition = 0;
  std::vector<NodeId> node_sequence;
  double fidelity = 0.0;
  double exec_time_s = 0.0;
  std::size_t path_length = 0;
  bool reached_destination = false;
  std::uint64_t run_seed = 0;
  std::uint64_t topology_hash = 0;  // JSON only; not a CSV column

  bool operator==(const ReportRow&) const = default;
};

struct ReportMetadata {
  nlohmann::ordered_json config;
  std::string tool_version;
  std::string timestamp;  // UTC, ISO 8601
};

struct ExperimentReport {
  std::vector<ReportRow> rows;  // sorted by (size, protocol, repetition)
  ReportMetadata metadata;
};

// Resolves a possibly negative node index against a graph size.
NodeId resolve_node(std::int64_t index, std::size_t node_count);

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t size,
                       std::size_t repetition);

// Cells run on up to `threads` workers; the output order never depends on
// the thread count. Errors are rethrown with "size S, repetition R: "
// prepended and their original type kept.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                unsigned threads = 1);

// Reads a config document. Unknown keys and out-of-domain values raise
// InvalidConfig naming the key. Missing keys keep their defaults.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);  // comments allowed
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

enum class ReportFormat { Csv, Json };

inline constexpr const char* kCsvHeader =
    "size,protocol,repetition,path,fidelity,exec_time_s,path_length,reached,"
    "seed";

void write_csv(std::ostream& out, const ExperimentReport& report);
// Just the data line for one row (no newline).
std::string csv_line(const ReportRow& row);
void write_json(std::ostream& out, const ExperimentReport& report);

// Writes to `destination`, where "-" means stdout. Throws IoError.
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::string& destination);

nlohmann::ordered_json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& doc);
// Parses CSV written by write_csv. topology_hash is left 0.
std::vector<ReportRow> parse_csv(std::istream& in);

// "0-1-9"
std::string join_path(const std::vector<NodeId>& path);

}  // namespace qnet
