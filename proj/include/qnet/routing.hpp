#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnet/fidelity.hpp"
#include "qnet/topology.hpp"

namespace qnet {

// Declaration order is the report order.
enum class Protocol { Dijkstra, BellmanFord, Genetic, QLearning };

inline constexpr Protocol kAllProtocols[] = {
    Protocol::Dijkstra, Protocol::BellmanFord, Protocol::Genetic,
    Protocol::QLearning};

// "dijkstra", "bellman-ford", "genetic", "qlearning".
std::string_view to_string(Protocol protocol);
std::optional<Protocol> parse_protocol(std::string_view name);

struct RouteResult {
  Protocol protocol = Protocol::Dijkstra;
  PathMetrics metrics;
  double exec_time_s = 0.0;
  bool reached_destination = false;
};

struct GaConfig {
  std::size_t population_size = 50;
  std::size_t generations = 100;
  double crossover_rate = 0.8;
  double mutation_rate = 0.2;
  std::size_t elitism_count = 2;
  std::uint64_t seed = 0;

  void validate() const;  // throws InvalidConfig
  bool operator==(const GaConfig&) const = default;
};

struct QlConfig {
  std::size_t episodes = 500;
  double learning_rate = 0.1;
  double discount = 0.9;
  double epsilon = 0.1;
  double step_penalty = 0.01;
  double goal_reward = 1.0;
  std::size_t max_steps_factor = 4;
  std::uint64_t seed = 0;

  void validate() const;  // throws InvalidConfig
  bool operator==(const QlConfig&) const = default;
};

// Minimum total link_weight path. Ties go to fewer nodes, then to the
// lexicographically smallest node sequence. Throws Unreachable,
// UnknownNode, or InvalidConfig (src == dst).
RouteResult route_dijkstra(const NetworkGraph& graph, NodeId src, NodeId dst);

// Same contract and tie-breaking as route_dijkstra; relaxes links in (u, v)
// order, both directions, until a pass changes nothing.
RouteResult route_bellman_ford(const NetworkGraph& graph, NodeId src,
                               NodeId dst);

struct GeneticTrace {
  std::vector<NodeId> best_path;
  double best_fitness = 0.0;
  // Best fitness after initialization (index 0) and after every generation.
  std::vector<double> best_per_generation;
};

// Evolves simple src->dst paths maximizing path_fidelity.
//
// Initial population: the Dijkstra path plus loop-erased random walks.
// Each generation keeps the top elitism_count individuals and fills the rest
// with children of binary-tournament parents: common-node crossover (with
// probability crossover_rate) followed by re-route mutation (with probability
// mutation_rate). Ranking is by fitness, then fewer nodes, then
// lexicographic order.
GeneticTrace evolve_paths(const NetworkGraph& graph, NodeId src, NodeId dst,
                          const GaConfig& config);

RouteResult route_genetic(const NetworkGraph& graph, NodeId src, NodeId dst,
                          const GaConfig& config);

// Tabular Q-learning over (node, neighbor) with epsilon-greedy episodes and
// greedy extraction. The extracted walk is returned as is, loops included.
RouteResult route_qlearning(const NetworkGraph& graph, NodeId src, NodeId dst,
                            const QlConfig& config);

RouteResult route(Protocol protocol, const NetworkGraph& graph, NodeId src,
                  NodeId dst, const GaConfig& ga, const QlConfig& ql);

// Chronological loop erasure: whenever a node reappears, the cycle since
// its first visit is cut out.
std::vector<NodeId> erase_loops(const std::vector<NodeId>& walk);

namespace detail {
// Shared argument checks for every router.
void check_endpoints(const NetworkGraph& graph, NodeId src, NodeId dst);
}  // namespace detail

}  // namespace qnet
