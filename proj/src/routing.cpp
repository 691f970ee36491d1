#include "qnet/routing.hpp"

#include <cmath>
#include <unordered_map>

#include "qnet/errors.hpp"

namespace qnet {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw InvalidConfig(field + ": " + what);
}

bool unit_interval(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

std::string_view to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::Dijkstra: return "dijkstra";
    case Protocol::BellmanFord: return "bellman-ford";
    case Protocol::Genetic: return "genetic";
    case Protocol::QLearning: return "qlearning";
  }
  return "unknown";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
  for (Protocol p : kAllProtocols) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

void GaConfig::validate() const {
  require(population_size >= 1, "ga.population_size", "must be positive");
  require(generations >= 1, "ga.generations", "must be positive");
  require(unit_interval(crossover_rate), "ga.crossover_rate",
          "must be in [0, 1]");
  require(unit_interval(mutation_rate), "ga.mutation_rate",
          "must be in [0, 1]");
  require(elitism_count < population_size, "ga.elitism_count",
          "must be smaller than population_size");
}

void QlConfig::validate() const {
  require(episodes >= 1, "ql.episodes", "must be positive");
  require(std::isfinite(learning_rate) && learning_rate > 0.0 &&
              learning_rate <= 1.0,
          "ql.learning_rate", "must be in (0, 1]");
  require(std::isfinite(discount) && discount >= 0.0 && discount < 1.0,
          "ql.discount", "must be in [0, 1)");
  require(unit_interval(epsilon), "ql.epsilon", "must be in [0, 1]");
  require(std::isfinite(step_penalty) && step_penalty > 0.0,
          "ql.step_penalty", "must be > 0");
  require(std::isfinite(goal_reward) && goal_reward > 0.0, "ql.goal_reward",
          "must be > 0");
  require(max_steps_factor >= 1, "ql.max_steps_factor", "must be positive");
}

std::vector<NodeId> erase_loops(const std::vector<NodeId>& walk) {
  std::vector<NodeId> out;
  std::unordered_map<NodeId, std::size_t> position;
  for (NodeId node : walk) {
    if (auto it = position.find(node); it != position.end()) {
      for (std::size_t i = it->second + 1; i < out.size(); ++i) {
        position.erase(out[i]);
      }
      out.resize(it->second + 1);
    } else {
      position.emplace(node, out.size());
      out.push_back(node);
    }
  }
  return out;
}

namespace detail {

void check_endpoints(const NetworkGraph& graph, NodeId src, NodeId dst) {
  for (NodeId node : {src, dst}) {
    if (node >= graph.node_count()) {
      throw UnknownNode("node " + std::to_string(node) + " not in graph of " +
                        std::to_string(graph.node_count()) + " nodes");
    }
  }
  if (src == dst) throw InvalidConfig("dst: must differ from src");
  if (!graph.reachable_from(src)[dst]) {
    throw Unreachable("node " + std::to_string(dst) +
                      " is not reachable from node " + std::to_string(src));
  }
}

}  // namespace detail

RouteResult route(Protocol protocol, const NetworkGraph& graph, NodeId src,
                  NodeId dst, const GaConfig& ga, const QlConfig& ql) {
  switch (protocol) {
    case Protocol::Dijkstra: return route_dijkstra(graph, src, dst);
    case Protocol::BellmanFord: return route_bellman_ford(graph, src, dst);
    case Protocol::Genetic: return route_genetic(graph, src, dst, ga);
    case Protocol::QLearning: return route_qlearning(graph, src, dst, ql);
  }
  throw InvalidConfig("protocol: unknown");
}

}  // namespace qnet
