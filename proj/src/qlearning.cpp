#include <algorithm>
#include <chrono>

#include "qnet/errors.hpp"
#include "qnet/rng.hpp"
#include "qnet/routing.hpp"

namespace qnet {

namespace {

// Index of the largest entry; the first one wins ties, which is the
// smallest neighbor id because adjacency lists are sorted.
std::size_t argmax(const std::vector<double>& values) {
  return static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace

RouteResult route_qlearning(const NetworkGraph& graph, NodeId src, NodeId dst,
                            const QlConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  detail::check_endpoints(graph, src, dst);

  const std::size_t n = graph.node_count();
  const std::size_t max_steps = config.max_steps_factor * n;
  std::vector<double> weight;
  std::vector<double> fidelity;
  for (const auto& l : graph.links()) {
    weight.push_back(link_weight(l.params));
    fidelity.push_back(link_fidelity(l.params));
  }

  // q[node][k] is the value of moving to the k-th neighbor of node.
  std::vector<std::vector<double>> q(n);
  for (NodeId v = 0; v < n; ++v) q[v].assign(graph.adjacent(v).size(), 0.0);

  Rng rng(config.seed);
  for (std::size_t episode = 0; episode < config.episodes; ++episode) {
    NodeId at = src;
    double walk_fidelity = 1.0;
    for (std::size_t step = 0; step < max_steps; ++step) {
      const auto adj = graph.adjacent(at);
      const std::size_t action = rng.bernoulli(config.epsilon)
                                     ? rng.below(adj.size())
                                     : argmax(q[at]);
      const Adjacency& move = adj[action];
      walk_fidelity *= fidelity[move.link];
      double reward = -config.step_penalty * weight[move.link];
      const bool done = move.node == dst;
      double target = reward;
      if (done) {
        target += config.goal_reward * walk_fidelity;
      } else {
        const auto& ahead = q[move.node];
        target += config.discount * *std::max_element(ahead.begin(), ahead.end());
      }
      double& value = q[at][action];
      value += config.learning_rate * (target - value);
      at = move.node;
      if (done) break;
    }
  }

  std::vector<NodeId> walk{src};
  NodeId at = src;
  for (std::size_t step = 0; step < max_steps && at != dst; ++step) {
    at = graph.adjacent(at)[argmax(q[at])].node;
    walk.push_back(at);
  }

  RouteResult r;
  r.protocol = Protocol::QLearning;
  r.reached_destination = at == dst;
  r.metrics = path_metrics(graph, std::move(walk));
  r.exec_time_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return r;
}

}  // namespace qnet
