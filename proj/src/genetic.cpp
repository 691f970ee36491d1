#include <algorithm>
#include <chrono>

#include "qnet/errors.hpp"
#include "qnet/rng.hpp"
#include "qnet/routing.hpp"

namespace qnet {

namespace {

struct Individual {
  std::vector<NodeId> path;
  double fitness = 0.0;
};

bool ranks_before(const Individual& a, const Individual& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
  return a.path < b.path;
}

class Evolver {
 public:
  Evolver(const NetworkGraph& graph, NodeId dst, const GaConfig& config)
      : graph_(graph), dst_(dst), config_(config), rng_(config.seed) {
    fidelity_.reserve(graph.link_count());
    for (const auto& l : graph.links()) {
      fidelity_.push_back(link_fidelity(l.params));
    }
  }

  Individual make(std::vector<NodeId> path) const {
    double f = 1.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      f *= fidelity_[*graph_.find_link(path[i], path[i + 1])];
    }
    return {std::move(path), f};
  }

  // Loop-erased random walk from `from` until dst is hit. The caller
  // guarantees dst is reachable.
  std::vector<NodeId> random_walk(NodeId from) {
    std::vector<NodeId> walk{from};
    std::vector<std::size_t> position(graph_.node_count(), kAbsent);
    position[from] = 0;
    NodeId at = from;
    while (at != dst_) {
      auto adj = graph_.adjacent(at);
      at = adj[rng_.below(adj.size())].node;
      if (position[at] != kAbsent) {
        for (std::size_t i = position[at] + 1; i < walk.size(); ++i) {
          position[walk[i]] = kAbsent;
        }
        walk.resize(position[at] + 1);
      } else {
        position[at] = walk.size();
        walk.push_back(at);
      }
    }
    return walk;
  }

  std::vector<NodeId> crossover(const std::vector<NodeId>& a,
                                const std::vector<NodeId>& b) {
    // Intermediate nodes shared by both parents, in a's order.
    std::vector<std::pair<std::size_t, std::size_t>> common;
    for (std::size_t i = 1; i + 1 < a.size(); ++i) {
      auto it = std::find(b.begin() + 1, b.end() - 1, a[i]);
      if (it != b.end() - 1) {
        common.emplace_back(i, static_cast<std::size_t>(it - b.begin()));
      }
    }
    if (common.empty()) return a;
    auto [i, j] = common[rng_.below(common.size())];
    std::vector<NodeId> child(a.begin(), a.begin() + i);
    child.insert(child.end(), b.begin() + j, b.end());
    return erase_loops(child);
  }

  std::vector<NodeId> mutate(const std::vector<NodeId>& path) {
    const std::size_t cut = rng_.below(path.size() - 1);
    std::vector<NodeId> child(path.begin(), path.begin() + cut);
    auto tail = random_walk(path[cut]);
    child.insert(child.end(), tail.begin(), tail.end());
    return erase_loops(child);
  }

  const Individual& tournament(const std::vector<Individual>& ranked) {
    const auto a = rng_.below(ranked.size());
    const auto b = rng_.below(ranked.size());
    return ranked[std::min(a, b)];
  }

  GeneticTrace run(NodeId src, std::vector<NodeId> seed_path) {
    std::vector<Individual> population;
    population.reserve(config_.population_size);
    population.push_back(make(std::move(seed_path)));
    while (population.size() < config_.population_size) {
      population.push_back(make(random_walk(src)));
    }
    std::sort(population.begin(), population.end(), ranks_before);

    GeneticTrace trace;
    Individual best = population.front();
    trace.best_per_generation.push_back(best.fitness);

    for (std::size_t gen = 0; gen < config_.generations; ++gen) {
      std::vector<Individual> next(population.begin(),
                                   population.begin() + config_.elitism_count);
      while (next.size() < config_.population_size) {
        const auto& p1 = tournament(population);
        const auto& p2 = tournament(population);
        std::vector<NodeId> child = rng_.bernoulli(config_.crossover_rate)
                                        ? crossover(p1.path, p2.path)
                                        : p1.path;
        if (rng_.bernoulli(config_.mutation_rate)) child = mutate(child);
        next.push_back(make(std::move(child)));
      }
      std::sort(next.begin(), next.end(), ranks_before);
      population = std::move(next);
      if (ranks_before(population.front(), best)) best = population.front();
      trace.best_per_generation.push_back(population.front().fitness);
    }
    trace.best_path = std::move(best.path);
    trace.best_fitness = best.fitness;
    return trace;
  }

 private:
  static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

  const NetworkGraph& graph_;
  NodeId dst_;
  const GaConfig& config_;
  Rng rng_;
  std::vector<double> fidelity_;
};

}  // namespace

GeneticTrace evolve_paths(const NetworkGraph& graph, NodeId src, NodeId dst,
                          const GaConfig& config) {
  config.validate();
  detail::check_endpoints(graph, src, dst);
  auto seed_path = route_dijkstra(graph, src, dst).metrics.node_sequence;
  Evolver evolver(graph, dst, config);
  return evolver.run(src, std::move(seed_path));
}

RouteResult route_genetic(const NetworkGraph& graph, NodeId src, NodeId dst,
                          const GaConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  auto trace = evolve_paths(graph, src, dst, config);
  RouteResult r;
  r.protocol = Protocol::Genetic;
  r.reached_destination = true;
  r.metrics = path_metrics(graph, std::move(trace.best_path));
  r.exec_time_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return r;
}

}  // namespace qnet
