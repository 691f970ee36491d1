#include <chrono>
#include <queue>

#include "qnet/errors.hpp"
#include "qnet/routing.hpp"

namespace qnet {

namespace {

// A candidate route to some node. Ordered by weight, then node count, then
// node sequence.
struct Label {
  double weight = 0.0;
  std::vector<NodeId> path;

  bool better_than(const Label& other) const {
    if (weight != other.weight) return weight < other.weight;
    if (path.size() != other.path.size()) {
      return path.size() < other.path.size();
    }
    return path < other.path;
  }
};

std::vector<double> weights_by_link(const NetworkGraph& graph) {
  std::vector<double> w;
  w.reserve(graph.link_count());
  for (const auto& l : graph.links()) w.push_back(link_weight(l.params));
  return w;
}

Label extend(const Label& from, NodeId to, double w) {
  Label next{from.weight + w, from.path};
  next.path.push_back(to);
  return next;
}

RouteResult finish(Protocol protocol, const NetworkGraph& graph,
                   std::vector<NodeId> path,
                   std::chrono::steady_clock::time_point start) {
  RouteResult r;
  r.protocol = protocol;
  r.reached_destination = true;
  r.metrics = path_metrics(graph, std::move(path));
  r.exec_time_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return r;
}

}  // namespace

RouteResult route_dijkstra(const NetworkGraph& graph, NodeId src, NodeId dst) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_endpoints(graph, src, dst);
  const auto w = weights_by_link(graph);

  auto worse = [](const Label& a, const Label& b) { return b.better_than(a); };
  std::priority_queue<Label, std::vector<Label>, decltype(worse)> queue(worse);
  std::vector<std::optional<Label>> best(graph.node_count());
  std::vector<bool> settled(graph.node_count(), false);

  best[src] = Label{0.0, {src}};
  queue.push(*best[src]);
  while (!queue.empty()) {
    Label top = queue.top();
    queue.pop();
    const NodeId u = top.path.back();
    if (settled[u]) continue;
    settled[u] = true;
    if (u == dst) break;
    for (const auto& a : graph.adjacent(u)) {
      if (settled[a.node]) continue;
      Label cand = extend(top, a.node, w[a.link]);
      if (!best[a.node] || cand.better_than(*best[a.node])) {
        best[a.node] = cand;
        queue.push(std::move(cand));
      }
    }
  }
  return finish(Protocol::Dijkstra, graph, std::move(best[dst]->path), start);
}

RouteResult route_bellman_ford(const NetworkGraph& graph, NodeId src,
                               NodeId dst) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_endpoints(graph, src, dst);
  const auto w = weights_by_link(graph);

  std::vector<std::optional<Label>> best(graph.node_count());
  best[src] = Label{0.0, {src}};
  auto relax = [&](NodeId from, NodeId to, double weight) {
    if (!best[from]) return false;
    Label cand = extend(*best[from], to, weight);
    if (best[to] && !cand.better_than(*best[to])) return false;
    best[to] = std::move(cand);
    return true;
  };
  // Weights are strictly positive, so labels settle within node_count passes.
  for (std::size_t pass = 0; pass < graph.node_count(); ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < graph.link_count(); ++i) {
      const Link& l = graph.link(i);
      changed |= relax(l.u, l.v, w[i]);
      changed |= relax(l.v, l.u, w[i]);
    }
    if (!changed) break;
  }
  return finish(Protocol::BellmanFord, graph, std::move(best[dst]->path),
                start);
}

}  // namespace qnet
