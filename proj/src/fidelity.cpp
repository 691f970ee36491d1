#include "qnet/fidelity.hpp"

#include <cmath>
#include <string>

#include "qnet/entanglement.hpp"
#include "qnet/errors.hpp"

namespace qnet {

namespace {

template <typename PerLink>
double fold_path(const NetworkGraph& graph, std::span<const NodeId> path,
                 double init, PerLink combine) {
  if (path.empty()) throw NotAPath("empty node sequence");
  double acc = init;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto idx = graph.find_link(path[i], path[i + 1]);
    if (!idx) {
      throw NotAPath("no link between " + std::to_string(path[i]) + " and " +
                     std::to_string(path[i + 1]));
    }
    acc = combine(acc, graph.link(*idx).params);
  }
  if (path.size() == 1 && path[0] >= graph.node_count()) {
    throw NotAPath("node " + std::to_string(path[0]) + " not in graph");
  }
  return acc;
}

}  // namespace

double link_fidelity(const LinkParams& link) {
  return link.base_fidelity *
         std::exp(-expected_generation_time(link) / link.coherence_time_s);
}

double link_weight(const LinkParams& link) {
  return expected_generation_time(link);
}

double path_fidelity(const NetworkGraph& graph, std::span<const NodeId> path) {
  return fold_path(graph, path, 1.0, [](double acc, const LinkParams& l) {
    return acc * link_fidelity(l);
  });
}

double path_weight(const NetworkGraph& graph, std::span<const NodeId> path) {
  return fold_path(graph, path, 0.0, [](double acc, const LinkParams& l) {
    return acc + link_weight(l);
  });
}

PathMetrics path_metrics(const NetworkGraph& graph, std::vector<NodeId> path) {
  PathMetrics m;
  m.fidelity = path_fidelity(graph, path);
  m.total_weight = path_weight(graph, path);
  m.path_length = path.size();
  m.node_sequence = std::move(path);
  return m;
}

}  // namespace qnet
