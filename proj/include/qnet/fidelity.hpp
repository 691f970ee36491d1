#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qnet/topology.hpp"

namespace qnet {

struct PathMetrics {
  std::vector<NodeId> node_sequence;
  double fidelity = 1.0;
  double total_weight = 0.0;
  std::size_t path_length = 0;  // number of nodes, so a direct link counts 2
};

// F0 * exp(-T / T_ch) with T the expected generation time.
double link_fidelity(const LinkParams& link);

// Routing weight of a link: its expected generation time, i.e. the
// reciprocal of the entanglement rate for a fresh pair.
double link_weight(const LinkParams& link);

// Product of link fidelities over consecutive pairs; every traversal counts,
// so a link walked k times contributes F^k. A single node gives 1.
// Throws NotAPath.
double path_fidelity(const NetworkGraph& graph, std::span<const NodeId> path);

// Sum of link weights over consecutive pairs, in path order. Throws NotAPath.
double path_weight(const NetworkGraph& graph, std::span<const NodeId> path);

PathMetrics path_metrics(const NetworkGraph& graph, std::vector<NodeId> path);

}  // namespace qnet
