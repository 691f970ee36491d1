#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qnet {

// Dense node index, 0..node_count-1.
using NodeId = std::size_t;

// Speed of light in optical fiber (refractive index ~1.5), km/s.
inline constexpr double kFiberLightSpeedKmPerS = 2.0e5;

// Physical parameters of one optical link.
struct LinkParams {
  double length_km = 1.0;
  double p_success = 1.0;         // per-attempt success probability
  double tau_p_s = 1e-6;          // mean duration of one attempt
  double tau_d_s = 0.0;           // cooling/reset time after a failure
  double base_fidelity = 1.0;     // fidelity of a fresh pair
  double coherence_time_s = 1.0;  // memory coherence time

  bool operator==(const LinkParams&) const = default;
};

// Throws InvalidConfig naming the first field outside its domain.
// `context` prefixes the field name in the message.
void validate_link(const LinkParams& link, const std::string& context = "");

struct Link {
  NodeId u = 0;  // u < v
  NodeId v = 0;
  LinkParams params;

  bool operator==(const Link&) const = default;
};

// One adjacency entry: the neighbor and the index of the connecting link.
struct Adjacency {
  NodeId node;
  std::size_t link;
};

// Undirected simple graph of quantum nodes and optical links. Immutable once
// constructed; links are stored sorted by (u, v) with u < v and every
// adjacency list is sorted by neighbor id.
class NetworkGraph {
 public:
  // Throws InvalidConfig on self-loops, parallel links, out-of-range
  // endpoints, or invalid link parameters. Endpoint order is normalized.
  NetworkGraph(std::size_t node_count, std::vector<Link> links);

  std::size_t node_count() const { return node_count_; }
  std::size_t link_count() const { return links_.size(); }
  std::span<const Link> links() const { return links_; }
  const Link& link(std::size_t index) const { return links_.at(index); }

  // Throws UnknownNode.
  std::span<const Adjacency> adjacent(NodeId node) const;

  std::optional<std::size_t> find_link(NodeId a, NodeId b) const;
  bool has_link(NodeId a, NodeId b) const { return find_link(a, b).has_value(); }

  // BFS from `from`; result[i] is true iff node i is reachable.
  std::vector<bool> reachable_from(NodeId from) const;
  bool is_connected() const;

  bool operator==(const NetworkGraph& other) const {
    return node_count_ == other.node_count_ && links_ == other.links_;
  }

 private:
  std::size_t node_count_;
  std::vector<Link> links_;
  std::vector<std::vector<Adjacency>> adjacency_;
};

// Neighbors of `node` with their link parameters, ascending by id.
std::vector<std::pair<NodeId, LinkParams>> neighbors(const NetworkGraph& graph,
                                                     NodeId node);

// Classical heralding delay over the link's fiber, in seconds.
double classical_delay(const LinkParams& link);

struct Range {
  double min = 0.0;
  double max = 0.0;

  bool operator==(const Range&) const = default;
};

// Uniform sampling ranges for the per-link parameters. Defaults are
// plausible repeater-link magnitudes.
struct ParamRanges {
  Range length_km{1.0, 100.0};
  Range p_success{0.1, 0.9};
  Range tau_p_s{1e-6, 10e-6};
  Range tau_d_s{10e-6, 100e-6};
  Range base_fidelity{0.90, 0.995};
  Range coherence_time_s{10e-3, 100e-3};

  bool operator==(const ParamRanges&) const = default;
};

struct ErdosRenyi {
  double edge_probability = 0.3;

  bool operator==(const ErdosRenyi&) const = default;
};

// P(link u-v) = alpha * exp(-d(u, v) / (beta * L)), nodes uniform in an
// area_km x area_km square, L = area_km * sqrt(2).
struct Waxman {
  double alpha = 0.4;
  double beta = 0.2;
  double area_km = 1000.0;

  bool operator==(const Waxman&) const = default;
};

using TopologyModel = std::variant<ErdosRenyi, Waxman>;

struct TopologyConfig {
  std::size_t node_count = 10;
  TopologyModel model = Waxman{};
  ParamRanges param_ranges;
  std::uint64_t seed = 0;

  // Throws InvalidConfig; message starts with the offending key.
  void validate() const;

  bool operator==(const TopologyConfig&) const = default;
};

// Builds a connected random graph. Identical configs give identical graphs.
//
// Every node gets a uniform position in the area square (Erdos-Renyi uses the
// default area only for positions). Pairs (u, v), u < v, are visited in
// lexicographic order; each draws its coin and, on success, its parameters
// in field order p_success, tau_p_s, tau_d_s, base_fidelity,
// coherence_time_s, length_km. Waxman links take their length from the
// node positions (floored at the length range minimum) instead of sampling.
// Components other than the largest are then joined to it, in order of
// their smallest node id, by the geometrically shortest pair.
NetworkGraph generate_network(const TopologyConfig& config);

// Canonical JSON form: links sorted by (u, v) with u < v, keys in the
// documented order.
nlohmann::ordered_json topology_to_json(const NetworkGraph& graph);
// Throws InvalidConfig on malformed documents.
NetworkGraph topology_from_json(const nlohmann::json& doc);

// 64-bit FNV-1a over the canonical (compact) JSON bytes.
std::uint64_t topology_hash(const NetworkGraph& graph);
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace qnet
