#include "qnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "qnet/errors.hpp"
#include "qnet/rng.hpp"

namespace qnet {

namespace {

std::string key(const std::string& context, const char* field) {
  return context.empty() ? std::string(field) : context + "." + field;
}

std::string describe(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw InvalidConfig(field + ": " + what);
}

struct Domain {
  double lo;
  double hi;
  bool lo_open;
};

void check_range(const Range& r, const std::string& field, Domain d) {
  const std::string shown = "[" + describe(r.min) + ", " + describe(r.max) + "]";
  require(std::isfinite(r.min) && std::isfinite(r.max), field,
          "range " + shown + " is not finite");
  require(r.min <= r.max, field, "range " + shown + " has min > max");
  const bool lo_ok = d.lo_open ? r.min > d.lo : r.min >= d.lo;
  const std::string domain = std::string(d.lo_open ? "(" : "[") +
                             describe(d.lo) + ", " + describe(d.hi) + "]";
  require(lo_ok && r.max <= d.hi, field,
          "range " + shown + " outside " + domain);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point {
  double x;
  double y;
};

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

LinkParams sample_params(Rng& rng, const ParamRanges& r) {
  LinkParams p;
  p.p_success = rng.uniform(r.p_success.min, r.p_success.max);
  p.tau_p_s = rng.uniform(r.tau_p_s.min, r.tau_p_s.max);
  p.tau_d_s = rng.uniform(r.tau_d_s.min, r.tau_d_s.max);
  p.base_fidelity = rng.uniform(r.base_fidelity.min, r.base_fidelity.max);
  p.coherence_time_s =
      rng.uniform(r.coherence_time_s.min, r.coherence_time_s.max);
  return p;
}

// Connected components labelled in order of their smallest node.
std::vector<std::vector<NodeId>> components(std::size_t n,
                                            const std::vector<Link>& links) {
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& l : links) {
    adj[l.u].push_back(l.v);
    adj[l.v].push_back(l.u);
  }
  std::vector<bool> seen(n, false);
  std::vector<std::vector<NodeId>> out;
  for (NodeId start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<NodeId> comp;
    std::deque<NodeId> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      comp.push_back(u);
      for (NodeId v : adj[u]) {
        if (!seen[v]) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace

void validate_link(const LinkParams& link, const std::string& context) {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  require(positive(link.length_km), key(context, "length_km"),
          "must be > 0, got " + describe(link.length_km));
  require(std::isfinite(link.p_success) && link.p_success > 0.0 &&
              link.p_success <= 1.0,
          key(context, "p_success"),
          "must be in (0, 1], got " + describe(link.p_success));
  require(positive(link.tau_p_s), key(context, "tau_p_s"),
          "must be > 0, got " + describe(link.tau_p_s));
  require(std::isfinite(link.tau_d_s) && link.tau_d_s >= 0.0,
          key(context, "tau_d_s"),
          "must be >= 0, got " + describe(link.tau_d_s));
  require(std::isfinite(link.base_fidelity) && link.base_fidelity > 0.0 &&
              link.base_fidelity <= 1.0,
          key(context, "base_fidelity"),
          "must be in (0, 1], got " + describe(link.base_fidelity));
  require(positive(link.coherence_time_s), key(context, "coherence_time_s"),
          "must be > 0, got " + describe(link.coherence_time_s));
}

NetworkGraph::NetworkGraph(std::size_t node_count, std::vector<Link> links)
    : node_count_(node_count), links_(std::move(links)) {
  require(node_count_ > 0, "node_count", "must be positive");
  for (std::size_t i = 0; i < links_.size(); ++i) {
    auto& l = links_[i];
    const std::string ctx = "links[" + std::to_string(i) + "]";
    require(l.u < node_count_ && l.v < node_count_, ctx,
            "endpoint out of range (" + std::to_string(l.u) + ", " +
                std::to_string(l.v) + ")");
    require(l.u != l.v, ctx, "self-loop on node " + std::to_string(l.u));
    if (l.u > l.v) std::swap(l.u, l.v);
    validate_link(l.params, ctx);
  }
  std::sort(links_.begin(), links_.end(), [](const Link& a, const Link& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  for (std::size_t i = 1; i < links_.size(); ++i) {
    require(links_[i].u != links_[i - 1].u || links_[i].v != links_[i - 1].v,
            "links", "parallel link between " + std::to_string(links_[i].u) +
                         " and " + std::to_string(links_[i].v));
  }
  adjacency_.resize(node_count_);
  for (std::size_t i = 0; i < links_.size(); ++i) {
    adjacency_[links_[i].u].push_back({links_[i].v, i});
    adjacency_[links_[i].v].push_back({links_[i].u, i});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(), [](const Adjacency& a, const Adjacency& b) {
      return a.node < b.node;
    });
  }
}

std::span<const Adjacency> NetworkGraph::adjacent(NodeId node) const {
  if (node >= node_count_) {
    throw UnknownNode("node " + std::to_string(node) + " not in graph of " +
                      std::to_string(node_count_) + " nodes");
  }
  return adjacency_[node];
}

std::optional<std::size_t> NetworkGraph::find_link(NodeId a, NodeId b) const {
  if (a >= node_count_ || b >= node_count_) return std::nullopt;
  const auto& adj = adjacency_[a];
  auto it = std::lower_bound(
      adj.begin(), adj.end(), b,
      [](const Adjacency& entry, NodeId id) { return entry.node < id; });
  if (it == adj.end() || it->node != b) return std::nullopt;
  return it->link;
}

std::vector<bool> NetworkGraph::reachable_from(NodeId from) const {
  std::vector<bool> seen(node_count_, false);
  std::deque<NodeId> queue{from};
  seen.at(from) = true;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (const auto& a : adjacency_[u]) {
      if (!seen[a.node]) {
        seen[a.node] = true;
        queue.push_back(a.node);
      }
    }
  }
  return seen;
}

bool NetworkGraph::is_connected() const {
  auto seen = reachable_from(0);
  return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

std::vector<std::pair<NodeId, LinkParams>> neighbors(const NetworkGraph& graph,
                                                     NodeId node) {
  std::vector<std::pair<NodeId, LinkParams>> out;
  for (const auto& a : graph.adjacent(node)) {
    out.emplace_back(a.node, graph.link(a.link).params);
  }
  return out;
}

double classical_delay(const LinkParams& link) {
  return link.length_km / kFiberLightSpeedKmPerS;
}

void TopologyConfig::validate() const {
  require(node_count >= 1, "node_count", "must be positive");
  if (const auto* er = std::get_if<ErdosRenyi>(&model)) {
    require(er->edge_probability > 0.0 && er->edge_probability <= 1.0,
            "model.edge_probability",
            "must be in (0, 1], got " + describe(er->edge_probability));
  } else {
    const auto& wx = std::get<Waxman>(model);
    require(std::isfinite(wx.alpha) && wx.alpha > 0.0 && wx.alpha <= 1.0,
            "model.alpha", "must be in (0, 1], got " + describe(wx.alpha));
    require(std::isfinite(wx.beta) && wx.beta > 0.0, "model.beta",
            "must be > 0, got " + describe(wx.beta));
    require(std::isfinite(wx.area_km) && wx.area_km > 0.0, "model.area_km",
            "must be > 0, got " + describe(wx.area_km));
  }
  const std::string pr = "param_ranges.";
  check_range(param_ranges.length_km, pr + "length_km", {0.0, kInf, true});
  check_range(param_ranges.p_success, pr + "p_success", {0.0, 1.0, true});
  check_range(param_ranges.tau_p_s, pr + "tau_p_s", {0.0, kInf, true});
  check_range(param_ranges.tau_d_s, pr + "tau_d_s", {0.0, kInf, false});
  check_range(param_ranges.base_fidelity, pr + "base_fidelity",
              {0.0, 1.0, true});
  check_range(param_ranges.coherence_time_s, pr + "coherence_time_s",
              {0.0, kInf, true});
}

NetworkGraph generate_network(const TopologyConfig& config) {
  config.validate();
  const std::size_t n = config.node_count;
  const ParamRanges& ranges = config.param_ranges;
  Rng rng(config.seed);

  const double area = std::holds_alternative<Waxman>(config.model)
                          ? std::get<Waxman>(config.model).area_km
                          : Waxman{}.area_km;
  std::vector<Point> pos(n);
  for (auto& p : pos) {
    p.x = rng.uniform(0.0, area);
    p.y = rng.uniform(0.0, area);
  }

  const auto* waxman = std::get_if<Waxman>(&config.model);
  auto make_link = [&](NodeId u, NodeId v) {
    Link link{u, v, sample_params(rng, ranges)};
    if (waxman != nullptr) {
      link.params.length_km =
          std::max(distance(pos[u], pos[v]), ranges.length_km.min);
    } else {
      link.params.length_km =
          rng.uniform(ranges.length_km.min, ranges.length_km.max);
    }
    return link;
  };

  std::vector<Link> links;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      double prob;
      if (waxman != nullptr) {
        const double scale = waxman->beta * waxman->area_km * std::sqrt(2.0);
        prob = waxman->alpha * std::exp(-distance(pos[u], pos[v]) / scale);
      } else {
        prob = std::get<ErdosRenyi>(config.model).edge_probability;
      }
      if (rng.bernoulli(prob)) links.push_back(make_link(u, v));
    }
  }

  auto comps = components(n, links);
  if (comps.size() > 1) {
    std::size_t giant = 0;
    for (std::size_t c = 1; c < comps.size(); ++c) {
      if (comps[c].size() > comps[giant].size()) giant = c;
    }
    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (c == giant) continue;
      NodeId best_u = 0;
      NodeId best_v = 0;
      double best = kInf;
      for (NodeId a : comps[c]) {
        for (NodeId g : comps[giant]) {
          const double d = distance(pos[a], pos[g]);
          if (d < best) {
            best = d;
            best_u = std::min(a, g);
            best_v = std::max(a, g);
          }
        }
      }
      links.push_back(make_link(best_u, best_v));
    }
  }
  return NetworkGraph(n, std::move(links));
}

nlohmann::ordered_json topology_to_json(const NetworkGraph& graph) {
  nlohmann::ordered_json links = nlohmann::ordered_json::array();
  for (const auto& l : graph.links()) {
    links.push_back({{"u", l.u},
                     {"v", l.v},
                     {"length_km", l.params.length_km},
                     {"p_success", l.params.p_success},
                     {"tau_p_s", l.params.tau_p_s},
                     {"tau_d_s", l.params.tau_d_s},
                     {"base_fidelity", l.params.base_fidelity},
                     {"coherence_time_s", l.params.coherence_time_s}});
  }
  nlohmann::ordered_json doc;
  doc["node_count"] = graph.node_count();
  doc["links"] = std::move(links);
  return doc;
}

NetworkGraph topology_from_json(const nlohmann::json& doc) {
  require(doc.is_object(), "topology", "document must be a JSON object");
  require(doc.contains("node_count") && doc["node_count"].is_number_unsigned(),
          "node_count", "missing or not a non-negative integer");
  require(doc.contains("links") && doc["links"].is_array(), "links",
          "missing or not an array");
  const auto n = doc["node_count"].get<std::size_t>();
  std::vector<Link> links;
  std::size_t i = 0;
  for (const auto& item : doc["links"]) {
    const std::string ctx = "links[" + std::to_string(i++) + "]";
    require(item.is_object(), ctx, "must be an object");
    auto num = [&](const char* field) {
      require(item.contains(field) && item[field].is_number(),
              key(ctx, field), "missing or not a number");
      return item[field].get<double>();
    };
    auto id = [&](const char* field) {
      require(item.contains(field) && item[field].is_number_unsigned(),
              key(ctx, field), "missing or not a node id");
      return item[field].get<NodeId>();
    };
    Link l;
    l.u = id("u");
    l.v = id("v");
    l.params.length_km = num("length_km");
    l.params.p_success = num("p_success");
    l.params.tau_p_s = num("tau_p_s");
    l.params.tau_d_s = num("tau_d_s");
    l.params.base_fidelity = num("base_fidelity");
    l.params.coherence_time_s = num("coherence_time_s");
    links.push_back(l);
  }
  return NetworkGraph(n, std::move(links));
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t topology_hash(const NetworkGraph& graph) {
  return fnv1a64(topology_to_json(graph).dump());
}

}  // namespace qnet
