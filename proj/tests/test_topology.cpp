#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "qnet/errors.hpp"
#include "qnet/topology.hpp"

using namespace qnet;

namespace {

LinkParams plain_link(double length_km = 10.0) {
  LinkParams l;
  l.length_km = length_km;
  l.p_success = 0.5;
  l.tau_p_s = 5e-6;
  l.tau_d_s = 50e-6;
  l.base_fidelity = 0.95;
  l.coherence_time_s = 0.05;
  return l;
}

}  // namespace

TEST_CASE("complete graph on two nodes has the single link 0-1") {
  for (std::uint64_t seed : {0, 1, 99}) {
    TopologyConfig cfg;
    cfg.node_count = 2;
    cfg.model = ErdosRenyi{1.0};
    cfg.seed = seed;
    auto g = generate_network(cfg);
    REQUIRE(g.link_count() == 1);
    CHECK(g.link(0).u == 0);
    CHECK(g.link(0).v == 1);
  }
}

TEST_CASE("generation is deterministic down to the serialized bytes") {
  TopologyConfig cfg;
  cfg.node_count = 10;
  cfg.seed = 42;
  const auto a = generate_network(cfg);
  const auto b = generate_network(cfg);
  CHECK(a == b);
  CHECK(topology_to_json(a).dump() == topology_to_json(b).dump());
  CHECK(topology_hash(a) == topology_hash(b));

  cfg.seed = 43;
  CHECK(topology_hash(generate_network(cfg)) != topology_hash(a));
}

TEST_CASE("sparse Erdos-Renyi graph is repaired into a connected one") {
  TopologyConfig cfg;
  cfg.node_count = 10;
  cfg.model = ErdosRenyi{0.05};
  cfg.seed = 7;
  auto g = generate_network(cfg);
  CHECK(oracle::connected_bfs(g));
  CHECK(g.link_count() >= 9);
}

TEST_CASE("generated graphs are connected, simple and symmetric") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    TopologyConfig cfg;
    cfg.node_count = 2 + seed % 40;
    cfg.seed = seed;
    if (seed % 2 == 0) cfg.model = ErdosRenyi{0.02 + 0.01 * (seed % 7)};
    auto g = generate_network(cfg);
    REQUIRE(oracle::connected_bfs(g));
    CHECK(g.is_connected());
    for (NodeId v = 0; v < g.node_count(); ++v) {
      auto nb = neighbors(g, v);
      CHECK(std::is_sorted(nb.begin(), nb.end(), [](auto& a, auto& b) {
        return a.first < b.first;
      }));
      for (const auto& [u, params] : nb) {
        CHECK(u != v);
        auto back = neighbors(g, u);
        auto it = std::find_if(back.begin(), back.end(),
                               [&](auto& e) { return e.first == v; });
        REQUIRE(it != back.end());
        CHECK(it->second == params);
      }
    }
  }
}

TEST_CASE("sampled link parameters respect the configured ranges") {
  TopologyConfig cfg;
  cfg.node_count = 30;
  cfg.model = ErdosRenyi{0.3};
  cfg.seed = 5;
  const auto& r = cfg.param_ranges;
  const auto er = generate_network(cfg);
  for (const auto& l : er.links()) {
    CHECK(l.params.p_success >= r.p_success.min);
    CHECK(l.params.p_success <= r.p_success.max);
    CHECK(l.params.length_km >= r.length_km.min);
    CHECK(l.params.length_km <= r.length_km.max);
    CHECK(l.params.base_fidelity <= r.base_fidelity.max);
    CHECK(l.params.coherence_time_s >= r.coherence_time_s.min);
  }
  // Waxman lengths come from geometry, floored at the range minimum.
  cfg.model = Waxman{};
  const auto wx = generate_network(cfg);
  for (const auto& l : wx.links()) {
    CHECK(l.params.length_km >= r.length_km.min);
    CHECK(l.params.length_km <= Waxman{}.area_km * std::sqrt(2.0));
  }
}

TEST_CASE("classical delay is length over fiber light speed") {
  CHECK(classical_delay(plain_link(200.0)) == doctest::Approx(1.0e-3));
  CHECK(classical_delay(plain_link(2.0e5)) == 1.0);
  for (double len : {0.5, 3.0, 77.0, 1234.5}) {
    CHECK(classical_delay(plain_link(2 * len)) ==
          doctest::Approx(2 * classical_delay(plain_link(len))));
    CHECK(classical_delay(plain_link(len * 1.01)) >
          classical_delay(plain_link(len)));
  }
  LinkParams other = plain_link(200.0);
  other.p_success = 0.9;
  other.tau_p_s = 1.0;
  other.tau_d_s = 3.0;
  other.base_fidelity = 0.5;
  other.coherence_time_s = 7.0;
  CHECK(classical_delay(other) == classical_delay(plain_link(200.0)));
}

TEST_CASE("neighbors on a hand-built path") {
  NetworkGraph g(3, {{0, 1, plain_link()}, {2, 1, plain_link(20.0)}});
  auto nb = neighbors(g, 1);
  REQUIRE(nb.size() == 2);
  CHECK(nb[0].first == 0);
  CHECK(nb[1].first == 2);
  CHECK(nb[1].second.length_km == 20.0);

  NetworkGraph two(2, {{0, 1, plain_link()}});
  auto n0 = neighbors(two, 0);
  REQUIRE(n0.size() == 1);
  CHECK(n0[0].first == 1);
  CHECK_THROWS_AS(neighbors(two, 2), UnknownNode);
}

TEST_CASE("graph construction rejects malformed links") {
  CHECK_THROWS_AS(NetworkGraph(2, {{0, 0, plain_link()}}), InvalidConfig);
  CHECK_THROWS_AS(NetworkGraph(2, {{0, 1, plain_link()}, {1, 0, plain_link()}}),
                  InvalidConfig);
  CHECK_THROWS_AS(NetworkGraph(2, {{0, 2, plain_link()}}), InvalidConfig);
  LinkParams bad = plain_link();
  bad.p_success = 0.0;
  CHECK_THROWS_WITH_AS(NetworkGraph(2, {{0, 1, bad}}),
                       doctest::Contains("p_success"), InvalidConfig);
}

TEST_CASE("config validation names the offending key") {
  TopologyConfig cfg;
  cfg.param_ranges.p_success = {0.0, 1.5};
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("p_success"),
                       InvalidConfig);
  cfg = {};
  cfg.param_ranges.tau_d_s = {0.0, 0.0};  // zero cooling time is allowed
  CHECK_NOTHROW(cfg.validate());
  cfg.param_ranges.length_km = {5.0, 1.0};
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("length_km"),
                       InvalidConfig);
  cfg = {};
  cfg.model = ErdosRenyi{0.0};
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("edge_probability"),
                       InvalidConfig);
  cfg = {};
  cfg.node_count = 0;
  CHECK_THROWS_AS(generate_network(cfg), InvalidConfig);
}

TEST_CASE("topology JSON round-trips and rejects bad documents") {
  TopologyConfig cfg;
  cfg.node_count = 12;
  cfg.seed = 3;
  const auto g = generate_network(cfg);
  const auto doc = topology_to_json(g);
  CHECK(doc.begin().key() == "node_count");
  const auto back = topology_from_json(nlohmann::json::parse(doc.dump()));
  CHECK(back == g);

  auto broken = nlohmann::json::parse(doc.dump());
  broken["links"][0].erase("tau_p_s");
  CHECK_THROWS_WITH_AS(topology_from_json(broken), doctest::Contains("tau_p_s"),
                       InvalidConfig);
  CHECK_THROWS_AS(topology_from_json(nlohmann::json::array()), InvalidConfig);
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}
