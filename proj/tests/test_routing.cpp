#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "qnet/errors.hpp"
#include "qnet/routing.hpp"

using namespace qnet;
using oracle::link_with_weight;

namespace {

NetworkGraph generated(std::size_t n, std::uint64_t seed, bool waxman = true) {
  TopologyConfig cfg;
  cfg.node_count = n;
  cfg.seed = seed;
  if (!waxman) cfg.model = ErdosRenyi{0.4};
  return generate_network(cfg);
}

bool is_simple(const std::vector<NodeId>& p) {
  return std::set<NodeId>(p.begin(), p.end()).size() == p.size();
}

NetworkGraph two_nodes() { return NetworkGraph(2, {{0, 1, link_with_weight(2.0)}}); }

}  // namespace

TEST_CASE("protocol names round-trip") {
  for (Protocol p : kAllProtocols) CHECK(parse_protocol(to_string(p)) == p);
  CHECK(to_string(Protocol::BellmanFord) == "bellman-ford");
  CHECK_FALSE(parse_protocol("ospf").has_value());
}

TEST_CASE("loop erasure keeps the chronological loop-free trace") {
  CHECK(erase_loops({0, 1, 2, 1, 3}) == std::vector<NodeId>{0, 1, 3});
  CHECK(erase_loops({0, 1, 0, 1, 9}) == std::vector<NodeId>{0, 1, 9});
  CHECK(erase_loops({4, 2, 5, 6, 2, 7, 4, 8}) == std::vector<NodeId>{4, 8});
  CHECK(erase_loops({3}) == std::vector<NodeId>{3});
}

TEST_CASE("two-node graph: every protocol takes the only link") {
  const auto g = two_nodes();
  for (Protocol p : kAllProtocols) {
    auto r = route(p, g, 0, 1, GaConfig{}, QlConfig{});
    CHECK(r.protocol == p);
    CHECK(r.reached_destination);
    CHECK(r.metrics.node_sequence == std::vector<NodeId>{0, 1});
    CHECK(r.metrics.total_weight == 2.0);
    CHECK(r.metrics.fidelity == doctest::Approx(link_fidelity(g.link(0).params)));
    CHECK(r.exec_time_s >= 0.0);
  }
}

TEST_CASE("triangle: two cheap hops beat one expensive link") {
  NetworkGraph g(3, {{0, 2, link_with_weight(10.0)},
                     {0, 1, link_with_weight(1.0)},
                     {1, 2, link_with_weight(1.0)}});
  for (auto r : {route_dijkstra(g, 0, 2), route_bellman_ford(g, 0, 2)}) {
    CHECK(r.metrics.node_sequence == std::vector<NodeId>{0, 1, 2});
    CHECK(r.metrics.total_weight == 2.0);
  }
}

TEST_CASE("ties go to fewer nodes, then to the smaller sequence") {
  // 0-3 direct (2) equals 0-1-3 (1+1): the direct link wins.
  NetworkGraph hops(4, {{0, 3, link_with_weight(2.0)},
                        {0, 1, link_with_weight(1.0)},
                        {1, 3, link_with_weight(1.0)}});
  CHECK(route_dijkstra(hops, 0, 3).metrics.node_sequence ==
        std::vector<NodeId>{0, 3});
  CHECK(route_bellman_ford(hops, 0, 3).metrics.node_sequence ==
        std::vector<NodeId>{0, 3});

  // Square 0-2-3 / 0-1-3 with equal weights: 0-1-3 is lexicographically first.
  NetworkGraph square(4, {{0, 2, link_with_weight(1.0)},
                          {2, 3, link_with_weight(1.0)},
                          {0, 1, link_with_weight(1.0)},
                          {1, 3, link_with_weight(1.0)}});
  CHECK(route_dijkstra(square, 0, 3).metrics.node_sequence ==
        std::vector<NodeId>{0, 1, 3});
  CHECK(route_bellman_ford(square, 0, 3).metrics.node_sequence ==
        std::vector<NodeId>{0, 1, 3});
  CHECK(route_dijkstra(square, 3, 0).metrics.node_sequence ==
        std::vector<NodeId>{3, 1, 0});
}

TEST_CASE("argument and reachability errors") {
  NetworkGraph split(4, {{0, 1, link_with_weight(1.0)}, {2, 3, link_with_weight(1.0)}});
  for (Protocol p : kAllProtocols) {
    CHECK_THROWS_AS(route(p, split, 0, 3, GaConfig{}, QlConfig{}), Unreachable);
    CHECK_THROWS_AS(route(p, split, 0, 7, GaConfig{}, QlConfig{}), UnknownNode);
    CHECK_THROWS_AS(route(p, split, 1, 1, GaConfig{}, QlConfig{}), InvalidConfig);
  }
}

TEST_CASE("Dijkstra matches exhaustive enumeration on small graphs") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = generated(3 + seed % 6, seed, seed % 3 != 0);
    for (NodeId s = 0; s < g.node_count(); ++s) {
      for (NodeId d = 0; d < g.node_count(); ++d) {
        if (s == d) continue;
        const auto best = oracle::brute_force(g, s, d);
        auto r = route_dijkstra(g, s, d);
        CHECK(r.metrics.total_weight ==
              doctest::Approx(best.min_weight).epsilon(1e-12));
        CHECK(r.metrics.node_sequence.front() == s);
        CHECK(r.metrics.node_sequence.back() == d);
        CHECK(is_simple(r.metrics.node_sequence));
      }
    }
  }
}

TEST_CASE("Bellman-Ford and Dijkstra agree on larger generated graphs") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 5 + seed % 46;
    const auto g = generated(n, 1000 + seed, seed % 2 == 0);
    const NodeId s = seed % n;
    const NodeId d = (seed * 7 + 3) % n == s ? (s + 1) % n : (seed * 7 + 3) % n;
    auto a = route_dijkstra(g, s, d);
    auto b = route_bellman_ford(g, s, d);
    CHECK(a.metrics.total_weight == b.metrics.total_weight);
    CHECK(a.metrics.node_sequence == b.metrics.node_sequence);
  }
}

TEST_CASE("genetic search") {
  SUBCASE("config validation") {
    GaConfig cfg;
    cfg.elitism_count = cfg.population_size;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("elitism_count"),
                         InvalidConfig);
    cfg = {};
    cfg.mutation_rate = 1.5;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
  }

  SUBCASE("never worse than the Dijkstra path, always simple") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const std::size_t n = 4 + seed % 30;
      const auto g = generated(n, 500 + seed);
      GaConfig cfg;
      cfg.seed = seed;
      cfg.generations = 30;
      auto ga = route_genetic(g, 0, n - 1, cfg);
      auto dj = route_dijkstra(g, 0, n - 1);
      CHECK(ga.metrics.fidelity >= dj.metrics.fidelity);
      CHECK(is_simple(ga.metrics.node_sequence));
      CHECK(ga.metrics.node_sequence.front() == 0);
      CHECK(ga.metrics.node_sequence.back() == n - 1);
    }
  }

  SUBCASE("best fitness never decreases across generations") {
    const auto g = generated(40, 77);
    GaConfig cfg;
    cfg.seed = 3;
    auto trace = evolve_paths(g, 0, 39, cfg);
    REQUIRE(trace.best_per_generation.size() == cfg.generations + 1);
    for (std::size_t i = 1; i < trace.best_per_generation.size(); ++i) {
      CHECK(trace.best_per_generation[i] >= trace.best_per_generation[i - 1]);
    }
    CHECK(trace.best_fitness == trace.best_per_generation.back());
  }

  SUBCASE("finds the maximum-fidelity path on small graphs") {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto g = generated(8, 2000 + seed, false);
      GaConfig cfg;
      cfg.seed = seed;
      auto ga = route_genetic(g, 0, 7, cfg);
      const auto best = oracle::brute_force(g, 0, 7);
      hits += ga.metrics.fidelity >= best.max_fidelity * (1 - 1e-12) ? 1 : 0;
    }
    CHECK(hits >= 28);
  }

  SUBCASE("deterministic for a fixed seed") {
    const auto g = generated(30, 5);
    GaConfig cfg;
    cfg.seed = 11;
    auto a = route_genetic(g, 0, 29, cfg);
    auto b = route_genetic(g, 0, 29, cfg);
    CHECK(a.metrics.node_sequence == b.metrics.node_sequence);
    CHECK(a.metrics.fidelity == b.metrics.fidelity);
  }
}

TEST_CASE("Q-learning") {
  SUBCASE("config validation") {
    QlConfig cfg;
    cfg.discount = 1.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("discount"),
                         InvalidConfig);
    cfg = {};
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
  }

  SUBCASE("walks are capped and deterministic") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const std::size_t n = 10 + seed;
      const auto g = generated(n, 300 + seed);
      QlConfig cfg;
      cfg.seed = seed;
      cfg.episodes = 50;
      auto a = route_qlearning(g, 0, n - 1, cfg);
      auto b = route_qlearning(g, 0, n - 1, cfg);
      CHECK(a.metrics.node_sequence == b.metrics.node_sequence);
      CHECK(a.metrics.node_sequence.size() - 1 <= cfg.max_steps_factor * n);
      CHECK(a.metrics.node_sequence.front() == 0);
      CHECK(a.reached_destination == (a.metrics.node_sequence.back() == n - 1));
      CHECK(a.metrics.fidelity == path_fidelity(g, a.metrics.node_sequence));
    }
  }

  SUBCASE("a truncated walk is reported as not reaching the destination") {
    const auto g = generated(30, 8);
    QlConfig cfg;
    cfg.episodes = 1;
    cfg.epsilon = 0.0;
    cfg.max_steps_factor = 1;
    auto r = route_qlearning(g, 0, 29, cfg);
    if (!r.reached_destination) {
      CHECK(r.metrics.node_sequence.size() == 31);
      CHECK(r.metrics.fidelity < 1.0);
    } else {
      CHECK(r.metrics.node_sequence.back() == 29);
    }
  }

  SUBCASE("looping walk on the documented seed") {
    // Size 20, topology seed 60, Q-learning seed 60.
    TopologyConfig topo;
    topo.node_count = 20;
    topo.seed = 60;
    const auto g = generate_network(topo);
    QlConfig cfg;
    cfg.seed = 60;
    auto ql = route_qlearning(g, 0, 19, cfg);
    auto dj = route_dijkstra(g, 0, 19);
    CHECK_FALSE(is_simple(ql.metrics.node_sequence));
    CHECK(ql.metrics.fidelity < dj.metrics.fidelity);
  }
}
