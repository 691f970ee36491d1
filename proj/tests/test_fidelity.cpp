#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qnet/entanglement.hpp"
#include "qnet/errors.hpp"
#include "qnet/fidelity.hpp"

using namespace qnet;
using oracle::link_with_fidelity;

TEST_CASE("link fidelity decays with generation time over coherence time") {
  LinkParams fast;
  fast.base_fidelity = 0.99;
  fast.p_success = 1.0;
  fast.tau_p_s = 0.5e-6;
  fast.length_km = 0.1;  // T = 1e-6 s
  fast.coherence_time_s = 1.0;
  CHECK(link_fidelity(fast) == doctest::Approx(0.99).epsilon(1e-5));

  LinkParams slow = fast;
  slow.base_fidelity = 1.0;
  slow.coherence_time_s = expected_generation_time(slow);
  CHECK(link_fidelity(slow) == doctest::Approx(std::exp(-1.0)));
  CHECK(link_fidelity(slow) == doctest::Approx(0.3679).epsilon(1e-4));

  for (const auto& l : {fast, slow}) {
    CHECK(link_fidelity(l) <= l.base_fidelity);
    CHECK(link_fidelity(l) > 0.0);
  }
}

TEST_CASE("link weight is the reciprocal of the fresh-pair rate") {
  LinkParams l = oracle::link_with_weight(1.0);
  l.p_success = 0.5;
  l.tau_d_s = 1.5;  // T_f = 2, T_s = 1
  CHECK(entanglement_rate(l, 0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(link_weight(l) == 3.0);
  CHECK(link_weight(l) > 0.0);

  NetworkGraph g(10, {{0, 9, l}});
  const std::vector<NodeId> p{0, 9};
  CHECK(path_weight(g, p) == link_weight(l));
}

TEST_CASE("path fidelity multiplies every traversal") {
  NetworkGraph g(10, {{0, 1, link_with_fidelity(0.9)},
                      {1, 9, link_with_fidelity(0.9)},
                      {1, 2, link_with_fidelity(0.8)}});
  const std::vector<NodeId> single{0};
  CHECK(path_fidelity(g, single) == 1.0);

  const std::vector<NodeId> two{0, 1, 2};
  CHECK(path_fidelity(g, two) == doctest::Approx(0.72));

  // (0,1),(1,0),(0,1),(1,9): four traversals of 0.9 links.
  const std::vector<NodeId> loop{0, 1, 0, 1, 9};
  CHECK(path_fidelity(g, loop) == doctest::Approx(0.6561));
  // Link (0,1) walked three times: F01^3 * F19 = F01^2 * loop-free product.
  const std::vector<NodeId> direct{0, 1, 9};
  CHECK(path_fidelity(g, loop) ==
        doctest::Approx(std::pow(0.9, 2) * path_fidelity(g, direct)));

  const std::vector<NodeId> broken{0, 9};
  CHECK_THROWS_AS(path_fidelity(g, broken), NotAPath);
  CHECK_THROWS_AS(path_weight(g, broken), NotAPath);
  CHECK_THROWS_AS(path_fidelity(g, std::vector<NodeId>{}), NotAPath);
}

TEST_CASE("path metrics count nodes, not links") {
  NetworkGraph g(10, {{0, 9, link_with_fidelity(0.95)}});
  auto m = path_metrics(g, {0, 9});
  CHECK(m.path_length == 2);
  CHECK(m.fidelity == doctest::Approx(0.95));
  CHECK(m.total_weight == link_weight(g.link(0).params));
}

TEST_CASE("path fidelity laws on generated graphs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    TopologyConfig cfg;
    cfg.node_count = 8;
    cfg.model = ErdosRenyi{0.5};
    cfg.seed = seed;
    const auto g = generate_network(cfg);
    const auto paths = oracle::simple_paths(g, 0, 7);
    REQUIRE(!paths.empty());

    double best_product = 0.0;
    double best_neg_log = INFINITY;
    std::vector<NodeId> arg_product, arg_neg_log;
    for (const auto& p : paths) {
      const double f = path_fidelity(g, p);
      // Never above the weakest link; split anywhere gives the product.
      double weakest = 1.0;
      double neg_log = 0.0;
      for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const double fe = link_fidelity(g.link(*g.find_link(p[i], p[i + 1])).params);
        weakest = std::min(weakest, fe);
        neg_log += -std::log(fe);
      }
      CHECK(f <= weakest);
      for (std::size_t cut = 0; cut < p.size(); ++cut) {
        std::vector<NodeId> head(p.begin(), p.begin() + cut + 1);
        std::vector<NodeId> tail(p.begin() + cut, p.end());
        CHECK(path_fidelity(g, head) * path_fidelity(g, tail) ==
              doctest::Approx(f).epsilon(1e-12));
        // Extending a prefix never raises fidelity.
        if (cut + 1 < p.size()) {
          std::vector<NodeId> longer(p.begin(), p.begin() + cut + 2);
          CHECK(path_fidelity(g, longer) <= path_fidelity(g, head));
        }
      }
      if (f > best_product) {
        best_product = f;
        arg_product = p;
      }
      if (neg_log < best_neg_log) {
        best_neg_log = neg_log;
        arg_neg_log = p;
      }
    }
    CHECK(path_fidelity(g, arg_product) ==
          doctest::Approx(path_fidelity(g, arg_neg_log)).epsilon(1e-12));
  }
}
