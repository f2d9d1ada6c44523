#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "corestab/graph.hpp"
#include "corestab/kcore.hpp"
#include "support.hpp"

using namespace corestab;

namespace {

Graph karate() { return load_edge_list(COREstab_DATA_DIR "/karate.txt").graph; }

// Connected triples and clustering straight from definitions.
SubgraphFeatures brute_features(const Graph& g) {
  SubgraphFeatures f;
  const double n = static_cast<double>(g.node_count());
  f.size = n;
  f.edge_density = n < 2 ? 0.0 : 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1));
  auto tri = testing::brute_triangles(g);
  double closed = 0, triples = 0, cc = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const double d = static_cast<double>(g.degree(v));
    const double pairs = d * (d - 1) / 2;
    triples += pairs;
    closed += tri[v];
    if (pairs > 0) cc += tri[v] / pairs;
  }
  f.avg_clustering = n > 0 ? cc / n : 0.0;
  f.transitivity = triples > 0 ? closed / triples : 0.0;
  return f;
}

}  // namespace

TEST_CASE("coreness of small graphs") {
  auto p = core_decomposition(testing::path(5));
  CHECK(p.degeneracy == 1);
  CHECK(p.degenerate_core.size() == 5);
  auto s = core_decomposition(testing::star(5));
  CHECK(s.degeneracy == 1);
  auto t = core_decomposition(testing::clique(3));
  CHECK(t.degeneracy == 2);
  CHECK(t.degenerate_core == std::vector<NodeId>{0, 1, 2});
  auto e = core_decomposition(Graph::from_edges(3, {}));
  CHECK(e.degeneracy == 0);
  CHECK(e.distinct_values() == std::vector<int>{0});
}

TEST_CASE("karate club degeneracy") {
  auto g = karate();
  REQUIRE(g.node_count() == 34);
  REQUIRE(g.edge_count() == 78);
  auto cm = core_decomposition(g);
  CHECK(cm.degeneracy == 4);
  CHECK(cm.distinct_values() == std::vector<int>{1, 2, 3, 4});
  auto sub = k_core_subgraph(g, cm, 4);
  CHECK(sub.graph.node_count() == cm.degenerate_core.size());
  for (NodeId l = 0; l < sub.graph.node_count(); ++l) CHECK(cm.coreness[sub.to_parent(l)] == 4);
}

TEST_CASE("peeling matches the naive deletion oracle") {
  corestab::Rng rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(49);
    const double p = rng.uniform(0.05, 0.5);
    auto g = testing::coin_flip_graph(n, p, rng);
    auto cm = core_decomposition(g);
    auto oracle = testing::naive_coreness(g);
    REQUIRE(cm.coreness == oracle);
    CHECK(cm.degeneracy == *std::max_element(oracle.begin(), oracle.end()));
  }
}

TEST_CASE("k-cores are nested and k = 0 is the whole graph") {
  corestab::Rng rng(5);
  auto g = testing::coin_flip_graph(60, 0.15, rng);
  auto cm = core_decomposition(g);
  for (int k = 0; k < cm.degeneracy; ++k) {
    auto a = k_core_nodes(cm, k), b = k_core_nodes(cm, k + 1);
    CHECK(std::includes(a.begin(), a.end(), b.begin(), b.end()));
  }
  auto whole = k_core_subgraph(g, cm, 0);
  CHECK(whole.graph.node_count() == g.node_count());
  CHECK(whole.graph.edge_count() == g.edge_count());
  for (const Edge& e : whole.graph.edges()) CHECK(g.has_edge(whole.to_parent(e.u), whole.to_parent(e.v)));
  CHECK_THROWS_AS(k_core_subgraph(g, cm, cm.degeneracy + 1), std::out_of_range);
  CHECK_THROWS_AS(k_core_subgraph(g, cm, -1), std::out_of_range);
  CHECK_THROWS_AS(k_core_subgraph(testing::star(5), core_decomposition(testing::star(5)), 2), std::out_of_range);
}

TEST_CASE("subgraph features") {
  auto t = subgraph_features(testing::clique(3));
  CHECK(t.edge_density == 1.0);
  CHECK(t.avg_clustering == 1.0);
  CHECK(t.transitivity == 1.0);
  auto p = subgraph_features(testing::path(3));
  CHECK(p.edge_density == doctest::Approx(2.0 / 3.0));
  CHECK(p.avg_clustering == 0.0);
  CHECK(p.transitivity == 0.0);
  // K4 without one edge: 2 triangles, 8 connected triples.
  auto k4e = subgraph_features(testing::from_pairs(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}));
  CHECK(k4e.transitivity == doctest::Approx(0.75));
  auto single = subgraph_features(Graph::from_edges(1, {}));
  CHECK(single.edge_density == 0.0);
}

TEST_CASE("subgraph features match definitions on random graphs") {
  corestab::Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = testing::coin_flip_graph(5 + rng.below(30), rng.uniform(0.05, 0.6), rng);
    auto f = subgraph_features(g);
    auto b = brute_features(g);
    CHECK(f.size == b.size);
    CHECK(f.edge_density == doctest::Approx(b.edge_density).epsilon(1e-12));
    CHECK(f.avg_clustering == doctest::Approx(b.avg_clustering).epsilon(1e-12));
    CHECK(f.transitivity == doctest::Approx(b.transitivity).epsilon(1e-12));
  }
}

TEST_CASE("karate features") {
  auto f = subgraph_features(karate());
  CHECK(f.avg_clustering == doctest::Approx(0.5706384782076823).epsilon(1e-12));
  CHECK(f.transitivity == doctest::Approx(0.2556818181818182).epsilon(1e-12));
}

TEST_CASE("core completeness") {
  for (std::size_t n : {2u, 5u, 12u}) {
    auto g = testing::clique(n);
    CHECK(core_completeness(g, core_decomposition(g)) == 1.0);
  }
  auto b = testing::bridged_cliques();
  CHECK(core_completeness(b, core_decomposition(b)) == doctest::Approx(21.0 / 45.0));
  CHECK_THROWS_AS(core_completeness(testing::star(3), CorenessMap{{0, 1, 1, 1}, 2, {0}}), std::invalid_argument);
}
