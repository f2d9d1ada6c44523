#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "corestab/share.hpp"
#include "support.hpp"

using namespace corestab;

namespace {

EmbeddingMatrix matrix(std::size_t n, std::size_t d, std::vector<double> v) {
  EmbeddingMatrix y(n, d);
  std::copy(v.begin(), v.end(), y.values().begin());
  return y;
}

std::vector<double> sorted_sample(corestab::Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(0.0, 5.0);
  // Some exact duplicates so ties between and within samples are exercised.
  if (n > 2 && rng.coin()) v[1] = v[0];
  std::sort(v.begin(), v.end());
  return v;
}

Graph karate() { return load_edge_list(COREstab_DATA_DIR "/karate.txt").graph; }

ShareReport fake_report(const std::vector<double>& deltas) {
  ShareReport r;
  r.records.push_back({});
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    ShareRecord rec;
    rec.k = static_cast<int>(i + 1);
    rec.delta = deltas[i];
    r.records.push_back(rec);
  }
  return r;
}

}  // namespace

TEST_CASE("pairwise distribution examples") {
  auto same = pairwise_distribution(matrix(2, 2, {1, 2, 1, 2}), std::vector<NodeId>{0, 1});
  CHECK(same.distances == std::vector<double>{0.0});
  auto tri = pairwise_distribution(matrix(3, 2, {0, 0, 3, 4, 0, 0}), std::vector<NodeId>{0, 1, 2});
  CHECK(tri.distances == std::vector<double>{0.0, 5.0, 5.0});
  CHECK(tri.mean() == doctest::Approx(10.0 / 3.0));
  auto y = matrix(2, 2, {1, 0, 0, 1});
  CHECK_THROWS_AS(pairwise_distribution(y, std::vector<NodeId>{0}), std::invalid_argument);
  CHECK_THROWS_AS(pairwise_distribution(y, std::vector<NodeId>{0, 5}), std::out_of_range);
  auto cos = pairwise_distribution(y, std::vector<NodeId>{0, 1}, DistanceMetric::cosine);
  CHECK(cos.distances[0] == doctest::Approx(1.0));
}

TEST_CASE("pairwise distribution matches a double loop") {
  corestab::Rng rng(2);
  auto y = line_initialization(10, 4, 3);
  std::vector<NodeId> core = {9, 1, 4, 0, 7};
  auto pd = pairwise_distribution(y, core);
  std::vector<double> brute;
  for (std::size_t a = 0; a < core.size(); ++a)
    for (std::size_t b = a + 1; b < core.size(); ++b) {
      double s = 0;
      for (int c = 0; c < 4; ++c) s += std::pow(y(core[a], c) - y(core[b], c), 2);
      brute.push_back(std::sqrt(s));
    }
  std::sort(brute.begin(), brute.end());
  REQUIRE(pd.distances.size() == brute.size());
  for (std::size_t i = 0; i < brute.size(); ++i) CHECK(pd.distances[i] == doctest::Approx(brute[i]).epsilon(1e-14));
  CHECK(std::is_sorted(pd.distances.begin(), pd.distances.end()));
}

TEST_CASE("emd examples") {
  std::vector<double> a = {0.0, 1.0}, b = {0.5, 0.5}, z = {0.0}, c = {2.5};
  CHECK(emd_1d(a, a) == 0.0);
  CHECK(emd_1d(z, c) == doctest::Approx(2.5));
  CHECK(emd_1d(a, b) == doctest::Approx(0.5));
  CHECK(std::fabs(testing::transport_emd(a, b) - 0.5) <= 1e-12);
  std::vector<double> empty;
  CHECK_THROWS_AS(emd_1d(empty, a), std::invalid_argument);
}

TEST_CASE("emd equals the transport oracle") {
  corestab::Rng rng(314);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = sorted_sample(rng, 1 + rng.below(10));
    auto b = sorted_sample(rng, 1 + rng.below(10));
    CHECK(std::fabs(emd_1d(a, b) - testing::transport_emd(a, b)) <= 1e-9);
  }
}

TEST_CASE("emd is a metric") {
  corestab::Rng rng(271);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = sorted_sample(rng, 1 + rng.below(10));
    auto b = sorted_sample(rng, 1 + rng.below(10));
    auto c = sorted_sample(rng, 1 + rng.below(10));
    CHECK(std::fabs(emd_1d(a, b) - emd_1d(b, a)) <= 1e-12);
    CHECK(emd_1d(a, c) <= emd_1d(a, b) + emd_1d(b, c) + 1e-12);
    CHECK(emd_1d(a, a) == 0.0);
    CHECK(emd_1d(a, b) >= 0.0);
    // Same multiset, different sample sizes: a repeated twice.
    std::vector<double> aa;
    for (double x : a) aa.insert(aa.end(), {x, x});
    CHECK(emd_1d(a, aa) <= 1e-12);
    if (a != b) CHECK(emd_1d(a, b) > 0.0);
  }
}

TEST_CASE("distances and emd scale with the embedding") {
  auto y = line_initialization(8, 3, 1);
  auto x = line_initialization(8, 3, 2);
  std::vector<NodeId> core = {0, 2, 3, 5, 7};
  const double c = 3.7;
  auto scaled = [&](EmbeddingMatrix m) {
    for (double& v : m.values()) v *= c;
    return m;
  };
  auto dy = pairwise_distribution(y, core), dx = pairwise_distribution(x, core);
  auto sy = pairwise_distribution(scaled(y), core), sx = pairwise_distribution(scaled(x), core);
  for (std::size_t i = 0; i < dy.distances.size(); ++i) CHECK(sy.distances[i] == doctest::Approx(c * dy.distances[i]));
  CHECK(emd_1d(sy, sx) == doctest::Approx(c * emd_1d(dy, dx)).epsilon(1e-12));
}

TEST_CASE("shell list") {
  auto b = core_decomposition(testing::bridged_cliques());
  CHECK(share_shells(b) == std::vector<int>{0});
  auto k = core_decomposition(karate());
  CHECK(share_shells(k) == std::vector<int>{0, 1, 2, 3, 4});
  auto with_gap = core_decomposition(testing::from_pairs(
      7, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {4, 5}}));
  CHECK(share_shells(with_gap) == std::vector<int>{0, 1, 3});
  CHECK(share_seed(5, 2) == share_seed(5, 2));
  CHECK(share_seed(5, 2) != share_seed(5, 3));
}

TEST_CASE("share on a clique is a single record") {
  EmbedSpec spec;
  spec.dim = 4;
  auto r = run_share(testing::clique(8), spec, 1);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].k == 0);
  CHECK(r.records[0].emd == 0.0);
  CHECK_FALSE(r.records[0].delta.has_value());
  CHECK(r.core_size == 8);
  CHECK_THROWS_AS(run_share(Graph::from_edges(1, {}), spec, 1), std::invalid_argument);
}

TEST_CASE("share on karate with LINE") {
  EmbedSpec spec;
  spec.dim = 8;
  spec.batches = 50;
  std::vector<int> seen;
  ShareOptions opt;
  opt.dataset = "karate";
  opt.threads = 2;
  opt.on_distribution = [&](const PairwiseDistribution& d) { seen.push_back(d.k); };
  auto g = karate();
  auto r = run_share(g, spec, 7, opt);
  std::vector<int> ks;
  for (auto& rec : r.records) ks.push_back(rec.k);
  CHECK(ks == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(seen == ks);
  CHECK(r.records[0].emd == 0.0);
  CHECK_FALSE(r.records[0].delta.has_value());
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    REQUIRE(r.records[i].delta.has_value());
    CHECK(*r.records[i].delta == doctest::Approx(r.records[i].emd - r.records[i - 1].emd));
    CHECK(r.records[i].subgraph_nodes <= r.records[i - 1].subgraph_nodes);
  }
  CHECK(r.records[0].subgraph_nodes == 34);
  CHECK(r.records.back().subgraph_nodes == r.core_size);
  CHECK(r.degeneracy == 4);
  CHECK(r.records[0].features.transitivity == doctest::Approx(0.2556818181818182));

  opt.threads = 1;
  opt.on_distribution = nullptr;
  auto again = run_share(g, spec, 7, opt);
  CHECK(to_json(again).dump() == to_json(r).dump());
}

TEST_CASE("share measures the core through the subgraph id map") {
  // The k-core embedder returns each row's parent label, so D_k must be the
  // same for every k when ids are mapped correctly.
  auto g = karate();
  KCoreEmbedFn fn = [](int, const Graph& sub, std::uint64_t) {
    EmbeddingMatrix y(sub.node_count(), 1);
    for (NodeId v = 0; v < sub.node_count(); ++v) y(v, 0) = static_cast<double>(sub.label(v));
    return y;
  };
  auto r = run_share(g, fn, 0);
  for (auto& rec : r.records) CHECK(rec.emd == 0.0);
}

TEST_CASE("share keeps records up to a failure") {
  KCoreEmbedFn fn = [](int k, const Graph& sub, std::uint64_t seed) {
    if (k == 3) throw std::runtime_error("boom");
    return line_initialization(sub.node_count(), 3, seed);
  };
  auto r = run_share(karate(), fn, 0);
  CHECK(r.partial());
  CHECK(r.failed_k.value() == 3);
  CHECK(r.failure.find("boom") != std::string::npos);
  REQUIRE(r.records.size() == 3);
  CHECK(r.records.back().k == 2);
}

TEST_CASE("max instability shell") {
  CHECK(max_instability_shell(fake_report({0.1, 0.9, 0.05})) == 2);
  CHECK(max_instability_shell(fake_report({0.3, 0.3, 0.3})) == 1);
  CHECK_THROWS_AS(max_instability_shell(fake_report({})), std::invalid_argument);
}

TEST_CASE("share stability predicate") {
  auto r = fake_report({0.0});
  r.records[0].mean_distance = 1.0;
  r.records[1].emd = 0.1;
  CHECK(share_is_stable(r));
  r.records[1].emd = 0.1000001;
  CHECK_FALSE(share_is_stable(r));
}

TEST_CASE("share report serialisation") {
  EmbedSpec spec;
  spec.dim = 4;
  spec.batches = 20;
  ShareOptions opt;
  opt.dataset = "karate";
  opt.metric = DistanceMetric::cosine;
  auto r = run_share(karate(), spec, 3, opt);
  auto back = share_report_from_json(to_json(r));
  CHECK(to_json(back).dump() == to_json(r).dump());
  CHECK(back.metric == DistanceMetric::cosine);
  CHECK(back.embedder == "line1");
  auto csv = format_share_csv(r);
  CHECK(csv.rfind("k,emd,delta,size,density,clustering,transitivity\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.records.size() + 1));
  auto j = to_json(r);
  j["schema_version"] = 99;
  CHECK_THROWS(share_report_from_json(j));
  CHECK(parse_metric("cosine") == DistanceMetric::cosine);
  CHECK_THROWS(parse_metric("manhattan"));
}
