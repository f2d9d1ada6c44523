#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "corestab/graph.hpp"
#include "corestab/kcore.hpp"
#include "corestab/rng.hpp"

namespace testing {

using corestab::Graph;

Graph clique(std::size_t n);
Graph path(std::size_t n);
Graph cycle(std::size_t n);
Graph star(std::size_t leaves);

/// Two 5-cliques joined by a single edge between node 4 and node 5.
Graph bridged_cliques();

/// Edges as (u, v) pairs; ids 0..n-1.
Graph from_pairs(std::size_t n, const std::vector<std::pair<int, int>>& pairs);

/// G(n, p) by independent coin flips over all pairs (no skipping).
Graph coin_flip_graph(std::size_t n, double p, corestab::Rng& rng);

/// Coreness by repeated deletion: for k = 1, 2, ... delete nodes of degree < k
/// until none remain; a node's coreness is the last k whose core contains it.
std::vector<int> naive_coreness(const Graph& g);

/// Triangle count at each node by checking every neighbour pair.
std::vector<double> brute_triangles(const Graph& g);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

/// Relative path -> file bytes for every regular file under `dir`, except
/// manifest.json (which records wall time).
std::map<std::string, std::string> dir_snapshot(const std::filesystem::path& dir);

/// Wasserstein-1 between two uniform-weight samples by solving the transport
/// problem as a min-cost flow (successive shortest paths on integer supplies).
double transport_emd(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace testing
