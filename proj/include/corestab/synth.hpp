#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "corestab/graph.hpp"

namespace corestab {

enum class GraphModel { erdos_renyi, barabasi_albert };

struct GenSpec {
  GraphModel model = GraphModel::erdos_renyi;
  std::size_t n = 0;
  double p = 0.0;          ///< ER edge probability
  std::size_t m_attach = 0;  ///< BA edges per arrival
  std::uint64_t seed = 0;

  void validate() const;
};

/// ER: every pair independently with probability p (geometric skipping).
/// BA: m seed nodes without edges; node m attaches to all of them, every later
/// node attaches to m distinct targets drawn proportional to degree.
/// Throws std::invalid_argument on an invalid spec.
Graph generate(const GenSpec& spec);

nlohmann::json to_json(const GenSpec& spec);
/// Keys: model ("er" | "ba"), n, p or m, seed.
GenSpec gen_spec_from_json(const nlohmann::json& j);

std::string to_string(GraphModel m);

}  // namespace corestab
