#include <bit>
#include <cstring>
#include <sstream>
#include <unordered_map>

#include "corestab/embedding.hpp"
#include "corestab/error.hpp"
#include "corestab/io.hpp"

namespace corestab {

static_assert(std::endian::native == std::endian::little, "binary embedding format assumes little endian");

std::string format_embedding_csv(const EmbeddingMatrix& y, std::span<const NodeLabel> labels) {
  if (labels.size() != y.rows()) throw std::invalid_argument("label count does not match embedding rows");
  std::string out = "node_id";
  for (std::size_t k = 0; k < y.dims(); ++k) out += ",e" + std::to_string(k);
  out += '\n';
  for (std::size_t i = 0; i < y.rows(); ++i) {
    out += std::to_string(labels[i]);
    for (double x : y.row(i)) {
      out += ',';
      out += format_double(x);
    }
    out += '\n';
  }
  return out;
}

LabelledEmbedding parse_embedding_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::size_t dims = 0;
  bool header = false;
  std::vector<NodeLabel> labels;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!header) {
      if (fields.size() < 2 || fields[0] != "node_id") throw ParseError("expected header node_id,e0,...", lineno);
      dims = fields.size() - 1;
      header = true;
      continue;
    }
    if (fields.size() != dims + 1) throw ParseError("expected " + std::to_string(dims + 1) + " fields", lineno);
    try {
      std::size_t pos = 0;
      labels.push_back(std::stoll(fields[0], &pos));
      if (pos != fields[0].size()) throw ParseError("bad node id", lineno);
      for (std::size_t k = 1; k <= dims; ++k) {
        values.push_back(std::stod(fields[k], &pos));
        if (pos != fields[k].size()) throw ParseError("bad value '" + fields[k] + "'", lineno);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("malformed embedding row", lineno);
    }
  }
  if (!header) throw ParseError("empty embedding file");
  LabelledEmbedding out;
  out.embedding = EmbeddingMatrix(labels.size(), dims);
  std::copy(values.begin(), values.end(), out.embedding.values().begin());
  out.labels = std::move(labels);
  return out;
}

LabelledEmbedding load_embedding_csv(const std::filesystem::path& path) {
  return parse_embedding_csv(read_file(path));
}

EmbeddingMatrix align_embedding(const LabelledEmbedding& e, const Graph& g) {
  std::unordered_map<NodeLabel, std::size_t> row_of;
  for (std::size_t r = 0; r < e.labels.size(); ++r) row_of[e.labels[r]] = r;
  EmbeddingMatrix out(g.node_count(), e.embedding.dims());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto it = row_of.find(g.label(v));
    if (it == row_of.end()) throw ParseError("embedding has no row for node " + std::to_string(g.label(v)));
    auto src = e.embedding.row(it->second);
    std::copy(src.begin(), src.end(), out.row(v).begin());
  }
  return out;
}

std::string format_embedding_binary(const EmbeddingMatrix& y) {
  std::string out(kEmbeddingMagic, sizeof kEmbeddingMagic);
  const std::uint64_t header[2] = {y.rows(), y.dims()};
  out.append(reinterpret_cast<const char*>(header), sizeof header);
  out.append(reinterpret_cast<const char*>(y.values().data()), y.values().size() * sizeof(double));
  return out;
}

EmbeddingMatrix parse_embedding_binary(const std::string& bytes) {
  constexpr std::size_t head = sizeof kEmbeddingMagic + 2 * sizeof(std::uint64_t);
  if (bytes.size() < head || std::memcmp(bytes.data(), kEmbeddingMagic, sizeof kEmbeddingMagic) != 0)
    throw ParseError("not a binary embedding file");
  std::uint64_t n = 0, d = 0;
  std::memcpy(&n, bytes.data() + 8, 8);
  std::memcpy(&d, bytes.data() + 16, 8);
  if (d != 0 && n > (bytes.size() - head) / sizeof(double) / d) throw ParseError("truncated binary embedding");
  if (bytes.size() != head + n * d * sizeof(double)) throw ParseError("binary embedding size mismatch");
  EmbeddingMatrix y(n, d);
  std::memcpy(y.values().data(), bytes.data() + head, n * d * sizeof(double));
  return y;
}

}  // namespace corestab
