#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "greed/io_util.hpp"
#include "greed/matrix.hpp"

namespace greed {

// Dense per-node vectors, row-major. Saved as a text file whose first line
// is "<count> <dim>" followed by one "node v0 v1 ..." line per node.
struct EmbeddingTable {
  std::size_t count = 0;
  int dim = 0;
  std::vector<double> data;

  EmbeddingTable() = default;
  EmbeddingTable(std::size_t count_, int dim_)
      : count(count_), dim(dim_), data(count_ * static_cast<std::size_t>(dim_), 0.0) {}

  double* row(std::size_t i) { return data.data() + i * static_cast<std::size_t>(dim); }
  const double* row(std::size_t i) const {
    return data.data() + i * static_cast<std::size_t>(dim);
  }

  Vec vec(std::size_t i) const {
    const double* r = row(i);
    return Vec(r, r + dim);
  }
};

inline void save_embeddings(const std::string& path, const EmbeddingTable& table) {
  auto out = open_output(path);
  out << table.count << " " << table.dim << "\n";
  for (std::size_t i = 0; i < table.count; ++i) {
    out << i;
    const double* r = table.row(i);
    for (int d = 0; d < table.dim; ++d) out << " " << fmt_g17(r[d]);
    out << "\n";
  }
}

inline EmbeddingTable load_embeddings(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("embedding file is empty: " + path);
  std::istringstream header(line);
  std::size_t count;
  int dim;
  if (!(header >> count >> dim) || dim <= 0)
    throw std::runtime_error("bad embedding header (want \"<count> <dim>\"): " + path);

  EmbeddingTable table(count, dim);
  std::vector<bool> seen(count, false);
  std::size_t line_no = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::size_t node;
    if (!(ss >> node))
      throw std::runtime_error("bad embedding row at line " + std::to_string(line_no));
    if (node >= count)
      throw std::runtime_error("embedding node id out of range at line " +
                               std::to_string(line_no));
    if (seen[node])
      throw std::runtime_error("duplicate embedding row for node " +
                               std::to_string(node));
    double* r = table.row(node);
    for (int d = 0; d < dim; ++d) {
      if (!(ss >> r[d]))
        throw std::runtime_error("embedding row too short at line " +
                                 std::to_string(line_no));
    }
    std::string extra;
    if (ss >> extra)
      throw std::runtime_error("embedding row too long at line " +
                               std::to_string(line_no));
    seen[node] = true;
    ++rows;
  }
  if (rows != count)
    throw std::runtime_error("embedding file declares " + std::to_string(count) +
                             " rows but has " + std::to_string(rows));
  return table;
}

}  // namespace greed
