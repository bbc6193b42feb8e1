#pragma once

// PACE 2017 graphs and tree decompositions, and the conversion of a tree
// decomposition of width k into a fusion expression over k + 2 labels.
//
//   .gr   p tw <n> <m>           then m lines "u v"
//   .td   s td <bags> <w+1> <n>  then "b <id> <v...>" lines and tree edges "a b"
//
// Lines starting with 'c' are comments. Vertex and bag ids are 1-based.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fusion/analysis.hpp"
#include "fusion/expression.hpp"
#include "fusion/graph.hpp"

namespace fusion {

class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& message);

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct HostGraph {
  std::uint32_t n = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // u < v, sorted, 1-based

  SimpleGraph to_simple() const;
  friend bool operator==(const HostGraph&, const HostGraph&) = default;
};

struct TreeDecomposition {
  std::uint32_t vertex_count = 0;
  std::vector<std::vector<std::uint32_t>> bags;  // bag id b is bags[b - 1], sorted
  std::vector<std::pair<std::uint32_t, std::uint32_t>> tree_edges;

  // Largest bag size minus one; -1 when every bag is empty.
  std::int64_t width() const;
};

HostGraph parse_gr(std::string_view text);
std::string write_gr(const HostGraph& g);
std::string write_gr(const SimpleGraph& g);

// Checks the header width against the bags and that the tree edges form a
// tree on the bag ids.
TreeDecomposition parse_td(std::string_view text);
std::string write_td(const TreeDecomposition& td);

// Vertex coverage, edge coverage and connectivity, one violation per
// witness. Violation::preorder carries the witness vertex (or bag) id.
ValidationReport validate_td(const HostGraph& g, const TreeDecomposition& td);

struct TreeDecompositionConversion {
  Expression expression;
  ConversionCertificate certificate;  // output vertex -> host vertex (0-based)
  std::size_t join_sites = 0;         // joins emitted, one per host edge
};

// Throws std::invalid_argument when validate_td fails or the graph has no
// vertices.
TreeDecompositionConversion td_to_fusion(const HostGraph& g, const TreeDecomposition& td);

// Size bound of td_to_fusion: node_count <= |E| + (4 w + 5) |bags| for width w.
std::uint64_t td_size_bound(const HostGraph& g, const TreeDecomposition& td);

}  // namespace fusion
