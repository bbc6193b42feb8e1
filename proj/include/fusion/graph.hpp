#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fusion/expression.hpp"

namespace fusion {

using VertexId = std::uint32_t;

class SizeLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(std::size_t n) : adjacency_(n) {}

  // Duplicate edges are collapsed; self-loops and out-of-range endpoints throw.
  static SimpleGraph from_edges(std::size_t n, std::vector<std::pair<VertexId, VertexId>> edges);

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  // Returns false when the edge was already present.
  bool add_edge(VertexId u, VertexId v);
  bool has_edge(VertexId u, VertexId v) const;
  const std::vector<VertexId>& neighbors(VertexId v) const { return adjacency_[v]; }

  // Every edge once as (u, v) with u < v, in ascending order.
  std::vector<std::pair<VertexId, VertexId>> edges() const;

  friend bool operator==(const SimpleGraph&, const SimpleGraph&) = default;

 private:
  std::vector<std::vector<VertexId>> adjacency_;
  std::size_t edge_count_ = 0;
};

// Identifies one vertex created by an atom: the atom's position among all
// atoms of the expression in preorder, and the copy within the atom.
struct CreationId {
  std::uint32_t atom = 0;
  std::uint64_t offset = 0;

  friend auto operator<=>(const CreationId&, const CreationId&) = default;
};

// A generated graph together with vertex labels and, for every vertex, the
// set of atom creations that were fused into it.
class LabeledGraph {
 public:
  LabeledGraph() = default;
  LabeledGraph(SimpleGraph structure, std::vector<LabelId> labels, std::vector<std::vector<CreationId>> provenance);

  // Provenance {(v, 0)} for every vertex v; handy for hand-built graphs.
  static LabeledGraph with_fresh_provenance(SimpleGraph structure, std::vector<LabelId> labels);

  const SimpleGraph& structure() const { return structure_; }
  std::size_t vertex_count() const { return labels_.size(); }
  std::size_t edge_count() const { return structure_.edge_count(); }
  LabelId label(VertexId v) const { return labels_[v]; }
  const std::vector<LabelId>& labels() const { return labels_; }
  const std::vector<CreationId>& provenance(VertexId v) const { return provenance_[v]; }

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;

 private:
  SimpleGraph structure_;
  std::vector<LabelId> labels_;
  std::vector<std::vector<CreationId>> provenance_;  // each sorted
};

// Merges every vertex labeled `label` into one vertex adjacent to the union
// of their neighbours outside the label class. Fewer than two such vertices
// leave the graph unchanged. Vertices stay ordered by smallest creation.
LabeledGraph fuse_label(const LabeledGraph& g, LabelId label);

// Output vertex i of a conversion corresponds to input vertex to_input[i].
struct ConversionCertificate {
  std::vector<VertexId> to_input;
};

// True iff `cert` is a bijection from `output` onto `input` that preserves
// adjacency in both directions. Labels play no role. Throws CertificateError
// when the certificate is not total on `output` or not injective.
bool check_correspondence(const SimpleGraph& input, const SimpleGraph& output, const ConversionCertificate& cert);

// Exhaustive isomorphism test for small graphs; throws SizeLimitExceeded
// when either graph has more than `limit` vertices.
bool isomorphic_small(const SimpleGraph& a, const SimpleGraph& b, std::size_t limit = 10);

// One line per vertex: id, label, provenance and sorted neighbours.
std::string dump_labeled_graph(const LabeledGraph& g);

}  // namespace fusion
