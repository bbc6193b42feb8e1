#pragma once

#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "fusion/expression.hpp"
#include "fusion/graph.hpp"

namespace fusion {

// Evaluates the expression bottom-up. Vertex ids are assigned by smallest
// creation, so identical expressions give identical graphs.
LabeledGraph evaluate(const Expression& e);

// Bookkeeping of one evaluation. Every vertex that ever existed is an item:
// atoms create leaf items, a fuse that merges two or more items creates an
// inner item whose parts are the merged ones.
struct EvaluationTrace {
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Item {
    CreationId first_creation;             // smallest creation below this item
    std::vector<std::uint32_t> parts;      // empty for leaves
    std::size_t fuse_preorder = 0;         // inner items: the fuse node occurrence
    std::uint32_t merged_into = kNone;     // the item this one was fused into
  };

  // A join node connected the (then alive) items a and b.
  struct Witness {
    std::size_t join_preorder;
    std::uint32_t a;
    std::uint32_t b;
  };

  std::vector<Item> items;
  std::vector<std::uint32_t> vertex_item;  // final vertex -> its item
  std::vector<std::uint32_t> atom_first_item;  // leaf item of copy 0 of each atom; copies follow
  std::vector<std::size_t> atom_preorder;  // node preorder index of each atom
  std::vector<Witness> witnesses;          // filled when requested
  std::vector<VertexId> root_vertex;       // item -> final vertex, for items alive at the root
  LabeledGraph graph;

  // The item an item ends up in at the root.
  std::uint32_t root_of(std::uint32_t item) const;
  // Final vertex owning an item.
  VertexId vertex_of(std::uint32_t item) const;
};

EvaluationTrace evaluate_traced(const Expression& e, bool record_witnesses);

// Where an output atom of a rewrite came from: output copy t of the atom is
// input creation (atom, offset_base + t).
struct AtomOrigin {
  std::uint32_t atom;
  std::uint64_t offset_base;
};

// Builds the output -> input vertex certificate of a rewrite from the atom
// origins of the output expression (indexed by output atom preorder).
// Throws CertificateError if some output vertex mixes creations of
// different input vertices.
ConversionCertificate certificate_from_origins(const LabeledGraph& input, const LabeledGraph& output,
                                               const std::vector<AtomOrigin>& origins);

// Atom nodes in preorder.
std::vector<const Verts*> atoms_in_preorder(const Expression& e);

// Collects per-output-atom origins from a node -> origin table filled while
// the output was built. Every atom of `output` must appear in the table.
std::vector<AtomOrigin> collect_origins(const Expression& output,
                                        const std::unordered_map<const Node*, AtomOrigin>& by_node);

// origins of a composed rewrite input -> middle -> output.
std::vector<AtomOrigin> compose_origins(const std::vector<AtomOrigin>& middle_from_input,
                                        const std::vector<AtomOrigin>& output_from_middle);

// Identity origins of an expression (atom i -> atom i).
std::vector<AtomOrigin> identity_origins(const Expression& e);

}  // namespace fusion
