#pragma once

// Conversions between clique-width expressions, fusion expressions and
// their normal forms. Every rewrite reports, for each atom of its output,
// which input atom (and copy offset) it stands for; certificates are
// derived from that.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fusion/evaluate.hpp"
#include "fusion/expression.hpp"
#include "fusion/graph.hpp"

namespace fusion {

class NotCliqueWidthForm : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Rewrite {
  Expression expression;
  std::vector<AtomOrigin> origins;  // per output atom, in preorder
};

// Evaluates both sides and derives the output -> input vertex certificate.
ConversionCertificate certify(const Expression& input, const Expression& output,
                              const std::vector<AtomOrigin>& origins);

// Identity on clique-width expressions; throws NotCliqueWidthForm otherwise.
Expression cw_to_fusion(const Expression& e);

// Pushes every fuse down to the place where the merged label has exactly
// one vertex on each side: fuses end up directly above a union (possibly as
// a chain of fuses of distinct labels) or directly above a relabel onto the
// fused label. Atoms whose vertices all get merged shrink to count 1.
// Atoms keep their order, so the origins are the identity.
Rewrite localize_merges(const Expression& e);

// Drops created vertices and joins that contribute nothing to the final
// graph, along with relabels, fuses and unions left without effect, and
// shortens runs of consecutive relabels. Never increases node_count.
Rewrite prune_useless_vertices(const Expression& e);

// Bound used by the size check: after pruning, node_count <= kPruneSizeConstant * (|V| + |E| + 1)
// for expressions of width at most 4.
inline constexpr std::uint64_t kPruneSizeConstant = 56;

// (own, pending) pair behind one flattened label of a clique-width output.
struct CompositeLabel {
  LabelId own;
  std::vector<LabelId> pending;  // sorted

  friend bool operator==(const CompositeLabel&, const CompositeLabel&) = default;
};

// A merged vertex of the input: the label it carries when it is finished
// and the preorder index of the fuse that completes it.
struct MergePlanEntry {
  LabelId label;
  std::size_t last_merge_preorder;
  VertexId input_vertex;
};

struct CliqueWidthConversion {
  Expression expression;
  ConversionCertificate certificate;     // output vertex -> input vertex
  std::vector<CompositeLabel> label_table;  // flattened label l is label_table[l - 1]
  std::vector<MergePlanEntry> plan;
  std::vector<AtomOrigin> origins;
};

// Replaces every fuse by delayed joins on composite labels. The output is a
// clique-width expression with at most k * 2^k labels for an input of
// width k. Fuse-free inputs come back unchanged.
CliqueWidthConversion fusion_to_cw(const Expression& e);

// localize, prune, convert; the certificate refers to the graph of `e`.
CliqueWidthConversion to_clique_width(const Expression& e);

}  // namespace fusion
