#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "fusion/expression.hpp"

namespace fusion {

struct ExpressionStats {
  std::uint64_t node_count = 0;
  std::uint64_t distinct_labels = 0;
  std::uint32_t max_label = 0;
  std::uint64_t vertex_creations = 0;
  bool has_fuse = false;
  bool has_multi_verts = false;
};

struct Violation {
  std::size_t preorder;  // offending node
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

// Checks node invariants (positive labels and counts, distinct join labels).
// With `require_clique_width_form`, every fuse node and every atom with
// count > 1 is reported too.
ValidationReport validate_expression(const Expression& e, bool require_clique_width_form);

// Every label mentioned anywhere in the expression.
std::set<LabelId> labels_of(const Expression& e);

// Width of this expression: the number of distinct labels it mentions.
std::uint64_t expression_width(const Expression& e);

ExpressionStats expression_stats(const Expression& e);

}  // namespace fusion
