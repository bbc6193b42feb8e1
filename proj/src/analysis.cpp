#include "fusion/analysis.hpp"

#include <algorithm>

#include "fusion/traverse.hpp"
#include "overloaded.hpp"

namespace fusion {

ValidationReport validate_expression(const Expression& e, bool require_clique_width_form) {
  ValidationReport report;
  auto add = [&](std::size_t at, std::string message) { report.violations.push_back({at, std::move(message)}); };
  auto check_label = [&](std::size_t at, LabelId l) {
    if (l.value < 1) add(at, "label must be positive");
  };
  for_each_preorder(e, [&](const Expression& sub, std::size_t at, std::size_t) {
    detail::match(
        sub.node(),
        [&](const Verts& x) {
          check_label(at, x.label);
          if (x.count < 1) add(at, "vertex count must be at least 1");
          if (require_clique_width_form && x.count > 1)
            add(at, "atom creates " + std::to_string(x.count) + " vertices; clique-width form needs count 1");
        },
        [&](const Join& x) {
          check_label(at, x.first);
          check_label(at, x.second);
          if (x.first == x.second) add(at, "join labels must differ");
        },
        [&](const Relabel& x) {
          check_label(at, x.from);
          check_label(at, x.to);
        },
        [&](const Fuse& x) {
          check_label(at, x.label);
          if (require_clique_width_form) add(at, "fuse is not a clique-width operation");
        },
        [](const Union&) {});
  });
  return report;
}

std::set<LabelId> labels_of(const Expression& e) {
  std::set<LabelId> labels;
  for_each_preorder(e, [&](const Expression& sub, std::size_t, std::size_t) {
    detail::match(
        sub.node(), [&](const Verts& x) { labels.insert(x.label); },
        [&](const Join& x) { labels.insert({x.first, x.second}); },
        [&](const Relabel& x) { labels.insert({x.from, x.to}); }, [&](const Fuse& x) { labels.insert(x.label); },
        [](const Union&) {});
  });
  return labels;
}

std::uint64_t expression_width(const Expression& e) { return labels_of(e).size(); }

ExpressionStats expression_stats(const Expression& e) {
  ExpressionStats stats;
  std::set<LabelId> labels;
  for_each_preorder(e, [&](const Expression& sub, std::size_t, std::size_t) {
    ++stats.node_count;
    detail::match(
        sub.node(),
        [&](const Verts& x) {
          labels.insert(x.label);
          stats.vertex_creations += x.count;
          stats.has_multi_verts = stats.has_multi_verts || x.count > 1;
        },
        [&](const Join& x) { labels.insert({x.first, x.second}); },
        [&](const Relabel& x) { labels.insert({x.from, x.to}); },
        [&](const Fuse& x) {
          labels.insert(x.label);
          stats.has_fuse = true;
        },
        [](const Union&) {});
  });
  stats.distinct_labels = labels.size();
  stats.max_label = labels.empty() ? 0 : labels.rbegin()->value;
  return stats;
}

}  // namespace fusion
