#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "fusion/expression.hpp"
#include "overloaded.hpp"

namespace fusion::detail {

using LabelList = std::vector<LabelId>;  // sorted

inline bool has(const LabelList& s, LabelId l) { return std::binary_search(s.begin(), s.end(), l); }

inline void insert(LabelList& s, LabelId l) {
  auto it = std::lower_bound(s.begin(), s.end(), l);
  if (it == s.end() || *it != l) s.insert(it, l);
}

// Vertex count per label, saturating at 2.
using Counts = std::map<LabelId, unsigned>;

inline void bump(Counts& c, LabelId l, std::uint64_t by) {
  unsigned& x = c[l];
  x = static_cast<unsigned>(std::min<std::uint64_t>(2, x + by));
}

// Fuse labels pending at every node occurrence, by preorder index.
inline std::vector<LabelList> pending_fuses(const Expression& e) {
  std::vector<LabelList> pending;
  std::vector<std::pair<const Expression*, LabelList>> stack;
  stack.push_back({&e, {}});
  while (!stack.empty()) {
    auto [expr, p] = std::move(stack.back());
    stack.pop_back();
    const Node& node = expr->node();
    LabelList below = p;
    detail::match(
        node, [](const Verts&) {}, [](const Join&) {},
        [&](const Relabel& x) {
          if (x.from == x.to) return;
          below.clear();
          for (LabelId l : p)
            if (l != x.from && l != x.to) below.push_back(l);
          if (has(p, x.to)) {
            insert(below, x.from);
            insert(below, x.to);
          }
        },
        [&](const Fuse& x) { insert(below, x.label); }, [](const Union&) {});
    for (std::size_t i = arity(node); i-- > 0;) stack.push_back({&child(node, i), below});
    pending.push_back(std::move(p));
  }
  return pending;
}

}  // namespace fusion::detail
