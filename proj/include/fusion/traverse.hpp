#pragma once

// Non-recursive traversals. Expressions produced by tree-decomposition
// conversion can be tens of thousands of levels deep, so nothing on the
// evaluation paths recurses on the tree height.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fusion/expression.hpp"

namespace fusion {

// Post-order fold. `visit(node, preorder_index, children)` receives the
// results of the node's children (left to right) and returns the node's
// result. Preorder indices count node occurrences from 0 at the root.
template <class R, class F>
R fold(const Expression& root, F&& visit) {
  struct Frame {
    const Expression* expr;
    std::size_t preorder;
    std::size_t next_child;
  };
  std::vector<Frame> stack;
  std::vector<R> results;
  std::size_t counter = 0;
  stack.push_back({&root, counter++, 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    const Node& node = top.expr->node();
    const std::size_t n = arity(node);
    if (top.next_child < n) {
      const Expression* next = &child(node, top.next_child++);
      stack.push_back({next, counter++, 0});
      continue;
    }
    std::span<R> kids(results.data() + (results.size() - n), n);
    R value = visit(node, top.preorder, kids);
    results.erase(results.end() - static_cast<std::ptrdiff_t>(n), results.end());
    results.push_back(std::move(value));
    stack.pop_back();
  }
  return std::move(results.back());
}

// Pre-order walk: `f(expr, preorder_index, depth)`.
template <class F>
void for_each_preorder(const Expression& root, F&& f) {
  std::vector<std::pair<const Expression*, std::size_t>> stack{{&root, 0}};
  std::size_t counter = 0;
  while (!stack.empty()) {
    auto [expr, depth] = stack.back();
    stack.pop_back();
    f(*expr, counter++, depth);
    const Node& node = expr->node();
    for (std::size_t i = arity(node); i-- > 0;) stack.push_back({&child(node, i), depth + 1});
  }
}

}  // namespace fusion
