#include "fusion/expression.hpp"

#include <utility>
#include <vector>

#include "overloaded.hpp"

namespace fusion {

namespace {

using detail::Overloaded;

LabelId checked_label(std::uint32_t value) {
  if (value < 1) throw ExpressionError("labels must be positive integers");
  return LabelId{value};
}

Expression make(Node node) { return Expression(std::make_shared<Node>(std::move(node))); }

// Compares the operation and labels of two nodes, ignoring children.
bool same_head(const Node& a, const Node& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      Overloaded{
          [&](const Verts& x) {
            const auto& y = std::get<Verts>(b);
            return x.label == y.label && x.count == y.count;
          },
          [&](const Join& x) {
            const auto& y = std::get<Join>(b);
            return x.first == y.first && x.second == y.second;
          },
          [&](const Relabel& x) {
            const auto& y = std::get<Relabel>(b);
            return x.from == y.from && x.to == y.to;
          },
          [&](const Fuse& x) { return x.label == std::get<Fuse>(b).label; },
          [](const Union&) { return true; },
      },
      static_cast<const Node::variant&>(a));
}

}  // namespace

Expression::Expression(std::shared_ptr<Node> node) : node_(std::move(node)) {
  if (!node_) throw ExpressionError("null expression node");
}

Expression::~Expression() {
  if (!node_ || node_.use_count() != 1) return;
  std::vector<std::shared_ptr<Node>> pending;
  pending.push_back(std::move(node_));
  while (!pending.empty()) {
    std::shared_ptr<Node> current = std::move(pending.back());
    pending.pop_back();
    if (current.use_count() != 1) continue;
    std::visit(Overloaded{
                   [](Verts&) {},
                   [&](Join& x) { pending.push_back(std::move(x.child.node_)); },
                   [&](Relabel& x) { pending.push_back(std::move(x.child.node_)); },
                   [&](Fuse& x) { pending.push_back(std::move(x.child.node_)); },
                   [&](Union& x) {
                     pending.push_back(std::move(x.left.node_));
                     pending.push_back(std::move(x.right.node_));
                   },
               },
               static_cast<Node::variant&>(*current));
  }
}

bool operator==(const Expression& a, const Expression& b) {
  std::vector<std::pair<const Node*, const Node*>> stack{{a.get(), b.get()}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    if (x == y) continue;
    if (!same_head(*x, *y)) return false;
    for (std::size_t i = 0; i < arity(*x); ++i) stack.emplace_back(child(*x, i).get(), child(*y, i).get());
  }
  return true;
}

Expression verts(std::uint32_t label, std::uint64_t count) {
  if (count < 1) throw ExpressionError("vertex count must be at least 1");
  return make(Verts{checked_label(label), count});
}

Expression vert(std::uint32_t label) { return verts(label, 1); }

Expression join(std::uint32_t first, std::uint32_t second, Expression child) {
  if (first == second) throw ExpressionError("join needs two distinct labels");
  return make(Join{checked_label(first), checked_label(second), std::move(child)});
}

Expression relabel(std::uint32_t from, std::uint32_t to, Expression child) {
  return make(Relabel{checked_label(from), checked_label(to), std::move(child)});
}

Expression fuse(std::uint32_t label, Expression child) {
  return make(Fuse{checked_label(label), std::move(child)});
}

Expression union_of(Expression left, Expression right) { return make(Union{std::move(left), std::move(right)}); }

std::size_t arity(const Node& node) {
  switch (node.index()) {
    case 0:
      return 0;
    case 4:
      return 2;
    default:
      return 1;
  }
}

const Expression& child(const Node& node, std::size_t index) {
  return std::visit(
      Overloaded{
          [](const Verts&) -> const Expression& { throw std::out_of_range("vertex atoms have no children"); },
          [](const Join& x) -> const Expression& { return x.child; },
          [](const Relabel& x) -> const Expression& { return x.child; },
          [](const Fuse& x) -> const Expression& { return x.child; },
          [&](const Union& x) -> const Expression& { return index == 0 ? x.left : x.right; },
      },
      static_cast<const Node::variant&>(node));
}

Expression with_children(const Node& node, const Expression* children, std::size_t count) {
  if (count != arity(node)) throw std::invalid_argument("with_children: wrong number of children");
  return std::visit(
      Overloaded{
          [&](const Verts& x) { return make(x); },
          [&](const Join& x) { return make(Join{x.first, x.second, children[0]}); },
          [&](const Relabel& x) { return make(Relabel{x.from, x.to, children[0]}); },
          [&](const Fuse& x) { return make(Fuse{x.label, children[0]}); },
          [&](const Union&) { return make(Union{children[0], children[1]}); },
      },
      static_cast<const Node::variant&>(node));
}

}  // namespace fusion
