#pragma once

// Expression trees over the five graph-building operations:
//
//   verts i m     m isolated vertices labeled i
//   join i j e    every i-vertex becomes adjacent to every j-vertex (i != j)
//   ren i j e     every label i becomes j
//   fuse i e      all i-vertices collapse into one
//   union a b     disjoint union
//
// A fuse-free expression whose atoms all have count 1 is an ordinary
// clique-width expression.
//
// Nodes are immutable and shared through shared_ptr, so subtrees can be
// reused freely and expressions can be handed between threads.

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>

namespace fusion {

struct LabelId {
  std::uint32_t value = 1;

  friend auto operator<=>(LabelId, LabelId) = default;
};

class ExpressionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Node;

class Expression {
 public:
  explicit Expression(std::shared_ptr<Node> node);
  Expression(const Expression&) = default;
  Expression(Expression&&) noexcept = default;
  Expression& operator=(const Expression&) = default;
  Expression& operator=(Expression&&) noexcept = default;
  // Releases deep chains iteratively.
  ~Expression();

  const Node& node() const { return *node_; }
  const Node* get() const { return node_.get(); }

  template <class T>
  const T* as() const;

  // Structural equality.
  friend bool operator==(const Expression& a, const Expression& b);

 private:
  std::shared_ptr<Node> node_;
};

struct Verts {
  LabelId label;
  std::uint64_t count;
};

struct Join {
  LabelId first;
  LabelId second;
  Expression child;
};

struct Relabel {
  LabelId from;
  LabelId to;
  Expression child;
};

struct Fuse {
  LabelId label;
  Expression child;
};

struct Union {
  Expression left;
  Expression right;
};

struct Node : std::variant<Verts, Join, Relabel, Fuse, Union> {
  using variant::variant;
};

template <class T>
const T* Expression::as() const {
  return std::get_if<T>(node_.get());
}

// Checked constructors; they throw ExpressionError on label 0, count 0 or
// a join of a label with itself.
Expression verts(std::uint32_t label, std::uint64_t count);
Expression vert(std::uint32_t label);
Expression join(std::uint32_t first, std::uint32_t second, Expression child);
Expression relabel(std::uint32_t from, std::uint32_t to, Expression child);
Expression fuse(std::uint32_t label, Expression child);
Expression union_of(Expression left, Expression right);

// Number of children (0, 1 or 2) and access by index.
std::size_t arity(const Node& node);
const Expression& child(const Node& node, std::size_t index);

// Rebuilds `node` with new children, keeping its operation and labels.
Expression with_children(const Node& node, const Expression* children, std::size_t count);

}  // namespace fusion
