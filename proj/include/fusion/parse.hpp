#pragma once

// Text form of expressions:
//
//   expr := "(" "verts" INT INT ")" | "(" "vert" INT ")"
//         | "(" "join" INT INT expr ")" | "(" "ren" INT INT expr ")"
//         | "(" "fuse" INT expr ")"     | "(" "union" expr expr ")"
//
// INT is a decimal digit string with value >= 1. Tokens are separated by
// ASCII whitespace and ';' comments run to the end of the line.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fusion/expression.hpp"

namespace fusion {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, EqualJoinLabels, NonPositiveInteger };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

Expression parse_expression(std::string_view text);

// Canonical form: single spaces, no comments, `vert` sugar never emitted.
std::string render_expression(const Expression& e);

}  // namespace fusion
