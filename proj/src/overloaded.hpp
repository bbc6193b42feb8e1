#pragma once

#include <variant>

#include "fusion/expression.hpp"

namespace fusion::detail {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

template <class... Fs>
decltype(auto) match(const Node& node, Fs&&... fs) {
  return std::visit(Overloaded{std::forward<Fs>(fs)...}, static_cast<const Node::variant&>(node));
}

}  // namespace fusion::detail
