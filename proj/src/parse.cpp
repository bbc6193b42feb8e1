#include "fusion/parse.hpp"

#include <charconv>
#include <optional>
#include <vector>

#include "overloaded.hpp"

namespace fusion {

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Open, Close, Word, End };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_blank();
    Token t{Tok::End, {}, line_, column_};
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    if (c == '(' || c == ')') {
      t.kind = c == '(' ? Tok::Open : Tok::Close;
      t.text = text_.substr(pos_, 1);
      advance();
      return t;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '(' && text_[pos_] != ')' &&
           text_[pos_] != ';')
      advance();
    t.kind = Tok::Word;
    t.text = text_.substr(start, pos_ - start);
    return t;
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      if (is_space(text_[pos_])) {
        advance();
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

[[noreturn]] void fail(ParseError::Kind kind, const Token& t, const std::string& message) {
  throw ParseError(kind, t.line, t.column, message);
}

std::uint64_t parse_int(const Token& t, std::uint64_t max) {
  if (t.kind != Tok::Word) fail(ParseError::Kind::Syntax, t, "expected an integer");
  std::string_view s = t.text;
  bool negative = !s.empty() && s[0] == '-';
  std::string_view digits = negative ? s.substr(1) : s;
  if (digits.empty()) fail(ParseError::Kind::Syntax, t, "expected an integer, got '" + std::string(s) + "'");
  for (char c : digits)
    if (c < '0' || c > '9') fail(ParseError::Kind::Syntax, t, "expected an integer, got '" + std::string(s) + "'");
  if (negative) fail(ParseError::Kind::NonPositiveInteger, t, "integer must be at least 1");
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || value > max) fail(ParseError::Kind::Syntax, t, "integer out of range");
  if (value < 1) fail(ParseError::Kind::NonPositiveInteger, t, "integer must be at least 1");
  return value;
}

std::uint32_t parse_label(const Token& t) { return static_cast<std::uint32_t>(parse_int(t, UINT32_MAX)); }

enum class Op { Verts, Vert, Join, Ren, Fuse, Union };

std::optional<Op> keyword(std::string_view w) {
  if (w == "verts") return Op::Verts;
  if (w == "vert") return Op::Vert;
  if (w == "join") return Op::Join;
  if (w == "ren") return Op::Ren;
  if (w == "fuse") return Op::Fuse;
  if (w == "union") return Op::Union;
  return std::nullopt;
}

// A form whose head and integer arguments have been read and which is
// waiting for its subexpressions.
struct Pending {
  Op op;
  Token head;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::vector<Expression> children;
  std::size_t wanted = 0;
};

}  // namespace

Expression parse_expression(std::string_view text) {
  Lexer lex(text);
  std::vector<Pending> stack;
  std::optional<Expression> done;

  auto expect_close = [&]() {
    Token t = lex.next();
    if (t.kind != Tok::Close) fail(ParseError::Kind::Syntax, t, "expected ')'");
  };

  while (true) {
    Token t = lex.next();
    if (done) {
      if (t.kind != Tok::End) fail(ParseError::Kind::Syntax, t, "unexpected input after expression");
      return *done;
    }
    if (t.kind == Tok::End) fail(ParseError::Kind::Syntax, t, "unexpected end of input");
    if (t.kind != Tok::Open) fail(ParseError::Kind::Syntax, t, "expected '('");

    Token head = lex.next();
    auto op = head.kind == Tok::Word ? keyword(head.text) : std::nullopt;
    if (!op) fail(ParseError::Kind::Syntax, head, "unknown operation '" + std::string(head.text) + "'");

    std::optional<Expression> leaf;
    Pending p{*op, head, 0, 0, {}, 0};
    switch (*op) {
      case Op::Verts: {
        std::uint32_t label = parse_label(lex.next());
        std::uint64_t count = parse_int(lex.next(), UINT64_MAX);
        expect_close();
        leaf = verts(label, count);
        break;
      }
      case Op::Vert: {
        std::uint32_t label = parse_label(lex.next());
        expect_close();
        leaf = vert(label);
        break;
      }
      case Op::Join:
      case Op::Ren: {
        p.a = parse_label(lex.next());
        Token second = lex.next();
        p.b = parse_label(second);
        if (*op == Op::Join && p.a == p.b)
          fail(ParseError::Kind::EqualJoinLabels, second, "join labels must differ");
        p.wanted = 1;
        break;
      }
      case Op::Fuse:
        p.a = parse_label(lex.next());
        p.wanted = 1;
        break;
      case Op::Union:
        p.wanted = 2;
        break;
    }
    if (!leaf) {
      stack.push_back(std::move(p));
      continue;
    }

    // Hand the finished subexpression to its parents.
    Expression value = std::move(*leaf);
    while (true) {
      if (stack.empty()) {
        done = std::move(value);
        break;
      }
      Pending& top = stack.back();
      top.children.push_back(std::move(value));
      if (top.children.size() < top.wanted) break;
      expect_close();
      switch (top.op) {
        case Op::Join:
          value = join(top.a, top.b, std::move(top.children[0]));
          break;
        case Op::Ren:
          value = relabel(top.a, top.b, std::move(top.children[0]));
          break;
        case Op::Fuse:
          value = fuse(top.a, std::move(top.children[0]));
          break;
        default:
          value = union_of(std::move(top.children[0]), std::move(top.children[1]));
          break;
      }
      stack.pop_back();
    }
  }
}

std::string render_expression(const Expression& e) {
  std::string out;
  // Entries are either a node to open or a pending ")".
  std::vector<const Expression*> stack{&e};
  while (!stack.empty()) {
    const Expression* cur = stack.back();
    stack.pop_back();
    if (cur == nullptr) {
      out += ')';
      continue;
    }
    if (!out.empty() && out.back() != '(') out += ' ';
    const Node& node = cur->node();
    detail::match(
        node,
        [&](const Verts& x) {
          out += "(verts " + std::to_string(x.label.value) + " " + std::to_string(x.count) + ")";
        },
        [&](const Join& x) {
          out += "(join " + std::to_string(x.first.value) + " " + std::to_string(x.second.value);
        },
        [&](const Relabel& x) { out += "(ren " + std::to_string(x.from.value) + " " + std::to_string(x.to.value); },
        [&](const Fuse& x) { out += "(fuse " + std::to_string(x.label.value); },
        [&](const Union&) { out += "(union"; });
    if (arity(node) == 0) continue;
    stack.push_back(nullptr);
    for (std::size_t i = arity(node); i-- > 0;) stack.push_back(&child(node, i));
  }
  return out;
}

}  // namespace fusion
