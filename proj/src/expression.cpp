#include "homog/expression.hpp"

#include <cctype>
#include <cmath>

namespace homog {
namespace {

// Recursive-descent parser for
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | primary
//   primary:= number | 'pi' | 's1' | 's2' | ('y1'|'y2') '[' int ']'
//           | ('sin'|'cos') '(' expr ')' | '(' expr ')'
struct Parser {
  const std::string& src;
  size_t pos = 0;
  int dim;

  using Node = std::function<double(const ExprArgs&)>;

  explicit Parser(const std::string& s, int dimension) : src(s), dim(dimension) {}

  [[noreturn]] void fail(const std::string& what) {
    throw ValidationError("expression parse error at position " + std::to_string(pos) +
                          " in \"" + src + "\": " + what);
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) { ++pos; return true; }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  Node parse_expr() {
    Node lhs = parse_term();
    while (true) {
      if (eat('+')) {
        Node rhs = parse_term();
        lhs = [lhs, rhs](const ExprArgs& a) { return lhs(a) + rhs(a); };
      } else if (eat('-')) {
        Node rhs = parse_term();
        lhs = [lhs, rhs](const ExprArgs& a) { return lhs(a) - rhs(a); };
      } else {
        return lhs;
      }
    }
  }

  Node parse_term() {
    Node lhs = parse_unary();
    while (true) {
      if (eat('*')) {
        Node rhs = parse_unary();
        lhs = [lhs, rhs](const ExprArgs& a) { return lhs(a) * rhs(a); };
      } else if (eat('/')) {
        Node rhs = parse_unary();
        lhs = [lhs, rhs](const ExprArgs& a) { return lhs(a) / rhs(a); };
      } else {
        return lhs;
      }
    }
  }

  Node parse_unary() {
    if (eat('-')) {
      Node inner = parse_unary();
      return [inner](const ExprArgs& a) { return -inner(a); };
    }
    return parse_primary();
  }

  std::string parse_ident() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    if (pos == start) fail("expected identifier");
    return src.substr(start, pos - start);
  }

  Node parse_primary() {
    char c = peek();
    if (c == '(') {
      eat('(');
      Node inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      skip_ws();
      size_t end = pos;
      char* after = nullptr;
      double value = std::strtod(src.c_str() + pos, &after);
      end = static_cast<size_t>(after - src.c_str());
      if (end == pos) fail("bad number");
      pos = end;
      return [value](const ExprArgs&) { return value; };
    }
    std::string id = parse_ident();
    if (id == "pi") {
      return [](const ExprArgs&) { return M_PI; };
    }
    if (id == "s1") return [](const ExprArgs& a) { return a.s1; };
    if (id == "s2") return [](const ExprArgs& a) { return a.s2; };
    if (id == "y1" || id == "y2") {
      bool first = (id == "y1");
      int index = 0;
      if (eat('[')) {
        skip_ws();
        size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos == start) fail("expected component index");
        index = std::stoi(src.substr(start, pos - start));
        if (!eat(']')) fail("expected ']'");
      }
      if (index < 0 || index >= dim)
        fail(id + "[" + std::to_string(index) + "] out of range for dimension " +
             std::to_string(dim));
      if (first) return [index](const ExprArgs& a) { return (*a.y1)[index]; };
      return [index](const ExprArgs& a) { return (*a.y2)[index]; };
    }
    if (id == "sin" || id == "cos") {
      bool is_sin = (id == "sin");
      if (!eat('(')) fail("expected '(' after " + id);
      Node inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      if (is_sin) return [inner](const ExprArgs& a) { return std::sin(inner(a)); };
      return [inner](const ExprArgs& a) { return std::cos(inner(a)); };
    }
    fail("unknown identifier '" + id + "'");
  }
};

} // namespace

Expression Expression::parse(const std::string& source, int dimension) {
  Parser p(source, dimension);
  Expression e;
  e.eval_ = p.parse_expr();
  p.skip_ws();
  if (p.pos != source.size()) p.fail("trailing input");
  e.source_ = source;
  return e;
}

} // namespace homog
