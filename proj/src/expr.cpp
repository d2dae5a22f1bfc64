#include "parex/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace parex {

struct Expression::Node {
  enum class Kind { number, var_x, var_t, add, sub, mul, div, pow, neg, sin, cos, exp, ln };
  Kind kind;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;

  double eval(double x, double t) const {
    switch (kind) {
      case Kind::number: return value;
      case Kind::var_x: return x;
      case Kind::var_t: return t;
      case Kind::add: return a->eval(x, t) + b->eval(x, t);
      case Kind::sub: return a->eval(x, t) - b->eval(x, t);
      case Kind::mul: return a->eval(x, t) * b->eval(x, t);
      case Kind::div: return a->eval(x, t) / b->eval(x, t);
      case Kind::pow: return std::pow(a->eval(x, t), b->eval(x, t));
      case Kind::neg: return -a->eval(x, t);
      case Kind::sin: return std::sin(a->eval(x, t));
      case Kind::cos: return std::cos(a->eval(x, t));
      case Kind::exp: return std::exp(a->eval(x, t));
      case Kind::ln: return std::log(a->eval(x, t));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->value = v;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr parse_expr() {
    NodePtr e = parse_term();
    for (;;) {
      if (eat('+')) {
        e = make(Kind::add, e, parse_term());
      } else if (eat('-')) {
        e = make(Kind::sub, e, parse_term());
      } else {
        return e;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr e = parse_factor();
    for (;;) {
      if (eat('*')) {
        e = make(Kind::mul, e, parse_factor());
      } else if (eat('/')) {
        e = make(Kind::div, e, parse_factor());
      } else {
        return e;
      }
    }
  }

  // factor handles unary minus; '^' is right associative and binds tighter
  NodePtr parse_factor() {
    if (eat('-')) return make(Kind::neg, parse_factor());
    NodePtr base = parse_primary();
    if (eat('^')) return make(Kind::pow, base, parse_factor());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return make(Kind::number, nullptr, nullptr, v);
  }

  NodePtr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name == "x") return make(Kind::var_x);
    if (name == "t") return make(Kind::var_t);
    if (name == "pi") return make(Kind::number, nullptr, nullptr, M_PI);

    Kind k;
    if (name == "sin") {
      k = Kind::sin;
    } else if (name == "cos") {
      k = Kind::cos;
    } else if (name == "exp") {
      k = Kind::exp;
    } else if (name == "ln") {
      k = Kind::ln;
    } else {
      throw ParseError("unknown identifier '" + name + "'", start);
    }
    if (!eat('(')) throw ParseError("expected '(' after function name", pos_);
    NodePtr arg = parse_expr();
    if (!eat(')')) throw ParseError("expected ')'", pos_);
    return make(k, arg);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& src) {
  Parser p(src);
  Expression e;
  e.root_ = p.run();
  e.src_ = src;
  return e;
}

double Expression::operator()(double x, double t) const { return root_->eval(x, t); }

}  // namespace parex
