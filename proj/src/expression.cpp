#include "maslov/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "maslov/errors.hpp"

namespace maslov {

struct Expression::Node {
  enum class Kind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt };
  Kind kind = Kind::Number;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  double eval(double x) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::Variable: return x;
      case Kind::Add: return lhs->eval(x) + rhs->eval(x);
      case Kind::Sub: return lhs->eval(x) - rhs->eval(x);
      case Kind::Mul: return lhs->eval(x) * rhs->eval(x);
      case Kind::Div: return lhs->eval(x) / rhs->eval(x);
      case Kind::Pow: return std::pow(lhs->eval(x), rhs->eval(x));
      case Kind::Neg: return -lhs->eval(x);
      case Kind::Sin: return std::sin(lhs->eval(x));
      case Kind::Cos: return std::cos(lhs->eval(x));
      case Kind::Exp: return std::exp(lhs->eval(x));
      case Kind::Sqrt: return std::sqrt(lhs->eval(x));
    }
    return 0.0;
  }
};

double Expression::operator()(double x) const { return root_ ? root_->eval(x) : 0.0; }

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->value = value;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_space();
    if (pos_ != src_.size()) fail({"operator", "end of input"}, "unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& what) const {
    throw SyntaxError(pos_, std::move(expected), what);
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (accept('+')) {
        lhs = make(Node::Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Node::Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = power();
    while (true) {
      if (accept('*')) {
        lhs = make(Node::Kind::Mul, lhs, power());
      } else if (accept('/')) {
        lhs = make(Node::Kind::Div, lhs, power());
      } else {
        return lhs;
      }
    }
  }

  NodePtr power() {
    NodePtr base = unary();
    if (accept('^')) return make(Node::Kind::Pow, base, power());
    return base;
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::Neg, unary());
    return primary();
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= src_.size()) fail({"number", "x", "function", "("}, "unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail({")"}, "missing closing parenthesis");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      const std::string_view word = src_.substr(start, pos_ - start);
      if (word == "x") return make(Node::Kind::Variable);
      if (word == "pi") return make(Node::Kind::Number, nullptr, nullptr, std::numbers::pi);
      Node::Kind kind;
      if (word == "sin") {
        kind = Node::Kind::Sin;
      } else if (word == "cos") {
        kind = Node::Kind::Cos;
      } else if (word == "exp") {
        kind = Node::Kind::Exp;
      } else if (word == "sqrt") {
        kind = Node::Kind::Sqrt;
      } else {
        pos_ = start;
        fail({"x", "pi", "sin", "cos", "exp", "sqrt"}, "unknown identifier '" + std::string(word) + "'");
      }
      if (!accept('(')) fail({"("}, "function name must be followed by '('");
      NodePtr arg = expr();
      if (!accept(')')) fail({")"}, "missing closing parenthesis");
      return make(kind, arg);
    }
    fail({"number", "x", "function", "("}, std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_) {
      pos_ = start;
      fail({"number"}, "malformed number");
    }
    return make(Node::Kind::Number, nullptr, nullptr, value);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view src) {
  Parser parser(src);
  return Expression(parser.parse(), std::string(src));
}

}  // namespace maslov
