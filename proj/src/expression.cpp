#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

#include "rdb/error.hpp"
#include "rdb/systems.hpp"

namespace rdb {

struct Expression::Node {
  enum class Kind { Number, Fuel, Product, Add, Sub, Mul, Div, Neg, Exp, Pow };
  Kind kind = Kind::Number;
  double value = 0.0;
  int index = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, int fuels, int products) : text_(text), fuels_(fuels), products_(products) {}

  NodePtr parse() {
    NodePtr root = expression();
    skip_space();
    if (pos_ != text_.size()) error("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::ConfigParse,
         "expression '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Kind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make(Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, unary());
    if (accept('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) error("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expression();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    error(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double value = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) error("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Number;
    n->value = value;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    if (name == "exp") {
      expect('(');
      NodePtr arg = expression();
      expect(')');
      return make(Kind::Exp, arg);
    }
    if (name == "pow") {
      expect('(');
      NodePtr base = expression();
      expect(',');
      NodePtr exponent = expression();
      expect(')');
      return make(Kind::Pow, base, exponent);
    }
    if (name == "u" && fuels_ == 1) return variable(Kind::Fuel, 0);
    if (name == "v" && products_ == 1) return variable(Kind::Product, 0);
    if ((name[0] == 'u' || name[0] == 'v') && name.size() > 1) {
      const std::string digits = name.substr(1);
      if (digits.find_first_not_of("0123456789") == std::string::npos) {
        const int k = std::stoi(digits);
        const int limit = name[0] == 'u' ? fuels_ : products_;
        if (k < 1 || k > limit) error("variable '" + name + "' out of range");
        return variable(name[0] == 'u' ? Kind::Fuel : Kind::Product, k - 1);
      }
    }
    error("unknown identifier '" + name + "'");
  }

  NodePtr variable(Kind kind, int index) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    n->index = index;
    return n;
  }

  std::string_view text_;
  int fuels_;
  int products_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, std::span<const double> u, std::span<const double> v) {
  switch (n.kind) {
    case Kind::Number: return n.value;
    case Kind::Fuel: return u[n.index];
    case Kind::Product: return v[n.index];
    case Kind::Add: return eval(*n.lhs, u, v) + eval(*n.rhs, u, v);
    case Kind::Sub: return eval(*n.lhs, u, v) - eval(*n.rhs, u, v);
    case Kind::Mul: return eval(*n.lhs, u, v) * eval(*n.rhs, u, v);
    case Kind::Div: return eval(*n.lhs, u, v) / eval(*n.rhs, u, v);
    case Kind::Neg: return -eval(*n.lhs, u, v);
    case Kind::Exp: return std::exp(eval(*n.lhs, u, v));
    case Kind::Pow: return std::pow(eval(*n.lhs, u, v), eval(*n.rhs, u, v));
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view text, int fuels, int products) {
  Expression e;
  e.text_ = std::string(text);
  e.root_ = Parser(text, fuels, products).parse();
  return e;
}

double Expression::evaluate(std::span<const double> u, std::span<const double> v) const {
  return eval(*root_, u, v);
}

RateFunction Expression::as_rate() const {
  return [root = root_](std::span<const double> u, std::span<const double> v) { return eval(*root, u, v); };
}

}  // namespace rdb
