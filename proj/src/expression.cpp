#include "hankel/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

#include "hankel/errors.hpp"

namespace hankel {
namespace detail {

struct ExprNode {
  virtual ~ExprNode() = default;
  virtual double eval(double x) const = 0;
  // `var` is the text substituted for the free variable.
  virtual std::string text(const std::string& var) const = 0;
  virtual bool serializable() const { return true; }
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (v < 0) return "(" + s + ")";
  return s;
}

struct Constant final : ExprNode {
  explicit Constant(double v) : value(v) {}
  double eval(double) const override { return value; }
  std::string text(const std::string&) const override { return format_number(value); }
  double value;
};

struct Variable final : ExprNode {
  double eval(double x) const override { return x; }
  std::string text(const std::string& var) const override { return var; }
};

enum class UnaryOp { neg, exp, log, sqrt, sin, cos, abs };

struct Unary final : ExprNode {
  Unary(UnaryOp o, NodePtr a) : op(o), arg(std::move(a)) {}
  double eval(double x) const override {
    const double v = arg->eval(x);
    switch (op) {
      case UnaryOp::neg: return -v;
      case UnaryOp::exp: return std::exp(v);
      case UnaryOp::log: return std::log(v);
      case UnaryOp::sqrt: return std::sqrt(v);
      case UnaryOp::sin: return std::sin(v);
      case UnaryOp::cos: return std::cos(v);
      case UnaryOp::abs: return std::abs(v);
    }
    return v;
  }
  std::string text(const std::string& var) const override {
    const std::string inner = arg->text(var);
    switch (op) {
      case UnaryOp::neg: return "(-" + inner + ")";
      case UnaryOp::exp: return "exp(" + inner + ")";
      case UnaryOp::log: return "log(" + inner + ")";
      case UnaryOp::sqrt: return "sqrt(" + inner + ")";
      case UnaryOp::sin: return "sin(" + inner + ")";
      case UnaryOp::cos: return "cos(" + inner + ")";
      case UnaryOp::abs: return "abs(" + inner + ")";
    }
    return inner;
  }
  bool serializable() const override { return arg->serializable(); }
  UnaryOp op;
  NodePtr arg;
};

enum class BinaryOp { add, sub, mul, div, pow };

struct Binary final : ExprNode {
  Binary(BinaryOp o, NodePtr a, NodePtr b) : op(o), lhs(std::move(a)), rhs(std::move(b)) {}
  double eval(double x) const override {
    const double a = lhs->eval(x);
    const double b = rhs->eval(x);
    switch (op) {
      case BinaryOp::add: return a + b;
      case BinaryOp::sub: return a - b;
      case BinaryOp::mul: return a * b;
      case BinaryOp::div: return a / b;
      case BinaryOp::pow: return std::pow(a, b);
    }
    return a;
  }
  std::string text(const std::string& var) const override {
    const std::string a = lhs->text(var);
    const std::string b = rhs->text(var);
    switch (op) {
      case BinaryOp::add: return "(" + a + " + " + b + ")";
      case BinaryOp::sub: return "(" + a + " - " + b + ")";
      case BinaryOp::mul: return "(" + a + " * " + b + ")";
      case BinaryOp::div: return "(" + a + " / " + b + ")";
      case BinaryOp::pow: return "pow(" + a + ", " + b + ")";
    }
    return a;
  }
  bool serializable() const override { return lhs->serializable() && rhs->serializable(); }
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};

struct Callable final : ExprNode {
  Callable(std::function<double(double)> f, std::string l) : fn(std::move(f)), label(std::move(l)) {}
  double eval(double x) const override { return fn(x); }
  std::string text(const std::string& var) const override { return label + "[" + var + "]"; }
  bool serializable() const override { return false; }
  std::function<double(double)> fn;
  std::string label;
};

struct Compose final : ExprNode {
  Compose(NodePtr o, NodePtr i) : outer(std::move(o)), inner(std::move(i)) {}
  double eval(double x) const override { return outer->eval(inner->eval(x)); }
  std::string text(const std::string& var) const override {
    return outer->text(inner->text(var));
  }
  bool serializable() const override { return outer->serializable() && inner->serializable(); }
  NodePtr outer;
  NodePtr inner;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : src_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SchemaError("expression '" + std::string(src_) + "': " + msg + " at offset " +
                      std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = std::make_shared<Binary>(BinaryOp::add, lhs, term());
      } else if (accept('-')) {
        lhs = std::make_shared<Binary>(BinaryOp::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = std::make_shared<Binary>(BinaryOp::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = std::make_shared<Binary>(BinaryOp::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return std::make_shared<Unary>(UnaryOp::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return std::make_shared<Binary>(BinaryOp::pow, base, unary());
    return base;
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  NodePtr number() {
    const std::string rest(src_.substr(pos_));
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    return std::make_shared<Constant>(v);
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected character");

    const std::string id = identifier();
    if (id == "x" || id == "t" || id == "mu" || id == "lambda") return std::make_shared<Variable>();
    if (id == "pi") return std::make_shared<Constant>(std::numbers::pi);
    if (id == "e") return std::make_shared<Constant>(std::numbers::e);
    if (id == "pow") {
      expect('(');
      NodePtr a = expr();
      expect(',');
      NodePtr b = expr();
      expect(')');
      return std::make_shared<Binary>(BinaryOp::pow, a, b);
    }

    UnaryOp op{};
    if (id == "exp") {
      op = UnaryOp::exp;
    } else if (id == "log") {
      op = UnaryOp::log;
    } else if (id == "sqrt") {
      op = UnaryOp::sqrt;
    } else if (id == "sin") {
      op = UnaryOp::sin;
    } else if (id == "cos") {
      op = UnaryOp::cos;
    } else if (id == "abs") {
      op = UnaryOp::abs;
    } else {
      fail("unknown identifier '" + id + "'");
    }
    expect('(');
    NodePtr arg = expr();
    expect(')');
    return std::make_shared<Unary>(op, arg);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace
}  // namespace detail

using detail::Binary;
using detail::BinaryOp;
using detail::Unary;
using detail::UnaryOp;

Expr::Expr() : root_(std::make_shared<detail::Constant>(0.0)) {}
Expr::Expr(std::shared_ptr<const detail::ExprNode> root) : root_(std::move(root)) {}

Expr Expr::constant(double value) { return Expr(std::make_shared<detail::Constant>(value)); }
Expr Expr::variable() { return Expr(std::make_shared<detail::Variable>()); }
Expr Expr::parse(std::string_view text) { return Expr(detail::Parser(text).parse()); }

Expr Expr::function(std::function<double(double)> f, std::string label) {
  return Expr(std::make_shared<detail::Callable>(std::move(f), std::move(label)));
}

double Expr::operator()(double x) const { return root_->eval(x); }

Expr Expr::compose(const Expr& inner) const {
  return Expr(std::make_shared<detail::Compose>(root_, inner.root_));
}

std::string Expr::to_string() const { return root_->text("x"); }
bool Expr::serializable() const { return root_->serializable(); }

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<Binary>(BinaryOp::add, a.root_, b.root_));
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<Binary>(BinaryOp::sub, a.root_, b.root_));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<Binary>(BinaryOp::mul, a.root_, b.root_));
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<Binary>(BinaryOp::div, a.root_, b.root_));
}
Expr operator-(const Expr& a) { return Expr(std::make_shared<Unary>(UnaryOp::neg, a.root_)); }
Expr exp(const Expr& a) { return Expr(std::make_shared<Unary>(UnaryOp::exp, a.root_)); }
Expr log(const Expr& a) { return Expr(std::make_shared<Unary>(UnaryOp::log, a.root_)); }
Expr sqrt(const Expr& a) { return Expr(std::make_shared<Unary>(UnaryOp::sqrt, a.root_)); }
Expr sin(const Expr& a) { return Expr(std::make_shared<Unary>(UnaryOp::sin, a.root_)); }
Expr cos(const Expr& a) { return Expr(std::make_shared<Unary>(UnaryOp::cos, a.root_)); }
Expr abs(const Expr& a) { return Expr(std::make_shared<Unary>(UnaryOp::abs, a.root_)); }
Expr pow(const Expr& base, const Expr& exponent) {
  return Expr(std::make_shared<Binary>(BinaryOp::pow, base.root_, exponent.root_));
}

}  // namespace hankel
