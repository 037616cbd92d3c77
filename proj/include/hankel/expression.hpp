#pragma once

// Closed-grammar scalar expressions of one real variable.
//
// Grammar (whitespace ignored):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'x' | 'pi' | 'e' | func '(' expr ')'
//            | 'pow' '(' expr ',' expr ')' | '(' expr ')'
//   func    := exp | log | sqrt | sin | cos | abs
// The variable may also be spelled t, mu or lambda.

#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace hankel {

namespace detail {
struct ExprNode;
}

class Expr {
 public:
  /// Constant zero.
  Expr();

  static Expr constant(double value);
  static Expr variable();
  /// Throws SchemaError on grammar violations.
  static Expr parse(std::string_view text);
  /// Wraps an arbitrary callable. Such expressions evaluate normally but
  /// cannot be serialized.
  static Expr function(std::function<double(double)> f, std::string label);

  double operator()(double x) const;

  /// this(inner(x)).
  Expr compose(const Expr& inner) const;

  /// Parseable text when serializable(); otherwise contains callable labels.
  std::string to_string() const;
  bool serializable() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  friend Expr exp(const Expr& a);
  friend Expr log(const Expr& a);
  friend Expr sqrt(const Expr& a);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr abs(const Expr& a);
  friend Expr pow(const Expr& base, const Expr& exponent);

 private:
  explicit Expr(std::shared_ptr<const detail::ExprNode> root);
  std::shared_ptr<const detail::ExprNode> root_;
};

inline Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
inline Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
inline Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
inline Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
inline Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
inline Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
inline Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }
inline Expr operator/(double a, const Expr& b) { return Expr::constant(a) / b; }
inline Expr pow(const Expr& base, double exponent) {
  return pow(base, Expr::constant(exponent));
}

}  // namespace hankel
