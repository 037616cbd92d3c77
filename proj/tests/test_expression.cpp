#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hankel/errors.hpp"
#include "hankel/expression.hpp"

using hankel::Expr;

TEST_CASE("expression grammar evaluates") {
  CHECK(Expr::parse("1 - x")(0.25) == doctest::Approx(0.75));
  CHECK(Expr::parse("2*x^2 + 3")(2.0) == doctest::Approx(11.0));
  CHECK(Expr::parse("-x^2")(3.0) == doctest::Approx(-9.0));
  CHECK(Expr::parse("2^3^2")(0.0) == doctest::Approx(512.0));
  CHECK(Expr::parse("pow(x, 0.5) * exp(-t)")(4.0) == doctest::Approx(2.0 * std::exp(-4.0)));
  CHECK(Expr::parse("sin(pi*x) + cos(0) + abs(-2) + log(e) + sqrt(9)")(0.5) ==
        doctest::Approx(1.0 + 1.0 + 2.0 + 1.0 + 3.0));
  CHECK(Expr::parse("1e-3 * mu")(2.0) == doctest::Approx(2e-3));
}

TEST_CASE("expression text parses back to the same function") {
  const Expr x = Expr::variable();
  const Expr e = pow(x, -log(x)) * (1.0 + 0.5 * sin(2.0 * std::numbers::pi * log(x)));
  const Expr back = Expr::parse(e.to_string());
  for (double v : {0.1, 0.7, 1.0, 3.5, 20.0}) CHECK(back(v) == doctest::Approx(e(v)).epsilon(1e-15));

  const Expr composed = Expr::parse("1 - x").compose(Expr::parse("(2*x - 1) / (2*x + 1)"));
  CHECK(composed.serializable());
  CHECK(Expr::parse(composed.to_string())(1.5) == doctest::Approx(composed(1.5)));
  CHECK(composed(0.5) == doctest::Approx(1.0));
}

TEST_CASE("callables evaluate but are not serializable") {
  const Expr f = Expr::function([](double x) { return 3.0 * x; }, "triple");
  CHECK(f(2.0) == 6.0);
  CHECK_FALSE(f.serializable());
  CHECK_FALSE((f + 1.0).serializable());
}

TEST_CASE("grammar violations are schema errors") {
  CHECK_THROWS_AS(Expr::parse("1 +"), hankel::SchemaError);
  CHECK_THROWS_AS(Expr::parse("foo(x)"), hankel::SchemaError);
  CHECK_THROWS_AS(Expr::parse("(x"), hankel::SchemaError);
  CHECK_THROWS_AS(Expr::parse("x y"), hankel::SchemaError);
  CHECK_THROWS_AS(Expr::parse("pow(x)"), hankel::SchemaError);
  CHECK_THROWS_AS(Expr::parse(""), hankel::SchemaError);
}
