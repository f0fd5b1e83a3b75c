#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cmc/parse.hpp"

using namespace cmc;

namespace {

bool same_poly(const Poly& a, const Poly& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != b[k]) return false;
  return true;
}

}  // namespace

TEST_CASE("simple expressions land on the expected coefficients") {
  RationalMap m = parse_rational("z^2");
  CHECK(same_poly(m.num, {Complex(0, 0), Complex(0, 0), Complex(1, 0)}));
  CHECK(same_poly(m.den, {Complex(1, 0)}));

  m = parse_rational("1/z + z");
  CHECK(same_poly(m.num, {Complex(1, 0), Complex(0, 0), Complex(1, 0)}));
  CHECK(same_poly(m.den, {Complex(0, 0), Complex(1, 0)}));

  m = parse_rational("(1+2i)*z / (z - 0.5)");
  CHECK(same_poly(m.num, {Complex(0, 0), Complex(1, 2)}));
  CHECK(same_poly(m.den, {Complex(-0.5, 0), Complex(1, 0)}));
}

TEST_CASE("literals: decimals, exponents, imaginary suffix, bare i") {
  CHECK(parse_rational("2i").evaluate(Complex(0, 0)) == Complex(0, 2));
  CHECK(parse_rational("i").evaluate(Complex(0, 0)) == Complex(0, 1));
  CHECK(parse_rational("3.5e-2").evaluate(Complex(0, 0)) ==
        Complex(3.5e-2, 0));
  CHECK(parse_rational("1.25e1i").evaluate(Complex(0, 0)) ==
        Complex(0, 12.5));
  CHECK(parse_rational("1+2i").evaluate(Complex(0, 0)) == Complex(1, 2));
  CHECK(parse_rational("1.5-2i").evaluate(Complex(0, 0)) == Complex(1.5, -2));
}

TEST_CASE("precedence: power binds tighter than unary minus than product") {
  // -z^2 is -(z^2), so at z=2 it gives -4
  CHECK(parse_rational("-z^2").evaluate(Complex(2, 0)) == Complex(-4, 0));
  CHECK(parse_rational("2^2*z").evaluate(Complex(3, 0)) == Complex(12, 0));
  CHECK(parse_rational("2*z+1").evaluate(Complex(3, 0)) == Complex(7, 0));
  CHECK(parse_rational("2*(z+1)").evaluate(Complex(3, 0)) == Complex(8, 0));
  CHECK(parse_rational("1-2-3").evaluate(Complex(0, 0)) == Complex(-4, 0));
  CHECK(parse_rational("8/2/2").evaluate(Complex(0, 0)) == Complex(2, 0));
}

TEST_CASE("negative exponents become reciprocals") {
  RationalMap m = parse_rational("z^-1");
  CHECK(same_poly(m.num, {Complex(1, 0)}));
  CHECK(same_poly(m.den, {Complex(0, 0), Complex(1, 0)}));
  CHECK(parse_rational("2*z^-2").evaluate(Complex(2, 0)) == Complex(0.5, 0));
}

TEST_CASE("shared factors cancel") {
  RationalMap m = parse_rational("z^2/z");
  CHECK(same_poly(m.num, {Complex(0, 0), Complex(1, 0)}));
  CHECK(same_poly(m.den, {Complex(1, 0)}));

  m = parse_rational("(z*z - 1)/(z - 1)");
  REQUIRE(m.den.size() == 1);
  CHECK(m.num.size() == 2);
  CHECK(std::abs(m.num[0] - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(m.num[1] - Complex(1, 0)) < 1e-12);
}

TEST_CASE("syntax errors carry the offending position") {
  auto expect_syntax = [](const std::string& text) {
    try {
      parse_rational(text);
      FAIL_CHECK("no error for: ", text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SyntaxError);
      CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
  };
  expect_syntax("z +");
  expect_syntax("(z");
  expect_syntax("z $ 2");
  expect_syntax("z^z");
  expect_syntax("");
  expect_syntax("2 2");
}

TEST_CASE("zero denominators are rejected as non-rational") {
  auto expect_nonrational = [](const std::string& text) {
    try {
      parse_rational(text);
      FAIL_CHECK("no error for: ", text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonRational);
    }
  };
  expect_nonrational("1/(z-z)");
  expect_nonrational("0^-1");
  expect_nonrational("1/0");
}

TEST_CASE("degree cap kicks in above 64") {
  CHECK_NOTHROW(parse_rational("z^64"));
  try {
    parse_rational("z^65");
    FAIL_CHECK("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegreeCap);
  }
}

TEST_CASE("printing then parsing reproduces coefficients exactly") {
  const char* cases[] = {
      "z^2",
      "1/z + z",
      "(1+2i)*z / (z - 0.5)",
      "(3.14159e-2+2.5i)*z^3 - z + 0.125i",
      "(z^2 + (0.1-0.7i))/(z^3 - 2*z + 1e-3)",
      "-z^5/(1+z)",
  };
  for (const char* text : cases) {
    RationalMap m = parse_rational(text);
    std::string printed = print_rational(m);
    RationalMap back = parse_rational(printed);
    CHECK(same_poly(m.num, back.num));
    CHECK(same_poly(m.den, back.den));
    // and the printer is a fixed point from here on
    CHECK(print_rational(back) == printed);
  }
}

TEST_CASE("derivative follows the quotient rule") {
  RationalMap m = parse_rational("z^2").derivative();
  CHECK(same_poly(m.num, {Complex(0, 0), Complex(2, 0)}));
  CHECK(same_poly(m.den, {Complex(1, 0)}));

  m = parse_rational("1/z").derivative();
  CHECK(same_poly(m.num, {Complex(-1, 0)}));
  CHECK(same_poly(m.den,
                  {Complex(0, 0), Complex(0, 0), Complex(1, 0)}));

  // spot check against an analytic derivative
  RationalMap f = parse_rational("(z^2+1)/(z-3)");
  RationalMap fd = f.derivative();
  Complex z(0.5, 0.25);
  Complex want = (2.0 * z * (z - Complex(3, 0)) - (z * z + Complex(1, 0))) /
                 ((z - Complex(3, 0)) * (z - Complex(3, 0)));
  CHECK(std::abs(fd.evaluate(z) - want) < 1e-12);
}

TEST_CASE("poles finds the denominator roots") {
  RationalMap m = parse_rational("1/((z - 0.5)*(z + i))");
  std::vector<Complex> p = m.poles();
  REQUIRE(p.size() == 2);
  double d1 = std::min(std::abs(p[0] - Complex(0.5, 0)),
                       std::abs(p[1] - Complex(0.5, 0)));
  double d2 = std::min(std::abs(p[0] - Complex(0, -1)),
                       std::abs(p[1] - Complex(0, -1)));
  CHECK(d1 < 1e-12);
  CHECK(d2 < 1e-12);
}

TEST_CASE("evaluate matches a hand computation") {
  RationalMap m = parse_rational("(1+2i)*z / (z - 0.5)");
  Complex z(2.0, 1.0);
  Complex want = Complex(1, 2) * z / (z - Complex(0.5, 0));
  CHECK(std::abs(m.evaluate(z) - want) < 1e-15);
}
