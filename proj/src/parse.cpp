#include "cmc/parse.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace cmc {

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  explicit Parser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorCode::SyntaxError,
                what + " at position " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(unsigned(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  RationalMap parse() {
    RationalMap m = expr();
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input");
    return m;
  }

  RationalMap expr() {
    RationalMap acc = term();
    for (;;) {
      if (eat('+'))
        acc = acc + term();
      else if (eat('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

  RationalMap term() {
    RationalMap acc = unary();
    for (;;) {
      if (eat('*'))
        acc = acc * unary();
      else if (eat('/'))
        acc = acc / unary();
      else
        return acc;
    }
  }

  RationalMap unary() {
    if (eat('-')) return unary().negate();
    return power();
  }

  RationalMap power() {
    RationalMap base = atom();
    if (!eat('^')) return base;
    skip_ws();
    bool neg = false;
    if (pos < text.size() && text[pos] == '-') {
      neg = true;
      ++pos;
    }
    if (pos >= text.size() || !std::isdigit(unsigned(text[pos])))
      fail("expected an integer exponent");
    long e = 0;
    while (pos < text.size() && std::isdigit(unsigned(text[pos]))) {
      e = e * 10 + (text[pos] - '0');
      if (e > 1000) fail("exponent too large");
      ++pos;
    }
    return base.pow(neg ? -e : e);
  }

  RationalMap atom() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      RationalMap m = expr();
      if (!eat(')')) fail("expected ')'");
      return m;
    }
    if (c == 'z') {
      ++pos;
      return RationalMap::variable();
    }
    if (c == 'i') {
      ++pos;
      return RationalMap::constant(Complex(0.0, 1.0));
    }
    if (std::isdigit(unsigned(c)) || c == '.') return number();
    fail(std::string("unexpected character '") + c + "'");
  }

  RationalMap number() {
    const char* start = text.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) fail("malformed number");
    pos += std::size_t(end - start);
    if (pos < text.size() && text[pos] == 'i') {
      ++pos;
      return RationalMap::constant(Complex(0.0, v));
    }
    return RationalMap::constant(Complex(v, 0.0));
  }
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_coeff(Complex c) {
  if (c.imag() == 0.0) return format_double(c.real());
  std::string im = format_double(c.imag()) + "i";
  if (c.real() == 0.0) return im;
  std::string sep = c.imag() < 0.0 ? "" : "+";
  return "(" + format_double(c.real()) + sep + im + ")";
}

std::string format_poly(const Poly& p) {
  if (p.empty()) return "0";
  std::string out;
  bool first = true;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == Complex(0.0, 0.0) && p.size() > 1) continue;
    if (!first) out += " + ";
    first = false;
    out += format_coeff(p[k]);
    if (k == 1)
      out += "*z";
    else if (k > 1)
      out += "*z^" + std::to_string(k);
  }
  if (first) out = "0";
  return out;
}

}  // namespace

RationalMap parse_rational(const std::string& text) {
  Parser p(text);
  RationalMap m = p.parse();
  m.normalize();
  return m;
}

std::string print_rational(const RationalMap& m) {
  return "(" + format_poly(m.num) + ") / (" + format_poly(m.den) + ")";
}

}  // namespace cmc
