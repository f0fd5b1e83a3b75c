#pragma once

#include <string>

#include "cmc/rational.hpp"

namespace cmc {

// Parses an expression in one variable z with complex coefficients into a
// rational map. Supported: + - * / ^ with integer (possibly negative)
// exponents, parentheses, unary minus, number literals like 1.5, 2i,
// 3.5e-2i, and the bare imaginary unit i. Precedence: ^ binds tighter than
// unary minus, then * /, then + -. Errors carry the character position.
RationalMap parse_rational(const std::string& text);

// Canonical form: "(c0 + c1*z + c2*z^2) / (d0 + ...)" with coefficients
// printed to 17 significant digits, so parse_rational(print_rational(m))
// reproduces the coefficients exactly.
std::string print_rational(const RationalMap& m);

}  // namespace cmc
