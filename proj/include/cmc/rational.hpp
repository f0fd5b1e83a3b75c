#pragma once

#include <string>
#include <vector>

#include "cmc/grid.hpp"

namespace cmc {

// Dense polynomial, ascending powers. The zero polynomial is {}.
using Poly = std::vector<Complex>;

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Complex poly_eval(const Poly& p, Complex z);
Poly poly_derivative(const Poly& p);
// Roots via the companion matrix; degree 0 gives none.
std::vector<Complex> poly_roots(const Poly& p);

// Ratio of polynomials in one complex variable. normalize() trims exact
// trailing zeros, cancels shared roots, and scales the denominator monic;
// every public operation returns normalized maps. Degrees above 64 throw
// DegreeCap, a zero denominator throws NonRational.
struct RationalMap {
  Poly num;
  Poly den;

  static RationalMap constant(Complex c);
  static RationalMap variable();

  int num_degree() const { return int(num.size()) - 1; }
  int den_degree() const { return int(den.size()) - 1; }

  Complex evaluate(Complex z) const;
  RationalMap derivative() const;
  std::vector<Complex> poles() const;

  RationalMap operator+(const RationalMap& o) const;
  RationalMap operator-(const RationalMap& o) const;
  RationalMap operator*(const RationalMap& o) const;
  RationalMap operator/(const RationalMap& o) const;
  RationalMap negate() const;
  RationalMap pow(long e) const;

  void normalize();
};

}  // namespace cmc
