#include "cmc/rational.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace cmc {

namespace {

constexpr int kDegreeCap = 64;

void check_degree(const Poly& p) {
  if (int(p.size()) - 1 > kDegreeCap)
    throw Error(ErrorCode::DegreeCap,
                "polynomial degree exceeds " + std::to_string(kDegreeCap));
}

Poly trim(Poly p) {
  while (!p.empty() && p.back() == Complex(0.0, 0.0)) p.pop_back();
  return p;
}

// Deflation by a linear factor (z - r), top down.
Poly deflate(const Poly& p, Complex r) {
  Poly out(p.size() - 1);
  Complex carry = p.back();
  for (std::size_t k = p.size() - 1; k-- > 0;) {
    out[k] = carry;
    carry = p[k] + carry * r;
  }
  return out;
}

}  // namespace

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), Complex(0.0, 0.0));
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) out[k] += b[k];
  return trim(out);
}

Poly poly_sub(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), Complex(0.0, 0.0));
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) out[k] -= b[k];
  return trim(out);
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  Poly t = trim(out);
  check_degree(t);
  return t;
}

Complex poly_eval(const Poly& p, Complex z) {
  Complex acc(0.0, 0.0);
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * z + p[k];
  return acc;
}

Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly out(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) out[k - 1] = double(k) * p[k];
  return trim(out);
}

std::vector<Complex> poly_roots(const Poly& p) {
  Poly t = trim(p);
  if (t.size() <= 1) return {};
  const int d = int(t.size()) - 1;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k + 1 < d; ++k) comp(k + 1, k) = Complex(1.0, 0.0);
  for (int k = 0; k < d; ++k) comp(k, d - 1) = -t[k] / t[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  std::vector<Complex> roots(d);
  for (int k = 0; k < d; ++k) roots[k] = solver.eigenvalues()(k);
  return roots;
}

RationalMap RationalMap::constant(Complex c) {
  RationalMap m;
  m.num = c == Complex(0.0, 0.0) ? Poly{} : Poly{c};
  m.den = {Complex(1.0, 0.0)};
  return m;
}

RationalMap RationalMap::variable() {
  RationalMap m;
  m.num = {Complex(0.0, 0.0), Complex(1.0, 0.0)};
  m.den = {Complex(1.0, 0.0)};
  return m;
}

Complex RationalMap::evaluate(Complex z) const {
  return poly_eval(num, z) / poly_eval(den, z);
}

RationalMap RationalMap::derivative() const {
  RationalMap m;
  m.num = poly_sub(poly_mul(poly_derivative(num), den),
                   poly_mul(num, poly_derivative(den)));
  m.den = poly_mul(den, den);
  m.normalize();
  return m;
}

std::vector<Complex> RationalMap::poles() const { return poly_roots(den); }

RationalMap RationalMap::operator+(const RationalMap& o) const {
  RationalMap m;
  m.num = poly_add(poly_mul(num, o.den), poly_mul(o.num, den));
  m.den = poly_mul(den, o.den);
  m.normalize();
  return m;
}

RationalMap RationalMap::operator-(const RationalMap& o) const {
  RationalMap m;
  m.num = poly_sub(poly_mul(num, o.den), poly_mul(o.num, den));
  m.den = poly_mul(den, o.den);
  m.normalize();
  return m;
}

RationalMap RationalMap::operator*(const RationalMap& o) const {
  RationalMap m;
  m.num = poly_mul(num, o.num);
  m.den = poly_mul(den, o.den);
  m.normalize();
  return m;
}

RationalMap RationalMap::operator/(const RationalMap& o) const {
  if (trim(o.num).empty())
    throw Error(ErrorCode::NonRational, "division by the zero map");
  RationalMap m;
  m.num = poly_mul(num, o.den);
  m.den = poly_mul(den, o.num);
  m.normalize();
  return m;
}

RationalMap RationalMap::negate() const {
  RationalMap m = *this;
  for (auto& c : m.num) c = -c;
  return m;
}

RationalMap RationalMap::pow(long e) const {
  if (e < 0) {
    if (trim(num).empty())
      throw Error(ErrorCode::NonRational, "zero map has no negative powers");
    RationalMap inv;
    inv.num = den;
    inv.den = num;
    inv.normalize();
    return inv.pow(-e);
  }
  RationalMap acc = constant(Complex(1.0, 0.0));
  RationalMap base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = e > 1 ? base * base : base;
    e >>= 1;
  }
  return acc;
}

void RationalMap::normalize() {
  num = trim(num);
  den = trim(den);
  if (den.empty())
    throw Error(ErrorCode::NonRational, "denominator is the zero polynomial");
  check_degree(num);
  check_degree(den);

  // cancel shared roots (within 1e-8 of each other, relative to size)
  if (!num.empty() && num.size() > 1 && den.size() > 1) {
    std::vector<Complex> nr = poly_roots(num);
    bool again = true;
    while (again && num.size() > 1 && den.size() > 1) {
      again = false;
      std::vector<Complex> dr = poly_roots(den);
      for (Complex r : dr) {
        auto close_to = [&](Complex a) {
          return std::abs(a - r) <= 1e-8 * std::max(1.0, std::abs(r));
        };
        auto it = std::find_if(nr.begin(), nr.end(), close_to);
        if (it != nr.end()) {
          num = trim(deflate(num, (*it + r) / 2.0));
          den = trim(deflate(den, (*it + r) / 2.0));
          nr.erase(it);
          again = true;
          break;
        }
      }
    }
  }

  if (num.empty()) {
    den = {Complex(1.0, 0.0)};
    return;
  }
  Complex lead = den.back();
  for (auto& c : den) c /= lead;
  for (auto& c : num) c /= lead;
}

}  // namespace cmc
