#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cmc/calculus.hpp"

using namespace cmc;

namespace {

GridChart square(double a, double b, std::size_t n) {
  GridChart c;
  c.x_min = a; c.x_max = b; c.y_min = a; c.y_max = b;
  c.nx = n; c.ny = n;
  return c;
}

ComplexField sample(const GridChart& c, Complex (*fn)(Complex)) {
  ComplexField f(c);
  for (std::size_t j = 0; j < c.ny; ++j)
    for (std::size_t i = 0; i < c.nx; ++i) f.at(i, j) = fn(c.z(i, j));
  return f;
}

double max_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    if (!a.mask[k] || !b.mask[k]) continue;
    double d = std::abs(a.values[k] - b.values[k]);
    if (d > m) m = d;
  }
  return m;
}

}  // namespace

TEST_CASE("stencils are exact on low-degree polynomials") {
  // Chart spacings are powers of two, so coordinates are exact doubles and
  // these identities land on exactly zero rather than rounding noise.
  GridChart c = square(-1.0, 1.0, 33);

  ComplexField zzb = sample(c, [](Complex z) { return z * std::conj(z); });
  ComplexField want_zb = sample(c, [](Complex z) { return std::conj(z); });
  CHECK(max_diff(wirtinger_d(zzb), want_zb) == 0.0);

  ComplexField zb = sample(c, [](Complex z) { return std::conj(z); });
  ComplexField one = sample(c, [](Complex) { return Complex(1.0, 0.0); });
  ComplexField zero = sample(c, [](Complex) { return Complex(0.0, 0.0); });
  CHECK(max_diff(wirtinger_dbar(zb), one) == 0.0);
  CHECK(max_diff(wirtinger_d(zb), zero) == 0.0);

  ComplexField z2zb =
      sample(c, [](Complex z) { return z * z * std::conj(z); });
  ComplexField z2 = sample(c, [](Complex z) { return z * z; });
  ComplexField twoz = sample(c, [](Complex z) { return 2.0 * z; });
  CHECK(max_diff(wirtinger_dbar(z2zb), z2) == 0.0);
  CHECK(max_diff(ddbar(z2zb), twoz) == 0.0);
}

TEST_CASE("three-sample axes fall back to the classical stencil") {
  GridChart c = square(0.0, 1.0, 3);
  ComplexField z2 = sample(c, [](Complex z) { return z * z; });
  ComplexField twoz = sample(c, [](Complex z) { return 2.0 * z; });
  CHECK(max_diff(wirtinger_d(z2), twoz) < 1e-14);
  CHECK(stat_of(wirtinger_dbar(z2)).max < 1e-14);
}

TEST_CASE("dbar of conjugate equals conjugate of d, bitwise") {
  GridChart c = square(-1.0, 1.0, 33);
  ComplexField f = sample(c, [](Complex z) {
    return std::exp(z + std::conj(z) * std::conj(z));
  });
  ComplexField lhs = wirtinger_dbar(conj_field(f));
  ComplexField rhs = conj_field(wirtinger_d(f));
  for (std::size_t k = 0; k < lhs.values.size(); ++k) {
    REQUIRE(lhs.values[k].real() == rhs.values[k].real());
    REQUIRE(lhs.values[k].imag() == rhs.values[k].imag());
  }
}

TEST_CASE("derivatives are linear") {
  GridChart c = square(-1.0, 1.0, 17);
  ComplexField f = sample(c, [](Complex z) { return std::exp(z); });
  ComplexField g =
      sample(c, [](Complex z) { return z * z * std::conj(z); });
  Complex a(0.7, -0.3), b(-1.2, 0.4);
  ComplexField combo(c);
  for (std::size_t k = 0; k < combo.values.size(); ++k)
    combo.values[k] = a * f.values[k] + b * g.values[k];
  ComplexField dc = wirtinger_d(combo);
  ComplexField df = wirtinger_d(f);
  ComplexField dg = wirtinger_d(g);
  double worst = 0.0;
  for (std::size_t k = 0; k < dc.values.size(); ++k)
    worst = std::max(worst,
                     std::abs(dc.values[k] - (a * df.values[k] + b * dg.values[k])));
  CHECK(worst < 1e-13);
}

TEST_CASE("holomorphy residual vanishes at second order for exp(z)") {
  double prev = 0.0;
  double errs[2] = {0.0, 0.0};
  int idx = 0;
  for (std::size_t n : {65u, 129u}) {
    GridChart c = square(-1.0, 1.0, n);
    ComplexField f = sample(c, [](Complex z) { return std::exp(z); });
    ResidualStat s = holomorphy_residual(f);
    CHECK(s.max <= 10.0 * s.h * s.h);
    errs[idx++] = s.max;
    prev = s.max;
  }
  (void)prev;
  double ratio = errs[0] / errs[1];
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("wirtinger_d converges at second order on a non-holomorphic field") {
  // exp(z + zbar^2), error measured against the analytic d/dz over the full
  // grid including the one-sided edges.
  double errs[3];
  int idx = 0;
  for (std::size_t n : {65u, 129u, 257u}) {
    GridChart c = square(-1.0, 1.0, n);
    ComplexField f = sample(c, [](Complex z) {
      return std::exp(z + std::conj(z) * std::conj(z));
    });
    ComplexField d = wirtinger_d(f);
    double worst = 0.0;
    for (std::size_t j = 0; j < c.ny; ++j)
      for (std::size_t i = 0; i < c.nx; ++i)
        worst = std::max(worst, std::abs(d.at(i, j) - f.at(i, j)));
    errs[idx++] = worst;
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(3.73).epsilon(0.02));
  CHECK(errs[1] / errs[2] == doctest::Approx(3.86).epsilon(0.02));
}

TEST_CASE("mask propagates to every stencil that reads a masked point") {
  GridChart c = square(-1.0, 1.0, 17);
  ComplexField f = sample(c, [](Complex z) { return z; });
  f.set_valid(8, 8, false);
  ComplexField d = deriv_x(f);
  CHECK(!d.valid(7, 8));
  CHECK(!d.valid(8, 8));
  CHECK(!d.valid(9, 8));
  CHECK(d.valid(6, 8));
  CHECK(d.valid(10, 8));
  CHECK(d.valid(8, 7));  // other rows unaffected by deriv_x
  ComplexField dy = deriv_y(f);
  CHECK(!dy.valid(8, 7));
  CHECK(!dy.valid(8, 9));
  CHECK(dy.valid(7, 8));
  // no one-sided fallback inside the chart: the neighbor stays masked even
  // though a lopsided stencil could formally be built there
  CHECK(!dy.valid(8, 8));
}

TEST_CASE("masked point near the edge kills the one-sided stencil too") {
  GridChart c = square(-1.0, 1.0, 17);
  ComplexField f = sample(c, [](Complex z) { return z; });
  f.set_valid(2, 5, false);
  ComplexField d = deriv_x(f);
  CHECK(!d.valid(0, 5));  // four-point stencil at i=0 reads i=2
  CHECK(!d.valid(1, 5));
  CHECK(!d.valid(3, 5));
  CHECK(d.valid(4, 5));
}

TEST_CASE("path integral is a trapezoid rule and rejects masked points") {
  GridChart c = square(-1.0, 1.0, 33);
  ComplexField fz = sample(c, [](Complex z) { return std::exp(z); });
  ComplexField fzb = sample(c, [](Complex) { return Complex(0.0, 0.0); });

  // two L-shaped routes between opposite corners of a subrectangle
  GridPath right_then_up, up_then_right;
  for (std::size_t i = 4; i <= 28; ++i) right_then_up.nodes.push_back({i, 4});
  for (std::size_t j = 5; j <= 28; ++j) right_then_up.nodes.push_back({28, j});
  for (std::size_t j = 4; j <= 28; ++j) up_then_right.nodes.push_back({4, j});
  for (std::size_t i = 5; i <= 28; ++i) up_then_right.nodes.push_back({i, 28});

  Complex a = path_integrate(fz, fzb, right_then_up);
  Complex b = path_integrate(fz, fzb, up_then_right);
  Complex want = std::exp(c.z(28, 28)) - std::exp(c.z(4, 4));
  // 48 trapezoid steps, each off by at most (h^3/12) max|f''| with h = 1/16
  CHECK(std::abs(a - want) < 5e-3);
  CHECK(std::abs(a - b) < 5e-3);

  ComplexField fz_masked = fz;
  fz_masked.set_valid(10, 4, false);
  CHECK_THROWS_WITH_AS(path_integrate(fz_masked, fzb, right_then_up),
                       doctest::Contains("masked"), Error);
  try {
    path_integrate(fz_masked, fzb, right_then_up);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PathThroughMask);
  }
}

TEST_CASE("sweep antiderivative is exact for a linear closed pair") {
  GridChart c = square(-1.0, 1.0, 33);
  ComplexField fz = sample(c, [](Complex z) { return z; });
  ComplexField fzb = sample(c, [](Complex) { return Complex(0.0, 0.0); });
  SweepResult s = sweep_antiderivative(fz, fzb, 16, 16);
  Complex z0 = c.z(16, 16);
  double worst = 0.0;
  for (std::size_t j = 0; j < c.ny; ++j)
    for (std::size_t i = 0; i < c.nx; ++i) {
      Complex z = c.z(i, j);
      worst = std::max(worst, std::abs(s.antiderivative.at(i, j) -
                                       0.5 * (z * z - z0 * z0)));
    }
  CHECK(worst < 1e-14);
  CHECK(s.loop_defect < 1e-15);
}

TEST_CASE("sweep antiderivative matches exp on a fine chart") {
  GridChart c;
  c.x_min = 0.0; c.x_max = 1.0; c.y_min = 0.0; c.y_max = 1.0;
  c.nx = 129; c.ny = 129;
  ComplexField fz = sample(c, [](Complex z) { return std::exp(z); });
  ComplexField fzb = sample(c, [](Complex) { return Complex(0.0, 0.0); });
  SweepResult s = sweep_antiderivative(fz, fzb, 64, 64);
  Complex z0 = c.z(64, 64);
  double worst = 0.0;
  for (std::size_t j = 0; j < c.ny; ++j)
    for (std::size_t i = 0; i < c.nx; ++i)
      worst = std::max(worst, std::abs(s.antiderivative.at(i, j) -
                                       (std::exp(c.z(i, j)) - std::exp(z0))));
  CHECK(worst == doctest::Approx(9.737085e-6).epsilon(1e-3));
}

TEST_CASE("loop defect flags a non-closed pair at 2 hx hy") {
  GridChart c = square(-1.0, 1.0, 33);
  ComplexField fz = sample(c, [](Complex z) { return std::conj(z); });
  ComplexField fzb = sample(c, [](Complex) { return Complex(0.0, 0.0); });
  SweepResult s = sweep_antiderivative(fz, fzb, 16, 16);
  double expected = 2.0 * c.hx() * c.hy();
  CHECK(s.loop_defect == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("sweep reaches around a masked hole") {
  GridChart c = square(-1.0, 1.0, 33);
  ComplexField fz = sample(c, [](Complex z) { return std::exp(z); });
  ComplexField fzb = sample(c, [](Complex) { return Complex(0.0, 0.0); });
  std::size_t holes = 0;
  for (std::size_t j = 0; j < c.ny; ++j)
    for (std::size_t i = 0; i < c.nx; ++i)
      if (std::abs(c.z(i, j)) < 0.3) {
        fz.set_valid(i, j, false);
        fzb.set_valid(i, j, false);
        ++holes;
      }
  REQUIRE(holes > 0);
  SweepResult s = sweep_antiderivative(fz, fzb, 2, 16);
  Complex z0 = c.z(2, 16);
  std::size_t reached = 0;
  double worst = 0.0;
  for (std::size_t j = 0; j < c.ny; ++j)
    for (std::size_t i = 0; i < c.nx; ++i) {
      if (!fz.valid(i, j)) continue;
      REQUIRE(s.antiderivative.valid(i, j));
      ++reached;
      worst = std::max(worst, std::abs(s.antiderivative.at(i, j) -
                                       (std::exp(c.z(i, j)) - std::exp(z0))));
    }
  CHECK(reached == c.size() - holes);
  CHECK(worst < 1e-3);
}

TEST_CASE("sweep rejects a masked base point") {
  GridChart c = square(-1.0, 1.0, 9);
  ComplexField fz = sample(c, [](Complex z) { return z; });
  ComplexField fzb = sample(c, [](Complex) { return Complex(0.0, 0.0); });
  fz.set_valid(4, 4, false);
  CHECK_THROWS_AS(sweep_antiderivative(fz, fzb, 4, 4), Error);
}

TEST_CASE("residual stats count only unmasked points") {
  GridChart c = square(0.0, 1.0, 3);
  ComplexField f(c);
  f.values = {Complex(1, 0), Complex(-2, 0), Complex(0, 3),
              Complex(0, 0), Complex(0, 0), Complex(0, 0),
              Complex(0, 0), Complex(0, 0), Complex(0, 0)};
  for (std::size_t k = 3; k < 9; ++k) f.mask[k] = 0;
  ResidualStat s = stat_of(f);
  CHECK(s.count == 3);
  CHECK(s.max == 3.0);
  CHECK(s.mean == doctest::Approx(2.0));
}
