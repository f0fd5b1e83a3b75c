#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cmc/lax.hpp"
#include "cmc/parse.hpp"
#include "cmc/sigma.hpp"

using namespace cmc;

namespace {

GridChart chart(double x0, double x1, double y0, double y1, std::size_t nx,
                std::size_t ny) {
  GridChart c;
  c.x_min = x0; c.x_max = x1; c.y_min = y0; c.y_max = y1;
  c.nx = nx; c.ny = ny;
  return c;
}

GridChart cyl_chart() { return chart(0, 3, 0, 3, 129, 129); }
GridChart inst_chart() { return chart(-2, 2, -2, 2, 129, 129); }

SpinorData inst_data() {
  return instanton(parse_rational("z"), inst_chart()).spinors;
}

// worst point norm of the coupled first-order residual; the rows mix under
// a unitary rotation but this combination must not move
double dirac_pointnorm(const SpinorData& s) {
  std::vector<unsigned char> joint = s.joint_mask();
  ComplexField a = s.psi1, b = s.psi2;
  a.mask = joint;
  b.mask = joint;
  ComplexField da = wirtinger_d(a);
  ComplexField db = wirtinger_dbar(b);
  double m = 0.0;
  for (std::size_t k = 0; k < joint.size(); ++k) {
    if (!(da.mask[k] && db.mask[k])) continue;
    Complex r1 = da.values[k] - s.p.values[k] * s.psi2.values[k];
    Complex r2 = db.values[k] + s.p.values[k] * s.psi1.values[k];
    m = std::max(m, std::sqrt(std::norm(r1) + std::norm(r2)));
  }
  return m;
}

GeometryBundle const_bundle(const GridChart& c, double q, double H,
                            Complex Q) {
  GeometryBundle g;
  g.q = RealField(c, q);
  g.H = RealField(c, H);
  g.Q = ComplexField(c, Q);
  return g;
}

}  // namespace

TEST_CASE("random unitary rotations leave the derived geometry invariant") {
  SpinorData s = make_cylinder(cyl_chart(), 1.0);
  GeometryBundle g0 = derive_geometry(s);
  double norm0 = dirac_pointnorm(s);

  std::mt19937 rng(7);
  std::normal_distribution<double> nd(0.0, 1.0);
  double qdev = 0.0, hdev = 0.0, qqdev = 0.0, rdev = 0.0;
  double idev = 0.0, iimdev = 0.0, iiddev = 0.0, ddev = 0.0;
  for (int t = 0; t < 20; ++t) {
    Complex a(nd(rng), nd(rng)), b(nd(rng), nd(rng));
    double nrm = std::sqrt(std::norm(a) + std::norm(b));
    SU2Element u{a / nrm, b / nrm};
    SpinorData st = su2_transform(s, u);
    GeometryBundle gt = derive_geometry(st);
    ddev = std::max(ddev, std::fabs(dirac_pointnorm(st) - norm0));
    for (std::size_t k = 0; k < g0.q.values.size(); ++k) {
      if (!(g0.q.mask[k] && gt.q.mask[k])) continue;
      qdev = std::max(qdev, std::fabs(gt.q.values[k] - g0.q.values[k]));
      hdev = std::max(hdev, std::fabs(gt.H.values[k] - g0.H.values[k]));
      idev = std::max(
          idev, std::fabs(gt.I_coeff.values[k] - g0.I_coeff.values[k]));
      iimdev = std::max(
          iimdev, std::fabs(gt.II_mixed.values[k] - g0.II_mixed.values[k]));
      if (!(g0.Q.mask[k] && gt.Q.mask[k])) continue;
      qqdev = std::max(qqdev, std::fabs(std::abs(gt.Q.values[k]) -
                                        std::abs(g0.Q.values[k])));
      iiddev =
          std::max(iiddev, std::abs(gt.II_dz2.values[k] - g0.II_dz2.values[k]));
      double r0 = 2.0 * g0.q.values[k] * g0.q.values[k] /
                  std::abs(g0.Q.values[k]);
      double rt = 2.0 * gt.q.values[k] * gt.q.values[k] /
                  std::abs(gt.Q.values[k]);
      rdev = std::max(rdev, std::fabs(rt - r0));
    }
  }
  CHECK(qdev < 1e-12);
  CHECK(hdev < 1e-12);
  CHECK(qqdev < 1e-12);
  CHECK(iiddev < 1e-12);
  CHECK(rdev < 1e-12);
  CHECK(idev < 1e-12);
  CHECK(iimdev < 1e-12);
  CHECK(ddev < 1e-12);
}

TEST_CASE("identity rotation returns the spinors bitwise") {
  SpinorData s = make_cylinder(chart(0, 1, 0, 1, 17, 17), 0.5);
  SpinorData t = su2_transform(s, SU2Element{Complex(1, 0), Complex(0, 0)});
  for (std::size_t k = 0; k < s.psi1.values.size(); ++k) {
    CHECK(t.psi1.values[k] == s.psi1.values[k]);
    CHECK(t.psi2.values[k] == s.psi2.values[k]);
    CHECK(t.p.values[k] == s.p.values[k]);
  }
}

TEST_CASE("rotations off the unit sphere are rejected") {
  SU2Element ok{Complex(0.6, 0), Complex(0, 0.8)};
  CHECK_NOTHROW(ok.validate());
  SU2Element bad{Complex(1, 0), Complex(1e-5, 0)};
  CHECK_THROWS_AS(bad.validate(), Error);
  try {
    bad.validate();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotUnitary);
  }
  SpinorData s = make_cylinder(chart(0, 1, 0, 1, 9, 9), 1.0);
  CHECK_THROWS_AS(su2_transform(s, bad), Error);
}

TEST_CASE("closed connection is flat on instanton data") {
  GeometryBundle g = derive_geometry(inst_data());
  ConnectionPair c = build_connection(g, "closed");
  ResidualStat r = zero_curvature_residual(c);
  CHECK(r.max == doctest::Approx(2.918e-3).epsilon(1e-3));
  CHECK(r.max < 50.0 * r.h * r.h);
}

TEST_CASE("spectral connection at parameter 1 matches the closed one") {
  // unit mean curvature turns the closed pair into the spectral pair, so
  // the entries may differ only by the rounding inside H = p / q
  GeometryBundle g = derive_geometry(make_cylinder(cyl_chart(), 1.0));
  ConnectionPair cc = build_connection(g, "closed");
  ConnectionPair cs = build_connection(g, "spectral", Complex(1, 0));
  double dev = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < cc.A[i][j].values.size(); ++k) {
        if (!(cc.A[i][j].mask[k] && cs.A[i][j].mask[k])) continue;
        dev = std::max(dev, std::abs(cc.A[i][j].values[k] -
                                     cs.A[i][j].values[k]));
        dev = std::max(dev, std::abs(cc.B[i][j].values[k] -
                                     cs.B[i][j].values[k]));
      }
  CHECK(dev < 1e-13);
}

TEST_CASE("spectral curvature does not move along the unit circle") {
  GeometryBundle g = derive_geometry(make_cylinder(cyl_chart(), 1.0));
  const Complex lams[3] = {Complex(1, 0), Complex(0, 1),
                           std::polar(1.0, 3.14159265358979323846 / 4.0)};
  double lo = 1e300, hi = 0.0;
  for (const Complex& lam : lams) {
    ResidualStat r = zero_curvature_residual(
        build_connection(g, "spectral", lam));
    CHECK(r.max == doctest::Approx(7.322e-4).epsilon(1e-3));
    CHECK(r.max < 50.0 * r.h * r.h);
    lo = std::min(lo, r.max);
    hi = std::max(hi, r.max);
  }
  CHECK(hi / lo < 10.0);
}

TEST_CASE("spectral connection gates its inputs") {
  GeometryBundle g = derive_geometry(make_cylinder(chart(0, 1, 0, 1, 17, 17),
                                                   1.0));
  CHECK_THROWS_AS(build_connection(g, "spectral", Complex(1.001, 0)), Error);
  try {
    build_connection(g, "spectral", Complex(1.001, 0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadParameter);
  }
  CHECK_NOTHROW(build_connection(g, "spectral", std::polar(1.0, 0.3)));

  GeometryBundle off = const_bundle(chart(0, 1, 0, 1, 17, 17), 1.0, 2.0,
                                    Complex(2, 0));
  CHECK_THROWS_AS(build_connection(off, "spectral", Complex(1, 0)), Error);
  try {
    build_connection(off, "spectral", Complex(1, 0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCMC1);
  }
  CHECK_THROWS_AS(build_connection(off, "sl2", Complex(1, 0)), Error);
  // the closed pair carries H explicitly and accepts any mean curvature
  CHECK_NOTHROW(build_connection(off, "closed"));
}

TEST_CASE("unknown connection label is rejected") {
  GeometryBundle g = const_bundle(chart(0, 1, 0, 1, 9, 9), 1.0, 1.0,
                                  Complex(2, 0));
  CHECK_THROWS_AS(build_connection(g, "spectra1"), Error);
  try {
    build_connection(g, "spectra1");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadParameter);
  }
}

TEST_CASE("sl2 curvature pins on cylinder and instanton data") {
  GeometryBundle g = derive_geometry(make_cylinder(cyl_chart(), 1.0));
  const Complex lams[3] = {Complex(1, 0), Complex(0, 1),
                           std::polar(1.0, 3.14159265358979323846 / 4.0)};
  for (const Complex& lam : lams) {
    ResidualStat r = zero_curvature_residual(build_connection(g, "sl2", lam));
    CHECK(r.max == doctest::Approx(7.322e-4).epsilon(1e-3));
  }
  GeometryBundle gi = derive_geometry(inst_data());
  ResidualStat ri =
      zero_curvature_residual(build_connection(gi, "sl2", Complex(1, 0)));
  CHECK(ri.max == doctest::Approx(2.918e-3).epsilon(1e-3));
  CHECK(ri.max < 50.0 * ri.h * ri.h);
}

TEST_CASE("sl2 connection matrices are trace free at every point") {
  GeometryBundle g = derive_geometry(make_cylinder(cyl_chart(), 1.0));
  ConnectionPair c = build_connection(g, "sl2", Complex(0, 1));
  std::size_t seen = 0;
  for (std::size_t k = 0; k < c.A[0][0].values.size(); ++k) {
    if (!c.A[0][0].mask[k]) continue;
    ++seen;
    REQUIRE(c.A[0][0].values[k] + c.A[1][1].values[k] == Complex(0, 0));
    REQUIRE(c.B[0][0].values[k] + c.B[1][1].values[k] == Complex(0, 0));
  }
  CHECK(seen > 0);
}

TEST_CASE("constant unit data gives an exactly flat closed connection") {
  GridChart c = chart(0, 1, 0, 1, 33, 33);
  GeometryBundle g = const_bundle(c, 1.0, 1.0, Complex(2, 0));
  ResidualStat r = zero_curvature_residual(build_connection(g, "closed"));
  CHECK(r.max == 0.0);
  CHECK(r.count > 0);

  // same q and Q with doubled mean curvature: the compatibility defect is
  // q^2 H^2 - |Q|^2 / 4 q^2 = 3, reproduced exactly by the commutator
  GeometryBundle g2 = const_bundle(c, 1.0, 2.0, Complex(2, 0));
  ResidualStat r2 = zero_curvature_residual(build_connection(g2, "closed"));
  CHECK(r2.max == 3.0);
}

TEST_CASE("tampered conformal factor breaks the closed curvature") {
  GridChart c = cyl_chart();
  GeometryBundle g = derive_geometry(make_cylinder(c, 1.0));
  for (std::size_t j = 0; j < c.ny; ++j)
    for (std::size_t i = 0; i < c.nx; ++i)
      g.q.at(i, j) *= 1.0 + 0.1 * std::sin(c.x(i));
  ResidualStat r = zero_curvature_residual(build_connection(g, "closed"));
  CHECK(r.max == doctest::Approx(3.614e-1).epsilon(1e-2));
  CHECK(r.max > 1e-2);
}

TEST_CASE("original spinors solve the closed linear problem") {
  SpinorData s = inst_data();
  GeometryBundle g = derive_geometry(s);
  ResidualStat r = linear_problem_residual(s, build_connection(g, "closed"));
  CHECK(r.max == doctest::Approx(9.756e-4).epsilon(1e-3));
  CHECK(r.max < 50.0 * r.h * r.h);

  SpinorData sc = make_cylinder(cyl_chart(), 1.0);
  GeometryBundle gc = derive_geometry(sc);
  ResidualStat rc = linear_problem_residual(
      sc, build_connection(gc, "spectral", Complex(1, 0)));
  CHECK(rc.max < 50.0 * rc.h * rc.h);
}

TEST_CASE("linear problem refuses connections the spinors do not solve") {
  SpinorData s = make_cylinder(chart(0, 1, 0, 1, 17, 17), 1.0);
  GeometryBundle g = derive_geometry(s);
  CHECK_THROWS_AS(
      linear_problem_residual(s, build_connection(g, "sl2", Complex(1, 0))),
      Error);
  try {
    linear_problem_residual(s, build_connection(g, "spectral", Complex(0, 1)));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LabelMismatch);
  }
}

TEST_CASE("zero spinors give an exactly zero linear residual") {
  GridChart c = chart(0, 1, 0, 1, 17, 17);
  GeometryBundle g = derive_geometry(make_cylinder(c, 1.0));
  ConnectionPair cp = build_connection(g, "closed");
  SpinorData zeros{ComplexField(c), ComplexField(c), RealField(c)};
  ResidualStat r = linear_problem_residual(zeros, cp);
  CHECK(r.max == 0.0);
  CHECK(r.count > 0);
}

TEST_CASE("gauge transformed spinors solve the sl2 system") {
  SpinorData s = inst_data();
  GaugeReport pos = gauge_check(s);
  CHECK(pos.residual.max == doctest::Approx(9.756e-4).epsilon(1e-3));
  CHECK(pos.residual.max < 50.0 * pos.residual.h * pos.residual.h);
  CHECK(pos.ratio_dev < 1e-10);

  GaugeReport neg = gauge_check(s, 2.0);
  CHECK(neg.residual.max == doctest::Approx(1.001).epsilon(1e-2));
  CHECK(neg.residual.max > 1e-2);

  GaugeReport cyl = gauge_check(make_cylinder(cyl_chart(), 1.0));
  CHECK(cyl.residual.max < 50.0 * cyl.residual.h * cyl.residual.h);
  CHECK(cyl.ratio_dev < 1e-10);
}

TEST_CASE("gauge check demands unit mean curvature") {
  SpinorData s = make_cylinder(chart(0, 1, 0, 1, 17, 17), 1.0);
  for (std::size_t k = 0; k < s.p.values.size(); ++k) s.p.values[k] *= 2.0;
  CHECK_THROWS_AS(gauge_check(s), Error);
  try {
    gauge_check(s);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCMC1);
  }
}

TEST_CASE("rational parameter curvature pins") {
  SpinorData sc = make_cylinder(cyl_chart(), 1.0);
  CHECK(mu_lax_residual(sc, Complex(2, 0)).max ==
        doctest::Approx(4.888e-4).epsilon(1e-3));
  CHECK(mu_lax_residual(sc, Complex(0, 3)).max ==
        doctest::Approx(1.466e-4).epsilon(1e-3));
  SpinorData si = inst_data();
  CHECK(mu_lax_residual(si, Complex(2, 0)).max ==
        doctest::Approx(2.603e-3).epsilon(1e-3));
  CHECK(mu_lax_residual(si, Complex(0, 3)).max ==
        doctest::Approx(7.809e-4).epsilon(1e-3));
}

TEST_CASE("rational parameter curvature detects corrupted spinors") {
  // scaling one spinor leaves CMC-1 land entirely; the operation must not
  // gate on that and still report an order-one defect
  SpinorData s = make_cylinder(cyl_chart(), 1.0);
  for (std::size_t k = 0; k < s.psi1.values.size(); ++k)
    s.psi1.values[k] *= 1.1;
  ResidualStat r;
  CHECK_NOTHROW(r = mu_lax_residual(s, Complex(2, 0)));
  CHECK(r.max == doctest::Approx(4.872e-1).epsilon(1e-2));
  CHECK(r.max > 1e-2);
}

TEST_CASE("rational parameter poles are fenced off") {
  SpinorData s = make_cylinder(chart(0, 1, 0, 1, 17, 17), 1.0);
  for (Complex mu : {Complex(1, 0), Complex(-1, 0), Complex(1.0, 5e-10),
                     Complex(-1.0 + 1e-10, 0)}) {
    CHECK_THROWS_AS(mu_lax_residual(s, mu), Error);
    try {
      mu_lax_residual(s, mu);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularParameter);
    }
  }
  ResidualStat near;
  CHECK_NOTHROW(near = mu_lax_residual(s, Complex(1.0 + 2e-9, 0)));
  CHECK(std::isfinite(near.max));
}
