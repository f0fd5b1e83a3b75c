#include "cmc/weierstrass.hpp"

#include <algorithm>
#include <cmath>

namespace cmc {

namespace {

double max_abs(const RealField& f) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k)
    if (f.mask[k]) m = std::max(m, std::fabs(f.values[k]));
  return m;
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k)
    if (f.mask[k]) m = std::max(m, std::abs(f.values[k]));
  return m;
}

constexpr double kCmc1Tol = 1e-6;

}  // namespace

void SpinorData::validate() const {
  require_same_chart(psi1.chart, psi2.chart, "SpinorData");
  require_same_chart(psi1.chart, p.chart, "SpinorData");
}

std::vector<unsigned char> SpinorData::joint_mask() const {
  return mask_and(mask_and(psi1.mask, psi2.mask), p.mask);
}

DiracReport dirac_residual(const SpinorData& s) {
  s.validate();
  std::vector<unsigned char> joint = s.joint_mask();

  ComplexField a = s.psi1, b = s.psi2;
  a.mask = joint;
  b.mask = joint;
  ComplexField da = wirtinger_d(a);
  ComplexField dbb = wirtinger_dbar(b);

  ComplexField res1(s.psi1.chart), res2(s.psi1.chart);
  double maxq = 0.0, dev = 0.0;
  for (std::size_t k = 0; k < joint.size(); ++k) {
    if (joint[k])
      maxq = std::max(maxq, std::norm(s.psi1.values[k]) +
                                std::norm(s.psi2.values[k]));
    res1.values[k] = da.values[k] - s.p.values[k] * s.psi2.values[k];
    res1.mask[k] = (da.mask[k] && joint[k]) ? 1 : 0;
    res2.values[k] = dbb.values[k] + s.p.values[k] * s.psi1.values[k];
    res2.mask[k] = (dbb.mask[k] && joint[k]) ? 1 : 0;
    if (joint[k]) {
      double q = std::norm(s.psi1.values[k]) + std::norm(s.psi2.values[k]);
      dev = std::max(dev, std::fabs(s.p.values[k] - q));
    }
  }

  DiracReport rep;
  rep.r1 = stat_of(res1);
  rep.r2 = stat_of(res2);
  rep.cmc1_dev = dev;
  rep.cmc1 = maxq > 0.0 && dev <= kCmc1Tol * maxq;
  return rep;
}

GeometryBundle derive_geometry(const SpinorData& s) {
  s.validate();
  const GridChart& c = s.psi1.chart;
  std::vector<unsigned char> joint = s.joint_mask();

  RealField q(c);
  double maxq = 0.0;
  for (std::size_t k = 0; k < q.values.size(); ++k) {
    q.values[k] = std::norm(s.psi1.values[k]) + std::norm(s.psi2.values[k]);
    q.mask[k] = joint[k];
    if (joint[k]) maxq = std::max(maxq, q.values[k]);
  }

  if (maxq == 0.0)
    throw Error(ErrorCode::EmptyGeometry, "conformal factor vanishes on the "
                                          "whole chart");

  GeometryBundle g;
  g.q_floor = 1e-12 * maxq;
  std::size_t alive = 0;
  for (std::size_t k = 0; k < q.values.size(); ++k) {
    q.mask[k] = (joint[k] && q.values[k] >= g.q_floor) ? 1 : 0;
    alive += q.mask[k];
  }
  if (alive == 0)
    throw Error(ErrorCode::EmptyGeometry, "conformal factor vanishes on the "
                                          "whole chart");

  RealField H(c);
  for (std::size_t k = 0; k < H.values.size(); ++k) {
    H.mask[k] = q.mask[k];
    H.values[k] = q.mask[k] ? s.p.values[k] / q.values[k] : 0.0;
  }

  ComplexField p1(c), p2(c);
  p1.values = s.psi1.values;
  p2.values = s.psi2.values;
  p1.mask = q.mask;
  p2.mask = q.mask;
  ComplexField d_cp1 = wirtinger_d(conj_field(p1));
  ComplexField d_p2 = wirtinger_d(p2);
  ComplexField Q(c);
  for (std::size_t k = 0; k < Q.values.size(); ++k) {
    Q.mask[k] = (d_cp1.mask[k] && d_p2.mask[k]) ? 1 : 0;
    Q.values[k] = Q.mask[k]
                      ? 2.0 * (p2.values[k] * d_cp1.values[k] -
                               std::conj(p1.values[k]) * d_p2.values[k])
                      : Complex(0.0, 0.0);
  }

  Vec3Field n(c);
  n.mask = q.mask;
  for (std::size_t k = 0; k < q.values.size(); ++k) {
    if (!q.mask[k]) continue;
    Complex w12 = s.psi1.values[k] * s.psi2.values[k];
    n.x[k] = 2.0 * w12.imag() / q.values[k];
    n.y[k] = 2.0 * w12.real() / q.values[k];
    n.z[k] = (std::norm(s.psi1.values[k]) - std::norm(s.psi2.values[k])) /
             q.values[k];
  }

  ComplexField lnq(c);
  lnq.mask = q.mask;
  for (std::size_t k = 0; k < lnq.values.size(); ++k)
    lnq.values[k] = q.mask[k] ? Complex(std::log(q.values[k]), 0.0)
                              : Complex(0.0, 0.0);
  ComplexField dd = ddbar(lnq);
  RealField K(c);
  K.mask = dd.mask;
  for (std::size_t k = 0; k < K.values.size(); ++k)
    K.values[k] = K.mask[k]
                      ? -dd.values[k].real() / (q.values[k] * q.values[k])
                      : 0.0;

  RealField I(c), IIm(c);
  I.mask = q.mask;
  IIm.mask = q.mask;
  for (std::size_t k = 0; k < I.values.size(); ++k) {
    I.values[k] = q.mask[k] ? 4.0 * q.values[k] * q.values[k] : 0.0;
    IIm.values[k] = q.mask[k] ? 4.0 * s.p.values[k] * q.values[k] : 0.0;
  }

  g.q = std::move(q);
  g.H = std::move(H);
  g.II_dz2 = Q;
  g.Q = std::move(Q);
  g.n = std::move(n);
  g.K = std::move(K);
  g.I_coeff = std::move(I);
  g.II_mixed = std::move(IIm);
  return g;
}

CVec3 immersion_differential(const SpinorData& s) {
  s.validate();
  const GridChart& c = s.psi1.chart;
  std::vector<unsigned char> joint = s.joint_mask();
  CVec3 dr = {ComplexField(c), ComplexField(c), ComplexField(c)};
  for (std::size_t k = 0; k < joint.size(); ++k) {
    Complex a = s.psi2.values[k] * s.psi2.values[k];
    Complex b = std::conj(s.psi1.values[k]) * std::conj(s.psi1.values[k]);
    dr[0].values[k] = Complex(0.0, 1.0) * (a + b);
    dr[1].values[k] = b - a;
    dr[2].values[k] = -2.0 * s.psi2.values[k] * std::conj(s.psi1.values[k]);
    dr[0].mask[k] = dr[1].mask[k] = dr[2].mask[k] = joint[k];
  }
  return dr;
}

SurfaceResult integrate_surface(const SpinorData& s, std::size_t base_i,
                                std::size_t base_j) {
  CVec3 dr = immersion_differential(s);
  const GridChart& c = s.psi1.chart;
  SurfaceResult out;
  out.r = Vec3Field(c);
  std::vector<unsigned char> m(c.size(), 1);
  for (int comp = 0; comp < 3; ++comp) {
    SweepResult sw =
        sweep_antiderivative(dr[comp], conj_field(dr[comp]), base_i, base_j);
    out.loop_defect = std::max(out.loop_defect, sw.loop_defect);
    std::vector<double>& dst =
        comp == 0 ? out.r.x : (comp == 1 ? out.r.y : out.r.z);
    for (std::size_t k = 0; k < c.size(); ++k) {
      dst[k] = sw.antiderivative.values[k].real();
      out.max_imag =
          std::max(out.max_imag, std::fabs(sw.antiderivative.values[k].imag()));
      m[k] = (m[k] && sw.antiderivative.mask[k]) ? 1 : 0;
    }
  }
  out.r.mask = std::move(m);

  double h2 = c.h() * c.h();
  if (out.max_imag > 100.0 * h2)
    throw Error(ErrorCode::ImaginaryResidueTooLarge,
                "swept surface has imaginary part " +
                    std::to_string(out.max_imag));
  return out;
}

ScalarProductReport scalar_product_residuals(const GeometryBundle& g,
                                             const Vec3Field& r) {
  require_same_chart(g.q.chart, r.chart, "scalar_product_residuals");
  const GridChart& c = r.chart;
  CVec3 rc = complexify(r);
  CVec3 dr = vec_wd(rc);
  CVec3 dbr = vec_wdb(rc);
  CVec3 nc = complexify(g.n);

  ScalarProductReport rep;
  ComplexField nn = vec_dot(nc, nc);
  for (std::size_t k = 0; k < nn.values.size(); ++k)
    nn.values[k] -= Complex(1.0, 0.0);
  rep.nn_m1 = stat_of(nn);
  rep.n_dr = stat_of(vec_dot(nc, dr));
  rep.n_dbr = stat_of(vec_dot(nc, dbr));
  rep.dr_dr = stat_of(vec_dot(dr, dr));
  rep.dbr_dbr = stat_of(vec_dot(dbr, dbr));

  ComplexField mixed = vec_dot(dr, dbr);
  for (std::size_t k = 0; k < mixed.values.size(); ++k) {
    mixed.mask[k] = (mixed.mask[k] && g.q.mask[k]) ? 1 : 0;
    if (mixed.mask[k])
      mixed.values[k] -= 2.0 * g.q.values[k] * g.q.values[k];
  }
  rep.dr_dbr_m2q2 = stat_of(mixed);
  (void)c;
  return rep;
}

GaussCodazziReport gauss_codazzi_residual(const GeometryBundle& g) {
  const GridChart& c = g.q.chart;
  ComplexField lnq2(c);
  lnq2.mask = g.q.mask;
  for (std::size_t k = 0; k < lnq2.values.size(); ++k)
    lnq2.values[k] = lnq2.mask[k]
                         ? Complex(std::log(g.q.values[k] * g.q.values[k]), 0.0)
                         : Complex(0.0, 0.0);
  ComplexField dd = ddbar(lnq2);

  ComplexField gauss(c);
  for (std::size_t k = 0; k < gauss.values.size(); ++k) {
    gauss.mask[k] = (dd.mask[k] && g.Q.mask[k]) ? 1 : 0;
    if (!gauss.mask[k]) continue;
    double q = g.q.values[k], H = g.H.values[k];
    gauss.values[k] = dd.values[k] -
                      0.5 * g.Q.values[k] * std::conj(g.Q.values[k]) / (q * q) +
                      2.0 * H * H * q * q;
  }

  ComplexField Hc = complexify(g.H);
  ComplexField dH = wirtinger_d(Hc);
  ComplexField dbH = wirtinger_dbar(Hc);
  ComplexField dbQ = wirtinger_dbar(g.Q);
  ComplexField dQb = wirtinger_d(conj_field(g.Q));

  ComplexField cz(c), czb(c);
  for (std::size_t k = 0; k < cz.values.size(); ++k) {
    double q2 = 2.0 * g.q.values[k] * g.q.values[k];
    cz.mask[k] = (dbQ.mask[k] && dH.mask[k]) ? 1 : 0;
    cz.values[k] = cz.mask[k] ? dbQ.values[k] - q2 * dH.values[k]
                              : Complex(0.0, 0.0);
    czb.mask[k] = (dQb.mask[k] && dbH.mask[k]) ? 1 : 0;
    czb.values[k] = czb.mask[k] ? dQb.values[k] - q2 * dbH.values[k]
                                : Complex(0.0, 0.0);
  }

  GaussCodazziReport rep;
  rep.gauss = stat_of(gauss);
  rep.codazzi_z = stat_of(cz);
  rep.codazzi_zbar = stat_of(czb);
  return rep;
}

namespace {

// Normal recomputed from the swept surface: Im(d r x dbar r) normalized,
// sign-matched to the spinor-built normal.
struct RecomputedFrame {
  CVec3 dr, dbr, n;
  int orientation = 1;
};

RecomputedFrame recompute_frame(const GeometryBundle& g, const Vec3Field& r) {
  RecomputedFrame f;
  CVec3 rc = complexify(r);
  f.dr = vec_wd(rc);
  f.dbr = vec_wdb(rc);
  CVec3 cr = vec_cross(f.dr, f.dbr);
  const GridChart& c = r.chart;
  f.n = {ComplexField(c), ComplexField(c), ComplexField(c)};
  long pos = 0, neg = 0;
  std::vector<double> raw[3];
  for (int k = 0; k < 3; ++k) raw[k].assign(c.size(), 0.0);
  std::vector<unsigned char> m(c.size(), 0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    m[k] = (cr[0].mask[k] && g.n.mask[k]) ? 1 : 0;
    if (!m[k]) continue;
    double nx = cr[0].values[k].imag();
    double ny = cr[1].values[k].imag();
    double nz = cr[2].values[k].imag();
    double len = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (len == 0.0) {
      m[k] = 0;
      continue;
    }
    raw[0][k] = nx / len;
    raw[1][k] = ny / len;
    raw[2][k] = nz / len;
    double dotn =
        raw[0][k] * g.n.x[k] + raw[1][k] * g.n.y[k] + raw[2][k] * g.n.z[k];
    (dotn >= 0.0 ? pos : neg)++;
  }
  f.orientation = pos >= neg ? 1 : -1;
  double sign = double(f.orientation);
  for (int comp = 0; comp < 3; ++comp) {
    for (std::size_t k = 0; k < c.size(); ++k)
      f.n[comp].values[k] = Complex(sign * raw[comp][k], 0.0);
    f.n[comp].mask = m;
  }
  return f;
}

}  // namespace

FrameReport frame_residual(const GeometryBundle& g, const Vec3Field& r) {
  require_same_chart(g.q.chart, r.chart, "frame_residual");
  const GridChart& c = r.chart;
  RecomputedFrame f = recompute_frame(g, r);

  ComplexField qc = complexify(g.q);
  ComplexField dq = wirtinger_d(qc);
  ComplexField dbq = wirtinger_dbar(qc);

  CVec3 d_dr = vec_wd(f.dr);
  CVec3 d_dbr = vec_wd(f.dbr);
  CVec3 d_n = vec_wd(f.n);
  CVec3 db_dbr = vec_wdb(f.dbr);
  CVec3 db_dr = vec_wdb(f.dr);
  CVec3 db_n = vec_wdb(f.n);

  CVec3 rows[6];
  for (auto& row : rows)
    row = {ComplexField(c), ComplexField(c), ComplexField(c)};

  for (std::size_t k = 0; k < c.size(); ++k) {
    bool base = g.q.mask[k] && g.Q.mask[k] && dq.mask[k] && dbq.mask[k];
    double q = g.q.values[k];
    double H = g.H.values[k];
    Complex Q = g.Q.values[k];
    Complex Qb = std::conj(Q);
    Complex lq = base ? 2.0 * dq.values[k] / q : Complex(0.0, 0.0);
    Complex lbq = base ? 2.0 * dbq.values[k] / q : Complex(0.0, 0.0);
    double hq2 = 2.0 * H * q * q;
    Complex qh = base ? Q / (2.0 * q * q) : Complex(0.0, 0.0);
    Complex qbh = base ? Qb / (2.0 * q * q) : Complex(0.0, 0.0);
    for (int comp = 0; comp < 3; ++comp) {
      bool ok = base && d_dr[comp].mask[k] && f.n[comp].mask[k] &&
                f.dr[comp].mask[k] && f.dbr[comp].mask[k];
      Complex nrv = f.n[comp].values[k];
      Complex drv = f.dr[comp].values[k];
      Complex dbrv = f.dbr[comp].values[k];
      rows[0][comp].values[k] = d_dr[comp].values[k] - lq * drv - Q * nrv;
      rows[0][comp].mask[k] = ok && d_dr[comp].mask[k];
      rows[1][comp].values[k] = d_dbr[comp].values[k] - hq2 * nrv;
      rows[1][comp].mask[k] = ok && d_dbr[comp].mask[k];
      rows[2][comp].values[k] = d_n[comp].values[k] + H * drv + qh * dbrv;
      rows[2][comp].mask[k] = ok && d_n[comp].mask[k];
      rows[3][comp].values[k] = db_dbr[comp].values[k] - lbq * dbrv - Qb * nrv;
      rows[3][comp].mask[k] = ok && db_dbr[comp].mask[k];
      rows[4][comp].values[k] = db_dr[comp].values[k] - hq2 * nrv;
      rows[4][comp].mask[k] = ok && db_dr[comp].mask[k];
      rows[5][comp].values[k] = db_n[comp].values[k] + H * dbrv + qbh * drv;
      rows[5][comp].mask[k] = ok && db_n[comp].mask[k];
    }
  }

  FrameReport rep;
  rep.h = c.h();
  rep.orientation = f.orientation;
  for (int i = 0; i < 6; ++i) rep.row_max[i] = vec_stat(rows[i]).max;
  return rep;
}

ResidualStat normal_equation_residual(const GeometryBundle& g,
                                      const Vec3Field& r) {
  require_same_chart(g.q.chart, r.chart, "normal_equation_residual");
  const GridChart& c = r.chart;
  RecomputedFrame f = recompute_frame(g, r);

  CVec3 ddn = vec_ddbar(f.n);
  CVec3 dn = vec_wd(f.n);
  CVec3 dbn = vec_wdb(f.n);
  ComplexField mix = vec_dot(dn, dbn);
  ComplexField Hc = complexify(g.H);
  ComplexField dH = wirtinger_d(Hc);
  ComplexField dbH = wirtinger_dbar(Hc);

  CVec3 res = {ComplexField(c), ComplexField(c), ComplexField(c)};
  for (std::size_t k = 0; k < c.size(); ++k) {
    bool ok = mix.mask[k] && dH.mask[k] && dbH.mask[k];
    for (int comp = 0; comp < 3; ++comp) {
      bool okc = ok && ddn[comp].mask[k] && f.dr[comp].mask[k] &&
                 f.dbr[comp].mask[k] && f.n[comp].mask[k];
      res[comp].mask[k] = okc ? 1 : 0;
      if (!okc) continue;
      res[comp].values[k] = ddn[comp].values[k] +
                            mix.values[k] * f.n[comp].values[k] +
                            dbH.values[k] * f.dr[comp].values[k] +
                            dH.values[k] * f.dbr[comp].values[k];
    }
  }
  return vec_stat(res);
}

SpinorData make_cylinder(const GridChart& chart, double r) {
  chart.validate();
  if (!(r > 0.0))
    throw Error(ErrorCode::BadParameter, "cylinder radius parameter must be "
                                         "positive");
  SpinorData s;
  s.psi1 = ComplexField(chart);
  s.psi2 = ComplexField(chart);
  s.p = RealField(chart);
  double k = -2.0 * r * r;
  for (std::size_t j = 0; j < chart.ny; ++j) {
    for (std::size_t i = 0; i < chart.nx; ++i) {
      double x = chart.x(i);
      s.psi1.at(i, j) = Complex(r * std::cos(k * x), 0.0);
      s.psi2.at(i, j) = Complex(r * std::sin(k * x), 0.0);
      s.p.at(i, j) = r * r;
    }
  }
  return s;
}

}  // namespace cmc
