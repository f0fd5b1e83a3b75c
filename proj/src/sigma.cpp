#include "cmc/sigma.hpp"

#include <algorithm>
#include <cmath>

#include "cmc/decouple.hpp"

namespace cmc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Trapezoid quadrature over unmasked points; masked cells contribute zero.
double quad_trapz(const RealField& f) {
  const GridChart& c = f.chart;
  double sum = 0.0;
  for (std::size_t j = 0; j < c.ny; ++j) {
    double wy = (j == 0 || j + 1 == c.ny) ? 0.5 : 1.0;
    for (std::size_t i = 0; i < c.nx; ++i) {
      if (!f.valid(i, j)) continue;
      double wx = (i == 0 || i + 1 == c.nx) ? 0.5 : 1.0;
      sum += wx * wy * f.at(i, j);
    }
  }
  return sum * c.hx() * c.hy();
}

double max_unit_deviation(const Vec3Field& n) {
  double dev = 0.0;
  for (std::size_t k = 0; k < n.mask.size(); ++k) {
    if (!n.mask[k]) continue;
    double len = std::sqrt(n.x[k] * n.x[k] + n.y[k] * n.y[k] + n.z[k] * n.z[k]);
    dev = std::max(dev, std::fabs(len - 1.0));
  }
  return dev;
}

// Im(n, [d n x dbar n]) / (2 pi), masked by the stencil reach.
RealField charge_density_from_normal(const Vec3Field& n) {
  CVec3 cn = complexify(n);
  ComplexField dot = vec_dot(cn, vec_cross(vec_wd(cn), vec_wdb(cn)));
  RealField dens(n.chart);
  for (std::size_t k = 0; k < dens.values.size(); ++k) {
    dens.values[k] = dot.values[k].imag() / (2.0 * kPi);
    dens.mask[k] = dot.mask[k];
  }
  return dens;
}

}  // namespace

GaussMapData gauss_map(const SpinorData& s) {
  s.validate();
  std::vector<unsigned char> jm = s.joint_mask();
  double max2 = 0.0;
  for (std::size_t k = 0; k < jm.size(); ++k)
    if (jm[k]) max2 = std::max(max2, std::abs(s.psi2.values[k]));

  GaussMapData out;
  out.pole_floor = 1e-8 * max2;
  out.rho = ComplexField(s.psi1.chart);
  for (std::size_t k = 0; k < jm.size(); ++k) {
    double a2 = std::abs(s.psi2.values[k]);
    bool ok = jm[k] && a2 > 0.0 && a2 >= out.pole_floor;
    out.rho.mask[k] = ok ? 1 : 0;
    if (ok)
      out.rho.values[k] =
          Complex(0, 1) * std::conj(s.psi1.values[k]) / s.psi2.values[k];
  }

  // cross-check against the stereographic projection of the normal
  for (std::size_t k = 0; k < jm.size(); ++k) {
    if (!out.rho.mask[k]) continue;
    double q = std::norm(s.psi1.values[k]) + std::norm(s.psi2.values[k]);
    if (q <= 0.0) continue;
    Complex w12 = s.psi1.values[k] * s.psi2.values[k];
    double n1 = 2.0 * w12.imag() / q;
    double n2 = 2.0 * w12.real() / q;
    double n3 = (std::norm(s.psi1.values[k]) - std::norm(s.psi2.values[k])) / q;
    if (std::fabs(1.0 - n3) < 1e-12) continue;
    Complex st = Complex(n1, n2) / (1.0 - n3);
    out.stereo_dev = std::max(out.stereo_dev, std::abs(out.rho.values[k] - st));
  }
  return out;
}

ResidualStat sigma_residual(const ComplexField& rho) {
  ComplexField dd = ddbar(rho);
  ComplexField dr = wirtinger_d(rho);
  ComplexField db = wirtinger_dbar(rho);
  ComplexField res(rho.chart);
  for (std::size_t k = 0; k < res.values.size(); ++k) {
    res.mask[k] = (dd.mask[k] && dr.mask[k] && db.mask[k]) ? 1 : 0;
    if (!res.mask[k]) continue;
    double w = 1.0 + std::norm(rho.values[k]);
    res.values[k] = dd.values[k] - 2.0 * std::conj(rho.values[k]) *
                                       dr.values[k] * db.values[k] / w;
  }
  return stat_of(res);
}

ResidualStat general_H_residual(const ComplexField& rho, const RealField& H) {
  require_same_chart(rho.chart, H.chart, "general_H_residual");
  ComplexField dd = ddbar(rho);
  ComplexField dr = wirtinger_d(rho);
  ComplexField db = wirtinger_dbar(rho);
  ComplexField dH = wirtinger_d(complexify(H));
  ComplexField res(rho.chart);
  for (std::size_t k = 0; k < res.values.size(); ++k) {
    res.mask[k] =
        (dd.mask[k] && dr.mask[k] && db.mask[k] && dH.mask[k] && H.mask[k])
            ? 1
            : 0;
    if (!res.mask[k]) continue;
    double w = 1.0 + std::norm(rho.values[k]);
    Complex sig = dd.values[k] - 2.0 * std::conj(rho.values[k]) *
                                     dr.values[k] * db.values[k] / w;
    res.values[k] = sig * H.values[k] - dH.values[k] * db.values[k];
  }
  return stat_of(res);
}

So3Report so3_residual(const Vec3Field& n) {
  So3Report rep;
  rep.unit_dev = max_unit_deviation(n);
  if (rep.unit_dev > 1e-3)
    throw Error(ErrorCode::NotUnit, "normal field is not unit length");

  CVec3 cn = complexify(n);
  CVec3 dd = vec_ddbar(cn);
  ComplexField dot = vec_dot(vec_wd(cn), vec_wdb(cn));
  CVec3 res = {ComplexField(n.chart), ComplexField(n.chart),
               ComplexField(n.chart)};
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < dot.values.size(); ++k) {
      res[c].mask[k] = (dd[c].mask[k] && dot.mask[k]) ? 1 : 0;
      if (res[c].mask[k])
        res[c].values[k] = dd[c].values[k] + dot.values[k] * cn[c].values[k];
    }
  }
  rep.residual = vec_stat(res);
  return rep;
}

QRFromRho qr_from_rho(const ComplexField& rho) {
  ComplexField dr = wirtinger_d(rho);
  ComplexField drb = wirtinger_d(conj_field(rho));
  double maxdr = 0.0;
  for (std::size_t k = 0; k < dr.values.size(); ++k)
    if (dr.mask[k]) maxdr = std::max(maxdr, std::abs(dr.values[k]));
  double floor = 1e-12 * maxdr;

  QRFromRho out{ComplexField(rho.chart), RealField(rho.chart)};
  for (std::size_t k = 0; k < dr.values.size(); ++k) {
    bool m = dr.mask[k] && drb.mask[k];
    out.Q.mask[k] = m ? 1 : 0;
    if (m) {
      double w = 1.0 + std::norm(rho.values[k]);
      out.Q.values[k] = 2.0 * dr.values[k] * drb.values[k] / (w * w);
    }
    bool mr = m && std::abs(dr.values[k]) > floor;
    out.R.mask[k] = mr ? 1 : 0;
    if (mr)
      out.R.values[k] = std::abs(drb.values[k]) / std::abs(dr.values[k]);
  }
  return out;
}

SpinorData spinors_from_rho(const ComplexField& rho, const RealField& H) {
  return spinors_from_rho(rho, wirtinger_dbar(rho), H);
}

SpinorData spinors_from_rho(const ComplexField& rho,
                            const ComplexField& dbar_rho, const RealField& H) {
  require_same_chart(rho.chart, dbar_rho.chart, "spinors_from_rho");
  require_same_chart(rho.chart, H.chart, "spinors_from_rho");
  for (std::size_t k = 0; k < H.values.size(); ++k)
    if (H.mask[k] && H.values[k] <= 0.0)
      throw Error(ErrorCode::BadParameter, "mean curvature must be positive");

  ComplexField arg(rho.chart);
  for (std::size_t k = 0; k < arg.values.size(); ++k) {
    arg.mask[k] = (rho.mask[k] && dbar_rho.mask[k] && H.mask[k]) ? 1 : 0;
    if (arg.mask[k]) arg.values[k] = Complex(0, 1) * dbar_rho.values[k];
  }
  ComplexField s1 = branch_sqrt(arg);

  SpinorData out{ComplexField(rho.chart), ComplexField(rho.chart),
                 RealField(rho.chart)};
  for (std::size_t k = 0; k < s1.values.size(); ++k) {
    unsigned char m = s1.mask[k];
    out.psi1.mask[k] = out.psi2.mask[k] = out.p.mask[k] = m;
    if (!m) continue;
    double w = 1.0 + std::norm(rho.values[k]);
    double den = std::sqrt(H.values[k]) * w;
    out.psi1.values[k] = std::conj(rho.values[k]) * s1.values[k] / den;
    out.psi2.values[k] = Complex(0, 1) * std::conj(s1.values[k]) / den;
    out.p.values[k] = std::norm(s1.values[k]) / w;
  }
  out.validate();
  return out;
}

InstantonData instanton(const RationalMap& map, const GridChart& chart) {
  chart.validate();
  std::vector<Complex> ps = map.poles();
  RationalMap dm = map.derivative();
  double cell = std::max(chart.hx(), chart.hy());

  InstantonData out;
  out.rho = ComplexField(chart);
  out.drho = ComplexField(chart);
  for (std::size_t j = 0; j < chart.ny; ++j) {
    for (std::size_t i = 0; i < chart.nx; ++i) {
      Complex z = chart.z(i, j);
      bool ok = true;
      for (const Complex& pole : ps)
        if (std::abs(z - pole) <= cell) ok = false;
      std::size_t k = chart.index(i, j);
      out.rho.mask[k] = out.drho.mask[k] = ok ? 1 : 0;
      if (!ok) continue;
      Complex r = map.evaluate(z);
      Complex d = dm.evaluate(z);
      if (!std::isfinite(r.real()) || !std::isfinite(r.imag()) ||
          !std::isfinite(d.real()) || !std::isfinite(d.imag()))
        throw Error(ErrorCode::PoleOnGrid,
                    "denominator root at an unmasked grid point");
      out.rho.values[k] = r;
      out.drho.values[k] = d;
    }
  }

  // Continued square root of d rho, lenient flavor: ties keep the principal
  // root, nothing throws. Winding leaves a seam which we record below.
  double scale = 0.0;
  for (std::size_t k = 0; k < out.drho.values.size(); ++k)
    if (out.drho.mask[k]) scale = std::max(scale, std::abs(out.drho.values[k]));
  double tiny = 1e-10 * std::sqrt(scale);

  ComplexField s(chart);
  s.mask = out.drho.mask;
  for (std::size_t j = 0; j < chart.ny; ++j) {
    for (std::size_t i = 0; i < chart.nx; ++i) {
      if (!s.valid(i, j)) continue;
      Complex pr = std::sqrt(out.drho.at(i, j));
      // reference order: left, up, then the diagonals above, so a masked
      // hole does not force a fresh principal seed inside one component
      Complex ref;
      bool have = false;
      const long cand[4][2] = {{-1, 0}, {0, -1}, {1, -1}, {-1, -1}};
      for (const auto& d : cand) {
        long ci = long(i) + d[0], cj = long(j) + d[1];
        if (ci < 0 || cj < 0 || ci >= long(chart.nx)) continue;
        if (!s.valid(std::size_t(ci), std::size_t(cj))) continue;
        if (std::abs(s.at(std::size_t(ci), std::size_t(cj))) <= tiny) continue;
        ref = s.at(std::size_t(ci), std::size_t(cj));
        have = true;
        break;
      }
      if (have && std::abs(-pr - ref) < std::abs(pr - ref)) pr = -pr;
      s.at(i, j) = pr;
    }
  }

  for (std::size_t j = 0; j < chart.ny; ++j) {
    for (std::size_t i = 0; i < chart.nx; ++i) {
      if (!s.valid(i, j)) continue;
      Complex a = s.at(i, j);
      if (i + 1 < chart.nx && s.valid(i + 1, j)) {
        Complex b = s.at(i + 1, j);
        if (std::abs(a) > tiny && std::abs(b) > tiny &&
            std::abs(b - a) >= std::max(std::abs(a), std::abs(b)))
          out.seams.push_back({i, j, i + 1, j});
      }
      if (j + 1 < chart.ny && s.valid(i, j + 1)) {
        Complex b = s.at(i, j + 1);
        if (std::abs(a) > tiny && std::abs(b) > tiny &&
            std::abs(b - a) >= std::max(std::abs(a), std::abs(b)))
          out.seams.push_back({i, j, i, j + 1});
      }
    }
  }

  out.spinors =
      SpinorData{ComplexField(chart), ComplexField(chart), RealField(chart)};
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    unsigned char m = s.mask[k];
    out.spinors.psi1.mask[k] = out.spinors.psi2.mask[k] =
        out.spinors.p.mask[k] = m;
    if (!m) continue;
    double w = 1.0 + std::norm(out.rho.values[k]);
    out.spinors.psi1.values[k] =
        out.rho.values[k] * std::conj(s.values[k]) / w;
    out.spinors.psi2.values[k] = s.values[k] / w;
    out.spinors.p.values[k] = std::abs(out.drho.values[k]) / w;
  }
  out.spinors.validate();
  return out;
}

double topological_charge(const Vec3Field& n) {
  if (max_unit_deviation(n) > 1e-3)
    throw Error(ErrorCode::NotUnit, "normal field is not unit length");
  return quad_trapz(charge_density_from_normal(n));
}

ChargeIdentityReport charge_identity_residual(const Vec3Field& n,
                                              const RealField& q) {
  require_same_chart(n.chart, q.chart, "charge_identity_residual");
  RealField dens_n = charge_density_from_normal(n);

  ComplexField lq(q.chart);
  for (std::size_t k = 0; k < lq.values.size(); ++k) {
    lq.mask[k] = (q.mask[k] && q.values[k] > 0.0) ? 1 : 0;
    if (lq.mask[k]) lq.values[k] = std::log(q.values[k]);
  }
  ComplexField ddl = ddbar(lq);
  RealField dens_q(q.chart);
  for (std::size_t k = 0; k < dens_q.values.size(); ++k) {
    dens_q.mask[k] = ddl.mask[k];
    if (ddl.mask[k]) dens_q.values[k] = -ddl.values[k].real() / kPi;
  }

  ChargeIdentityReport rep;
  RealField diff(q.chart);
  RealField dn_joint(q.chart), dq_joint(q.chart);
  for (std::size_t k = 0; k < diff.values.size(); ++k) {
    unsigned char m = (dens_n.mask[k] && dens_q.mask[k]) ? 1 : 0;
    diff.mask[k] = dn_joint.mask[k] = dq_joint.mask[k] = m;
    if (!m) continue;
    diff.values[k] = dens_n.values[k] - dens_q.values[k];
    dn_joint.values[k] = dens_n.values[k];
    dq_joint.values[k] = dens_q.values[k];
  }
  rep.pointwise = stat_of(diff);
  rep.integral_n = quad_trapz(dn_joint);
  rep.integral_q = quad_trapz(dq_joint);
  return rep;
}

EnergyReport energy(const ComplexField& rho) {
  ComplexField dr = wirtinger_d(rho);
  ComplexField db = wirtinger_dbar(rho);
  RealField lin(rho.chart), sqr(rho.chart);
  for (std::size_t k = 0; k < lin.values.size(); ++k) {
    unsigned char m = (dr.mask[k] && db.mask[k]) ? 1 : 0;
    lin.mask[k] = sqr.mask[k] = m;
    if (!m) continue;
    double w = 1.0 + std::norm(rho.values[k]);
    double dens = std::norm(dr.values[k]) + std::norm(db.values[k]);
    lin.values[k] = dens / w;
    sqr.values[k] = dens / (w * w);
  }
  EnergyReport rep;
  rep.linear = 2.0 * quad_trapz(lin);
  rep.squared = 2.0 * quad_trapz(sqr);
  return rep;
}

CpOneReport cp1_residual(const SpinorData& s) {
  s.validate();
  std::vector<unsigned char> jm = s.joint_mask();
  double maxq = 0.0;
  for (std::size_t k = 0; k < jm.size(); ++k)
    if (jm[k])
      maxq = std::max(maxq, std::norm(s.psi1.values[k]) +
                                std::norm(s.psi2.values[k]));
  if (maxq == 0.0)
    throw Error(ErrorCode::EmptyGeometry, "conformal factor vanishes");
  double floor = 1e-12 * maxq;

  CpOneReport rep;
  rep.N1 = ComplexField(s.psi1.chart);
  rep.N2 = ComplexField(s.psi1.chart);
  for (std::size_t k = 0; k < jm.size(); ++k) {
    double q = std::norm(s.psi1.values[k]) + std::norm(s.psi2.values[k]);
    bool ok = jm[k] && q >= floor;
    rep.N1.mask[k] = rep.N2.mask[k] = ok ? 1 : 0;
    if (!ok) continue;
    double sq = std::sqrt(q);
    rep.N1.values[k] = s.psi1.values[k] / sq;
    rep.N2.values[k] = std::conj(s.psi2.values[k]) / sq;
    double unit = std::norm(rep.N1.values[k]) + std::norm(rep.N2.values[k]);
    rep.norm_dev = std::max(rep.norm_dev, std::fabs(unit - 1.0));
  }

  ComplexField Nb1 = conj_field(rep.N1), Nb2 = conj_field(rep.N2);
  ComplexField dN1 = wirtinger_d(rep.N1), dN2 = wirtinger_d(rep.N2);
  ComplexField dbN1 = wirtinger_dbar(rep.N1), dbN2 = wirtinger_dbar(rep.N2);
  ComplexField ddN1 = ddbar(rep.N1), ddN2 = ddbar(rep.N2);
  ComplexField dNb1 = wirtinger_d(Nb1), dNb2 = wirtinger_d(Nb2);
  ComplexField dbNb1 = wirtinger_dbar(Nb1), dbNb2 = wirtinger_dbar(Nb2);

  rep.k = RealField(s.psi1.chart);
  RealField res(s.psi1.chart);
  for (std::size_t k = 0; k < res.values.size(); ++k) {
    unsigned char m = (ddN1.mask[k] && ddN2.mask[k] && dNb1.mask[k] &&
                       dNb2.mask[k] && dbNb1.mask[k] && dbNb2.mask[k])
                          ? 1
                          : 0;
    res.mask[k] = rep.k.mask[k] = m;
    if (!m) continue;
    Complex nbdN = Nb1.values[k] * dN1.values[k] + Nb2.values[k] * dN2.values[k];
    Complex nbdbN =
        Nb1.values[k] * dbN1.values[k] + Nb2.values[k] * dbN2.values[k];
    Complex ndbNb =
        rep.N1.values[k] * dbNb1.values[k] + rep.N2.values[k] * dbNb2.values[k];
    Complex t1 =
        dN1.values[k] * dbNb1.values[k] + dN2.values[k] * dbNb2.values[k];
    Complex t2 =
        dbN1.values[k] * dNb1.values[k] + dbN2.values[k] * dNb2.values[k];
    Complex km = -2.0 * nbdN * ndbNb + 0.5 * t1 + 0.5 * t2;
    Complex r1 = ddN1.values[k] - nbdbN * dN1.values[k] -
                 nbdN * dbN1.values[k] + km * rep.N1.values[k];
    Complex r2 = ddN2.values[k] - nbdbN * dN2.values[k] -
                 nbdN * dbN2.values[k] + km * rep.N2.values[k];
    rep.k.values[k] = km.real();
    res.values[k] = std::sqrt(std::norm(r1) + std::norm(r2));
  }
  rep.residual = stat_of(res);
  return rep;
}

}  // namespace cmc
