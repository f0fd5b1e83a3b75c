#include "cmc/lax.hpp"

#include <algorithm>
#include <cmath>

namespace cmc {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kCmc1Tol = 1e-6;

void require_cmc1(const GeometryBundle& g, const char* where) {
  double dev = 0.0;
  for (std::size_t k = 0; k < g.H.values.size(); ++k)
    if (g.H.mask[k]) dev = std::max(dev, std::fabs(g.H.values[k] - 1.0));
  if (dev > kCmc1Tol)
    throw Error(ErrorCode::NotCMC1,
                std::string(where) + ": mean curvature deviates from 1 by " +
                    std::to_string(dev));
}

void check_unit_parameter(Complex lambda, const char* label) {
  if (std::fabs(std::abs(lambda) - 1.0) > kUnitTol)
    throw Error(ErrorCode::BadParameter,
                std::string(label) +
                    " connection needs a unit-circle parameter");
}

// Per-point max of the four entry magnitudes; masked where any entry is.
ResidualStat matrix_stat(const std::array<std::array<ComplexField, 2>, 2>& r) {
  RealField combined(r[0][0].chart);
  for (std::size_t k = 0; k < combined.values.size(); ++k) {
    unsigned char on = 1;
    double v = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        on = (on && r[i][j].mask[k]) ? 1 : 0;
        v = std::max(v, std::abs(r[i][j].values[k]));
      }
    combined.mask[k] = on;
    combined.values[k] = on ? v : 0.0;
  }
  return stat_of(combined);
}

ResidualStat curvature_of(const std::array<std::array<ComplexField, 2>, 2>& A,
                          const std::array<std::array<ComplexField, 2>, 2>& B) {
  const GridChart& c = A[0][0].chart;
  std::array<std::array<ComplexField, 2>, 2> dbA{
      {{ComplexField(c), ComplexField(c)},
       {ComplexField(c), ComplexField(c)}}};
  std::array<std::array<ComplexField, 2>, 2> dB = dbA;
  std::array<std::array<ComplexField, 2>, 2> res = dbA;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      dbA[i][j] = wirtinger_dbar(A[i][j]);
      dB[i][j] = wirtinger_d(B[i][j]);
    }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ComplexField& out = res[i][j];
      for (std::size_t k = 0; k < out.values.size(); ++k) {
        unsigned char on = (dbA[i][j].mask[k] && dB[i][j].mask[k]) ? 1 : 0;
        Complex comm(0.0, 0.0);
        for (int l = 0; l < 2; ++l) {
          on = (on && A[i][l].mask[k] && B[l][j].mask[k] && B[i][l].mask[k] &&
                A[l][j].mask[k])
                   ? 1
                   : 0;
          comm += A[i][l].values[k] * B[l][j].values[k] -
                  B[i][l].values[k] * A[l][j].values[k];
        }
        out.mask[k] = on;
        out.values[k] =
            on ? dbA[i][j].values[k] - dB[i][j].values[k] + comm
               : Complex(0.0, 0.0);
      }
    }
  return matrix_stat(res);
}

}  // namespace

void SU2Element::validate() const {
  double n = std::norm(alpha) + std::norm(beta);
  if (std::fabs(n - 1.0) > kUnitTol)
    throw Error(ErrorCode::NotUnitary,
                "|alpha|^2 + |beta|^2 = " + std::to_string(n));
}

SpinorData su2_transform(const SpinorData& s, const SU2Element& g) {
  s.validate();
  g.validate();
  SpinorData out = s;
  std::vector<unsigned char> pair = mask_and(s.psi1.mask, s.psi2.mask);
  for (std::size_t k = 0; k < pair.size(); ++k) {
    Complex a = s.psi1.values[k], b = s.psi2.values[k];
    out.psi1.values[k] = g.alpha * a + g.beta * std::conj(b);
    out.psi2.values[k] = -g.beta * std::conj(a) + g.alpha * b;
    out.psi1.mask[k] = pair[k];
    out.psi2.mask[k] = pair[k];
  }
  return out;
}

ConnectionPair build_connection(const GeometryBundle& g,
                                const std::string& label, Complex parameter) {
  require_same_chart(g.q.chart, g.Q.chart, "build_connection");
  require_same_chart(g.q.chart, g.H.chart, "build_connection");
  const GridChart& c = g.q.chart;

  if (label != "closed" && label != "spectral" && label != "sl2")
    throw Error(ErrorCode::BadParameter,
                "unknown connection label '" + label + "'");
  if (label == "spectral" || label == "sl2") {
    check_unit_parameter(parameter, label.c_str());
    require_cmc1(g, "build_connection");
  }

  ComplexField q(c);
  q.values.assign(g.q.values.size(), Complex(0.0, 0.0));
  for (std::size_t k = 0; k < q.values.size(); ++k) {
    q.values[k] = Complex(g.q.values[k], 0.0);
    q.mask[k] = (g.q.mask[k] && g.Q.mask[k] && g.q.values[k] != 0.0) ? 1 : 0;
  }
  ComplexField dq = wirtinger_d(q);
  ComplexField dbq = wirtinger_dbar(q);

  ConnectionPair out;
  out.label = label;
  out.parameter = parameter;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      out.A[i][j] = ComplexField(c);
      out.B[i][j] = ComplexField(c);
    }

  const Complex lam = parameter;
  for (std::size_t k = 0; k < q.values.size(); ++k) {
    unsigned char on = (q.mask[k] && dq.mask[k] && dbq.mask[k]) ? 1 : 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        out.A[i][j].mask[k] = on;
        out.B[i][j].mask[k] = on;
      }
    if (!on) continue;
    double qv = g.q.values[k];
    Complex Qv = g.Q.values[k];
    Complex dlq = dq.values[k] / qv;
    Complex dblq = dbq.values[k] / qv;
    if (label == "closed") {
      double Hv = g.H.values[k];
      out.A[0][1].values[k] = qv * Hv;
      out.A[1][0].values[k] = -Qv / (2.0 * qv);
      out.A[1][1].values[k] = dlq;
      out.B[0][0].values[k] = dblq;
      out.B[0][1].values[k] = std::conj(Qv) / (2.0 * qv);
      out.B[1][0].values[k] = -qv * Hv;
    } else if (label == "spectral") {
      out.A[0][1].values[k] = qv;
      out.A[1][0].values[k] = -lam * Qv / (2.0 * qv);
      out.A[1][1].values[k] = dlq;
      out.B[0][0].values[k] = dblq;
      out.B[0][1].values[k] = std::conj(Qv) / (2.0 * lam * qv);
      out.B[1][0].values[k] = -qv;
    } else {
      out.A[0][1].values[k] = qv * qv;
      out.A[1][0].values[k] = -lam * Qv / (2.0 * qv * qv);
      out.B[0][0].values[k] = dblq;
      out.B[0][1].values[k] = std::conj(Qv) / (2.0 * lam);
      out.B[1][0].values[k] = Complex(-1.0, 0.0);
      out.B[1][1].values[k] = -dblq;
    }
  }
  return out;
}

ResidualStat zero_curvature_residual(const ConnectionPair& c) {
  return curvature_of(c.A, c.B);
}

ResidualStat linear_problem_residual(const SpinorData& s,
                                     const ConnectionPair& c) {
  s.validate();
  require_same_chart(s.psi1.chart, c.A[0][0].chart, "linear_problem_residual");
  bool solvable = c.label == "closed" ||
                  (c.label == "spectral" &&
                   std::abs(c.parameter - Complex(1.0, 0.0)) <= kUnitTol);
  if (!solvable)
    throw Error(ErrorCode::LabelMismatch,
                "original spinors solve only the closed system or the "
                "spectral one at parameter 1, not '" +
                    c.label + "'");

  std::vector<unsigned char> joint = s.joint_mask();
  ComplexField p1 = s.psi1, p2 = s.psi2;
  p1.mask = joint;
  p2.mask = joint;
  ComplexField d1 = wirtinger_d(p1), d2 = wirtinger_d(p2);
  ComplexField b1 = wirtinger_dbar(p1), b2 = wirtinger_dbar(p2);

  const GridChart& ch = s.psi1.chart;
  std::array<std::array<ComplexField, 2>, 2> rows{
      {{ComplexField(ch), ComplexField(ch)},
       {ComplexField(ch), ComplexField(ch)}}};
  for (std::size_t k = 0; k < joint.size(); ++k) {
    unsigned char on = (joint[k] && d1.mask[k] && d2.mask[k] && b1.mask[k] &&
                        b2.mask[k] && c.A[0][0].mask[k])
                           ? 1
                           : 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) rows[i][j].mask[k] = on;
    if (!on) continue;
    Complex v1 = s.psi1.values[k], v2 = s.psi2.values[k];
    rows[0][0].values[k] =
        d1.values[k] - (c.A[0][0].values[k] * v1 + c.A[0][1].values[k] * v2);
    rows[0][1].values[k] =
        d2.values[k] - (c.A[1][0].values[k] * v1 + c.A[1][1].values[k] * v2);
    rows[1][0].values[k] =
        b1.values[k] - (c.B[0][0].values[k] * v1 + c.B[0][1].values[k] * v2);
    rows[1][1].values[k] =
        b2.values[k] - (c.B[1][0].values[k] * v1 + c.B[1][1].values[k] * v2);
  }
  return matrix_stat(rows);
}

GaugeReport gauge_check(const SpinorData& s, double tilde_scale) {
  s.validate();
  GeometryBundle g = derive_geometry(s);
  require_cmc1(g, "gauge_check");
  const GridChart& c = s.psi1.chart;

  ComplexField t1(c), t2(c), q(c);
  for (std::size_t k = 0; k < t1.values.size(); ++k) {
    unsigned char on = g.q.mask[k];
    t1.mask[k] = on;
    t2.mask[k] = on;
    q.mask[k] = on;
    if (!on) continue;
    t1.values[k] = s.psi1.values[k];
    t2.values[k] = tilde_scale * s.psi2.values[k] / g.q.values[k];
    q.values[k] = Complex(g.q.values[k], 0.0);
  }
  ComplexField d1 = wirtinger_d(t1), d2 = wirtinger_d(t2);
  ComplexField b1 = wirtinger_dbar(t1), b2 = wirtinger_dbar(t2);
  ComplexField dbq = wirtinger_dbar(q);

  std::array<std::array<ComplexField, 2>, 2> rows{
      {{ComplexField(c), ComplexField(c)},
       {ComplexField(c), ComplexField(c)}}};
  for (std::size_t k = 0; k < t1.values.size(); ++k) {
    unsigned char on = (d1.mask[k] && d2.mask[k] && b1.mask[k] && b2.mask[k] &&
                        dbq.mask[k] && g.Q.mask[k])
                           ? 1
                           : 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) rows[i][j].mask[k] = on;
    if (!on) continue;
    double qv = g.q.values[k];
    Complex Qv = g.Q.values[k];
    Complex dblq = dbq.values[k] / qv;
    rows[0][0].values[k] = d1.values[k] - qv * qv * t2.values[k];
    rows[0][1].values[k] =
        d2.values[k] + Qv / (2.0 * qv * qv) * t1.values[k];
    rows[1][0].values[k] = b1.values[k] - dblq * t1.values[k] -
                           std::conj(Qv) / 2.0 * t2.values[k];
    rows[1][1].values[k] =
        b2.values[k] + t1.values[k] + dblq * t2.values[k];
  }

  GaugeReport rep;
  rep.residual = matrix_stat(rows);

  // p and q must agree up to one global constant, so compare d(ln p) with
  // d(ln q) instead of the raw fields
  ComplexField lnp(c), lnq(c);
  for (std::size_t k = 0; k < lnp.values.size(); ++k) {
    unsigned char on = (g.q.mask[k] && s.p.values[k] > 0.0) ? 1 : 0;
    lnp.mask[k] = on;
    lnq.mask[k] = on;
    if (!on) continue;
    lnp.values[k] = Complex(std::log(s.p.values[k]), 0.0);
    lnq.values[k] = Complex(std::log(g.q.values[k]), 0.0);
  }
  ComplexField dlp = wirtinger_d(lnp), dlq = wirtinger_d(lnq);
  double dev = 0.0;
  for (std::size_t k = 0; k < dlp.values.size(); ++k)
    if (dlp.mask[k] && dlq.mask[k])
      dev = std::max(dev, std::abs(dlp.values[k] - dlq.values[k]));
  rep.ratio_dev = dev;
  return rep;
}

ResidualStat mu_lax_residual(const SpinorData& s, Complex mu) {
  if (std::abs(mu - Complex(1.0, 0.0)) < 1e-9 ||
      std::abs(mu + Complex(1.0, 0.0)) < 1e-9)
    throw Error(ErrorCode::SingularParameter,
                "rational connection has poles at parameter 1 and -1");
  s.validate();
  GeometryBundle g = derive_geometry(s);
  const GridChart& c = s.psi1.chart;

  const Complex fa = 2.0 / (mu + Complex(1.0, 0.0));
  const Complex fb = 2.0 / (mu - Complex(1.0, 0.0));

  std::array<std::array<ComplexField, 2>, 2> A{
      {{ComplexField(c), ComplexField(c)},
       {ComplexField(c), ComplexField(c)}}};
  std::array<std::array<ComplexField, 2>, 2> B = A;
  for (std::size_t k = 0; k < g.q.values.size(); ++k) {
    unsigned char on = (g.q.mask[k] && g.Q.mask[k]) ? 1 : 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        A[i][j].mask[k] = on;
        B[i][j].mask[k] = on;
      }
    if (!on) continue;
    Complex v1 = s.psi1.values[k], v2 = s.psi2.values[k];
    Complex c1 = std::conj(v1), c2 = std::conj(v2);
    double qv = g.q.values[k];
    Complex Qh = g.Q.values[k] / (2.0 * qv * qv);
    Complex Qbh = std::conj(g.Q.values[k]) / (2.0 * qv * qv);
    A[0][0].values[k] = fa * (-c1 * v2 + Qh * v1 * c2);
    A[0][1].values[k] = fa * (-c1 * c1 - Qh * c2 * c2);
    A[1][0].values[k] = fa * (v2 * v2 + Qh * v1 * v1);
    A[1][1].values[k] = fa * (c1 * v2 - Qh * v1 * c2);
    B[0][0].values[k] = fb * (-v1 * c2 + Qbh * c1 * v2);
    B[0][1].values[k] = fb * (c2 * c2 + Qbh * c1 * c1);
    B[1][0].values[k] = fb * (-v1 * v1 - Qbh * v2 * v2);
    B[1][1].values[k] = fb * (v1 * c2 - Qbh * c1 * v2);
  }
  return curvature_of(A, B);
}

}  // namespace cmc
