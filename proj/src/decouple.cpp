#include "cmc/decouple.hpp"

#include <algorithm>
#include <cmath>

namespace cmc {

namespace {

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k)
    if (f.mask[k]) m = std::max(m, std::abs(f.values[k]));
  return m;
}

}  // namespace

ComplexField branch_sqrt(const ComplexField& f) {
  const GridChart& c = f.chart;
  ComplexField out(c);
  out.mask = f.mask;

  double scale = max_abs(f);
  double tiny = 1e-10 * std::sqrt(scale > 0.0 ? scale : 1.0);

  std::vector<unsigned char> assigned(c.size(), 0);
  for (std::size_t j = 0; j < c.ny; ++j) {
    for (std::size_t i = 0; i < c.nx; ++i) {
      std::size_t k = c.index(i, j);
      if (!f.mask[k]) continue;
      Complex s = std::sqrt(f.values[k]);

      // reference value from an already assigned neighbor: left, then up
      Complex ref(0.0, 0.0);
      bool have_ref = false;
      if (i > 0 && assigned[k - 1]) {
        ref = out.values[k - 1];
        have_ref = std::abs(ref) > tiny;
      }
      if (!have_ref && j > 0 && assigned[k - c.nx]) {
        ref = out.values[k - c.nx];
        have_ref = std::abs(ref) > tiny;
      }

      if (have_ref && std::abs(s) > tiny) {
        double align = std::real(std::conj(ref) * s);
        if (std::fabs(align) <= 1e-8 * std::abs(ref) * std::abs(s))
          throw Error(ErrorCode::BranchAmbiguity,
                      "square root branches are equidistant at (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
        if (align < 0.0) s = -s;
      }
      out.values[k] = s;
      assigned[k] = 1;
    }
  }

  // Post-scan continuity: the scan order cannot see every neighbor pair, so
  // a field that winds around a masked zero slips through it; the tear shows
  // up here as a jump of order 2|s| between adjacent points.
  for (std::size_t j = 0; j < c.ny; ++j) {
    for (std::size_t i = 0; i < c.nx; ++i) {
      std::size_t k = c.index(i, j);
      if (!out.mask[k]) continue;
      for (int dir = 0; dir < 2; ++dir) {
        std::size_t nb;
        if (dir == 0) {
          if (i + 1 >= c.nx) continue;
          nb = k + 1;
        } else {
          if (j + 1 >= c.ny) continue;
          nb = k + c.nx;
        }
        if (!out.mask[nb]) continue;
        double a = std::abs(out.values[k]), b = std::abs(out.values[nb]);
        if (a <= tiny || b <= tiny) continue;
        if (std::abs(out.values[k] - out.values[nb]) >= std::max(a, b))
          throw Error(ErrorCode::BranchAmbiguity,
                      "continued square root tears between (" +
                          std::to_string(i) + "," + std::to_string(j) +
                          ") and its neighbor; the field winds");
      }
    }
  }
  return out;
}

DecoupledData decouple_geometry(const GeometryBundle& g, std::size_t base_i,
                                std::size_t base_j) {
  const GridChart& c = g.q.chart;
  DecoupledData d;

  double maxQ = max_abs(g.Q);
  double max2q2 = 0.0;
  for (std::size_t k = 0; k < g.q.values.size(); ++k)
    if (g.q.mask[k])
      max2q2 = std::max(max2q2, 2.0 * g.q.values[k] * g.q.values[k]);

  d.sqrtQ = ComplexField(c);
  d.eta = ComplexField(c);
  d.R = RealField(c);

  if (maxQ < 1e-2 * max2q2) {
    // umbilic data: Q is truncation noise, nothing to decouple
    d.umbilic = true;
    for (auto& m : d.sqrtQ.mask) m = 0;
    for (auto& m : d.eta.mask) m = 0;
    for (auto& m : d.R.mask) m = 0;
    return d;
  }

  double q_umb = 1e-6 * maxQ;
  ComplexField Qm = g.Q;
  for (std::size_t k = 0; k < Qm.values.size(); ++k)
    if (Qm.mask[k] && std::abs(Qm.values[k]) < q_umb) Qm.mask[k] = 0;

  ResidualStat hol = holomorphy_residual(Qm);
  d.holomorphy = hol.max;
  double h2 = c.h() * c.h();
  if (hol.max > 50.0 * h2 * std::max(1.0, maxQ))
    throw Error(ErrorCode::NotHolomorphic,
                "Hopf field fails the holomorphy gate: |dbar Q| = " +
                    std::to_string(hol.max));

  d.sqrtQ = branch_sqrt(Qm);

  ComplexField zero(c);
  zero.mask = d.sqrtQ.mask;
  SweepResult sw = sweep_antiderivative(d.sqrtQ, zero, base_i, base_j);
  d.eta = std::move(sw.antiderivative);
  d.eta_loop_defect = sw.loop_defect;

  for (std::size_t k = 0; k < d.R.values.size(); ++k) {
    d.R.mask[k] = Qm.mask[k];
    d.R.values[k] =
        Qm.mask[k]
            ? 2.0 * g.q.values[k] * g.q.values[k] / std::abs(Qm.values[k])
            : 0.0;
  }
  return d;
}

ResidualStat shgordon_residual(const RealField& R, const RealField& absQ) {
  require_same_chart(R.chart, absQ.chart, "shgordon_residual");
  const GridChart& c = R.chart;

  ComplexField lnR(c);
  for (std::size_t k = 0; k < lnR.values.size(); ++k) {
    lnR.mask[k] = (R.mask[k] && R.values[k] > 0.0) ? 1 : 0;
    lnR.values[k] =
        lnR.mask[k] ? Complex(std::log(R.values[k]), 0.0) : Complex(0.0, 0.0);
  }
  ComplexField dd = ddbar(lnR);

  RealField res(c);
  for (std::size_t k = 0; k < res.values.size(); ++k) {
    res.mask[k] = (dd.mask[k] && absQ.mask[k] && absQ.values[k] > 0.0) ? 1 : 0;
    if (!res.mask[k]) continue;
    res.values[k] = dd.values[k].real() / absQ.values[k] -
                    1.0 / R.values[k] + R.values[k];
  }
  return stat_of(res);
}

GaussReductionReport gauss_reduction_residual(const GeometryBundle& g) {
  const GridChart& c = g.q.chart;
  double maxH = 0.0, devH = 0.0;
  for (std::size_t k = 0; k < g.H.values.size(); ++k)
    if (g.H.mask[k]) {
      maxH = std::max(maxH, std::fabs(g.H.values[k]));
      devH = std::max(devH, std::fabs(g.H.values[k] - 1.0));
    }
  if (devH > 1e-6)
    throw Error(ErrorCode::NotCMC1,
                "mean curvature is not identically 1 (max deviation " +
                    std::to_string(devH) + ")");

  ComplexField lnq2(c);
  lnq2.mask = g.q.mask;
  for (std::size_t k = 0; k < lnq2.values.size(); ++k)
    lnq2.values[k] = lnq2.mask[k]
                         ? Complex(std::log(g.q.values[k] * g.q.values[k]), 0.0)
                         : Complex(0.0, 0.0);
  ComplexField dd = ddbar(lnq2);

  ComplexField main(c);
  for (std::size_t k = 0; k < main.values.size(); ++k) {
    main.mask[k] = (dd.mask[k] && g.Q.mask[k]) ? 1 : 0;
    if (!main.mask[k]) continue;
    double q = g.q.values[k];
    main.values[k] = dd.values[k] -
                     0.5 * g.Q.values[k] * std::conj(g.Q.values[k]) / (q * q) +
                     2.0 * q * q;
  }

  GaussReductionReport rep;
  rep.main = stat_of(main);
  rep.dbarQ = stat_of(wirtinger_dbar(g.Q));
  rep.dconjQ = stat_of(wirtinger_d(conj_field(g.Q)));
  return rep;
}

}  // namespace cmc
