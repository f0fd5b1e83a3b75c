#include "cmc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "cmc/decouple.hpp"
#include "cmc/lax.hpp"
#include "cmc/sigma.hpp"
#include "cmc/vecfield.hpp"

namespace cmc {

namespace {

constexpr double kRhoKappa = 0.05;
constexpr double kLnqKappa = 0.1;
constexpr double kPi = 3.14159265358979323846;

struct CheckVal {
  double max = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
  std::string note;
  double tol_scale = 1.0;
};

CheckVal from_stats(std::initializer_list<ResidualStat> stats) {
  CheckVal v;
  for (const ResidualStat& s : stats) {
    v.max = std::max(v.max, s.max);
    v.mean = std::max(v.mean, s.mean);
    v.count = std::max(v.count, s.count);
  }
  return v;
}

std::string percent_note(std::size_t part, std::size_t whole) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.0f%% of points resolved",
                whole ? 100.0 * double(part) / double(whole) : 0.0);
  return buf;
}

// max |f| over unmasked points that the extra gate admits
CheckVal masked_max(const ComplexField& f,
                    const std::vector<unsigned char>& gate) {
  CheckVal v;
  double sum = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    if (!f.mask[k] || !gate[k]) continue;
    double a = std::abs(f.values[k]);
    v.max = std::max(v.max, a);
    sum += a;
    ++v.count;
  }
  v.mean = v.count ? sum / double(v.count) : 0.0;
  return v;
}

}  // namespace

VerificationReport verify_spinors(const SpinorData& s,
                                  const std::string& profile) {
  VerificationReport rep;
  rep.profile = profile;
  if (profile == "strict")
    rep.C = 50.0;
  else if (profile == "loose")
    rep.C = 500.0;
  else
    throw Error(ErrorCode::BadParameter,
                "tolerance profile must be strict or loose");

  s.validate();
  const GridChart& chart = s.psi1.chart;
  rep.h = chart.h();
  const double tol2 = rep.C * rep.h * rep.h;
  const double tol1 = rep.C * rep.h;

  DiracReport dirac = dirac_residual(s);
  GeometryBundle g = derive_geometry(s);
  rep.cmc1 = dirac.cmc1;

  double maxq = 0.0, maxQ = 0.0;
  for (std::size_t k = 0; k < g.q.values.size(); ++k)
    if (g.q.mask[k]) maxq = std::max(maxq, g.q.values[k]);
  for (std::size_t k = 0; k < g.Q.values.size(); ++k)
    if (g.Q.mask[k]) maxQ = std::max(maxQ, std::abs(g.Q.values[k]));
  rep.umbilic = maxQ < 1e-2 * 2.0 * maxq * maxq;

  double hsum = 0.0;
  std::size_t hcount = 0;
  for (std::size_t k = 0; k < g.H.values.size(); ++k)
    if (g.H.mask[k]) {
      hsum += g.H.values[k];
      ++hcount;
    }
  double hmean = hcount ? hsum / double(hcount) : 0.0;
  double hdev = 0.0;
  for (std::size_t k = 0; k < g.H.values.size(); ++k)
    if (g.H.mask[k]) hdev = std::max(hdev, std::fabs(g.H.values[k] - hmean));
  rep.constant_H = hcount > 0 && hdev <= 1e-6 * std::max(1.0, std::fabs(hmean));

  // base point for sweeps: grid center, else first unmasked point
  std::vector<unsigned char> joint = s.joint_mask();
  std::size_t bi = chart.nx / 2, bj = chart.ny / 2;
  if (!joint[chart.index(bi, bj)]) {
    for (std::size_t k = 0; k < joint.size(); ++k)
      if (joint[k]) {
        bi = k % chart.nx;
        bj = k / chart.nx;
        break;
      }
  }

  std::optional<SurfaceResult> surf;
  std::string surf_note;
  try {
    surf = integrate_surface(s, bi, bj);
  } catch (const Error& e) {
    surf_note = e.what();
  }

  GaussMapData gm = gauss_map(s);
  ComplexField drho = wirtinger_d(gm.rho);
  ComplexField dbrho = wirtinger_dbar(gm.rho);
  std::vector<unsigned char> resolved(chart.size(), 0);
  std::size_t rho_valid = 0, rho_res = 0;
  for (std::size_t k = 0; k < resolved.size(); ++k) {
    if (!(drho.mask[k] && dbrho.mask[k])) continue;
    ++rho_valid;
    double speed = std::abs(drho.values[k]) + std::abs(dbrho.values[k]);
    if (speed * rep.h <= kRhoKappa) {
      resolved[k] = 1;
      ++rho_res;
    }
  }

  auto add = [&](const char* name, const char* order, auto&& fn) {
    CheckResult c;
    c.name = name;
    c.order = order;
    try {
      CheckVal v = fn();
      if (v.count == 0) {
        c.skipped = true;
        c.note = v.note.empty() ? "no evaluable points" : v.note;
      } else {
        c.max = v.max;
        c.mean = v.mean;
        c.tolerance = (c.order == std::string("h2") ? tol2 : tol1) *
                      v.tol_scale;
        c.pass = c.max <= c.tolerance;
        c.note = v.note;
      }
    } catch (const Error& e) {
      c.pass = false;
      c.max = std::numeric_limits<double>::max();
      c.tolerance = c.order == std::string("h2") ? tol2 : tol1;
      c.note = e.what();
    }
    rep.checks.push_back(std::move(c));
  };
  auto skip = [&](const char* name, const char* order, const char* why) {
    CheckResult c;
    c.name = name;
    c.order = order;
    c.skipped = true;
    c.note = why;
    rep.checks.push_back(std::move(c));
  };

  const char* not_cmc1 = "needs unit mean curvature";
  const char* not_consth = "needs constant mean curvature";

  add("dirac", "h2", [&] { return from_stats({dirac.r1, dirac.r2}); });

  if (surf)
    add("scalar_products", "h2", [&] {
      ScalarProductReport sp = scalar_product_residuals(g, surf->r);
      return from_stats({sp.nn_m1, sp.n_dr, sp.n_dbr, sp.dr_dr, sp.dbr_dbr,
                         sp.dr_dbr_m2q2});
    });
  else
    skip("scalar_products", "h2", surf_note.c_str());

  add("gauss_codazzi", "h2", [&] {
    GaussCodazziReport gc = gauss_codazzi_residual(g);
    return from_stats({gc.gauss, gc.codazzi_z, gc.codazzi_zbar});
  });

  if (rep.cmc1)
    add("gauss_reduction", "h2",
        [&] { return from_stats({gauss_reduction_residual(g).main}); });
  else
    skip("gauss_reduction", "h2", not_cmc1);

  if (rep.constant_H)
    add("holomorphy", "h2", [&] {
      CheckVal v = from_stats({holomorphy_residual(g.Q)});
      v.tol_scale = std::max(1.0, maxQ);
      v.note = "tolerance scaled by max(1, max|Q|)";
      return v;
    });
  else
    skip("holomorphy", "h2", not_consth);

  if (!rep.cmc1)
    skip("sinh_gordon", "h2", not_cmc1);
  else if (rep.umbilic)
    skip("sinh_gordon", "h2", "umbilic: Hopf field vanishes");
  else
    add("sinh_gordon", "h2", [&] {
      DecoupledData dec = decouple_geometry(g, bi, bj);
      RealField absQ(chart);
      for (std::size_t k = 0; k < absQ.values.size(); ++k) {
        absQ.values[k] = std::abs(g.Q.values[k]);
        absQ.mask[k] = g.Q.mask[k];
      }
      return from_stats({shgordon_residual(dec.R, absQ)});
    });

  // gauss-map layer: residual fields recomputed here so the resolution
  // gate applies to the pointwise values, not to the stencil inputs
  ComplexField w(chart), sigma_core(chart);
  {
    ComplexField dd = ddbar(gm.rho);
    for (std::size_t k = 0; k < chart.size(); ++k) {
      double wk = 1.0 + std::norm(gm.rho.values[k]);
      w.values[k] = Complex(wk, 0.0);
      w.mask[k] = gm.rho.mask[k];
      unsigned char on =
          (dd.mask[k] && drho.mask[k] && dbrho.mask[k]) ? 1 : 0;
      sigma_core.mask[k] = on;
      sigma_core.values[k] =
          on ? dd.values[k] - 2.0 * std::conj(gm.rho.values[k]) *
                                  drho.values[k] * dbrho.values[k] / wk
             : Complex(0.0, 0.0);
    }
  }

  if (rep.cmc1)
    add("sigma_model", "h2", [&] {
      CheckVal v = masked_max(sigma_core, resolved);
      v.note = percent_note(rho_res, rho_valid);
      return v;
    });
  else
    skip("sigma_model", "h2", not_cmc1);

  add("general_h_gauss", "h2", [&] {
    ComplexField Hc = complexify(g.H);
    ComplexField dH = wirtinger_d(Hc);
    ComplexField resid(chart);
    for (std::size_t k = 0; k < chart.size(); ++k) {
      unsigned char on =
          (sigma_core.mask[k] && dH.mask[k] && g.H.mask[k]) ? 1 : 0;
      resid.mask[k] = on;
      resid.values[k] = on ? sigma_core.values[k] * g.H.values[k] -
                                 dH.values[k] * dbrho.values[k]
                           : Complex(0.0, 0.0);
    }
    CheckVal v = masked_max(resid, resolved);
    v.note = percent_note(rho_res, rho_valid);
    return v;
  });

  if (rep.cmc1)
    add("hopf_cross_check", "h2", [&] {
      QRFromRho qr = qr_from_rho(gm.rho);
      ComplexField qdiff(chart);
      for (std::size_t k = 0; k < chart.size(); ++k) {
        unsigned char on = (qr.Q.mask[k] && g.Q.mask[k]) ? 1 : 0;
        qdiff.mask[k] = on;
        qdiff.values[k] =
            on ? qr.Q.values[k] - g.Q.values[k] : Complex(0.0, 0.0);
      }
      CheckVal v = masked_max(qdiff, resolved);
      char buf[96];
      CheckVal out;
      // R = 2q^2/|Q| only means something away from umbilic data; on an
      // umbilic bundle both routes divide by noise, so compare Q alone.
      if (rep.umbilic) {
        std::snprintf(buf, sizeof(buf),
                      "Q dev %.3e, R comparison skipped (umbilic, %s)", v.max,
                      percent_note(rho_res, rho_valid).c_str());
        out = v;
      } else {
        ComplexField rdiff(chart);
        for (std::size_t k = 0; k < chart.size(); ++k) {
          unsigned char on = (qr.R.mask[k] && g.q.mask[k] && g.Q.mask[k] &&
                              std::abs(g.Q.values[k]) >= 1e-6 * maxQ)
                                 ? 1
                                 : 0;
          rdiff.mask[k] = on;
          rdiff.values[k] =
              on ? Complex(qr.R.values[k] -
                               2.0 * g.q.values[k] * g.q.values[k] /
                                   std::abs(g.Q.values[k]),
                           0.0)
                 : Complex(0.0, 0.0);
        }
        CheckVal vr = masked_max(rdiff, resolved);
        std::snprintf(buf, sizeof(buf), "Q dev %.3e, R dev %.3e (%s)", v.max,
                      vr.max, percent_note(rho_res, rho_valid).c_str());
        out.max = std::max(v.max, vr.max);
        out.mean = std::max(v.mean, vr.mean);
        out.count = v.count;
      }
      out.note = buf;
      return out;
    });
  else
    skip("hopf_cross_check", "h2", not_cmc1);

  ConnectionPair closed = build_connection(g, "closed");
  add("zero_curvature_closed", "h2",
      [&] { return from_stats({zero_curvature_residual(closed)}); });

  const Complex lams[3] = {Complex(1, 0), Complex(0, 1),
                           std::polar(1.0, kPi / 4.0)};
  if (rep.cmc1) {
    auto curvature_sweep = [&](const char* label) {
      CheckVal v;
      for (const Complex& lam : lams) {
        ResidualStat r =
            zero_curvature_residual(build_connection(g, label, lam));
        v.max = std::max(v.max, r.max);
        v.mean = std::max(v.mean, r.mean);
        v.count = std::max(v.count, r.count);
      }
      v.note = "max over unit parameters 1, i, exp(i pi/4)";
      return v;
    };
    add("zero_curvature_spectral", "h2",
        [&] { return curvature_sweep("spectral"); });
    add("zero_curvature_sl2", "h2", [&] { return curvature_sweep("sl2"); });
    add("mu_lax", "h2", [&] {
      CheckVal v = from_stats({mu_lax_residual(s, Complex(2, 0)),
                               mu_lax_residual(s, Complex(0, 3))});
      v.note = "max over parameters 2 and 3i";
      return v;
    });
    add("gauge", "h2", [&] {
      GaugeReport gr = gauge_check(s);
      CheckVal v = from_stats({gr.residual});
      char buf[64];
      std::snprintf(buf, sizeof(buf), "log-derivative ratio dev %.2e",
                    gr.ratio_dev);
      v.note = buf;
      return v;
    });
  } else {
    skip("zero_curvature_spectral", "h2", not_cmc1);
    skip("zero_curvature_sl2", "h2", not_cmc1);
    skip("mu_lax", "h2", not_cmc1);
    skip("gauge", "h2", not_cmc1);
  }

  add("linear_problem", "h2",
      [&] { return from_stats({linear_problem_residual(s, closed)}); });

  if (surf) {
    add("frame", "h", [&] {
      FrameReport fr = frame_residual(g, surf->r);
      CheckVal v;
      for (double row : fr.row_max) v.max = std::max(v.max, row);
      v.mean = v.max;
      v.count = 1;
      char buf[48];
      std::snprintf(buf, sizeof(buf), "orientation %+d", fr.orientation);
      v.note = buf;
      return v;
    });
    add("normal_equation", "h",
        [&] { return from_stats({normal_equation_residual(g, surf->r)}); });
  } else {
    skip("frame", "h", surf_note.c_str());
    skip("normal_equation", "h", surf_note.c_str());
  }

  if (rep.constant_H)
    add("so3_sigma", "h", [&] {
      So3Report so = so3_residual(g.n);
      CheckVal v = from_stats({so.residual});
      char buf[48];
      std::snprintf(buf, sizeof(buf), "unit deviation %.2e", so.unit_dev);
      v.note = buf;
      return v;
    });
  else
    skip("so3_sigma", "h", not_consth);

  if (rep.cmc1)
    add("cp1_sigma", "h",
        [&] { return from_stats({cp1_residual(s).residual}); });
  else
    skip("cp1_sigma", "h", not_cmc1);

  if (rep.cmc1)
    add("charge_identity", "h", [&] {
      CVec3 cn = complexify(g.n);
      ComplexField dot =
          vec_dot(cn, vec_cross(vec_wd(cn), vec_wdb(cn)));
      ComplexField lnq(chart);
      for (std::size_t k = 0; k < chart.size(); ++k) {
        lnq.mask[k] = g.q.mask[k];
        lnq.values[k] = g.q.mask[k]
                            ? Complex(std::log(g.q.values[k]), 0.0)
                            : Complex(0.0, 0.0);
      }
      ComplexField dl = wirtinger_d(lnq), dbl = wirtinger_dbar(lnq);
      ComplexField dd = ddbar(lnq);
      ComplexField diff(chart);
      std::size_t valid = 0, res = 0;
      std::vector<unsigned char> gate(chart.size(), 0);
      for (std::size_t k = 0; k < chart.size(); ++k) {
        unsigned char on =
            (dot.mask[k] && dd.mask[k] && dl.mask[k] && dbl.mask[k]) ? 1 : 0;
        diff.mask[k] = on;
        if (!on) continue;
        ++valid;
        double speed = std::abs(dl.values[k]) + std::abs(dbl.values[k]);
        if (speed * rep.h <= kLnqKappa) {
          gate[k] = 1;
          ++res;
        }
        diff.values[k] =
            Complex(dot.values[k].imag() / (2.0 * kPi) -
                        (-dd.values[k].real() / kPi),
                    0.0);
      }
      CheckVal v = masked_max(diff, gate);
      v.note = percent_note(res, valid);
      return v;
    });
  else
    skip("charge_identity", "h", not_cmc1);

  rep.pass = true;
  for (const CheckResult& c : rep.checks)
    if (!c.skipped && !c.pass) rep.pass = false;
  return rep;
}

VerificationReport verify_dataset(const DatasetFile& ds,
                                  const std::string& profile) {
  SpinorData s{need_complex(ds, "psi1"), need_complex(ds, "psi2"),
               need_real(ds, "p")};
  return verify_spinors(s, profile);
}

nlohmann::json report_json(const VerificationReport& r) {
  nlohmann::json j;
  j["format"] = "cmc-verify/1";
  j["profile"] = r.profile;
  j["C"] = r.C;
  j["h"] = r.h;
  j["flags"] = {{"cmc1", r.cmc1},
                {"constant_H", r.constant_H},
                {"umbilic", r.umbilic}};
  j["pass"] = r.pass;
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& c : r.checks) {
    nlohmann::json e;
    e["name"] = c.name;
    e["order"] = c.order;
    e["skipped"] = c.skipped;
    if (!c.skipped) {
      e["max"] = c.max;
      e["mean"] = c.mean;
      e["tolerance"] = c.tolerance;
      e["pass"] = c.pass;
    }
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j;
}

std::string report_table(const VerificationReport& r) {
  std::string out;
  char buf[192];
  std::snprintf(buf, sizeof(buf), "%-24s %-4s %12s %12s  %s\n", "check",
                "ord", "max", "tolerance", "verdict");
  out += buf;
  for (const CheckResult& c : r.checks) {
    if (c.skipped)
      std::snprintf(buf, sizeof(buf), "%-24s %-4s %12s %12s  SKIP  %s\n",
                    c.name.c_str(), c.order.c_str(), "-", "-",
                    c.note.c_str());
    else
      std::snprintf(buf, sizeof(buf), "%-24s %-4s %12.4e %12.4e  %s  %s\n",
                    c.name.c_str(), c.order.c_str(), c.max, c.tolerance,
                    c.pass ? "PASS" : "FAIL", c.note.c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "overall: %s  (h = %.4e, C = %g, profile %s)\n",
                r.pass ? "PASS" : "FAIL", r.h, r.C, r.profile.c_str());
  out += buf;
  return out;
}

}  // namespace cmc
