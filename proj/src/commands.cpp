#include "cmc/commands.hpp"

#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <utility>

#include "cmc/dataset.hpp"
#include "cmc/decouple.hpp"
#include "cmc/mesh.hpp"
#include "cmc/parse.hpp"
#include "cmc/sigma.hpp"
#include "cmc/verify.hpp"
#include "cmc/weierstrass.hpp"

namespace cmc {

namespace {

using nlohmann::json;

GridChart chart_from(const CommandOptions& o, double x0, double x1, double y0,
                     double y1, std::size_t fallback_n) {
  if (!o.domain.empty()) {
    if (o.domain.size() != 4)
      throw Error(ErrorCode::BadParameter, "--domain needs x0 x1 y0 y1");
    x0 = o.domain[0];
    x1 = o.domain[1];
    y0 = o.domain[2];
    y1 = o.domain[3];
  }
  GridChart c;
  c.x_min = x0;
  c.x_max = x1;
  c.y_min = y0;
  c.y_max = y1;
  c.nx = c.ny = o.n ? o.n : fallback_n;
  c.validate();
  return c;
}

std::pair<std::size_t, std::size_t> base_point(const GridChart& c,
                                               const std::vector<long>& base) {
  if (base.empty()) return {c.nx / 2, c.ny / 2};
  if (base.size() != 2 || base[0] < 0 || base[1] < 0 ||
      base[0] >= long(c.nx) || base[1] >= long(c.ny))
    throw Error(ErrorCode::BadParameter, "--base index outside the grid");
  return {std::size_t(base[0]), std::size_t(base[1])};
}

json conventions_block() {
  json c = json::object();
  c["area_form"] = "dz^dzbar = -2i dx dy";
  c["boundary_stencil"] =
      "second order throughout, central interior, matched one-sided at edges";
  c["charge_sign"] = "degree of the normal, rho = z carries +1";
  return c;
}

SpinorData spinors_of(const DatasetFile& ds) {
  SpinorData s;
  s.psi1 = need_complex(ds, "psi1");
  s.psi2 = need_complex(ds, "psi2");
  s.p = need_real(ds, "p");
  s.validate();
  return s;
}

void add_spinors(DatasetFile& ds, const SpinorData& s) {
  add_field(ds, "psi1", s.psi1);
  add_field(ds, "psi2", s.psi2);
  add_field(ds, "p", s.p);
}

}  // namespace

int cmd_generate(const CommandOptions& o) {
  if (o.out.empty())
    throw Error(ErrorCode::BadParameter, "generate needs --out");
  DatasetFile ds;
  if (o.kind == "instanton") {
    RationalMap map = parse_rational(o.rho);
    GridChart chart = chart_from(o, -2.0, 2.0, -2.0, 2.0, 129);
    InstantonData inst = instanton(map, chart);
    ds = make_dataset(chart);
    add_spinors(ds, inst.spinors);
    add_field(ds, "rho", inst.rho);
    json par = json::object();
    par["rho"] = o.rho;
    par["rho_canonical"] = print_rational(map);
    ds.provenance["generator"] = "instanton";
    ds.provenance["parameters"] = par;
    json seams = json::array();
    for (const SeamPair& sp : inst.seams)
      seams.push_back({sp.i0, sp.j0, sp.i1, sp.j1});
    json branch = json::object();
    branch["rule"] = "continued sqrt of d rho, principal seed per component";
    branch["seams"] = seams;
    ds.provenance["branch"] = branch;
  } else if (o.kind == "cylinder") {
    if (!(o.r > 0.0))
      throw Error(ErrorCode::BadParameter, "cylinder radius must be positive");
    GridChart chart = chart_from(o, 0.0, 3.0, 0.0, 3.0, 129);
    ds = make_dataset(chart);
    add_spinors(ds, make_cylinder(chart, o.r));
    json par = json::object();
    par["r"] = o.r;
    ds.provenance["generator"] = "cylinder";
    ds.provenance["parameters"] = par;
  } else if (o.kind == "from_rho") {
    if (!(o.H > 0.0))
      throw Error(ErrorCode::BadParameter, "--H must be positive");
    RationalMap map = parse_rational(o.rho);
    GridChart chart = chart_from(o, -2.0, 2.0, -2.0, 2.0, 129);
    // Sample the seed and its exact rational derivative, masking one cell
    // around every pole the same way the instanton generator does.
    RationalMap dm = map.derivative();
    std::vector<Complex> ps = map.poles();
    double cell = std::max(chart.hx(), chart.hy());
    ComplexField seed(chart), gm(chart), dgm(chart);
    for (std::size_t j = 0; j < chart.ny; ++j)
      for (std::size_t i = 0; i < chart.nx; ++i) {
        Complex z = chart.z(i, j);
        bool ok = true;
        for (const Complex& pole : ps)
          if (std::abs(z - pole) <= cell) ok = false;
        std::size_t k = chart.index(i, j);
        seed.mask[k] = gm.mask[k] = dgm.mask[k] = ok ? 1 : 0;
        if (!ok) continue;
        Complex rv = map.evaluate(z);
        Complex dv = dm.evaluate(z);
        if (!std::isfinite(rv.real()) || !std::isfinite(rv.imag()) ||
            !std::isfinite(dv.real()) || !std::isfinite(dv.imag()))
          throw Error(ErrorCode::PoleOnGrid,
                      "denominator root at an unmasked grid point");
        seed.values[k] = rv;
        // Gauss-map chart of the surface the seed describes, with its
        // exact dbar derivative (the seed is holomorphic, the chart is
        // its conjugate, so d of the seed becomes dbar of the chart).
        gm.values[k] = Complex(0, 1) * std::conj(rv);
        dgm.values[k] = Complex(0, 1) * std::conj(dv);
      }
    SpinorData s = spinors_from_rho(gm, dgm, RealField(chart, o.H));
    ds = make_dataset(chart);
    add_spinors(ds, s);
    add_field(ds, "rho", seed);
    json par = json::object();
    par["rho"] = o.rho;
    par["rho_canonical"] = print_rational(map);
    par["H"] = o.H;
    ds.provenance["generator"] = "from_rho";
    ds.provenance["parameters"] = par;
  } else {
    throw Error(ErrorCode::BadParameter,
                "unknown generate kind '" + o.kind +
                    "' (instanton, cylinder, from_rho)");
  }
  ds.provenance["conventions"] = conventions_block();
  write_dataset(ds, o.out);
  std::fprintf(stderr, "wrote %s (%zu x %zu, %zu fields)\n", o.out.c_str(),
               ds.chart.nx, ds.chart.ny, ds.fields.size());
  return 0;
}

int cmd_verify(const CommandOptions& o) {
  DatasetFile ds = read_dataset(o.in);
  VerificationReport rep = verify_dataset(ds, o.tolerance);
  std::string text = report_json(rep).dump();
  text += "\n";
  if (o.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error(ErrorCode::BadParameter, "cannot open " + o.out);
    f << text;
  }
  std::string table = report_table(rep);
  std::fwrite(table.data(), 1, table.size(), stderr);
  return rep.pass ? 0 : 1;
}

int cmd_decouple(const CommandOptions& o) {
  if (o.out.empty())
    throw Error(ErrorCode::BadParameter, "decouple needs --out");
  DatasetFile in = read_dataset(o.in);
  SpinorData s = spinors_of(in);
  GeometryBundle g = derive_geometry(s);
  auto [bi, bj] = base_point(in.chart, o.base);
  DecoupledData dec = decouple_geometry(g, bi, bj);
  if (dec.umbilic)
    throw Error(ErrorCode::BadParameter,
                "umbilic data: the Hopf field vanishes at this resolution, "
                "nothing to decouple");
  RealField aq(in.chart);
  aq.mask = g.Q.mask;
  for (std::size_t k = 0; k < aq.values.size(); ++k)
    if (aq.mask[k]) aq.values[k] = std::abs(g.Q.values[k]);
  ResidualStat shg = shgordon_residual(dec.R, aq);

  DatasetFile out = make_dataset(in.chart);
  add_field(out, "eta", dec.eta);
  add_field(out, "R", dec.R);
  add_field(out, "sqrtQ", dec.sqrtQ);
  out.provenance["generator"] = "decouple";
  json par = json::object();
  par["base"] = {bi, bj};
  out.provenance["parameters"] = par;
  json shj = json::object();
  shj["max"] = shg.max;
  shj["mean"] = shg.mean;
  shj["count"] = shg.count;
  json sum = json::object();
  sum["shgordon"] = shj;
  sum["eta_loop_defect"] = dec.eta_loop_defect;
  sum["holomorphy_max"] = dec.holomorphy;
  out.provenance["summaries"] = sum;
  out.provenance["conventions"] = conventions_block();
  if (in.provenance.contains("generator"))
    out.provenance["source_generator"] = in.provenance["generator"];
  write_dataset(out, o.out);
  std::fprintf(stderr, "decoupled %s: sinh-Gordon max %.3e over %zu points\n",
               o.in.c_str(), shg.max, shg.count);
  return 0;
}

int cmd_charge(const CommandOptions& o) {
  SpinorData s;
  std::string source;
  if (!o.in.empty()) {
    s = spinors_of(read_dataset(o.in));
    source = o.in;
  } else {
    if (!(o.radius > 0.0))
      throw Error(ErrorCode::BadParameter, "--radius must be positive");
    RationalMap map = parse_rational(o.rho);
    GridChart chart =
        chart_from(o, -o.radius, o.radius, -o.radius, o.radius, 513);
    s = instanton(map, chart).spinors;
    source = "instanton rho = " + o.rho;
  }
  GeometryBundle g = derive_geometry(s);
  double charge = topological_charge(g.n);
  ChargeIdentityReport idr = charge_identity_residual(g.n, g.q);
  json out = json::object();
  out["charge"] = charge;
  out["convention"] =
      "Im(n, dn x dbar n)/(2 pi) quadrature, area form dz^dzbar = -2i dx dy";
  json idj = json::object();
  idj["pointwise_max"] = idr.pointwise.max;
  idj["pointwise_mean"] = idr.pointwise.mean;
  idj["integral_n"] = idr.integral_n;
  idj["integral_q"] = idr.integral_q;
  out["identity"] = idj;
  std::string text = out.dump();
  text += "\n";
  std::fwrite(text.data(), 1, text.size(), stdout);
  std::fprintf(stderr, "charge %.6f, identity defect %.3e (%s)\n", charge,
               idr.pointwise.max, source.c_str());
  return 0;
}

int cmd_export_mesh(const CommandOptions& o) {
  if (o.out.empty())
    throw Error(ErrorCode::BadParameter, "export-mesh needs --out");
  DatasetFile ds = read_dataset(o.in);
  const DatasetField* fr = find_field(ds, "r");
  const DatasetField* fn = find_field(ds, "n");
  Vec3Field r, n;
  if (fr && fn) {
    r = fr->v;
    n = fn->v;
  } else {
    SpinorData s = spinors_of(ds);
    auto [bi, bj] = base_point(ds.chart, o.base);
    r = fr ? fr->v : integrate_surface(s, bi, bj).r;
    n = fn ? fn->v : derive_geometry(s).n;
  }
  MeshStats st = write_obj(r, n, o.out);
  std::fprintf(stderr, "wrote %s (%zu vertices, %zu faces)\n", o.out.c_str(),
               st.vertices, st.faces);
  return 0;
}

}  // namespace cmc
