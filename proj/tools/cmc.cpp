#include <CLI11.hpp>

#include <cstdio>
#include <exception>

#include "cmc/commands.hpp"
#include "cmc/grid.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Verification toolkit for constant mean curvature surface data.\n"
      "Rational expressions use the variable z and complex literals with\n"
      "suffix i, one canonical form: 2i, 1+2i, 3.5e-2i. Operators + - * / ^\n"
      "with integer exponents, so (z^2 - 1)/(z^2 + 1) parses as written."};
  app.require_subcommand(1);
  cmc::CommandOptions opt;

  CLI::App* gen = app.add_subcommand(
      "generate", "build a dataset file from one of the exact families");
  gen->add_option("kind", opt.kind, "instanton | cylinder | from_rho")
      ->required();
  gen->add_option("--rho", opt.rho, "seed map expression (default z)");
  gen->add_option("--H", opt.H, "mean curvature for from_rho (default 1)");
  gen->add_option("--r", opt.r, "cylinder radius (default 1)");
  gen->add_option("--domain", opt.domain, "chart bounds x0 x1 y0 y1")
      ->expected(4);
  gen->add_option("--n", opt.n, "points per side (default 129)");
  gen->add_option("--out", opt.out, "output dataset path")->required();

  CLI::App* ver = app.add_subcommand(
      "verify", "run the identity battery against a dataset file");
  ver->add_option("in", opt.in, "dataset path")->required();
  ver->add_option("--tolerance", opt.tolerance,
                  "strict (C = 50) or loose (C = 500)")
      ->check(CLI::IsMember({"strict", "loose"}));
  ver->add_option("--out", opt.out,
                  "write the JSON report here instead of stdout");

  CLI::App* dec = app.add_subcommand(
      "decouple", "change variables to the decoupled system (eta, R)");
  dec->add_option("in", opt.in, "dataset path")->required();
  dec->add_option("--out", opt.out, "output dataset path")->required();
  dec->add_option("--base", opt.base, "base grid index ix iy (default center)")
      ->expected(2);

  CLI::App* chg = app.add_subcommand(
      "charge", "topological charge of the normal plus the density identity");
  chg->add_option("in", opt.in,
                  "dataset path (omit to sample an instanton family)");
  chg->add_option("--rho", opt.rho, "seed map when no file is given");
  chg->add_option("--radius", opt.radius, "chart half-width (default 20)");
  chg->add_option("--n", opt.n, "points per side (default 513)");

  CLI::App* mesh = app.add_subcommand(
      "export-mesh", "triangulate the surface into a Wavefront OBJ file");
  mesh->add_option("in", opt.in, "dataset path")->required();
  mesh->add_option("--out", opt.out, "output OBJ path")->required();
  mesh->add_option("--base", opt.base,
                   "integration base ix iy when the file has no r field")
      ->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmc::cmd_generate(opt);
    if (ver->parsed()) return cmc::cmd_verify(opt);
    if (dec->parsed()) return cmc::cmd_decouple(opt);
    if (chg->parsed()) return cmc::cmd_charge(opt);
    if (mesh->parsed()) return cmc::cmd_export_mesh(opt);
  } catch (const cmc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
