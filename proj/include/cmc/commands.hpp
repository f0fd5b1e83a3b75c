#pragma once

#include <string>
#include <vector>

#include "cmc/grid.hpp"

namespace cmc {

// Bag of command-line options shared by every subcommand; the front end
// fills only the fields the chosen subcommand registered. n = 0 and an
// empty domain mean "use the command's default".
struct CommandOptions {
  std::string kind;            // generate: instanton | cylinder | from_rho
  std::string rho = "z";       // seed map expression
  double H = 1.0;              // from_rho mean curvature
  double r = 1.0;              // cylinder radius
  double radius = 20.0;        // charge chart half-width
  std::vector<double> domain;  // x0 x1 y0 y1
  std::size_t n = 0;           // points per side
  std::vector<long> base;      // ix iy, default grid center
  std::string in;
  std::string out;
  std::string tolerance = "strict";
};

// Commands return the process exit code: 0 for success (or a passing
// verification), 1 for a failing verification. Bad input throws Error,
// which the front end maps to exit code 2.
int cmd_generate(const CommandOptions& o);
int cmd_verify(const CommandOptions& o);
int cmd_decouple(const CommandOptions& o);
int cmd_charge(const CommandOptions& o);
int cmd_export_mesh(const CommandOptions& o);

}  // namespace cmc
