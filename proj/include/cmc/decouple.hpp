#pragma once

#include "cmc/calculus.hpp"
#include "cmc/grid.hpp"
#include "cmc/weierstrass.hpp"

namespace cmc {

// Continued square root: row-major scan, each point takes the root closer
// to an already assigned neighbor (left first, then up). The first point of
// each connected component seeds with the principal root. Equidistant
// choices beyond rounding throw BranchAmbiguity, as does a post-scan
// neighbor pair whose jump exceeds the local value (the input winds).
ComplexField branch_sqrt(const ComplexField& f);

struct DecoupledData {
  ComplexField sqrtQ;
  ComplexField eta;   // antiderivative of sqrtQ, eta(base) = 0
  RealField R;        // 2 q^2 / |Q|
  double eta_loop_defect = 0.0;
  // max |dbar Q| seen by the holomorphy gate
  double holomorphy = 0.0;
  // true when the Hopf field is umbilic-grade noise everywhere
  // (max |Q| < 1e-2 max 2q^2); all outputs are masked then
  bool umbilic = false;
};

// Change of variables to the decoupled system. Points with
// |Q| < 1e-6 max|Q| are masked as umbilic; a Hopf field that is not
// holomorphic to truncation order (|dbar Q| > 50 h^2 max(1, max|Q|))
// throws NotHolomorphic.
DecoupledData decouple_geometry(const GeometryBundle& g, std::size_t base_i,
                                std::size_t base_j);

// (1/|Q|) ddbar ln R - 1/R + R over the joint unmasked set.
ResidualStat shgordon_residual(const RealField& R, const RealField& absQ);

struct GaussReductionReport {
  ResidualStat main;   // ddbar ln q^2 - |Q|^2 / 2q^2 + 2 q^2
  ResidualStat dbarQ;  // holomorphy of Q
  ResidualStat dconjQ; // conjugate counterpart
};

// Unit mean curvature reduction of the Gauss equation; throws NotCMC1 when
// H deviates from 1 beyond 1e-6.
GaussReductionReport gauss_reduction_residual(const GeometryBundle& g);

}  // namespace cmc
