#pragma once

#include <array>
#include <string>

#include "cmc/calculus.hpp"
#include "cmc/grid.hpp"
#include "cmc/weierstrass.hpp"

namespace cmc {

// One unitary rotation of the spinor bundle.
struct SU2Element {
  Complex alpha;
  Complex beta;

  // |alpha|^2 + |beta|^2 = 1 within 1e-12, else NotUnitary
  void validate() const;
};

// zeta1 = alpha psi1 + beta conj(psi2), zeta2 = -beta conj(psi1) + alpha psi2,
// p unchanged. Leaves q, Q, H, R and both fundamental forms invariant.
SpinorData su2_transform(const SpinorData& s, const SU2Element& g);

// Coefficient matrices of an overdetermined pair d Psi = A Psi,
// dbar Psi = B Psi. Entries are four separate scalar fields so the stencil
// code applies unchanged; all eight share one mask.
struct ConnectionPair {
  std::string label;  // "closed" | "spectral" | "sl2"
  Complex parameter{1.0, 0.0};
  std::array<std::array<ComplexField, 2>, 2> A;
  std::array<std::array<ComplexField, 2>, 2> B;
};

// closed:    A = [[0, qH], [-Q/2q, dq/q]],   B = [[dbq/q, Qb/2q], [-qH, 0]]
// spectral:  A = [[0, q], [-lam Q/2q, dq/q]], B = [[dbq/q, Qb/2 lam q], [-q, 0]]
// sl2:       A = [[0, q^2], [-lam Q/2q^2, 0]],
//            B = [[dbq/q, Qb/2 lam], [-1, -dbq/q]]  (trace free)
// spectral and sl2 demand |parameter| = 1 within 1e-12 (BadParameter) and
// unit mean curvature within 1e-6 (NotCMC1).
ConnectionPair build_connection(const GeometryBundle& g,
                                const std::string& label,
                                Complex parameter = Complex(1.0, 0.0));

// Max entry magnitude of dbar A - d B + [A, B] per point, reported as a
// stat over the stencil-reachable unmasked set.
ResidualStat zero_curvature_residual(const ConnectionPair& c);

// Residual of the original spinors against the connection: the four rows of
// d(psi1,psi2) = A(psi1,psi2) and dbar(psi1,psi2) = B(psi1,psi2). Only the
// closed system and the spectral one at parameter 1 are solved by the
// untransformed spinors; other labels throw LabelMismatch.
ResidualStat linear_problem_residual(const SpinorData& s,
                                     const ConnectionPair& c);

struct GaugeReport {
  ResidualStat residual;  // worst of the four gauge-system rows
  // max |d ln p - d ln q|: the prescribed factor p and the derived q may
  // differ only by a constant, so their log derivatives must agree
  double ratio_dev = 0.0;
};

// Verifies that t1 = psi1, t2 = psi2 / q solves the sl2 system at
// parameter 1. Throws NotCMC1 away from unit mean curvature. tilde_scale
// multiplies t2 and exists for detection experiments; anything but 1
// must break the residual.
GaugeReport gauge_check(const SpinorData& s, double tilde_scale = 1.0);

// Zero-curvature residual of the rational-parameter pair built directly
// from the spinors, with prefactors 2/(mu+1) and 2/(mu-1). Throws
// SingularParameter within 1e-9 of mu = 1 or mu = -1.
ResidualStat mu_lax_residual(const SpinorData& s, Complex mu);

}  // namespace cmc
