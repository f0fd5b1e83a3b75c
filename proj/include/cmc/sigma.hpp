#pragma once

#include <vector>

#include "cmc/calculus.hpp"
#include "cmc/grid.hpp"
#include "cmc/rational.hpp"
#include "cmc/vecfield.hpp"
#include "cmc/weierstrass.hpp"

namespace cmc {

// Stereographic chart of the unit normal. rho = i conj(psi1)/psi2, masked
// where |psi2| falls under pole_floor (the normal points at the chart pole
// there). stereo_dev records the agreement with the projection of the
// normal itself, (n1 + i n2)/(1 - n3); the two forms are algebraically
// identical, so this stays at rounding level.
struct GaussMapData {
  ComplexField rho;
  double pole_floor = 0.0;
  double stereo_dev = 0.0;
};

GaussMapData gauss_map(const SpinorData& s);

// ddbar rho - 2 conj(rho) d(rho) dbar(rho) / (1 + |rho|^2)
ResidualStat sigma_residual(const ComplexField& rho);

// The variable mean curvature extension: the sigma operator times H minus
// d(H) dbar(rho). Reduces to H * sigma_residual for constant H.
ResidualStat general_H_residual(const ComplexField& rho, const RealField& H);

struct So3Report {
  ResidualStat residual;  // |ddbar n + (d n, dbar n) n|
  double unit_dev = 0.0;  // max | |n| - 1 |
};

// Vector sigma model residual for the unit normal. Throws NotUnit when the
// input deviates from unit length beyond 1e-3.
So3Report so3_residual(const Vec3Field& n);

struct QRFromRho {
  ComplexField Q;  // 2 d(rho) d(conj rho) / (1 + |rho|^2)^2
  RealField R;     // |d(conj rho)| / |d(rho)|, masked where d(rho) vanishes
};

QRFromRho qr_from_rho(const ComplexField& rho);

// Inverts the Gauss map back to spinor data for prescribed mean curvature:
// s1 = continued sqrt(i dbar rho), psi1 = conj(rho) s1 / (sqrt(H) w),
// psi2 = i conj(s1) / (sqrt(H) w), p = |s1|^2 / w with w = 1 + |rho|^2.
// The first overload differentiates rho with stencils; the second takes an
// externally supplied dbar rho (generators pass exact derivatives).
SpinorData spinors_from_rho(const ComplexField& rho, const RealField& H);
SpinorData spinors_from_rho(const ComplexField& rho,
                            const ComplexField& dbar_rho, const RealField& H);

// One adjacent unmasked pair whose continued square root jumps sign.
struct SeamPair {
  std::size_t i0, j0, i1, j1;
};

struct InstantonData {
  SpinorData spinors;
  ComplexField rho;   // the seed map sampled on the chart
  ComplexField drho;  // its exact rational derivative, same mask
  // Branch seam of sqrt(d rho), recorded rather than masked: every
  // quadratic invariant (q, n, charge density) is single valued across
  // it, only psi-level stencil residuals see the jump.
  std::vector<SeamPair> seams;
};

// Harmonic-map solution family from a rational seed: psi1 = rho conj(s)/w,
// psi2 = s/w, p = |d rho|/w with s the continued sqrt(d rho). Grid points
// within one cell of a denominator root are masked; a root that survives
// to an unmasked point throws PoleOnGrid.
InstantonData instanton(const RationalMap& map, const GridChart& chart);

// Degree of the normal as a map to the sphere: quadrature of
// Im(n, [d n x dbar n]) / (2 pi) dx dy over unmasked points (trapezoid
// weights; the dz^dzbar area form is folded into the real density, sign
// fixed so the rho = z instanton family carries +1).
double topological_charge(const Vec3Field& n);

struct ChargeIdentityReport {
  ResidualStat pointwise;  // |density(n) - density(q)|
  double integral_n = 0.0;
  double integral_q = 0.0;
};

// The same charge from the conformal factor: -Re(ddbar ln q)/pi. Both
// densities are integrated over their joint unmasked set.
ChargeIdentityReport charge_identity_residual(const Vec3Field& n,
                                              const RealField& q);

struct EnergyReport {
  // quadrature of 2 (|d rho|^2 + |dbar rho|^2) / (1 + |rho|^2)^pow;
  // pow = 1 follows the first-power density and grows with the domain,
  // pow = 2 is the scale-invariant form that converges to 2 pi x degree
  double linear = 0.0;
  double squared = 0.0;
};

EnergyReport energy(const ComplexField& rho);

struct CpOneReport {
  ComplexField N1;  // psi1 / sqrt(q)
  ComplexField N2;  // conj(psi2) / sqrt(q)
  RealField k;      // multiplier, real part (imaginary part -> 0 on solutions)
  ResidualStat residual;
  double norm_dev = 0.0;  // max | |N1|^2 + |N2|^2 - 1 |
};

// Two-component sigma model residual
//   ddbar N - (Nb, dbar N) d N - (Nb, d N) dbar N + k N,
//   k = -2 (Nb,dN)(N,dbar Nb) + (dN, dbar Nb)/2 + (dbar N, d Nb)/2
// with bilinear pairings (conjugates written out, not implied).
CpOneReport cp1_residual(const SpinorData& s);

}  // namespace cmc
