#pragma once

#include "cmc/calculus.hpp"
#include "cmc/grid.hpp"
#include "cmc/vecfield.hpp"

namespace cmc {

// Spinor solution samples of d psi1 = p psi2, dbar psi2 = -p psi1.
struct SpinorData {
  ComplexField psi1;
  ComplexField psi2;
  RealField p;

  void validate() const;
  std::vector<unsigned char> joint_mask() const;
};

struct DiracReport {
  ResidualStat r1;  // |d psi1 - p psi2|
  ResidualStat r2;  // |dbar psi2 + p psi1|
  // true when p equals |psi1|^2 + |psi2|^2 pointwise (the unit
  // mean curvature case), within 1e-6 of the field scale
  bool cmc1 = false;
  double cmc1_dev = 0.0;
};

DiracReport dirac_residual(const SpinorData& s);

// Induced geometry of the surface the spinors describe. Points where the
// conformal factor q falls below q_floor = 1e-12 max(q) are masked out.
struct GeometryBundle {
  RealField q;        // |psi1|^2 + |psi2|^2
  RealField H;        // mean curvature p/q
  ComplexField Q;     // Hopf differential coefficient
  Vec3Field n;        // unit normal
  RealField K;        // Gauss curvature
  RealField I_coeff;  // first fundamental form coefficient 4 q^2
  ComplexField II_dz2;
  RealField II_mixed;
  double q_floor = 0.0;
};

GeometryBundle derive_geometry(const SpinorData& s);

// Closed-form dz components of the immersion differential.
CVec3 immersion_differential(const SpinorData& s);

struct SurfaceResult {
  Vec3Field r;
  double loop_defect = 0.0;
  // Largest imaginary part left after sweeping; exactly zero for
  // conjugate-paired data, kept as a guard for hand-built inputs.
  double max_imag = 0.0;
};

// Integrates the immersion differential to the surface itself, r(base) = 0.
SurfaceResult integrate_surface(const SpinorData& s, std::size_t base_i,
                                std::size_t base_j);

// End-to-end first fundamental form checks: derivatives of the swept
// surface against the spinor-built q and n.
struct ScalarProductReport {
  ResidualStat nn_m1;       // (n,n) - 1
  ResidualStat n_dr;        // (n, d r)
  ResidualStat n_dbr;       // (n, dbar r)
  ResidualStat dr_dr;       // (d r, d r)
  ResidualStat dbr_dbr;     // (dbar r, dbar r)
  ResidualStat dr_dbr_m2q2; // (d r, dbar r) - 2 q^2
};

ScalarProductReport scalar_product_residuals(const GeometryBundle& g,
                                             const Vec3Field& r);

struct GaussCodazziReport {
  ResidualStat gauss;         // ddbar ln q^2 - |Q|^2 / 2q^2 + 2 H^2 q^2
  ResidualStat codazzi_z;     // dbar Q - 2 q^2 d H
  ResidualStat codazzi_zbar;  // d conj(Q) - 2 q^2 dbar H
};

GaussCodazziReport gauss_codazzi_residual(const GeometryBundle& g);

// Moving-frame equations on (d r, dbar r, n) with every vector recomputed
// from the swept surface. The normal comes from d r x dbar r; its sign
// against the spinor-built normal is recorded and compensated so either
// orientation verifies.
struct FrameReport {
  double row_max[6] = {0, 0, 0, 0, 0, 0};
  int orientation = 1;
  double h = 0.0;
};

FrameReport frame_residual(const GeometryBundle& g, const Vec3Field& r);

// ddbar n + (d n, dbar n) n + dbar(H) d r + d(H) dbar r with the recomputed
// normal; first order accurate end to end.
ResidualStat normal_equation_residual(const GeometryBundle& g,
                                      const Vec3Field& r);

// Closed family of flat cylinder solutions: psi1 = r cos(kx),
// psi2 = r sin(kx), p = r^2 with wavenumber k = -2 r^2.
SpinorData make_cylinder(const GridChart& chart, double r);

}  // namespace cmc
