#pragma once

#include "cmc/grid.hpp"

namespace cmc {

// Summary of |residual| over the unmasked points of a field.
struct ResidualStat {
  double max = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
  double h = 0.0;
};

ResidualStat stat_of(const ComplexField& f);
ResidualStat stat_of(const RealField& f);

ComplexField complexify(const RealField& f);
RealField real_part(const ComplexField& f);
RealField imag_part(const ComplexField& f);
ComplexField conj_field(const ComplexField& f);

// One-dimensional derivatives along the chart axes, second order accurate.
// Interior points use the central stencil; chart-boundary points use a
// four-point one-sided stencil whose leading truncation term matches the
// central one, so derived error fields stay smooth up to the edge. An axis
// with only three samples falls back to the classical three-point stencil.
// The output is masked wherever the point itself or any stencil input is
// masked; interior mask edges get no one-sided fallback.
ComplexField deriv_x(const ComplexField& f);
ComplexField deriv_y(const ComplexField& f);

// Wirtinger derivatives d/dz and d/dzbar. Built componentwise from deriv_x
// and deriv_y so that wirtinger_dbar(conj f) == conj(wirtinger_d(f)) holds
// bitwise.
ComplexField wirtinger_d(const ComplexField& f);
ComplexField wirtinger_dbar(const ComplexField& f);

// Mixed second derivative as the composition wirtinger_d(wirtinger_dbar(f)).
ComplexField ddbar(const ComplexField& f);

// Stat of |d/dzbar f|; zero for holomorphic data up to truncation error.
ResidualStat holomorphy_residual(const ComplexField& f);

// Trapezoid line integral of fz dz + fzb dzbar along a 4-connected node
// path. Throws PathThroughMask if the path touches a masked point.
Complex path_integrate(const ComplexField& fz, const ComplexField& fzb,
                       const GridPath& path);

struct SweepResult {
  ComplexField antiderivative;
  // Max over grid cells of the trapezoid circulation of fz dz + fzb dzbar;
  // measures how far the pair is from being closed.
  double loop_defect = 0.0;
};

// Antiderivative F with dF = fz dz + fzb dzbar, F(base) = 0, built by a
// row-then-column trapezoid sweep from the base point. Charts whose mask
// shadows part of the unmasked region from the primary sweeps are finished
// by deterministic continuation passes from already-reached neighbors.
SweepResult sweep_antiderivative(const ComplexField& fz,
                                 const ComplexField& fzb, std::size_t base_i,
                                 std::size_t base_j);

}  // namespace cmc
