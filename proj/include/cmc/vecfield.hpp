#pragma once

#include <array>

#include "cmc/calculus.hpp"
#include "cmc/grid.hpp"

namespace cmc {

// Three complex component fields sharing a chart; used for derivatives of
// surface and normal vectors. The scalar product is bilinear (no conjugate),
// matching the complexified Euclidean one the residual formulas need.
using CVec3 = std::array<ComplexField, 3>;

CVec3 complexify(const Vec3Field& v);
CVec3 vec_wd(const CVec3& v);
CVec3 vec_wdb(const CVec3& v);
CVec3 vec_ddbar(const CVec3& v);

ComplexField vec_dot(const CVec3& a, const CVec3& b);
CVec3 vec_cross(const CVec3& a, const CVec3& b);

// Max and mean over unmasked points of the Euclidean norm of (a1,a2,a3).
ResidualStat vec_stat(const CVec3& v);

}  // namespace cmc
