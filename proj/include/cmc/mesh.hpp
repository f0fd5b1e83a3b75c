#pragma once

#include <string>

#include "cmc/grid.hpp"

namespace cmc {

struct MeshStats {
  std::size_t vertices = 0;
  std::size_t faces = 0;
};

// Wavefront OBJ text for the sampled surface: one "v" line per unmasked
// grid point, matching "vn" lines from the normal field, then two
// counter-clockwise triangles per grid cell whose four corners are all
// unmasked (faces reference v and vn with the same index). Numbers use
// %.17g. Throws EmptyGeometry when every point is masked.
std::string obj_text(const Vec3Field& r, const Vec3Field& n);

MeshStats write_obj(const Vec3Field& r, const Vec3Field& n,
                    const std::string& path);

}  // namespace cmc
