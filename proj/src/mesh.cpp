#include "cmc/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

namespace cmc {

namespace {

void append_line(std::string& out, const char* tag, double x, double y,
                 double z) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s %.17g %.17g %.17g\n", tag, x, y, z);
  out += buf;
}

}  // namespace

std::string obj_text(const Vec3Field& r, const Vec3Field& n) {
  require_same_chart(r.chart, n.chart, "obj_text");
  const GridChart& c = r.chart;

  // vertex numbering: 1-based, row-major over the jointly unmasked points
  std::vector<std::size_t> id(c.size(), 0);
  std::size_t next = 1;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (r.mask[k] && n.mask[k]) id[k] = next++;
  if (next == 1)
    throw Error(ErrorCode::EmptyGeometry, "no unmasked vertices to export");

  std::string out;
  out.reserve(64 * (next - 1));
  for (std::size_t k = 0; k < c.size(); ++k)
    if (id[k]) append_line(out, "v", r.x[k], r.y[k], r.z[k]);
  for (std::size_t k = 0; k < c.size(); ++k)
    if (id[k]) append_line(out, "vn", n.x[k], n.y[k], n.z[k]);

  std::size_t faces = 0;
  for (std::size_t j = 0; j + 1 < c.ny; ++j)
    for (std::size_t i = 0; i + 1 < c.nx; ++i) {
      std::size_t k00 = c.index(i, j), k10 = c.index(i + 1, j);
      std::size_t k01 = c.index(i, j + 1), k11 = c.index(i + 1, j + 1);
      if (!(id[k00] && id[k10] && id[k01] && id[k11])) continue;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "f %zu//%zu %zu//%zu %zu//%zu\n",
                    id[k00], id[k00], id[k10], id[k10], id[k11], id[k11]);
      out += buf;
      std::snprintf(buf, sizeof(buf), "f %zu//%zu %zu//%zu %zu//%zu\n",
                    id[k00], id[k00], id[k11], id[k11], id[k01], id[k01]);
      out += buf;
      faces += 2;
    }
  return out;
}

MeshStats write_obj(const Vec3Field& r, const Vec3Field& n,
                    const std::string& path) {
  std::string text = obj_text(r, n);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::BadParameter, "cannot open '" + path + "'");
  out.write(text.data(), std::streamsize(text.size()));
  if (!out)
    throw Error(ErrorCode::BadParameter, "short write to '" + path + "'");

  MeshStats st;
  for (std::size_t k = 0; k < r.mask.size(); ++k)
    if (r.mask[k] && n.mask[k]) ++st.vertices;
  for (std::size_t j = 0; j + 1 < r.chart.ny; ++j)
    for (std::size_t i = 0; i + 1 < r.chart.nx; ++i) {
      std::size_t k00 = r.chart.index(i, j), k10 = r.chart.index(i + 1, j);
      std::size_t k01 = r.chart.index(i, j + 1),
                  k11 = r.chart.index(i + 1, j + 1);
      bool ok = r.mask[k00] && n.mask[k00] && r.mask[k10] && n.mask[k10] &&
                r.mask[k01] && n.mask[k01] && r.mask[k11] && n.mask[k11];
      if (ok) st.faces += 2;
    }
  return st;
}

}  // namespace cmc
