#include "cmc/vecfield.hpp"

#include <cmath>

namespace cmc {

CVec3 complexify(const Vec3Field& v) {
  CVec3 out = {complexify(v.component(0)), complexify(v.component(1)),
               complexify(v.component(2))};
  return out;
}

CVec3 vec_wd(const CVec3& v) {
  return {wirtinger_d(v[0]), wirtinger_d(v[1]), wirtinger_d(v[2])};
}

CVec3 vec_wdb(const CVec3& v) {
  return {wirtinger_dbar(v[0]), wirtinger_dbar(v[1]), wirtinger_dbar(v[2])};
}

CVec3 vec_ddbar(const CVec3& v) {
  return {ddbar(v[0]), ddbar(v[1]), ddbar(v[2])};
}

ComplexField vec_dot(const CVec3& a, const CVec3& b) {
  require_same_chart(a[0].chart, b[0].chart, "vec_dot");
  ComplexField out(a[0].chart);
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    out.values[k] = a[0].values[k] * b[0].values[k] +
                    a[1].values[k] * b[1].values[k] +
                    a[2].values[k] * b[2].values[k];
    out.mask[k] = (a[0].mask[k] && a[1].mask[k] && a[2].mask[k] &&
                   b[0].mask[k] && b[1].mask[k] && b[2].mask[k])
                      ? 1
                      : 0;
  }
  return out;
}

CVec3 vec_cross(const CVec3& a, const CVec3& b) {
  require_same_chart(a[0].chart, b[0].chart, "vec_cross");
  CVec3 out = {ComplexField(a[0].chart), ComplexField(a[0].chart),
               ComplexField(a[0].chart)};
  for (std::size_t k = 0; k < a[0].values.size(); ++k) {
    out[0].values[k] =
        a[1].values[k] * b[2].values[k] - a[2].values[k] * b[1].values[k];
    out[1].values[k] =
        a[2].values[k] * b[0].values[k] - a[0].values[k] * b[2].values[k];
    out[2].values[k] =
        a[0].values[k] * b[1].values[k] - a[1].values[k] * b[0].values[k];
    unsigned char m = (a[0].mask[k] && a[1].mask[k] && a[2].mask[k] &&
                       b[0].mask[k] && b[1].mask[k] && b[2].mask[k])
                          ? 1
                          : 0;
    out[0].mask[k] = out[1].mask[k] = out[2].mask[k] = m;
  }
  return out;
}

ResidualStat vec_stat(const CVec3& v) {
  ResidualStat s;
  s.h = v[0].chart.h();
  double sum = 0.0;
  for (std::size_t k = 0; k < v[0].values.size(); ++k) {
    if (!(v[0].mask[k] && v[1].mask[k] && v[2].mask[k])) continue;
    double a = std::sqrt(std::norm(v[0].values[k]) + std::norm(v[1].values[k]) +
                         std::norm(v[2].values[k]));
    if (a > s.max) s.max = a;
    sum += a;
    ++s.count;
  }
  s.mean = s.count ? sum / double(s.count) : 0.0;
  return s;
}

}  // namespace cmc
