#include "cmc/calculus.hpp"

#include <cmath>
#include <cstdlib>

namespace cmc {

ResidualStat stat_of(const ComplexField& f) {
  ResidualStat s;
  s.h = f.chart.h();
  double sum = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    if (!f.mask[k]) continue;
    double a = std::abs(f.values[k]);
    if (a > s.max) s.max = a;
    sum += a;
    ++s.count;
  }
  s.mean = s.count ? sum / double(s.count) : 0.0;
  return s;
}

ResidualStat stat_of(const RealField& f) {
  ResidualStat s;
  s.h = f.chart.h();
  double sum = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    if (!f.mask[k]) continue;
    double a = std::fabs(f.values[k]);
    if (a > s.max) s.max = a;
    sum += a;
    ++s.count;
  }
  s.mean = s.count ? sum / double(s.count) : 0.0;
  return s;
}

ComplexField complexify(const RealField& f) {
  ComplexField out(f.chart);
  for (std::size_t k = 0; k < f.values.size(); ++k)
    out.values[k] = Complex(f.values[k], 0.0);
  out.mask = f.mask;
  return out;
}

RealField real_part(const ComplexField& f) {
  RealField out(f.chart);
  for (std::size_t k = 0; k < f.values.size(); ++k)
    out.values[k] = f.values[k].real();
  out.mask = f.mask;
  return out;
}

RealField imag_part(const ComplexField& f) {
  RealField out(f.chart);
  for (std::size_t k = 0; k < f.values.size(); ++k)
    out.values[k] = f.values[k].imag();
  out.mask = f.mask;
  return out;
}

ComplexField conj_field(const ComplexField& f) {
  ComplexField out(f.chart);
  for (std::size_t k = 0; k < f.values.size(); ++k)
    out.values[k] = std::conj(f.values[k]);
  out.mask = f.mask;
  return out;
}

namespace {

// Derivative along one axis of a line of samples. n >= 4 uses the matched
// four-point edge stencil (same h^2/6 f''' leading error as the central
// one), n == 3 the classical three-point, n == 2 a plain difference.
void line_derivative(const Complex* f, const unsigned char* m, std::size_t n,
                     std::ptrdiff_t stride, double h, Complex* out,
                     unsigned char* outm) {
  auto F = [&](std::size_t k) { return f[std::ptrdiff_t(k) * stride]; };
  auto M = [&](std::size_t k) { return m[std::ptrdiff_t(k) * stride] != 0; };
  auto set = [&](std::size_t k, Complex v, bool ok) {
    out[std::ptrdiff_t(k) * stride] = ok ? v : Complex(0.0, 0.0);
    outm[std::ptrdiff_t(k) * stride] = ok ? 1 : 0;
  };

  if (n == 2) {
    bool ok = M(0) && M(1);
    Complex d = (F(1) - F(0)) / h;
    set(0, d, ok);
    set(1, d, ok);
    return;
  }

  for (std::size_t k = 1; k + 1 < n; ++k) {
    bool ok = M(k - 1) && M(k) && M(k + 1);
    set(k, (F(k + 1) - F(k - 1)) / (2.0 * h), ok);
  }

  if (n == 3) {
    bool ok0 = M(0) && M(1) && M(2);
    set(0, (-3.0 * F(0) + 4.0 * F(1) - F(2)) / (2.0 * h), ok0);
    set(2, (3.0 * F(2) - 4.0 * F(1) + F(0)) / (2.0 * h), ok0);
    return;
  }

  bool okl = M(0) && M(1) && M(2) && M(3);
  set(0, (-2.0 * F(0) + 3.5 * F(1) - 2.0 * F(2) + 0.5 * F(3)) / h, okl);
  bool okr = M(n - 1) && M(n - 2) && M(n - 3) && M(n - 4);
  set(n - 1,
      (2.0 * F(n - 1) - 3.5 * F(n - 2) + 2.0 * F(n - 3) - 0.5 * F(n - 4)) / h,
      okr);
}

}  // namespace

ComplexField deriv_x(const ComplexField& f) {
  ComplexField out(f.chart);
  const std::size_t nx = f.chart.nx, ny = f.chart.ny;
  for (std::size_t j = 0; j < ny; ++j) {
    std::size_t row = j * nx;
    line_derivative(f.values.data() + row, f.mask.data() + row, nx, 1,
                    f.chart.hx(), out.values.data() + row,
                    out.mask.data() + row);
  }
  return out;
}

ComplexField deriv_y(const ComplexField& f) {
  ComplexField out(f.chart);
  const std::size_t nx = f.chart.nx, ny = f.chart.ny;
  for (std::size_t i = 0; i < nx; ++i) {
    line_derivative(f.values.data() + i, f.mask.data() + i, ny,
                    std::ptrdiff_t(nx), f.chart.hy(), out.values.data() + i,
                    out.mask.data() + i);
  }
  return out;
}

ComplexField wirtinger_d(const ComplexField& f) {
  ComplexField dx = deriv_x(f);
  ComplexField dy = deriv_y(f);
  ComplexField out(f.chart);
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    const Complex a = dx.values[k], b = dy.values[k];
    out.values[k] = Complex(0.5 * (a.real() + b.imag()),
                            0.5 * (a.imag() - b.real()));
    out.mask[k] = (dx.mask[k] && dy.mask[k]) ? 1 : 0;
    if (!out.mask[k]) out.values[k] = Complex(0.0, 0.0);
  }
  return out;
}

ComplexField wirtinger_dbar(const ComplexField& f) {
  ComplexField dx = deriv_x(f);
  ComplexField dy = deriv_y(f);
  ComplexField out(f.chart);
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    const Complex a = dx.values[k], b = dy.values[k];
    out.values[k] = Complex(0.5 * (a.real() - b.imag()),
                            0.5 * (a.imag() + b.real()));
    out.mask[k] = (dx.mask[k] && dy.mask[k]) ? 1 : 0;
    if (!out.mask[k]) out.values[k] = Complex(0.0, 0.0);
  }
  return out;
}

ComplexField ddbar(const ComplexField& f) {
  return wirtinger_d(wirtinger_dbar(f));
}

ResidualStat holomorphy_residual(const ComplexField& f) {
  return stat_of(wirtinger_dbar(f));
}

Complex path_integrate(const ComplexField& fz, const ComplexField& fzb,
                       const GridPath& path) {
  require_same_chart(fz.chart, fzb.chart, "path_integrate");
  const GridChart& c = fz.chart;
  if (path.nodes.empty())
    throw Error(ErrorCode::BadParameter, "empty path");
  for (auto [i, j] : path.nodes) {
    if (i >= c.nx || j >= c.ny)
      throw Error(ErrorCode::BadParameter, "path node outside chart");
    if (!fz.valid(i, j) || !fzb.valid(i, j))
      throw Error(ErrorCode::PathThroughMask,
                  "path touches a masked point at (" + std::to_string(i) +
                      "," + std::to_string(j) + ")");
  }

  Complex total(0.0, 0.0);
  for (std::size_t s = 0; s + 1 < path.nodes.size(); ++s) {
    auto [i0, j0] = path.nodes[s];
    auto [i1, j1] = path.nodes[s + 1];
    std::ptrdiff_t di = std::ptrdiff_t(i1) - std::ptrdiff_t(i0);
    std::ptrdiff_t dj = std::ptrdiff_t(j1) - std::ptrdiff_t(j0);
    if (std::abs(di) + std::abs(dj) != 1)
      throw Error(ErrorCode::BadParameter, "path steps must be 4-adjacent");
    Complex dz, dzb;
    if (dj == 0) {
      double step = double(di) * c.hx();
      dz = Complex(step, 0.0);
      dzb = Complex(step, 0.0);
    } else {
      double step = double(dj) * c.hy();
      dz = Complex(0.0, step);
      dzb = Complex(0.0, -step);
    }
    total += 0.5 * (fz.at(i0, j0) + fz.at(i1, j1)) * dz +
             0.5 * (fzb.at(i0, j0) + fzb.at(i1, j1)) * dzb;
  }
  return total;
}

SweepResult sweep_antiderivative(const ComplexField& fz,
                                 const ComplexField& fzb, std::size_t base_i,
                                 std::size_t base_j) {
  require_same_chart(fz.chart, fzb.chart, "sweep_antiderivative");
  const GridChart& c = fz.chart;
  if (base_i >= c.nx || base_j >= c.ny)
    throw Error(ErrorCode::BadParameter, "base point outside chart");
  std::vector<unsigned char> m = mask_and(fz.mask, fzb.mask);
  if (!m[c.index(base_i, base_j)])
    throw Error(ErrorCode::BadParameter, "base point is masked");

  const double hx = c.hx(), hy = c.hy();
  // Cartesian components of dF: Fx = fz + fzb, Fy = i (fz - fzb).
  std::vector<Complex> Fx(c.size()), Fy(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    Fx[k] = fz.values[k] + fzb.values[k];
    Fy[k] = Complex(0.0, 1.0) * (fz.values[k] - fzb.values[k]);
  }

  ComplexField F(c);
  std::vector<unsigned char> reached(c.size(), 0);
  for (auto& mk : F.mask) mk = 0;
  F.at(base_i, base_j) = Complex(0.0, 0.0);
  reached[c.index(base_i, base_j)] = 1;

  auto step_from = [&](std::size_t from, std::size_t to, int axis,
                       double sign) {
    double h = axis == 0 ? hx : hy;
    const std::vector<Complex>& comp = axis == 0 ? Fx : Fy;
    F.values[to] = F.values[from] + sign * h * 0.5 * (comp[from] + comp[to]);
    reached[to] = 1;
  };

  // Primary pass: the base row, then every column off that row.
  for (std::size_t i = base_i + 1; i < c.nx; ++i) {
    std::size_t k = c.index(i, base_j);
    if (!m[k] || !reached[k - 1]) break;
    step_from(k - 1, k, 0, 1.0);
  }
  for (std::size_t i = base_i; i-- > 0;) {
    std::size_t k = c.index(i, base_j);
    if (!m[k] || !reached[k + 1]) break;
    step_from(k + 1, k, 0, -1.0);
  }
  for (std::size_t i = 0; i < c.nx; ++i) {
    for (std::size_t j = base_j + 1; j < c.ny; ++j) {
      std::size_t k = c.index(i, j), below = c.index(i, j - 1);
      if (!m[k] || !reached[below]) break;
      step_from(below, k, 1, 1.0);
    }
    for (std::size_t j = base_j; j-- > 0;) {
      std::size_t k = c.index(i, j), above = c.index(i, j + 1);
      if (!m[k] || !reached[above]) break;
      step_from(above, k, 1, -1.0);
    }
  }

  // Continuation passes: fill unmasked points the primary sweeps could not
  // reach because the mask shadows them (e.g. integrating around a hole).
  // Scan order is fixed, so the result is deterministic.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j < c.ny; ++j) {
      for (std::size_t i = 0; i < c.nx; ++i) {
        std::size_t k = c.index(i, j);
        if (!m[k] || reached[k]) continue;
        if (i > 0 && reached[k - 1] && m[k - 1]) {
          step_from(k - 1, k, 0, 1.0);
        } else if (i + 1 < c.nx && reached[k + 1] && m[k + 1]) {
          step_from(k + 1, k, 0, -1.0);
        } else if (j > 0 && reached[k - c.nx] && m[k - c.nx]) {
          step_from(k - c.nx, k, 1, 1.0);
        } else if (j + 1 < c.ny && reached[k + c.nx] && m[k + c.nx]) {
          step_from(k + c.nx, k, 1, -1.0);
        } else {
          continue;
        }
        changed = true;
      }
    }
  }

  for (std::size_t k = 0; k < c.size(); ++k) F.mask[k] = reached[k];

  SweepResult result;
  result.antiderivative = std::move(F);
  double defect = 0.0;
  for (std::size_t j = 0; j + 1 < c.ny; ++j) {
    for (std::size_t i = 0; i + 1 < c.nx; ++i) {
      std::size_t k00 = c.index(i, j), k10 = c.index(i + 1, j);
      std::size_t k01 = c.index(i, j + 1), k11 = c.index(i + 1, j + 1);
      if (!(m[k00] && m[k10] && m[k01] && m[k11])) continue;
      Complex loop = 0.5 * hx * (Fx[k00] + Fx[k10]) +
                     0.5 * hy * (Fy[k10] + Fy[k11]) -
                     0.5 * hx * (Fx[k11] + Fx[k01]) -
                     0.5 * hy * (Fy[k01] + Fy[k00]);
      double a = std::abs(loop);
      if (a > defect) defect = a;
    }
  }
  result.loop_defect = defect;
  return result;
}

}  // namespace cmc
