#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cmc {

using Complex = std::complex<double>;

enum class ErrorCode {
  BadParameter,
  BranchAmbiguity,
  DegreeCap,
  DimensionMismatch,
  EmptyGeometry,
  ImaginaryResidueTooLarge,
  LabelMismatch,
  MissingField,
  NonRational,
  NotCMC1,
  NotHolomorphic,
  NotUnit,
  NotUnitary,
  PathThroughMask,
  PoleOnGrid,
  SingularParameter,
  SyntaxError,
  UnknownVersion,
};

const char* error_code_name(ErrorCode code);

// All failure modes surface as this one type so callers (and the CLI) can
// branch on the code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Uniform rectangular chart in the complex plane. Samples sit at
// z = x_min + i*hx + i*(y_min + j*hy), row-major with x fastest.
struct GridChart {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  std::size_t nx = 2;
  std::size_t ny = 2;

  double hx() const { return (x_max - x_min) / double(nx - 1); }
  double hy() const { return (y_max - y_min) / double(ny - 1); }
  // Single resolution scale used in tolerance formulas.
  double h() const { return hx() > hy() ? hx() : hy(); }
  double x(std::size_t i) const { return x_min + double(i) * hx(); }
  double y(std::size_t j) const { return y_min + double(j) * hy(); }
  Complex z(std::size_t i, std::size_t j) const { return {x(i), y(j)}; }
  std::size_t size() const { return nx * ny; }
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }

  bool same_as(const GridChart& o) const {
    return x_min == o.x_min && x_max == o.x_max && y_min == o.y_min &&
           y_max == o.y_max && nx == o.nx && ny == o.ny;
  }

  void validate() const {
    if (nx < 2 || ny < 2 || x_max <= x_min || y_max <= y_min)
      throw Error(ErrorCode::BadParameter, "degenerate chart");
  }
};

// Scalar samples plus a validity mask. Values under a cleared mask bit are
// kept (usually zero) but carry no meaning.
template <class T>
struct Field {
  GridChart chart;
  std::vector<T> values;
  std::vector<unsigned char> mask;

  Field() = default;
  explicit Field(const GridChart& c, T fill = T{})
      : chart(c), values(c.size(), fill), mask(c.size(), 1) {}

  T& at(std::size_t i, std::size_t j) { return values[chart.index(i, j)]; }
  const T& at(std::size_t i, std::size_t j) const {
    return values[chart.index(i, j)];
  }
  bool valid(std::size_t i, std::size_t j) const {
    return mask[chart.index(i, j)] != 0;
  }
  void set_valid(std::size_t i, std::size_t j, bool v) {
    mask[chart.index(i, j)] = v ? 1 : 0;
  }
  std::size_t valid_count() const {
    std::size_t n = 0;
    for (auto m : mask) n += m != 0;
    return n;
  }
};

using ComplexField = Field<Complex>;
using RealField = Field<double>;

// Three real components sharing one chart and one mask.
struct Vec3Field {
  GridChart chart;
  std::vector<double> x, y, z;
  std::vector<unsigned char> mask;

  Vec3Field() = default;
  explicit Vec3Field(const GridChart& c)
      : chart(c),
        x(c.size(), 0.0),
        y(c.size(), 0.0),
        z(c.size(), 0.0),
        mask(c.size(), 1) {}

  bool valid(std::size_t i, std::size_t j) const {
    return mask[chart.index(i, j)] != 0;
  }
  RealField component(int k) const {
    RealField f(chart);
    const std::vector<double>& src = k == 0 ? x : (k == 1 ? y : z);
    f.values = src;
    f.mask = mask;
    return f;
  }
};

// Path of grid nodes; consecutive entries must be 4-neighbors.
struct GridPath {
  std::vector<std::pair<std::size_t, std::size_t>> nodes;
};

void require_same_chart(const GridChart& a, const GridChart& b,
                        const char* where);

// Pointwise AND of two masks over a shared chart.
std::vector<unsigned char> mask_and(const std::vector<unsigned char>& a,
                                    const std::vector<unsigned char>& b);

}  // namespace cmc
