#pragma once
// Scalars sampled on uniform 1D/2D grids, plus the stencil machinery used by
// every differential operator in the library: second-order central differences
// in the interior and second-order one-sided stencils at the edges (no ghost
// cells). Grids need at least 5 points per axis so the one-sided stencils
// always fit.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "infogeom/errors.hpp"

namespace infogeom {

struct GridSpec {
  int dims = 1;
  std::array<double, 2> origin{0.0, 0.0};
  std::array<double, 2> spacing{1.0, 1.0};
  std::array<int, 2> shape{0, 1};

  static GridSpec make_1d(double origin0, double h, int n) {
    GridSpec g;
    g.dims = 1;
    g.origin = {origin0, 0.0};
    g.spacing = {h, 1.0};
    g.shape = {n, 1};
    g.validate();
    return g;
  }

  // Closed interval [min, max] sampled at spacing h (count rounded).
  static GridSpec line(double min, double max, double h) {
    if (!(h > 0.0) || !(max > min)) throw GridMismatch("line grid needs max > min, h > 0");
    int n = static_cast<int>(std::llround((max - min) / h)) + 1;
    return make_1d(min, h, n);
  }

  static GridSpec make_2d(double ox, double oy, double hx, double hy, int nx, int ny) {
    GridSpec g;
    g.dims = 2;
    g.origin = {ox, oy};
    g.spacing = {hx, hy};
    g.shape = {nx, ny};
    g.validate();
    return g;
  }

  static GridSpec rectangle(double x0, double x1, double hx, double y0, double y1,
                            double hy) {
    if (!(hx > 0.0) || !(hy > 0.0) || !(x1 > x0) || !(y1 > y0))
      throw GridMismatch("rectangle grid needs positive extents and spacings");
    int nx = static_cast<int>(std::llround((x1 - x0) / hx)) + 1;
    int ny = static_cast<int>(std::llround((y1 - y0) / hy)) + 1;
    return make_2d(x0, y0, hx, hy, nx, ny);
  }

  void validate() const {
    if (dims != 1 && dims != 2) throw GridMismatch("grid must be 1D or 2D");
    for (int a = 0; a < dims; ++a) {
      if (!(spacing[a] > 0.0)) throw GridMismatch("grid spacing must be positive");
      if (shape[a] < 5) throw GridMismatch("grids need at least 5 points per axis");
    }
    if (dims == 1 && shape[1] != 1) throw GridMismatch("1D grid must have trivial second axis");
  }

  int size() const { return shape[0] * shape[1]; }
  double coord(int axis, int i) const { return origin[axis] + i * spacing[axis]; }
  double axis_min(int axis) const { return origin[axis]; }
  double axis_max(int axis) const { return coord(axis, shape[axis] - 1); }

  bool same_as(const GridSpec& o, double tol = 1e-12) const {
    if (dims != o.dims) return false;
    for (int a = 0; a < dims; ++a) {
      if (shape[a] != o.shape[a]) return false;
      if (std::abs(origin[a] - o.origin[a]) > tol) return false;
      if (std::abs(spacing[a] - o.spacing[a]) > tol) return false;
    }
    return true;
  }
};

class ScalarField {
 public:
  ScalarField() = default;

  explicit ScalarField(GridSpec grid, std::string name = "")
      : grid_(grid), name_(std::move(name)), v_(static_cast<size_t>(grid.size()), 0.0) {
    grid_.validate();
  }

  ScalarField(GridSpec grid, std::vector<double> values, std::string name = "")
      : grid_(grid), name_(std::move(name)), v_(std::move(values)) {
    grid_.validate();
    if (v_.size() != static_cast<size_t>(grid_.size()))
      throw GridMismatch("value count does not match grid size");
  }

  static ScalarField from_function(const GridSpec& grid,
                                   const std::function<double(double)>& f,
                                   std::string name = "") {
    if (grid.dims != 1) throw GridMismatch("1D sampler on non-1D grid");
    ScalarField out(grid, std::move(name));
    for (int i = 0; i < grid.shape[0]; ++i) out.at(i) = f(grid.coord(0, i));
    return out;
  }

  static ScalarField from_function(const GridSpec& grid,
                                   const std::function<double(double, double)>& f,
                                   std::string name = "") {
    if (grid.dims != 2) throw GridMismatch("2D sampler on non-2D grid");
    ScalarField out(grid, std::move(name));
    for (int i = 0; i < grid.shape[0]; ++i)
      for (int j = 0; j < grid.shape[1]; ++j)
        out.at(i, j) = f(grid.coord(0, i), grid.coord(1, j));
    return out;
  }

  const GridSpec& grid() const { return grid_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  int dims() const { return grid_.dims; }
  int size() const { return grid_.size(); }

  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }

  // Row-major: index (i, j) = i * ny + j.
  double& at(int i) { return v_[static_cast<size_t>(i) * grid_.shape[1]]; }
  double at(int i) const { return v_[static_cast<size_t>(i) * grid_.shape[1]]; }
  double& at(int i, int j) { return v_[static_cast<size_t>(i) * grid_.shape[1] + j]; }
  double at(int i, int j) const { return v_[static_cast<size_t>(i) * grid_.shape[1] + j]; }

  double x_coord(int i) const { return grid_.coord(0, i); }
  double y_coord(int j) const { return grid_.coord(1, j); }

  double min_value() const {
    double m = v_[0];
    for (double x : v_) m = std::min(m, x);
    return m;
  }
  double max_value() const {
    double m = v_[0];
    for (double x : v_) m = std::max(m, x);
    return m;
  }

  // Largest |value|; `interior_margin` drops that many cells at every edge,
  // which is how convergence checks avoid the one-sided boundary stencils.
  double max_abs(int interior_margin = 0) const {
    double m = 0.0;
    int nx = grid_.shape[0], ny = grid_.shape[1];
    int mx = interior_margin, my = grid_.dims == 2 ? interior_margin : 0;
    for (int i = mx; i < nx - mx; ++i)
      for (int j = my; j < ny - my; ++j) m = std::max(m, std::abs(at(i, j)));
    return m;
  }

  // --- differential operators ---------------------------------------------

  ScalarField derivative(int axis) const {
    check_axis(axis);
    ScalarField out(grid_);
    apply_stencil(axis, /*second=*/false, out);
    return out;
  }

  ScalarField second_derivative(int axis) const {
    check_axis(axis);
    ScalarField out(grid_);
    apply_stencil(axis, /*second=*/true, out);
    return out;
  }

  // d2/dxdy on a 2D grid, via composed boundary-aware first derivatives
  // (the two axis operators commute, so the result is symmetric in (x, y)).
  ScalarField mixed_derivative() const {
    if (grid_.dims != 2) throw GridMismatch("mixed derivative needs a 2D grid");
    return derivative(0).derivative(1);
  }

  // --- reductions ----------------------------------------------------------

  // Trapezoidal integral over the whole grid.
  double integral() const {
    double s = 0.0;
    int nx = grid_.shape[0], ny = grid_.shape[1];
    if (grid_.dims == 1) {
      for (int i = 0; i < nx; ++i) s += at(i) * (i == 0 || i == nx - 1 ? 0.5 : 1.0);
      return s * grid_.spacing[0];
    }
    for (int i = 0; i < nx; ++i) {
      double wi = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
      for (int j = 0; j < ny; ++j) {
        double wj = (j == 0 || j == ny - 1) ? 0.5 : 1.0;
        s += wi * wj * at(i, j);
      }
    }
    return s * grid_.spacing[0] * grid_.spacing[1];
  }

  // --- interpolation (clamped to the grid) ---------------------------------

  double interpolate(double x) const {
    if (grid_.dims != 1) throw GridMismatch("1D interpolation on non-1D field");
    auto [i, f] = locate(0, x);
    return at(i) * (1.0 - f) + at(i + 1) * f;
  }

  double interpolate(double x, double y) const {
    if (grid_.dims != 2) throw GridMismatch("2D interpolation on non-2D field");
    auto [i, fx] = locate(0, x);
    auto [j, fy] = locate(1, y);
    return at(i, j) * (1.0 - fx) * (1.0 - fy) + at(i + 1, j) * fx * (1.0 - fy) +
           at(i, j + 1) * (1.0 - fx) * fy + at(i + 1, j + 1) * fx * fy;
  }

  bool contains(double x) const {
    return x >= grid_.axis_min(0) && x <= grid_.axis_max(0);
  }
  bool contains(double x, double y) const {
    return contains(x) && y >= grid_.axis_min(1) && y <= grid_.axis_max(1);
  }

  // --- pointwise algebra ---------------------------------------------------

  ScalarField map(const std::function<double(double)>& f) const {
    ScalarField out(grid_);
    for (size_t k = 0; k < v_.size(); ++k) out.v_[k] = f(v_[k]);
    return out;
  }

  ScalarField zip(const ScalarField& o, const std::function<double(double, double)>& f) const {
    require_same_grid(o);
    ScalarField out(grid_);
    for (size_t k = 0; k < v_.size(); ++k) out.v_[k] = f(v_[k], o.v_[k]);
    return out;
  }

  ScalarField operator+(const ScalarField& o) const {
    return zip(o, [](double a, double b) { return a + b; });
  }
  ScalarField operator-(const ScalarField& o) const {
    return zip(o, [](double a, double b) { return a - b; });
  }
  ScalarField operator*(const ScalarField& o) const {
    return zip(o, [](double a, double b) { return a * b; });
  }
  ScalarField operator*(double c) const {
    return map([c](double a) { return a * c; });
  }
  ScalarField operator+(double c) const {
    return map([c](double a) { return a + c; });
  }

  void require_same_grid(const ScalarField& o) const {
    if (!grid_.same_as(o.grid_)) throw GridMismatch("fields live on different grids");
  }

 private:
  void check_axis(int axis) const {
    if (axis < 0 || axis >= grid_.dims) throw GridMismatch("axis out of range");
  }

  std::pair<int, double> locate(int axis, double x) const {
    double t = (x - grid_.origin[axis]) / grid_.spacing[axis];
    int n = grid_.shape[axis];
    if (t <= 0.0) return {0, 0.0};
    if (t >= n - 1) return {n - 2, 1.0};
    int i = static_cast<int>(t);
    if (i > n - 2) i = n - 2;
    return {i, t - i};
  }

  // One line of samples along `axis`; g reads, s writes into the output.
  void apply_stencil(int axis, bool second, ScalarField& out) const {
    int n = grid_.shape[axis];
    double h = grid_.spacing[axis];
    int n_other = grid_.dims == 2 ? grid_.shape[1 - axis] : 1;
    for (int o = 0; o < n_other; ++o) {
      auto g = [&](int i) {
        if (grid_.dims == 1) return at(i);
        return axis == 0 ? at(i, o) : at(o, i);
      };
      auto s = [&](int i, double val) {
        if (grid_.dims == 1)
          out.at(i) = val;
        else if (axis == 0)
          out.at(i, o) = val;
        else
          out.at(o, i) = val;
      };
      if (!second) {
        s(0, (-3.0 * g(0) + 4.0 * g(1) - g(2)) / (2.0 * h));
        for (int i = 1; i < n - 1; ++i) s(i, (g(i + 1) - g(i - 1)) / (2.0 * h));
        s(n - 1, (3.0 * g(n - 1) - 4.0 * g(n - 2) + g(n - 3)) / (2.0 * h));
      } else {
        double h2 = h * h;
        s(0, (2.0 * g(0) - 5.0 * g(1) + 4.0 * g(2) - g(3)) / h2);
        for (int i = 1; i < n - 1; ++i) s(i, (g(i + 1) - 2.0 * g(i) + g(i - 1)) / h2);
        s(n - 1, (2.0 * g(n - 1) - 5.0 * g(n - 2) + 4.0 * g(n - 3) - g(n - 4)) / h2);
      }
    }
  }

  GridSpec grid_;
  std::string name_;
  std::vector<double> v_;
};

// log W with the positivity guard shared by every W-consuming operator.
inline ScalarField log_field(const ScalarField& w) {
  if (!(w.min_value() > 0.0))
    throw NonPositiveField("field '" + w.name() + "' must be strictly positive");
  return w.map([](double x) { return std::log(x); });
}

inline ScalarField sqrt_field(const ScalarField& w) {
  if (!(w.min_value() > 0.0))
    throw NonPositiveField("field '" + w.name() + "' must be strictly positive");
  return w.map([](double x) { return std::sqrt(x); });
}

// Remove 2*pi jumps, walking outward from the grid origin (first along x for
// the base row, then along y within each column).
inline ScalarField unwrap_phase(const ScalarField& wrapped) {
  const double two_pi = 2.0 * M_PI;
  auto unwrap_step = [&](double prev, double cur) {
    double d = cur - prev;
    d -= two_pi * std::round(d / two_pi);
    return prev + d;
  };
  ScalarField out = wrapped;
  int nx = wrapped.grid().shape[0];
  if (wrapped.dims() == 1) {
    for (int i = 1; i < nx; ++i) out.at(i) = unwrap_step(out.at(i - 1), out.at(i));
    return out;
  }
  int ny = wrapped.grid().shape[1];
  for (int i = 1; i < nx; ++i) out.at(i, 0) = unwrap_step(out.at(i - 1, 0), out.at(i, 0));
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j < ny; ++j) out.at(i, j) = unwrap_step(out.at(i, j - 1), out.at(i, j));
  return out;
}

}  // namespace infogeom
