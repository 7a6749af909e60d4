#include "pxflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pxflow/error.hpp"

namespace pxflow {

Grid Grid::cube(int dim, int n, double box_length) {
  Grid g;
  g.dim = dim;
  g.nodes = {n, n, dim == 3 ? n : 1};
  g.length = {box_length, box_length, dim == 3 ? box_length : 1.0};
  g.validate();
  return g;
}

void Grid::validate() const {
  if (dim != 2 && dim != 3) {
    throw InvalidArgument("grid dimension must be 2 or 3, got " + std::to_string(dim));
  }
  for (int a = 0; a < dim; ++a) {
    const int n = nodes[a];
    if (n < 8 || (n & (n - 1)) != 0) {
      throw InvalidArgument("nodes per axis must be a power of two >= 8, got " +
                            std::to_string(n));
    }
    if (!(length[a] > 0.0) || !std::isfinite(length[a])) {
      throw InvalidArgument("box length must be positive");
    }
  }
  if (dim == 2 && nodes[2] != 1) {
    throw InvalidArgument("2D grid must have a single node on the third axis");
  }
}

double Grid::min_spacing() const noexcept {
  double h = spacing(0);
  for (int a = 1; a < dim; ++a) h = std::min(h, spacing(a));
  return h;
}

double Grid::cell_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing(a);
  return v;
}

double Grid::volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= length[a];
  return v;
}

double Grid::base_wavenumber(int axis) const noexcept {
  return 2.0 * std::numbers::pi / length[axis];
}

int Grid::mode_number(int axis, int m) const noexcept {
  const int n = nodes[axis];
  return 2 * m < n ? m : m - n;
}

double Grid::wavenumber(int axis, int m) const noexcept {
  if (axis >= dim || is_nyquist(axis, m)) return 0.0;
  return base_wavenumber(axis) * mode_number(axis, m);
}

std::vector<double> Grid::wavenumbers(int axis) const {
  std::vector<double> k(static_cast<std::size_t>(nodes[axis]));
  for (int m = 0; m < nodes[axis]; ++m) k[m] = wavenumber(axis, m);
  return k;
}

std::array<int, 3> Grid::unravel(std::size_t idx) const noexcept {
  const int k = static_cast<int>(idx % nodes[2]);
  idx /= nodes[2];
  const int j = static_cast<int>(idx % nodes[1]);
  const int i = static_cast<int>(idx / nodes[1]);
  return {i, j, k};
}

Point Grid::coordinate(std::size_t idx) const noexcept {
  const auto ijk = unravel(idx);
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) x[a] = ijk[a] * spacing(a);
  return x;
}

Point Grid::center() const noexcept {
  Point c{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) c[a] = 0.5 * length[a];
  return c;
}

double Grid::periodic_distance(const Point& a, const Point& b) const noexcept {
  double r2 = 0.0;
  for (int ax = 0; ax < dim; ++ax) {
    double d = std::fabs(a[ax] - b[ax]);
    d = std::fmod(d, length[ax]);
    d = std::min(d, length[ax] - d);
    r2 += d * d;
  }
  return std::sqrt(r2);
}

double box_window_end(const Grid& grid) noexcept {
  double l = grid.length[0];
  for (int a = 1; a < grid.dim; ++a) l = std::min(l, grid.length[a]);
  const double scaled = l / (2.0 * std::numbers::pi);
  return 0.05 * scaled * scaled;
}

}  // namespace pxflow
