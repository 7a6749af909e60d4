#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace pxflow {

using Point = std::array<double, 3>;

/// Uniform periodic grid on [0, L_0) x ... x [0, L_{d-1}).
///
/// Storage is row-major with the last active axis fastest. Unused axes of a
/// 2D grid carry one node so that the same (i, j, k) indexing serves both
/// dimensions.
struct Grid {
  int dim = 2;
  std::array<int, 3> nodes{8, 8, 1};
  std::array<double, 3> length{1.0, 1.0, 1.0};

  /// Same node count and box length on every active axis.
  static Grid cube(int dim, int n, double box_length);

  /// Throws InvalidArgument unless d in {2,3}, N a power of two >= 8, L > 0.
  void validate() const;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(nodes[0]) * nodes[1] * nodes[2];
  }
  double spacing(int axis) const noexcept { return length[axis] / nodes[axis]; }
  double min_spacing() const noexcept;
  double cell_volume() const noexcept;
  double volume() const noexcept;

  /// 2 pi / L along an axis.
  double base_wavenumber(int axis) const noexcept;
  /// Signed mode number of storage slot m (m for m < N/2, m - N above).
  int mode_number(int axis, int m) const noexcept;
  bool is_nyquist(int axis, int m) const noexcept {
    return nodes[axis] > 1 && 2 * m == nodes[axis];
  }
  /// Derivative wavenumber; zero for the Nyquist slot.
  double wavenumber(int axis, int m) const noexcept;
  /// Wavenumbers of every slot along an axis.
  std::vector<double> wavenumbers(int axis) const;

  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(i) * nodes[1] + j) * nodes[2] + k;
  }
  std::array<int, 3> unravel(std::size_t idx) const noexcept;
  Point coordinate(std::size_t idx) const noexcept;
  Point center() const noexcept;

  /// Minimum-image distance between two points on the torus.
  double periodic_distance(const Point& a, const Point& b) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// End of the whole-space-like window, 0.05 (L / 2 pi)^2 for the shortest axis.
double box_window_end(const Grid& grid) noexcept;

/// Calls fn(index, xi, resolved) for every spectral slot, where xi holds the
/// derivative wavenumbers and resolved is false on any Nyquist slot.
template <class Fn>
void for_each_mode(const Grid& grid, Fn&& fn) {
  const auto kx = grid.wavenumbers(0);
  const auto ky = grid.wavenumbers(1);
  const auto kz = grid.dim == 3 ? grid.wavenumbers(2) : std::vector<double>{0.0};
  std::size_t idx = 0;
  for (int i = 0; i < grid.nodes[0]; ++i) {
    const bool nyq_i = grid.is_nyquist(0, i);
    for (int j = 0; j < grid.nodes[1]; ++j) {
      const bool nyq_j = nyq_i || grid.is_nyquist(1, j);
      for (int k = 0; k < grid.nodes[2]; ++k, ++idx) {
        const bool nyq = nyq_j || (grid.dim == 3 && grid.is_nyquist(2, k));
        const std::array<double, 3> xi{kx[i], ky[j], kz[k]};
        fn(idx, xi, !nyq);
      }
    }
  }
}

}  // namespace pxflow
