#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pxflow/grid.hpp"

namespace pxflow {

using Complex = std::complex<double>;

namespace detail {
void* fft_alloc(std::size_t bytes);
void fft_free(void* ptr) noexcept;
}  // namespace detail

/// Allocator returning FFTW-aligned storage, so spectral buffers can be
/// handed to precomputed plans directly.
template <class T>
struct FftAllocator {
  using value_type = T;
  FftAllocator() noexcept = default;
  template <class U>
  FftAllocator(const FftAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) { return static_cast<T*>(detail::fft_alloc(n * sizeof(T))); }
  void deallocate(T* p, std::size_t) noexcept { detail::fft_free(p); }
  template <class U>
  bool operator==(const FftAllocator<U>&) const noexcept { return true; }
};

using SpectralBuffer = std::vector<Complex, FftAllocator<Complex>>;

/// Index of (i, j), i <= j, in the packed upper triangle.
constexpr int sym_index(int dim, int i, int j) noexcept {
  if (i > j) {
    const int t = i;
    i = j;
    j = t;
  }
  // rows: 0 -> dim entries, 1 -> dim-1, ...
  return i * dim - i * (i - 1) / 2 + (j - i);
}
constexpr int sym_components(int dim) noexcept { return dim * (dim + 1) / 2; }

/// Real scalar samples on a grid.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double fill = 0.0);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

 private:
  Grid grid_;
  std::vector<double> data_;
};

/// d velocity components sampled on the grid.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  int components() const noexcept { return static_cast<int>(comps_.size()); }
  std::span<double> component(int c) noexcept { return comps_[c]; }
  std::span<const double> component(int c) const noexcept { return comps_[c]; }

  /// Euclidean magnitude at a node.
  double magnitude(std::size_t node) const noexcept;
  double max_magnitude() const noexcept;

  bool mean_zero = false;

 private:
  Grid grid_;
  std::vector<std::vector<double>> comps_;
};

/// Symmetric d x d tensor per node; only the upper triangle is stored.
class SymTensorField {
 public:
  SymTensorField() = default;
  explicit SymTensorField(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_.dim; }
  std::span<double> component(int i, int j) noexcept { return comps_[sym_index(grid_.dim, i, j)]; }
  std::span<const double> component(int i, int j) const noexcept {
    return comps_[sym_index(grid_.dim, i, j)];
  }
  std::span<double> packed(int c) noexcept { return comps_[c]; }
  std::span<const double> packed(int c) const noexcept { return comps_[c]; }

  /// Frobenius norm squared at a node (off-diagonal entries count twice).
  double frobenius2(std::size_t node) const noexcept;

 private:
  Grid grid_;
  std::vector<std::vector<double>> comps_;
};

/// Full d x d tensor per node, entry (i, j) = d_j u_i for gradients.
class TensorField {
 public:
  TensorField() = default;
  explicit TensorField(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_.dim; }
  std::span<double> component(int i, int j) noexcept { return comps_[i * grid_.dim + j]; }
  std::span<const double> component(int i, int j) const noexcept {
    return comps_[i * grid_.dim + j];
  }
  double frobenius2(std::size_t node) const noexcept;

 private:
  Grid grid_;
  std::vector<std::vector<double>> comps_;
};

/// Unitary Fourier coefficients of a scalar field.
///
/// Convention: f_hat(xi) = V^{-1/2} * sum_x f(x) e^{-i xi.x} dx, so that
/// sum |f_hat|^2 equals the rectangle-rule integral of |f|^2.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::span<Complex> coeffs() noexcept { return data_; }
  std::span<const Complex> coeffs() const noexcept { return data_; }
  Complex& operator[](std::size_t i) noexcept { return data_[i]; }
  Complex operator[](std::size_t i) const noexcept { return data_[i]; }

 private:
  Grid grid_;
  SpectralBuffer data_;
};

/// Unitary Fourier coefficients of a d-component field.
class SpectralVector {
 public:
  SpectralVector() = default;
  explicit SpectralVector(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  int components() const noexcept { return static_cast<int>(comps_.size()); }
  std::size_t size() const noexcept { return grid_.size(); }
  std::span<Complex> component(int c) noexcept { return comps_[c]; }
  std::span<const Complex> component(int c) const noexcept { return comps_[c]; }

  /// sum over components of |u_hat_c(xi)|^2 at one mode.
  double mode_energy(std::size_t mode) const noexcept;
  bool all_finite() const noexcept;

  bool mean_zero = false;

 private:
  Grid grid_;
  std::vector<SpectralBuffer> comps_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace pxflow
