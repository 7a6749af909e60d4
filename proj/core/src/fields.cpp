#include "pxflow/fields.hpp"

#include <cmath>
#include <string>

#include "pxflow/error.hpp"

namespace pxflow {

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), data_(grid.size(), fill) {}

VectorField::VectorField(const Grid& grid)
    : grid_(grid), comps_(static_cast<std::size_t>(grid.dim), std::vector<double>(grid.size())) {}

double VectorField::magnitude(std::size_t node) const noexcept {
  double s = 0.0;
  for (const auto& c : comps_) s += c[node] * c[node];
  return std::sqrt(s);
}

double VectorField::max_magnitude() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) m = std::max(m, magnitude(i));
  return m;
}

SymTensorField::SymTensorField(const Grid& grid)
    : grid_(grid),
      comps_(static_cast<std::size_t>(sym_components(grid.dim)), std::vector<double>(grid.size())) {}

double SymTensorField::frobenius2(std::size_t node) const noexcept {
  const int d = grid_.dim;
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const double v = comps_[sym_index(d, i, j)][node];
      s += (i == j ? 1.0 : 2.0) * v * v;
    }
  }
  return s;
}

TensorField::TensorField(const Grid& grid)
    : grid_(grid),
      comps_(static_cast<std::size_t>(grid.dim * grid.dim), std::vector<double>(grid.size())) {}

double TensorField::frobenius2(std::size_t node) const noexcept {
  double s = 0.0;
  for (const auto& c : comps_) s += c[node] * c[node];
  return s;
}

SpectralField::SpectralField(const Grid& grid) : grid_(grid), data_(grid.size(), Complex{}) {}

SpectralVector::SpectralVector(const Grid& grid)
    : grid_(grid),
      comps_(static_cast<std::size_t>(grid.dim), SpectralBuffer(grid.size(), Complex{})) {}

double SpectralVector::mode_energy(std::size_t mode) const noexcept {
  double s = 0.0;
  for (const auto& c : comps_) s += std::norm(c[mode]);
  return s;
}

bool SpectralVector::all_finite() const noexcept {
  for (const auto& c : comps_) {
    for (const auto& z : c) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw GridMismatch(std::string(what) + ": operands live on different grids");
}

}  // namespace pxflow
