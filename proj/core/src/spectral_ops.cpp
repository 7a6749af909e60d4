#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "pxflow/error.hpp"
#include "pxflow/reduce.hpp"
#include "pxflow/spectral.hpp"

namespace pxflow {

namespace {

constexpr Complex kI{0.0, 1.0};

// i xi_axis * src, written to dst.
void multiply_derivative(const Grid& grid, int axis, std::span<const Complex> src,
                         std::span<Complex> dst) {
  for_each_mode(grid, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
    dst[idx] = resolved ? kI * xi[axis] * src[idx] : Complex{};
  });
}

}  // namespace

SpectralField to_spectral(const ScalarField& f) {
  SpectralField out(f.grid());
  forward_transform(f.grid(), f.values(), out.coeffs());
  return out;
}

ScalarField to_physical(const SpectralField& f) {
  ScalarField out(f.grid());
  inverse_transform(f.grid(), f.coeffs(), out.values());
  return out;
}

SpectralVector to_spectral(const VectorField& u) {
  SpectralVector out(u.grid());
  for (int c = 0; c < u.components(); ++c) forward_transform(u.grid(), u.component(c), out.component(c));
  out.mean_zero = u.mean_zero;
  return out;
}

VectorField to_physical(const SpectralVector& u) {
  VectorField out(u.grid());
  for (int c = 0; c < u.components(); ++c) inverse_transform(u.grid(), u.component(c), out.component(c));
  out.mean_zero = u.mean_zero;
  return out;
}

TensorField gradient(const SpectralVector& u) {
  const Grid& g = u.grid();
  TensorField out(g);
  SpectralBuffer tmp(g.size());
  for (int i = 0; i < g.dim; ++i) {
    for (int j = 0; j < g.dim; ++j) {
      multiply_derivative(g, j, u.component(i), tmp);
      inverse_transform(g, tmp, out.component(i, j));
    }
  }
  return out;
}

TensorField gradient(const VectorField& u) { return gradient(to_spectral(u)); }

SymTensorField symmetric_part(const TensorField& t) {
  const Grid& g = t.grid();
  SymTensorField out(g);
  for (int i = 0; i < g.dim; ++i) {
    for (int j = i; j < g.dim; ++j) {
      auto dst = out.component(i, j);
      auto a = t.component(i, j);
      auto b = t.component(j, i);
      for (std::size_t n = 0; n < g.size(); ++n) dst[n] = 0.5 * (a[n] + b[n]);
    }
  }
  return out;
}

SymTensorField symmetric_gradient(const SpectralVector& u) {
  const Grid& g = u.grid();
  SymTensorField out(g);
  SpectralBuffer tmp(g.size());
  for (int i = 0; i < g.dim; ++i) {
    for (int j = i; j < g.dim; ++j) {
      auto ui = u.component(i);
      auto uj = u.component(j);
      for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
        tmp[idx] = resolved ? 0.5 * kI * (xi[j] * ui[idx] + xi[i] * uj[idx]) : Complex{};
      });
      inverse_transform(g, tmp, out.component(i, j));
    }
  }
  return out;
}

SymTensorField symmetric_gradient(const VectorField& u) { return symmetric_gradient(to_spectral(u)); }

SpectralVector divergence_spectral(const SymTensorField& t) {
  const Grid& g = t.grid();
  SpectralVector out(g);
  std::vector<SpectralBuffer> hat(static_cast<std::size_t>(sym_components(g.dim)), SpectralBuffer(g.size()));
  for (int c = 0; c < sym_components(g.dim); ++c) forward_transform(g, t.packed(c), hat[c]);
  for (int i = 0; i < g.dim; ++i) {
    auto dst = out.component(i);
    for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
      Complex s{};
      if (resolved) {
        for (int j = 0; j < g.dim; ++j) s += kI * xi[j] * hat[sym_index(g.dim, i, j)][idx];
      }
      dst[idx] = s;
    });
  }
  return out;
}

VectorField divergence(const SymTensorField& t) { return to_physical(divergence_spectral(t)); }

VectorField divergence(const TensorField& t) {
  const Grid& g = t.grid();
  SpectralVector acc(g);
  SpectralBuffer hat(g.size());
  for (int i = 0; i < g.dim; ++i) {
    auto dst = acc.component(i);
    for (int j = 0; j < g.dim; ++j) {
      forward_transform(g, t.component(i, j), hat);
      for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
        if (resolved) dst[idx] += kI * xi[j] * hat[idx];
      });
    }
  }
  return to_physical(acc);
}

SpectralField divergence_scalar_spectral(const SpectralVector& u) {
  const Grid& g = u.grid();
  SpectralField out(g);
  for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
    Complex s{};
    if (resolved) {
      for (int j = 0; j < g.dim; ++j) s += kI * xi[j] * u.component(j)[idx];
    }
    out[idx] = s;
  });
  return out;
}

ScalarField divergence_scalar(const SpectralVector& u) { return to_physical(divergence_scalar_spectral(u)); }
ScalarField divergence_scalar(const VectorField& u) { return divergence_scalar(to_spectral(u)); }

double divergence_bound(const SpectralVector& u) {
  const Grid& g = u.grid();
  double s = 0.0;
  for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
    if (!resolved) return;
    Complex d{};
    for (int j = 0; j < g.dim; ++j) d += xi[j] * u.component(j)[idx];
    s += std::abs(d);
  });
  return s / std::sqrt(g.volume());
}

void leray_project_inplace(SpectralVector& u) {
  const Grid& g = u.grid();
  const int d = g.dim;
  for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) k2 += xi[a] * xi[a];
    if (!resolved) {
      for (int c = 0; c < d; ++c) u.component(c)[idx] = Complex{};
      return;
    }
    if (k2 == 0.0) {
      if (u.mean_zero) {
        for (int c = 0; c < d; ++c) u.component(c)[idx] = Complex{};
      }
      return;
    }
    Complex dot{};
    for (int a = 0; a < d; ++a) dot += xi[a] * u.component(a)[idx];
    const Complex f = dot / k2;
    for (int c = 0; c < d; ++c) u.component(c)[idx] -= xi[c] * f;
  });
}

SpectralVector leray_project(const SpectralVector& u) {
  SpectralVector out = u;
  leray_project_inplace(out);
  return out;
}

VectorField leray_project(const VectorField& u) { return to_physical(leray_project(to_spectral(u))); }

double lp_norm(std::span<const double> values, const Grid& grid, double q) {
  if (!(q >= 1.0)) throw InvalidArgument("lp_norm: q must be >= 1");
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
  }
  const double h = grid.cell_volume();
  const double s = pairwise_sum(values.size(), [&](std::size_t i) { return std::pow(std::fabs(values[i]), q); });
  return std::pow(h * s, 1.0 / q);
}

double lp_norm(const ScalarField& f, double q) { return lp_norm(f.values(), f.grid(), q); }

namespace {
template <class Field>
double pointwise_norm(const Field& f, double q, const Grid& g) {
  std::vector<double> mag(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) {
    if constexpr (std::is_same_v<Field, VectorField>) {
      mag[n] = f.magnitude(n);
    } else {
      mag[n] = std::sqrt(f.frobenius2(n));
    }
  }
  return lp_norm(mag, g, q);
}
}  // namespace

double lp_norm(const VectorField& u, double q) { return pointwise_norm(u, q, u.grid()); }
double lp_norm(const SymTensorField& t, double q) { return pointwise_norm(t, q, t.grid()); }
double lp_norm(const TensorField& t, double q) { return pointwise_norm(t, q, t.grid()); }

double h_seminorm(const SpectralVector& u, int order) {
  if (order < 0 || order > 2) throw InvalidArgument("h_seminorm: order must be 0, 1 or 2");
  const Grid& g = u.grid();
  std::vector<double> w(g.size());
  for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
    const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    const double weight = order == 0 ? 1.0 : (order == 1 ? k2 : k2 * k2);
    w[idx] = (resolved || order == 0) ? weight * u.mode_energy(idx) : 0.0;
  });
  return std::sqrt(pairwise_sum(w));
}

double h_seminorm(const VectorField& u, int order) { return h_seminorm(to_spectral(u), order); }

double spectral_energy(const SpectralVector& u) {
  return pairwise_sum(u.size(), [&](std::size_t i) { return u.mode_energy(i); });
}

double spectral_energy(const SpectralField& f) {
  return pairwise_sum(f.size(), [&](std::size_t i) { return std::norm(f[i]); });
}

double inner_product(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  const double h = a.grid().cell_volume();
  return h * pairwise_sum(a.grid().size(), [&](std::size_t n) {
           double s = 0.0;
           for (int c = 0; c < a.components(); ++c) s += a.component(c)[n] * b.component(c)[n];
           return s;
         });
}

double inner_product(const SpectralVector& a, const SpectralVector& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  return pairwise_sum(a.size(), [&](std::size_t n) {
    double s = 0.0;
    for (int c = 0; c < a.components(); ++c) s += (std::conj(a.component(c)[n]) * b.component(c)[n]).real();
    return s;
  });
}

}  // namespace pxflow
