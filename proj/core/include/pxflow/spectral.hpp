#pragma once

#include <span>

#include "pxflow/fields.hpp"

namespace pxflow {

// Transforms. All use the unitary convention documented on SpectralField.

SpectralField to_spectral(const ScalarField& f);
ScalarField to_physical(const SpectralField& f);
SpectralVector to_spectral(const VectorField& u);
VectorField to_physical(const SpectralVector& u);

/// Raw transforms on one component; `out` may not alias `in`.
void forward_transform(const Grid& grid, std::span<const double> in, std::span<Complex> out);
void inverse_transform(const Grid& grid, std::span<const Complex> in, std::span<double> out);

// Spectral differentiation (multiplication by i xi, Nyquist slots map to zero).

/// Entry (i, j) = d_j u_i.
TensorField gradient(const SpectralVector& u);
TensorField gradient(const VectorField& u);
/// Du = (grad u + grad u^T) / 2.
SymTensorField symmetric_gradient(const SpectralVector& u);
SymTensorField symmetric_gradient(const VectorField& u);
SymTensorField symmetric_part(const TensorField& t);

/// Row-wise divergence, (div T)_i = sum_j d_j T_ij.
SpectralVector divergence_spectral(const SymTensorField& t);
VectorField divergence(const SymTensorField& t);
VectorField divergence(const TensorField& t);

SpectralField divergence_scalar_spectral(const SpectralVector& u);
ScalarField divergence_scalar(const SpectralVector& u);
ScalarField divergence_scalar(const VectorField& u);

/// Upper bound on max |div u| from the l1 norm of the spectral divergence;
/// costs no transform.
double divergence_bound(const SpectralVector& u);

/// Helmholtz-Leray projection onto resolved divergence-free fields:
/// u_hat -> u_hat - xi (xi . u_hat) / |xi|^2. Nyquist slots are zeroed; the
/// mean mode is zeroed when `mean_zero` is set on the input.
SpectralVector leray_project(const SpectralVector& u);
VectorField leray_project(const VectorField& u);
void leray_project_inplace(SpectralVector& u);

// Norms. Quadrature is the rectangle rule on the periodic grid.

double lp_norm(std::span<const double> values, const Grid& grid, double q);
double lp_norm(const ScalarField& f, double q);
/// Pointwise Euclidean magnitude, then L^q.
double lp_norm(const VectorField& u, double q);
/// Pointwise Frobenius norm, then L^q.
double lp_norm(const SymTensorField& t, double q);
double lp_norm(const TensorField& t, double q);

/// (sum |xi|^{2k} |u_hat|^2)^{1/2}, k in {0, 1, 2}.
double h_seminorm(const SpectralVector& u, int order);
double h_seminorm(const VectorField& u, int order);
/// sum |u_hat|^2 = ||u||_2^2.
double spectral_energy(const SpectralVector& u);
double spectral_energy(const SpectralField& f);

/// Rectangle-rule inner product of two vector fields.
double inner_product(const VectorField& a, const VectorField& b);
double inner_product(const SpectralVector& a, const SpectralVector& b);

}  // namespace pxflow
