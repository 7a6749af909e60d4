#pragma once

// Reference computations for the test suites. Nothing here calls into the
// transforms, operators or norms under test; they are written from the
// defining formulas with plain loops.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "pxflow/fields.hpp"
#include "pxflow/grid.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

/// Direct O(N^2) unitary DFT: c(xi) = sqrt(V)/N * sum f(x) exp(-i xi.x).
std::vector<cplx> direct_dft(const pxflow::Grid& g, const std::vector<double>& f);

/// Signed integer mode numbers at a flat spectral index.
std::array<int, 3> mode_of(const pxflow::Grid& g, std::size_t idx);
/// Wavevector at a flat spectral index, with Nyquist entries kept (not zeroed).
Vec3 wavevector(const pxflow::Grid& g, std::size_t idx);

/// Rectangle-rule integral of |f|^q, then the q-th root.
double lq_norm(const std::vector<double>& f, double cell_volume, double q);

/// Sample an analytic scalar function on the grid nodes x = i * dx.
std::vector<double> sample(const pxflow::Grid& g, const std::function<double(const Vec3&)>& fn);
pxflow::VectorField sample_vector(const pxflow::Grid& g, const std::function<Vec3(const Vec3&)>& fn);
pxflow::ScalarField to_scalar(const pxflow::Grid& g, const std::vector<double>& v);

/// Deterministic random trigonometric polynomial with modes |m_i| <= kmax.
std::vector<double> random_trig(const pxflow::Grid& g, std::uint64_t seed, int kmax);
pxflow::VectorField random_vector(const pxflow::Grid& g, std::uint64_t seed, int kmax);

/// Taylor-Green vortex on the grid box: A (sin ax cos by [cos cz], -(a/b) cos ax sin by [cos cz], 0).
Vec3 taylor_green(const pxflow::Grid& g, double amplitude, const Vec3& x);
/// 2D closed-form decay for d/dt u = 1/2 Lap u: exp(-(a^2 + b^2) t / 2).
double taylor_green_decay_2d(const pxflow::Grid& g, double t);
/// Classical 2D pressure A^2/4 (cos 2ax + (a/b)^2 cos 2by) at t with the viscous factor; zero mean.
double taylor_green_pressure_2d(const pxflow::Grid& g, double amplitude, double t, const Vec3& x);

/// Direct-sum heat semigroup norms: sum exp(-|xi|^2 t) |xi|^{2k} |c(xi)|^2 over modes, sqrt.
double heat_norm(const pxflow::Grid& g, const std::vector<std::vector<cplx>>& c0, double t, int order);

/// Ordinary least squares of log v on log(1+t); returns (exponent, prefactor, r2).
std::array<double, 3> loglog_fit(const std::vector<double>& t, const std::vector<double>& v);

/// Radial-log profile p_inf + c / log(e + r) (unblended).
double radial_log(double p_inf, double c, double r);
/// Compact bump base + amp * exp(1 - 1/(1 - s^2)), s = r / width.
double bump(double base, double amp, double width, double r);

/// Minimum-image distance on the periodic box.
double torus_distance(const pxflow::Grid& g, const Vec3& a, const Vec3& b);

/// Frobenius-norm stress law at a single symmetric 3x3 tensor, written out by hand.
std::array<std::array<double, 3>, 3> stress_3x3(const std::array<std::array<double, 3>, 3>& D, double p);

}  // namespace oracle
