#include <cmath>
#include <numbers>
#include <random>

#include "pxflow/checkpoint.hpp"
#include "pxflow/error.hpp"
#include "pxflow/solver.hpp"
#include "pxflow/spectral.hpp"

namespace pxflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

VectorField taylor_green(const TaylorGreenInit& tg, const Grid& g) {
  VectorField u(g);
  const double a = kTwoPi / g.length[0];
  const double b = kTwoPi / g.length[1];
  const double c = g.dim == 3 ? kTwoPi / g.length[2] : 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const Point x = g.coordinate(n);
    const double z = g.dim == 3 ? std::cos(c * x[2]) : 1.0;
    u.component(0)[n] = tg.amplitude * std::sin(a * x[0]) * std::cos(b * x[1]) * z;
    u.component(1)[n] = -tg.amplitude * (a / b) * std::cos(a * x[0]) * std::sin(b * x[1]) * z;
  }
  return u;
}

VectorField random_spectrum(const RandomSpectrumInit& rs, const Grid& g, std::uint64_t seed) {
  if (!(rs.k0 > 0.0)) throw InvalidArgument("random spectrum: k0 must be positive");
  VectorField w(g);
  w.mean_zero = true;
  if (rs.amplitude == 0.0) return w;
  // Unitary coefficients of white noise with variance s2 carry s2 * dx^d per
  // component; projection keeps (d-1)/d of it.
  const double sigma = rs.amplitude / std::sqrt((g.dim - 1) * g.cell_volume());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (int c = 0; c < g.dim; ++c) {
    for (double& v : w.component(c)) v = normal(rng);
  }
  SpectralVector h = to_spectral(w);
  h.mean_zero = true;
  for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool) {
    const double k = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    const double env = (rs.slope == 0.0 ? 1.0 : std::pow(k, rs.slope)) * std::exp(-(k / rs.k0) * (k / rs.k0));
    for (int c = 0; c < g.dim; ++c) h.component(c)[idx] *= env;
  });
  leray_project_inplace(h);
  return to_physical(h);
}

}  // namespace

VectorField make_initial_data(const InitialSpec& spec, const Grid& grid, std::uint64_t seed) {
  grid.validate();
  VectorField u;
  if (const auto* tg = std::get_if<TaylorGreenInit>(&spec)) {
    u = taylor_green(*tg, grid);
  } else if (const auto* rs = std::get_if<RandomSpectrumInit>(&spec)) {
    u = random_spectrum(*rs, grid, seed);
  } else {
    const auto& ck = std::get<CheckpointInit>(spec);
    u = read_velocity_checkpoint(ck.path);
    require_same_grid(u.grid(), grid, "checkpoint initial data");
  }
  SpectralVector h = to_spectral(u);
  h.mean_zero = true;
  leray_project_inplace(h);
  VectorField out = to_physical(h);
  out.mean_zero = true;
  return out;
}

VectorField make_initial_data(const SimConfig& cfg) {
  VectorField u = make_initial_data(cfg.initial, cfg.grid, cfg.seed);
  if (cfg.small_data_scale != 1.0) {
    for (int c = 0; c < u.components(); ++c) {
      for (double& v : u.component(c)) v *= cfg.small_data_scale;
    }
  }
  if (cfg.small_data.enabled) {
    const double h1 = h1_norm(to_spectral(u));
    if (h1 > cfg.small_data.h1_cap) {
      throw SmallDataViolation("initial H^1 norm " + std::to_string(h1) + " exceeds small-data cap " +
                               std::to_string(cfg.small_data.h1_cap));
    }
  }
  return u;
}

double h1_norm(const SpectralVector& u) {
  const double a = h_seminorm(u, 0);
  const double b = h_seminorm(u, 1);
  return std::sqrt(a * a + b * b);
}

}  // namespace pxflow
