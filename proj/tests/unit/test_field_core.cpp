#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "oracles.hpp"
#include "pxflow/checkpoint.hpp"
#include "pxflow/error.hpp"
#include "pxflow/spectral.hpp"

using namespace pxflow;
using oracle::Vec3;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double max_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    for (std::size_t i = 0; i < a.grid().size(); ++i) {
      m = std::max(m, std::fabs(a.component(c)[i] - b.component(c)[i]));
    }
  }
  return m;
}

double max_diff(const SpectralVector& a, const SpectralVector& b) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.component(c)[i] - b.component(c)[i]));
  }
  return m;
}

double max_coeff(const SpectralVector& a) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    for (auto z : a.component(c)) m = std::max(m, std::abs(z));
  }
  return m;
}

}  // namespace

TEST_CASE("grid descriptor validation") {
  CHECK_THROWS_AS(Grid::cube(2, 6, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid::cube(2, 12, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid::cube(4, 8, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid::cube(3, 8, -1.0), InvalidArgument);
  const Grid g = Grid::cube(3, 16, 2.0);
  CHECK(g.size() == 4096);
  CHECK(g.spacing(1) == doctest::Approx(0.125));
  CHECK(g.wavenumber(0, 1) == doctest::Approx(kPi));
  CHECK(g.wavenumber(0, 15) == doctest::Approx(-kPi));
  CHECK(g.wavenumber(0, 8) == 0.0);
}

TEST_CASE("transform of zero and of a single harmonic") {
  const Grid g = Grid::cube(2, 16, 3.0);
  VectorField zero(g);
  const auto z = to_spectral(zero);
  CHECK(max_coeff(z) == 0.0);

  const auto u = oracle::sample_vector(g, [&](const Vec3& x) { return Vec3{std::cos(2 * kPi * x[0] / 3.0), 0, 0}; });
  const auto uh = to_spectral(u);
  int nonzero = 0;
  for (std::size_t m = 0; m < g.size(); ++m) {
    if (std::abs(uh.component(0)[m]) > 1e-12) {
      ++nonzero;
      const auto mode = oracle::mode_of(g, m);
      CHECK(std::abs(mode[0]) == 1);
      CHECK(mode[1] == 0);
    }
    CHECK(std::abs(uh.component(1)[m]) < 1e-14);
  }
  CHECK(nonzero == 2);
}

TEST_CASE("transform matches the direct unitary DFT") {
  for (int dim : {2, 3}) {
    Grid g = Grid::cube(dim, 8, 2.5);
    if (dim == 2) g.length[1] = 4.0;
    const auto f = oracle::random_trig(g, 17 + dim, 3);
    const auto ref = oracle::direct_dft(g, f);
    const auto fh = to_spectral(oracle::to_scalar(g, f));
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t m = 0; m < g.size(); ++m) {
      err = std::max(err, std::abs(fh[m] - ref[m]));
      scale = std::max(scale, std::abs(ref[m]));
    }
    CHECK(err <= 1e-12 * scale);
  }
}

TEST_CASE("round trip and Parseval on random fields") {
  for (int dim : {2, 3}) {
    const Grid g = Grid::cube(dim, dim == 2 ? 32 : 16, 5.0);
    const auto u = oracle::random_vector(g, 3, 5);
    const auto back = to_physical(to_spectral(u));
    CHECK(max_diff(u, back) <= 1e-12 * u.max_magnitude());

    const auto f = oracle::random_trig(g, 11, 6);
    const auto fh = to_spectral(oracle::to_scalar(g, f));
    const double phys = std::pow(oracle::lq_norm(f, g.cell_volume(), 2.0), 2);
    double spec = 0.0;
    for (auto c : fh.coeffs()) spec += std::norm(c);
    CHECK(std::fabs(phys - spec) <= 1e-10 * phys);
    CHECK(spectral_energy(fh) == doctest::Approx(phys).epsilon(1e-10));
  }
}

TEST_CASE("gradient and symmetric gradient") {
  const double L = 2.0;
  const Grid g = Grid::cube(2, 16, L);

  VectorField c(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    c.component(0)[i] = 1.5;
    c.component(1)[i] = -0.5;
  }
  const auto Dc = symmetric_gradient(c);
  for (int i = 0; i < 2; ++i) {
    for (int j = i; j < 2; ++j) CHECK(max_abs(Dc.component(i, j)) < 1e-14);
  }

  const auto shear = oracle::sample_vector(g, [&](const Vec3& x) { return Vec3{std::sin(2 * kPi * x[1] / L), 0, 0}; });
  const auto D = symmetric_gradient(shear);
  const auto expected = oracle::sample(g, [&](const Vec3& x) { return kPi / L * std::cos(2 * kPi * x[1] / L); });
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::fabs(D.component(0, 1)[i] - expected[i]));
  CHECK(err < 1e-12);
  CHECK(max_abs(D.component(0, 0)) < 1e-12);
  CHECK(max_abs(D.component(1, 1)) < 1e-12);

  // u = grad phi, phi = sin(2 pi x / L) cos(2 pi y / L): Hessian is symmetric.
  const double k = 2 * kPi / L;
  const auto grad_phi = oracle::sample_vector(g, [&](const Vec3& x) {
    return Vec3{k * std::cos(k * x[0]) * std::cos(k * x[1]), -k * std::sin(k * x[0]) * std::sin(k * x[1]), 0};
  });
  const auto G = gradient(grad_phi);
  const auto S = symmetric_gradient(grad_phi);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double e = 0.0;
      for (std::size_t n = 0; n < g.size(); ++n) e = std::max(e, std::fabs(G.component(i, j)[n] - S.component(i, j)[n]));
      CHECK(e < 1e-12);
    }
  }
}

TEST_CASE("divergence operators") {
  const Grid g = Grid::cube(3, 16, 2 * kPi);
  SymTensorField T(g);
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      for (double& v : T.component(i, j)) v = 0.3 * (i + 1) - 0.7 * j;
    }
  }
  const auto dT = divergence(T);
  for (int c = 0; c < 3; ++c) CHECK(max_abs(dT.component(c)) < 1e-13);

  const auto u = to_physical(leray_project(to_spectral(oracle::random_vector(g, 5, 3))));
  CHECK(max_abs(divergence_scalar(u).values()) <= 1e-12);

  // div Du = 1/2 Lap u for solenoidal single harmonics.
  const auto tg = oracle::sample_vector(g, [&](const Vec3& x) { return oracle::taylor_green(g, 1.0, x); });
  const auto div_D = divergence(symmetric_gradient(tg));
  const double k2 = 3.0;
  for (int c = 0; c < 3; ++c) {
    double e = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) e = std::max(e, std::fabs(div_D.component(c)[n] + 0.5 * k2 * tg.component(c)[n]));
    CHECK(e < 1e-12);
  }
}

TEST_CASE("Leray projector properties") {
  const Grid g = Grid::cube(3, 16, 3.0);
  auto uh = to_spectral(oracle::random_vector(g, 9, 4));
  uh.mean_zero = true;
  const auto P = leray_project(uh);
  const auto PP = leray_project(P);
  const double scale = max_coeff(P);
  CHECK(max_diff(P, PP) <= 1e-12 * scale);
  CHECK(divergence_bound(P) <= 1e-12 * scale * 100);
  for (int c = 0; c < 3; ++c) CHECK(std::abs(P.component(c)[0]) == 0.0);

  // Self-adjoint: <P a, b> = <a, P b>.
  auto bh = to_spectral(oracle::random_vector(g, 10, 4));
  bh.mean_zero = true;
  const double lhs = inner_product(leray_project(uh), bh);
  const double rhs = inner_product(uh, leray_project(bh));
  CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::fabs(lhs) + 1e-12);

  // Annihilates gradients, fixes solenoidal fields.
  const double k = 2 * kPi / 3.0;
  const auto grad = oracle::sample_vector(g, [&](const Vec3& x) {
    return Vec3{k * std::cos(k * x[0]) * std::sin(2 * k * x[2]), 0.0, 2 * k * std::sin(k * x[0]) * std::cos(2 * k * x[2])};
  });
  CHECK(max_coeff(leray_project(to_spectral(grad))) <= 1e-12 * max_coeff(to_spectral(grad)));
  const auto tg = to_spectral(oracle::sample_vector(g, [&](const Vec3& x) { return oracle::taylor_green(g, 1.0, x); }));
  CHECK(max_diff(leray_project(tg), tg) <= 1e-12 * max_coeff(tg));

  // Differentiation commutes with projection on solenoidal input.
  const auto a = gradient(leray_project(P));
  const auto b = gradient(P);
  double e = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (std::size_t n = 0; n < g.size(); ++n) e = std::max(e, std::fabs(a.component(i, j)[n] - b.component(i, j)[n]));
    }
  }
  CHECK(e <= 1e-11);
}

TEST_CASE("norms and seminorms") {
  const double L = 1.5;
  for (int dim : {2, 3}) {
    const Grid g = Grid::cube(dim, 16, L);
    CHECK(lp_norm(ScalarField(g), 2.0) == 0.0);
    const auto s = oracle::to_scalar(g, oracle::sample(g, [&](const Vec3& x) { return std::sin(2 * kPi * x[0] / L); }));
    CHECK(lp_norm(s, 2.0) == doctest::Approx(std::sqrt(std::pow(L, dim) / 2)).epsilon(1e-12));
    CHECK(lp_norm(s, INFINITY) == doctest::Approx(1.0));
    const auto f = oracle::random_trig(g, 4, 3);
    for (double q : {1.0, 1.5, 3.0, 4.5}) {
      CHECK(lp_norm(oracle::to_scalar(g, f), q) == doctest::Approx(oracle::lq_norm(f, g.cell_volume(), q)).epsilon(1e-12));
    }
  }
  const Grid g = Grid::cube(2, 16, 2 * kPi);
  const auto tg = oracle::sample_vector(g, [&](const Vec3& x) { return oracle::taylor_green(g, 1.0, x); });
  // |xi|^2 = 2 for every active mode.
  CHECK(h_seminorm(tg, 1) == doctest::Approx(std::sqrt(2.0) * lp_norm(tg, 2.0)).epsilon(1e-12));
  CHECK(h_seminorm(tg, 2) == doctest::Approx(2.0 * lp_norm(tg, 2.0)).epsilon(1e-12));
}

TEST_CASE("Korn identity for solenoidal fields and inequality in general") {
  for (int dim : {2, 3}) {
    const Grid g = Grid::cube(dim, 16, 4.0);
    const auto raw = to_spectral(oracle::random_vector(g, 21 + dim, 4));
    const auto u = leray_project(raw);
    const double grad2 = std::pow(h_seminorm(u, 1), 2);
    const double D2 = std::pow(lp_norm(symmetric_gradient(u), 2.0), 2);
    CHECK(std::fabs(grad2 - 2.0 * D2) <= 1e-10 * grad2);
    CHECK(lp_norm(symmetric_gradient(raw), 2.0) <= h_seminorm(raw, 1) * (1 + 1e-12));
  }
}

TEST_CASE("checkpoint round trip and byte layout") {
  Grid g = Grid::cube(2, 8, 3.0);
  g.length[1] = 5.0;
  const auto u = oracle::random_vector(g, 2, 2);
  const auto path = (std::filesystem::temp_directory_path() / "pxflow_ck_test.pxck").string();
  write_velocity_checkpoint(path, u, 1.25);
  double t = 0.0;
  const auto back = read_velocity_checkpoint(path, &t);
  CHECK(t == 1.25);
  CHECK(back.grid() == g);
  CHECK(max_diff(u, back) == 0.0);

  std::ifstream is(path, std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  CHECK(std::string(bytes.begin(), bytes.begin() + 8) == "PXFLCKPT");
  // magic 8, version 4, dim 4, nodes d x 4, lengths d x 8, time 8, count 4, then data.
  const std::size_t header = 8 + 4 + 4 + 2 * 4 + 2 * 8 + 8 + 4;
  CHECK(bytes.size() == header + 2 * g.size() * 8);
  double first = 0.0;
  std::memcpy(&first, bytes.data() + header, 8);
  CHECK(first == u.component(0)[0]);

  bytes[0] = 'X';
  {
    std::ofstream os(path, std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  CHECK_THROWS_AS(read_velocity_checkpoint(path), Error);
  std::filesystem::remove(path);
}
