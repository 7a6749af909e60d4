#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pxflow/constitutive.hpp"
#include "pxflow/spectral.hpp"

using namespace pxflow;
using oracle::Vec3;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFrozenGConstant = 1.0;

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

Mat3 rotation(double a, double b, double c) {
  const Mat3 rx{{{1, 0, 0}, {0, std::cos(a), -std::sin(a)}, {0, std::sin(a), std::cos(a)}}};
  const Mat3 ry{{{std::cos(b), 0, std::sin(b)}, {0, 1, 0}, {-std::sin(b), 0, std::cos(b)}}};
  const Mat3 rz{{{std::cos(c), -std::sin(c), 0}, {std::sin(c), std::cos(c), 0}, {0, 0, 1}}};
  auto mul = [](const Mat3& x, const Mat3& y) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r[i][j] += x[i][k] * y[k][j];
    return r;
  };
  return mul(rz, mul(ry, rx));
}

Mat3 conjugate(const Mat3& Q, const Mat3& D) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) r[i][j] += Q[i][k] * D[k][l] * Q[j][l];
  return r;
}

Mat3 random_symmetric(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Mat3 D{};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) D[i][j] = D[j][i] = n(rng);
  return D;
}

VectorField tg2(const Grid& g) {
  return oracle::sample_vector(g, [&](const Vec3& x) { return oracle::taylor_green(g, 1.0, x); });
}

}  // namespace

TEST_CASE("stress examples") {
  const Grid g = Grid::cube(2, 8, 1.0);
  const auto p = build_exponent_field(BumpExponent{2.2, 0.4, 0.4, std::nullopt}, g);
  const SymTensorField zero(g);
  const auto s0 = stress(zero, p);
  for (int c = 0; c < 3; ++c) {
    CHECK(max_abs(s0.S.packed(c)) == 0.0);
    CHECK(max_abs(s0.G.packed(c)) == 0.0);
  }
  for (double v : s0.dbar.values()) CHECK(v == 1.0);

  const auto D = symmetric_gradient(oracle::random_vector(g, 7, 2));
  const auto s2 = stress(D, build_exponent_field(ConstantExponent{2.0}, g));
  for (int c = 0; c < 3; ++c) {
    for (std::size_t n = 0; n < g.size(); ++n) {
      CHECK(s2.S.packed(c)[n] == D.packed(c)[n]);
      CHECK(s2.G.packed(c)[n] == 0.0);
    }
  }

  // |D| = 1 at p = 3 gives S = sqrt(2) D.
  const Mat3 unit{{{0.6, 0.0, 0.0}, {0.0, -0.6, 0.0}, {0.0, 0.0, std::sqrt(1 - 0.72)}}};
  const Mat3 S = node_stress(unit, 3.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(S[i][j] == doctest::Approx(std::sqrt(2.0) * unit[i][j]).epsilon(1e-15));
  CHECK(remainder_factor(1.0, 3.0) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
  CHECK(viscosity_factor(1.0, 3.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("remainder factor has no cancellation for small strain") {
  for (double s2 : {1e-30, 1e-20, 1e-12}) {
    const double expected = 0.2 * s2;  // ((p - 2) / 2) |D|^2 at leading order, p = 2.4
    CHECK(remainder_factor(s2, 2.4) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("splitting identity and dbar") {
  const Grid g = Grid::cube(3, 16, 3.0);
  const auto p = build_exponent_field(RadialLogExponent{2.3, 0.5, std::nullopt}, g);
  const auto D = symmetric_gradient(oracle::random_vector(g, 8, 3));
  const auto s = stress(D, p);
  double smax = 0.0;
  for (int c = 0; c < 6; ++c) smax = std::max(smax, max_abs(s.S.packed(c)));
  for (int c = 0; c < 6; ++c) {
    for (std::size_t n = 0; n < g.size(); ++n) {
      CHECK(std::fabs(s.S.packed(c)[n] - D.packed(c)[n] - s.G.packed(c)[n]) <= 1e-12 * smax);
    }
  }
  for (std::size_t n = 0; n < g.size(); ++n) {
    CHECK(s.dbar[n] >= 1.0);
    CHECK(s.dbar[n] == doctest::Approx(std::sqrt(1.0 + D.frobenius2(n))).epsilon(1e-14));
  }
  SymTensorField G;
  remainder_stress(D, p, G);
  for (int c = 0; c < 6; ++c) {
    for (std::size_t n = 0; n < g.size(); ++n) CHECK(G.packed(c)[n] == s.G.packed(c)[n]);
  }
}

TEST_CASE("node stress matches the hand-written law and is frame indifferent") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  std::uniform_real_distribution<double> expo(1.5, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat3 D = random_symmetric(rng, trial % 2 ? 0.1 : 3.0);
    const double p = expo(rng);
    const Mat3 S = node_stress(D, p);
    const auto ref = oracle::stress_3x3(D, p);
    const Mat3 Q = rotation(angle(rng), angle(rng), angle(rng));
    const Mat3 SQ = node_stress(conjugate(Q, D), p);
    const Mat3 QS = conjugate(Q, S);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(S[i][j] == doctest::Approx(ref[i][j]).epsilon(1e-13));
        CHECK(std::fabs(SQ[i][j] - QS[i][j]) <= 1e-12 * (1.0 + std::fabs(QS[i][j])));
      }
    }
  }
}

TEST_CASE("energies") {
  const Grid g = Grid::cube(2, 32, 2 * kPi);
  const auto p = build_exponent_field(BumpExponent{2.2, 0.4, 3.0, std::nullopt}, g);
  const auto zero = energies(VectorField(g), p);
  CHECK(zero.I_p == 0.0);
  CHECK(zero.J_p == 0.0);

  const auto u = oracle::random_vector(g, 12, 3);
  const auto e2 = energies(u, build_exponent_field(ConstantExponent{2.0}, g));
  const auto D = symmetric_gradient(u);
  CHECK(e2.I_p == doctest::Approx(std::pow(lp_norm(D, 2.0), 2)).epsilon(1e-12));
  // ||grad Du||^2 as a spectral sum: sum_k sum_ij |xi_k D_ij|^2 = |xi|^2 |D_hat|^2.
  double grad_D = 0.0;
  const auto uh = to_spectral(u);
  for (std::size_t m = 0; m < g.size(); ++m) {
    const Vec3 xi = oracle::wavevector(g, m);
    const double k2 = xi[0] * xi[0] + xi[1] * xi[1];
    const auto mode = oracle::mode_of(g, m);
    if (2 * std::abs(mode[0]) == g.nodes[0] || 2 * std::abs(mode[1]) == g.nodes[1]) continue;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const auto dij = 0.5 * (xi[j] * uh.component(i)[m] + xi[i] * uh.component(j)[m]);
        grad_D += k2 * std::norm(dij);
      }
    }
  }
  CHECK(e2.J_p == doctest::Approx(grad_D).epsilon(1e-12));

  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto v = oracle::random_vector(g, seed, 4);
    CHECK(energies(v, p).I_p >= std::pow(lp_norm(symmetric_gradient(v), 2.0), 2));
  }
}

TEST_CASE("energies agree with a fine quadrature of the analytic integrands") {
  // Taylor-Green on the 2 pi box: D11 = -D22 = cos x cos y, D12 = 0,
  // |grad D|^2 = 2 (sin^2 x cos^2 y + cos^2 x sin^2 y).
  const Grid fine = Grid::cube(2, 512, 2 * kPi);
  const Vec3 c = fine.center();
  double I = 0.0;
  double J = 0.0;
  const double dA = fine.cell_volume();
  for (int i = 0; i < 512; ++i) {
    for (int j = 0; j < 512; ++j) {
      const Vec3 x{i * fine.spacing(0), j * fine.spacing(1), 0.0};
      const double p = oracle::bump(2.2, 0.4, 3.0, oracle::torus_distance(fine, x, c));
      const double d2 = 2.0 * std::pow(std::cos(x[0]) * std::cos(x[1]), 2);
      const double gd2 = 2.0 * (std::pow(std::sin(x[0]) * std::cos(x[1]), 2) + std::pow(std::cos(x[0]) * std::sin(x[1]), 2));
      const double w = std::pow(1.0 + d2, 0.5 * (p - 2.0));
      I += w * d2 * dA;
      J += w * gd2 * dA;
    }
  }
  const Grid g = Grid::cube(2, 128, 2 * kPi);
  const auto e = energies(tg2(g), build_exponent_field(BumpExponent{2.2, 0.4, 3.0, std::nullopt}, g));
  CHECK(e.I_p == doctest::Approx(I).epsilon(1e-8));
  CHECK(e.J_p == doctest::Approx(J).epsilon(1e-8));
}

TEST_CASE("G-mass case tags") {
  const auto c24 = g_mass_case(2.4);
  CHECK(c24.tag == GMassCase::case2);
  CHECK_FALSE(c24.out_of_hypothesis);
  REQUIRE(c24.alpha.has_value());
  CHECK(*c24.alpha == doctest::Approx(1.15));
  CHECK(*c24.beta == doctest::Approx(0.25));
  const auto c3 = g_mass_case(3.0);
  CHECK(c3.tag == GMassCase::case1);
  CHECK_FALSE(c3.alpha.has_value());
  CHECK(g_mass_case(2.2).tag == GMassCase::case2);
  CHECK_FALSE(g_mass_case(2.2).out_of_hypothesis);
  CHECK(g_mass_case(2.0).out_of_hypothesis);
  CHECK(std::string(to_string(GMassCase::case2)) == "case2");
}

TEST_CASE("G-mass report") {
  const Grid g = Grid::cube(2, 32, 2 * kPi);
  const auto p = build_exponent_field(BumpExponent{2.4, 0.2, 3.0, std::nullopt}, g);
  const auto z = g_mass_report(VectorField(g), p);
  CHECK(z.g_mass == 0.0);
  CHECK(z.ingredients.I_p == 0.0);
  CHECK(z.ingredients.grad_power == 0.0);
  CHECK(z.ingredients.l2 == 0.0);
  CHECK(z.ingredients.h2 == 0.0);
  CHECK(z.ingredients.interpolation == 0.0);

  const auto u = tg2(g);
  CHECK(g_mass_report(u, build_exponent_field(ConstantExponent{2.0}, g)).g_mass == 0.0);
  const auto r = g_mass_report(u, p);
  CHECK(r.info.tag == GMassCase::case2);
  CHECK(*r.info.alpha == doctest::Approx(1.15));
  CHECK(r.g_mass > 0.0);
  CHECK(r.ingredients.l2 == doctest::Approx(lp_norm(u, 2.0)).epsilon(1e-12));
  CHECK(r.ingredients.h2 == doctest::Approx(h_seminorm(u, 2)).epsilon(1e-12));
  CHECK(r.ingredients.interpolation ==
        doctest::Approx(std::pow(r.ingredients.l2, 1.15) * std::pow(r.ingredients.h2, 0.25)).epsilon(1e-12));
  // grad_power = integral |grad u|^{p^- - 1}.
  const auto G = gradient(u);
  double gp = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) gp += std::pow(G.frobenius2(n), 0.5 * 1.4) * g.cell_volume();
  CHECK(r.ingredients.grad_power == doctest::Approx(gp).epsilon(1e-12));
}

TEST_CASE("pointwise G bound stays under the frozen constant") {
  const Grid g = Grid::cube(3, 16, 2.0);
  for (double scale : {1e-4, 1e-1, 1.0, 10.0, 1e3}) {
    auto u = oracle::random_vector(g, 99, 3);
    for (int c = 0; c < 3; ++c) {
      for (double& v : u.component(c)) v *= scale;
    }
    const auto D = symmetric_gradient(u);
    for (const auto& spec : {ExponentSpec{BumpExponent{2.2, 0.4, 0.9, std::nullopt}}, ExponentSpec{ConstantExponent{3.0}},
                             ExponentSpec{ConstantExponent{4.0}}}) {
      CHECK(pointwise_g_constant(D, build_exponent_field(spec, g)) <= kFrozenGConstant);
    }
  }
}
