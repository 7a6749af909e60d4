#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pxflow/error.hpp"
#include "pxflow/run.hpp"
#include "pxflow/solver.hpp"
#include "pxflow/spectral.hpp"

using namespace pxflow;
using oracle::Vec3;

namespace {

constexpr double kPi = std::numbers::pi;

SimConfig tg_config(int dim, int n, double dt, double t_end) {
  SimConfig cfg;
  cfg.grid = Grid::cube(dim, n, 2 * kPi);
  cfg.initial = TaylorGreenInit{1.0};
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.record_every = 1000000;
  return cfg;
}

double rel_l2(const VectorField& a, const VectorField& b) {
  double e = 0.0, r = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    for (std::size_t n = 0; n < a.grid().size(); ++n) {
      const double d = a.component(c)[n] - b.component(c)[n];
      e += d * d;
      r += b.component(c)[n] * b.component(c)[n];
    }
  }
  return std::sqrt(e / r);
}

VectorField advance(SimConfig cfg) {
  const auto u0 = make_initial_data(cfg);
  Solver s(cfg, build_exponent_field(cfg.exponent, cfg.grid), u0);
  for (long i = 0; i < s.total_steps(); ++i) s.step();
  return s.velocity();
}

}  // namespace

TEST_CASE("initial data") {
  const Grid g = Grid::cube(2, 32, 2 * kPi);
  const auto tg = make_initial_data(TaylorGreenInit{1.0}, g, 0);
  double dmax = 0.0;
  for (double v : divergence_scalar(tg).values()) dmax = std::max(dmax, std::fabs(v));
  CHECK(dmax <= 1e-12);
  const auto ref = oracle::sample_vector(g, [&](const Vec3& x) { return oracle::taylor_green(g, 1.0, x); });
  CHECK(rel_l2(tg, ref) < 1e-14);

  const auto z = make_initial_data(RandomSpectrumInit{0.0, std::sqrt(2.0), 0.0}, g, 5);
  CHECK(z.max_magnitude() == 0.0);

  Grid box = Grid::cube(3, 16, 4.0);
  const auto a = make_initial_data(RandomSpectrumInit{}, box, 3);
  const auto b = make_initial_data(RandomSpectrumInit{}, box, 3);
  CHECK(rel_l2(a, b) == 0.0);
  const auto ah = to_spectral(a);
  CHECK(divergence_bound(ah) <= 1e-12 * a.max_magnitude());
  for (int c = 0; c < 3; ++c) CHECK(std::abs(ah.component(c)[0]) < 1e-14);
}

TEST_CASE("random spectrum plateau matches its target amplitude") {
  const Grid g = Grid::cube(2, 64, 64.0);
  const double k0 = std::sqrt(2.0);
  const double amp = 0.7;
  double sum = 0.0;
  int count = 0;
  for (std::uint64_t seed = 1; seed <= 32; ++seed) {
    const auto uh = to_spectral(make_initial_data(RandomSpectrumInit{0.0, k0, amp}, g, seed));
    for (std::size_t m = 1; m < g.size(); ++m) {
      const Vec3 xi = oracle::wavevector(g, m);
      const double k = std::hypot(xi[0], xi[1]);
      if (k <= k0 / 4) {
        sum += std::sqrt(uh.mode_energy(m));
        ++count;
      }
    }
  }
  REQUIRE(count > 32);
  const double mean = sum / count;
  CHECK(mean > amp / 2);
  CHECK(mean < amp * 2);
}

TEST_CASE("small-data cap") {
  SimConfig cfg;
  cfg.grid = Grid::cube(2, 16, 8.0);
  cfg.initial = RandomSpectrumInit{};
  cfg.small_data.enabled = true;
  cfg.small_data.h1_cap = 1e-3;
  CHECK_THROWS_AS(make_initial_data(cfg), SmallDataViolation);
  cfg.small_data_scale = 1e-6;
  CHECK(h1_norm(to_spectral(make_initial_data(cfg))) <= 1e-3);
}

TEST_CASE("rest state is exact") {
  SimConfig cfg = tg_config(2, 16, 0.01, 0.1);
  const Grid g = cfg.grid;
  cfg.exponent = BumpExponent{2.2, 0.4, 2.0, std::nullopt};
  Solver s(cfg, build_exponent_field(cfg.exponent, g), VectorField(g));
  for (int i = 0; i < 10; ++i) s.step();
  CHECK(s.velocity().max_magnitude() == 0.0);
  CHECK(s.state().step == 10);
  CHECK(s.state().t == doctest::Approx(0.1));
}

TEST_CASE("Taylor-Green closed form with imex_heun") {
  const SimConfig cfg = tg_config(2, 64, 1e-3, 1.0);
  const auto u = advance(cfg);
  const Grid& g = cfg.grid;
  const double f = oracle::taylor_green_decay_2d(g, 1.0);
  CHECK(f == doctest::Approx(std::exp(-1.0)));
  const auto ref = oracle::sample_vector(g, [&](const Vec3& x) {
    auto v = oracle::taylor_green(g, 1.0, x);
    for (double& c : v) c *= f;
    return v;
  });
  CHECK(rel_l2(u, ref) <= 1e-6);
}

TEST_CASE("linear mode equals the per-mode exponential") {
  for (int dim : {2, 3}) {
    SimConfig cfg;
    cfg.grid = Grid::cube(dim, 16, 7.0);
    cfg.initial = RandomSpectrumInit{0.0, 2.0, 1.0};
    cfg.linear_only = true;
    cfg.dt = 0.05;
    cfg.t_end = 2.0;
    cfg.exponent = BumpExponent{2.3, 0.3, 2.0, std::nullopt};
    const auto u0 = make_initial_data(cfg);
    const auto u = advance(cfg);
    const auto c0 = to_spectral(u0);
    const auto ch = to_spectral(u);
    double err = 0.0, scale = 0.0;
    for (std::size_t m = 0; m < cfg.grid.size(); ++m) {
      const Vec3 xi = oracle::wavevector(cfg.grid, m);
      const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
      for (int c = 0; c < dim; ++c) {
        const auto exact = std::exp(-0.5 * k2 * 2.0) * c0.component(c)[m];
        err = std::max(err, std::abs(ch.component(c)[m] - exact));
        scale = std::max(scale, std::abs(c0.component(c)[m]));
      }
    }
    CHECK(err <= 1e-12 * scale);
  }
}

TEST_CASE("second-order convergence on a nonlinear Taylor-Green flow") {
  // 3D Taylor-Green is genuinely nonlinear; reference at dt / 16.
  auto run_dt = [](double dt) { return advance(tg_config(3, 16, dt, 0.5)); };
  const auto ref = run_dt(0.05 / 16);
  const double e1 = rel_l2(run_dt(0.05), ref);
  const double e2 = rel_l2(run_dt(0.025), ref);
  const double ratio = e1 / e2;
  MESSAGE("dt-halving error ratio " << ratio);
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);

  SimConfig euler = tg_config(3, 16, 0.05, 0.5);
  euler.integrator = Integrator::imex_euler;
  SimConfig euler2 = euler;
  euler2.dt = 0.025;
  const double r1 = rel_l2(advance(euler), ref) / rel_l2(advance(euler2), ref);
  CHECK(r1 >= 1.7);
  CHECK(r1 <= 2.3);
}

TEST_CASE("divergence, mean mode and energy identity along a variable-p run") {
  SimConfig cfg;
  cfg.grid = Grid::cube(3, 16, 2 * kPi);
  cfg.initial = TaylorGreenInit{1.5};
  cfg.exponent = BumpExponent{2.2, 0.4, 2.5, std::nullopt};
  cfg.dt = 0.01;
  cfg.t_end = 0.5;
  const auto u0 = make_initial_data(cfg);
  Solver s(cfg, build_exponent_field(cfg.exponent, cfg.grid), u0);
  const double e0 = std::pow(h_seminorm(to_spectral(u0), 0), 2);
  double prev = e0;
  for (long i = 0; i < s.total_steps(); ++i) {
    s.step();
    const auto& uh = s.state().u;
    CHECK(divergence_bound(uh) <= 1e-10);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(uh.component(c)[0]) == 0.0);
    const double e = std::pow(h_seminorm(uh, 0), 2);
    CHECK(e < prev);
    prev = e;
    CHECK((e + s.dissipated()) / e0 - 1.0 <= 10 * cfg.dt);
  }
}

TEST_CASE("energy decreases sample to sample for the Newtonian run at dt and dt/2") {
  for (double dt : {0.02, 0.01}) {
    SimConfig cfg;
    cfg.grid = Grid::cube(2, 32, 2 * kPi);
    cfg.initial = RandomSpectrumInit{0.0, 3.0, 1.0};
    cfg.seed = 4;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    cfg.record_every = 5;
    const auto res = run(cfg);
    CHECK(res.report.energy_monotone);
    const auto& r = res.report.records;
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i].norms.l2 < r[i - 1].norms.l2);
    CHECK(res.report.energy.passed);
  }
}

TEST_CASE("blow-up and CFL errors") {
  SimConfig cfg = tg_config(2, 16, 0.5, 50.0);
  cfg.initial = TaylorGreenInit{40.0};
  const auto fast = make_initial_data(cfg);
  CHECK_THROWS_AS(Solver(cfg, build_exponent_field(cfg.exponent, cfg.grid), fast), CflViolation);

  // A stiff explicit remainder (p = 6) starting under the CFL limit.
  cfg.initial = TaylorGreenInit{2.0};
  cfg.dt = 0.09;
  cfg.exponent = ConstantExponent{6.0};
  const auto u0 = make_initial_data(cfg);
  const auto p = build_exponent_field(cfg.exponent, cfg.grid);
  Solver s(cfg, p, u0);
  int warnings = 0;
  s.set_warning_handler([&](const std::string&) { ++warnings; });
  bool blew_up = false;
  try {
    for (long i = 0; i < s.total_steps(); ++i) s.step();
  } catch (const BlowUp& e) {
    blew_up = true;
    CHECK(e.step() > 0);
  }
  CHECK(blew_up);
  CHECK(warnings > 0);

  cfg.cfl = CflPolicy::error;
  Solver strict(cfg, p, u0);
  bool cfl = false;
  try {
    for (long i = 0; i < strict.total_steps(); ++i) strict.step();
  } catch (const CflViolation& e) {
    cfl = true;
    CHECK(e.courant() > 0.5);
  }
  CHECK(cfl);
}

TEST_CASE("default time step") {
  const Grid g = Grid::cube(2, 32, 2 * kPi);
  const auto u = make_initial_data(TaylorGreenInit{4.0}, g, 0);
  CHECK(default_dt(u) == doctest::Approx(0.25 * g.spacing(0) / u.max_magnitude()));
  const auto small = make_initial_data(TaylorGreenInit{0.1}, g, 0);
  CHECK(default_dt(small) == doctest::Approx(0.25 * g.spacing(0)));
}

TEST_CASE("pressure") {
  const Grid g = Grid::cube(2, 32, 2 * kPi);
  const auto p2 = build_exponent_field(ConstantExponent{2.0}, g);
  for (double v : pressure(SpectralVector(g), p2).values()) CHECK(v == 0.0);

  const auto u = make_initial_data(TaylorGreenInit{1.3}, g, 0);
  const auto pi = pressure(to_spectral(u), p2);
  const auto ref = oracle::sample(g, [&](const Vec3& x) { return oracle::taylor_green_pressure_2d(g, 1.3, 0.0, x); });
  double err = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) err = std::max(err, std::fabs(pi[n] - ref[n]));
  CHECK(err <= 1e-10);

  // After evolving, the solver-state overload sees the decayed field.
  SimConfig cfg = tg_config(2, 32, 0.01, 0.5);
  cfg.initial = TaylorGreenInit{1.3};
  Solver s(cfg, p2, u);
  for (long i = 0; i < s.total_steps(); ++i) s.step();
  const auto pt = pressure(s);
  const auto ref_t = oracle::sample(g, [&](const Vec3& x) { return oracle::taylor_green_pressure_2d(g, 1.3, 0.5, x); });
  err = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) err = std::max(err, std::fabs(pt[n] - ref_t[n]));
  CHECK(err <= 1e-10);
}

TEST_CASE("run bookkeeping") {
  SimConfig cfg = tg_config(2, 16, 0.1, 0.05);
  const auto res = run(cfg);
  CHECK(res.report.records.size() == 1);
  CHECK(res.report.steps == 0);

  cfg.t_end = 1.0;
  cfg.record_every = 3;
  const auto r2 = run(cfg);
  CHECK(r2.report.steps == 10);
  REQUIRE(r2.report.records.size() == 5);  // steps 0, 3, 6, 9 and the final step
  CHECK(r2.report.records.back().norms.t == doctest::Approx(1.0));

  // Deterministic for a fixed configuration.
  SimConfig rnd;
  rnd.grid = Grid::cube(2, 32, 10.0);
  rnd.initial = RandomSpectrumInit{};
  rnd.exponent = BumpExponent{2.3, 0.3, 3.0, std::nullopt};
  rnd.seed = 9;
  rnd.dt = 0.05;
  rnd.t_end = 0.5;
  const auto a = run(rnd);
  const auto b = run(rnd);
  CHECK(rel_l2(a.final_velocity, b.final_velocity) == 0.0);

  SimConfig bad = cfg;
  bad.dt = -1.0;
  CHECK_THROWS_AS(run(bad), InvalidArgument);
  bad = cfg;
  bad.record_every = 0;
  CHECK_THROWS_AS(run(bad), InvalidArgument);
}

TEST_CASE("small data keeps the enstrophy monotone") {
  SimConfig cfg;
  cfg.grid = Grid::cube(2, 32, 32.0);
  cfg.initial = RandomSpectrumInit{};
  cfg.seed = 3;
  cfg.exponent = BumpExponent{2.2, 0.4, 8.0, std::nullopt};
  cfg.small_data_scale = 1e-3;
  cfg.dt = 0.1;
  cfg.t_end = 5.0;
  const auto res = run(cfg);
  CHECK(res.report.enstrophy_monotone);
  CHECK(res.report.energy_monotone);
}
