#include "pxflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pxflow/constitutive.hpp"
#include "pxflow/error.hpp"
#include "pxflow/reduce.hpp"
#include "pxflow/spectral.hpp"

namespace pxflow {

namespace {

constexpr Complex kI{0.0, 1.0};
// Beyond this, exp(lambda dt) is not worth evaluating; the mode is gone.
constexpr double kStiffCutoff = 30.0;

bool newtonian_exponent(const ExponentField& p) { return p.is_constant() && p.p_minus() == 2.0; }

std::vector<double> dealias_mask(const Grid& g, Dealias d) {
  std::vector<double> mask(g.size(), 1.0);
  std::size_t idx = 0;
  for (int i = 0; i < g.nodes[0]; ++i) {
    for (int j = 0; j < g.nodes[1]; ++j) {
      for (int k = 0; k < g.nodes[2]; ++k, ++idx) {
        if (d == Dealias::none) continue;
        const std::array<int, 3> m{g.mode_number(0, i), g.mode_number(1, j), g.dim == 3 ? g.mode_number(2, k) : 0};
        for (int a = 0; a < g.dim; ++a) {
          if (3 * std::abs(m[a]) > g.nodes[a]) mask[idx] = 0.0;
        }
      }
    }
  }
  return mask;
}

}  // namespace

double default_dt(const VectorField& u0) {
  return 0.25 * u0.grid().min_spacing() / std::max(1.0, u0.max_magnitude());
}

double courant_number(double max_velocity, double dt, const Grid& grid) noexcept {
  return max_velocity * dt / grid.min_spacing();
}

struct NonlinearEval {
  double g_work = 0.0;
  double max_velocity = 0.0;
};

struct Solver::Workspace {
  explicit Workspace(const Grid& g)
      : u(g.dim, std::vector<double>(g.size())),
        grad(static_cast<std::size_t>(g.dim * g.dim), std::vector<double>(g.size())),
        adv(g.dim, std::vector<double>(g.size())),
        D(g),
        G(g),
        tmp(g.size()),
        hat(static_cast<std::size_t>(std::max(g.dim, sym_components(g.dim))), SpectralBuffer(g.size())) {}

  std::vector<std::vector<double>> u;
  std::vector<std::vector<double>> grad;
  std::vector<std::vector<double>> adv;
  SymTensorField D;
  SymTensorField G;
  SpectralBuffer tmp;
  std::vector<SpectralBuffer> hat;

  NonlinearEval evaluate(const SpectralVector& uh, const ExponentField& p, bool newtonian,
                         const std::vector<double>& mask, SpectralVector& out);
};

Solver::Solver(SimConfig cfg, ExponentField p, const VectorField& u0)
    : cfg_(std::move(cfg)), p_(std::move(p)) {
  const Grid& g = cfg_.grid;
  g.validate();
  require_same_grid(g, u0.grid(), "solver initial data");
  require_same_grid(g, p_.grid(), "solver exponent");
  if (cfg_.dt < 0.0) throw InvalidArgument("dt must be positive");
  if (cfg_.t_end < 0.0) throw InvalidArgument("t_end must be non-negative");

  state_.u = to_spectral(u0);
  state_.u.mean_zero = true;
  leray_project_inplace(state_.u);

  const double umax = u0.max_magnitude();
  dt_ = cfg_.dt > 0.0 ? cfg_.dt : default_dt(u0);
  const double courant = courant_number(umax, dt_, g);
  if (!cfg_.linear_only && courant > kCflLimit) {
    std::ostringstream os;
    os << "initial Courant number " << courant << " exceeds " << kCflLimit;
    throw CflViolation(os.str(), courant);
  }

  newtonian_ = newtonian_exponent(p_);
  k2_.resize(g.size());
  factor_.resize(g.size());
  for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool) {
    k2_[idx] = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    factor_[idx] = std::exp(-0.5 * k2_[idx] * dt_);
  });
  mask_ = dealias_mask(g, cfg_.dealias);
  ws_ = std::make_unique<Workspace>(g);
}

Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

long Solver::total_steps() const noexcept {
  return static_cast<long>(std::floor(cfg_.t_end / dt_ + 1e-9));
}

VectorField Solver::velocity() const {
  VectorField u = to_physical(state_.u);
  u.mean_zero = true;
  return u;
}

// Fills `out` with the projected, dealiased nonlinear term for `uh`.
NonlinearEval Solver::Workspace::evaluate(const SpectralVector& uh, const ExponentField& p, bool newtonian,
                                          const std::vector<double>& mask, SpectralVector& out) {
  const Grid& g = uh.grid();
  const int d = g.dim;
  const std::size_t n = g.size();
  NonlinearEval ev;

  for (int c = 0; c < d; ++c) inverse_transform(g, uh.component(c), u[c]);
  for (int i = 0; i < d; ++i) {
    auto ui = uh.component(i);
    for (int j = 0; j < d; ++j) {
      for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
        tmp[idx] = resolved ? kI * xi[j] * ui[idx] : Complex{};
      });
      inverse_transform(g, tmp, grad[i * d + j]);
    }
  }

  double umax2 = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    double s2 = 0.0;
    for (int c = 0; c < d; ++c) s2 += u[c][m] * u[c][m];
    umax2 = std::max(umax2, s2);
  }
  ev.max_velocity = std::sqrt(umax2);

  for (int i = 0; i < d; ++i) {
    auto& a = adv[i];
    std::fill(a.begin(), a.end(), 0.0);
    for (int j = 0; j < d; ++j) {
      const auto& gij = grad[i * d + j];
      const auto& uj = u[j];
      for (std::size_t m = 0; m < n; ++m) a[m] += uj[m] * gij[m];
    }
  }

  for (int c = 0; c < d; ++c) {
    auto dst = out.component(c);
    std::fill(dst.begin(), dst.end(), Complex{});
  }

  if (!newtonian) {
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        auto dij = D.component(i, j);
        const auto& a = grad[i * d + j];
        const auto& b = grad[j * d + i];
        for (std::size_t m = 0; m < n; ++m) dij[m] = 0.5 * (a[m] + b[m]);
      }
    }
    const int nc = sym_components(d);
    const double h = g.cell_volume();
    ev.g_work = h * pairwise_sum(n, [&](std::size_t m) {
                  const double f2 = D.frobenius2(m);
                  const double r = remainder_factor(f2, p[m]);
                  for (int c = 0; c < nc; ++c) G.packed(c)[m] = r * D.packed(c)[m];
                  return r * f2;
                });
    for (int c = 0; c < nc; ++c) forward_transform(g, G.packed(c), hat[c]);
    for (int i = 0; i < d; ++i) {
      auto dst = out.component(i);
      for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
        if (!resolved) return;
        Complex s{};
        for (int j = 0; j < d; ++j) s += kI * xi[j] * hat[sym_index(d, i, j)][idx];
        dst[idx] = s;
      });
    }
  }

  for (int i = 0; i < d; ++i) {
    forward_transform(g, adv[i], tmp);
    auto dst = out.component(i);
    for (std::size_t m = 0; m < n; ++m) dst[m] = (dst[m] - tmp[m]) * mask[m];
  }
  out.mean_zero = true;
  leray_project_inplace(out);
  return ev;
}

SpectralVector Solver::nonlinear_term(const SpectralVector& u) const {
  SpectralVector out(u.grid());
  ws_->evaluate(u, p_, newtonian_, mask_, out);
  return out;
}

StepStats Solver::step() {
  const Grid& g = cfg_.grid;
  const int d = g.dim;
  const std::size_t n = g.size();
  SpectralVector& u = state_.u;
  StepStats st;

  std::vector<double> e0(n);
  for (std::size_t m = 0; m < n; ++m) e0[m] = u.mode_energy(m);

  if (cfg_.linear_only) {
    for (int c = 0; c < d; ++c) {
      auto uc = u.component(c);
      for (std::size_t m = 0; m < n; ++m) uc[m] *= factor_[m];
    }
  } else {
    auto& w = *ws_;
    SpectralVector n0(g);
    const NonlinearEval ev0 = w.evaluate(u, p_, newtonian_, mask_, n0);
    st.max_velocity = ev0.max_velocity;
    st.g_work = ev0.g_work;
    st.courant = courant_number(ev0.max_velocity, dt_, g);
    if (st.courant > kCflLimit) {
      std::ostringstream os;
      os << "Courant number " << st.courant << " exceeds " << kCflLimit << " at step " << state_.step;
      if (cfg_.cfl == CflPolicy::error) throw CflViolation(os.str(), st.courant);
      ++cfl_warnings_;
      if (warn_) warn_(os.str());
    }

    if (cfg_.integrator == Integrator::imex_euler) {
      for (int c = 0; c < d; ++c) {
        auto uc = u.component(c);
        auto nc = n0.component(c);
        for (std::size_t m = 0; m < n; ++m) uc[m] = factor_[m] * (uc[m] + dt_ * nc[m]);
      }
      st.g_dissipation = 2.0 * dt_ * ev0.g_work;
    } else {
      SpectralVector stage(g);
      stage.mean_zero = true;
      for (int c = 0; c < d; ++c) {
        auto uc = u.component(c);
        auto nc = n0.component(c);
        auto sc = stage.component(c);
        for (std::size_t m = 0; m < n; ++m) sc[m] = factor_[m] * (uc[m] + dt_ * nc[m]);
      }
      SpectralVector n1(g);
      const NonlinearEval ev1 = w.evaluate(stage, p_, newtonian_, mask_, n1);
      for (int c = 0; c < d; ++c) {
        auto uc = u.component(c);
        auto a = n0.component(c);
        auto b = n1.component(c);
        for (std::size_t m = 0; m < n; ++m) {
          uc[m] = factor_[m] * uc[m] + 0.5 * dt_ * (factor_[m] * a[m] + b[m]);
        }
      }
      st.g_dissipation = dt_ * (ev0.g_work + ev1.g_work);
    }
    leray_project_inplace(u);
  }

  if (!u.all_finite()) throw BlowUp("non-finite velocity", state_.step + 1);

  st.linear_dissipation = pairwise_sum(n, [&](std::size_t m) {
    const double x = k2_[m] * dt_;
    if (x == 0.0) return 0.0;
    const double fwd = -std::expm1(-x) * e0[m];
    if (x > kStiffCutoff) return fwd;
    return 0.5 * (fwd + std::expm1(x) * u.mode_energy(m));
  });
  dissipated_ += st.linear_dissipation + st.g_dissipation;

  ++state_.step;
  state_.t = static_cast<double>(state_.step) * dt_;
  return st;
}

ScalarField pressure(const SpectralVector& uh, const ExponentField& p) {
  const Grid& g = uh.grid();
  require_same_grid(g, p.grid(), "pressure");
  const int d = g.dim;
  const std::size_t n = g.size();
  const VectorField u = to_physical(uh);
  const SymTensorField D = symmetric_gradient(uh);
  SymTensorField G;
  remainder_stress(D, p, G);

  SpectralField rhs(g);
  std::vector<double> t(n);
  SpectralBuffer th(n);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      auto gij = G.component(i, j);
      auto ui = u.component(i);
      auto uj = u.component(j);
      for (std::size_t m = 0; m < n; ++m) t[m] = -ui[m] * uj[m] + gij[m];
      forward_transform(g, t, th);
      const double mult = i == j ? 1.0 : 2.0;
      for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
        const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if (!resolved || k2 == 0.0) return;
        rhs[idx] += mult * xi[i] * xi[j] * th[idx] / k2;
      });
    }
  }
  return to_physical(rhs);
}

ScalarField pressure(const Solver& solver) { return pressure(solver.state().u, solver.exponent()); }

}  // namespace pxflow
