#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pxflow/exponent_space.hpp"
#include "pxflow/fields.hpp"
#include "pxflow/sim_config.hpp"

namespace pxflow {

/// Initial velocity for the spec on the grid: divergence-free and zero-mean.
VectorField make_initial_data(const InitialSpec& spec, const Grid& grid, std::uint64_t seed);

/// Applies small_data_scale and, in small-data mode, the H^1 cap
/// (throws SmallDataViolation).
VectorField make_initial_data(const SimConfig& cfg);

/// ||u||_{H^1} = (||u||_2^2 + ||grad u||_2^2)^{1/2}.
double h1_norm(const SpectralVector& u);

/// 0.25 * dx / max(1, max |u|).
double default_dt(const VectorField& u0);
double courant_number(double max_velocity, double dt, const Grid& grid) noexcept;

inline constexpr double kCflLimit = 0.5;

struct SimState {
  double t = 0.0;
  long step = 0;
  SpectralVector u;  // Leray projected, u_hat(0) = 0
};

struct StepStats {
  double courant = 0.0;
  double max_velocity = 0.0;  // at the start of the step
  double g_work = 0.0;        // integral G : Du at the start of the step
  /// Energy removed this step according to the scheme's discrete identity,
  /// split into the linear core and the G remainder.
  double linear_dissipation = 0.0;
  double g_dissipation = 0.0;
};

class Solver {
 public:
  using WarningHandler = std::function<void(const std::string&)>;

  /// cfg.dt == 0 selects default_dt(u0). Throws CflViolation when the start
  /// Courant number exceeds the limit.
  Solver(SimConfig cfg, ExponentField p, const VectorField& u0);
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;

  const SimConfig& config() const noexcept { return cfg_; }
  const ExponentField& exponent() const noexcept { return p_; }
  const SimState& state() const noexcept { return state_; }
  double dt() const noexcept { return dt_; }
  /// Number of steps that fit in [0, t_end].
  long total_steps() const noexcept;
  /// Running sum of 2 * integral I_p dt from the discrete energy identity.
  double dissipated() const noexcept { return dissipated_; }
  int cfl_warnings() const noexcept { return cfl_warnings_; }

  void set_warning_handler(WarningHandler h) { warn_ = std::move(h); }

  /// Throws BlowUp on non-finite state and CflViolation under CflPolicy::error.
  StepStats step();

  VectorField velocity() const;

  /// P[-(u . grad) u + div G] for the given coefficients, without the linear core.
  SpectralVector nonlinear_term(const SpectralVector& u) const;

 private:
  struct Workspace;

  SimConfig cfg_;
  ExponentField p_;
  SimState state_;
  double dt_ = 0.0;
  double dissipated_ = 0.0;
  int cfl_warnings_ = 0;
  bool newtonian_ = false;
  std::vector<double> k2_;
  std::vector<double> factor_;  // exp(-k2 dt / 2)
  std::vector<double> mask_;
  WarningHandler warn_;
  std::unique_ptr<Workspace> ws_;
};

/// Pressure solving  -|xi|^2 pi_hat = -xi_i xi_j T_ij_hat  with T = -u (x) u + G;
/// mode 0 set to zero.
ScalarField pressure(const SpectralVector& u, const ExponentField& p);
ScalarField pressure(const Solver& solver);

}  // namespace pxflow
