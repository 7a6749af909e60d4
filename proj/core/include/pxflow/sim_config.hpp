#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "pxflow/exponent_space.hpp"
#include "pxflow/grid.hpp"

namespace pxflow {

/// u = A (sin ax cos by [cos cz], -(a/b) cos ax sin by [cos cz], 0) with
/// a, b, c = 2 pi / L per axis.
struct TaylorGreenInit {
  double amplitude = 1.0;
};

/// Leray-projected white noise shaped by |xi|^s exp(-(|xi| / k0)^2).
/// `amplitude` is the plateau of the per-mode |u_hat| (unitary convention).
struct RandomSpectrumInit {
  double slope = 0.0;
  double k0 = std::sqrt(2.0);
  double amplitude = 1.0;
};

struct CheckpointInit {
  std::string path;
};

using InitialSpec = std::variant<TaylorGreenInit, RandomSpectrumInit, CheckpointInit>;

enum class Dealias { two_thirds, none };
enum class Integrator { imex_euler, imex_heun };
enum class CflPolicy { warn, error };
enum class SplitWeight { cubic, sqrt_inverse };

struct MonitorSet {
  bool energy = true;
  bool enstrophy = true;
  bool g_mass = true;
  bool amplitude = false;  // needs retained spectra
  bool splitting = false;  // needs retained spectra
};

struct SmallDataConfig {
  bool enabled = false;
  double h1_cap = 0.1;  // delta: ||u0||_{H^1} must stay below
};

struct DiagnosticsConfig {
  double C0 = 1.0;
  SplitWeight split_weight = SplitWeight::cubic;
  bool retain_spectra = false;
  std::optional<double> fit_t0;  // defaults to 1
  std::optional<double> fit_t1;  // defaults to the box window end
  double tol_energy_factor = 10.0;  // tol_E = factor * dt
};

struct SimConfig {
  Grid grid;
  ExponentSpec exponent = ConstantExponent{2.0};
  InitialSpec initial = TaylorGreenInit{};
  std::uint64_t seed = 0;
  double dt = 0.0;  // 0 selects the default step
  double t_end = 1.0;
  Dealias dealias = Dealias::two_thirds;
  Integrator integrator = Integrator::imex_heun;
  CflPolicy cfl = CflPolicy::warn;
  int record_every = 1;
  bool linear_only = false;
  double small_data_scale = 1.0;
  SmallDataConfig small_data;
  MonitorSet monitors;
  DiagnosticsConfig diagnostics;
};

const char* to_string(Dealias v) noexcept;
const char* to_string(Integrator v) noexcept;
const char* to_string(CflPolicy v) noexcept;
const char* to_string(SplitWeight v) noexcept;

}  // namespace pxflow
