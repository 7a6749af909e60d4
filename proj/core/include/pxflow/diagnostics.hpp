#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pxflow/constitutive.hpp"
#include "pxflow/exponent_space.hpp"
#include "pxflow/fields.hpp"
#include "pxflow/sim_config.hpp"

namespace pxflow {

/// One CSV row.
struct NormSample {
  double t = 0.0;
  double l2 = 0.0;       // ||u||_2
  double h1_semi = 0.0;  // ||grad u||_2
  double h2_semi = 0.0;  // ||grad^2 u||_2
  double I_p = 0.0;
  double J_p = 0.0;
  double g_mass = 0.0;           // integral |G|
  double low_ball_energy = 0.0;  // sum over |xi| <= split_radius of |u_hat|^2
  double split_radius = 0.0;
  double kinetic_flux = 0.0;  // d/dt ||u||_2^2, filled once neighbours are known
};

/// Invariant checks evaluated with every sample; not part of the CSV.
struct SampleChecks {
  double parseval_defect = 0.0;  // |quadrature l2^2 - spectral l2^2| / spectral
  double korn_defect = 0.0;      // |h1^2 - 2 ||Du||^2| / h1^2
  double divergence = 0.0;       // bound on max |div u|
  double mean_mode = 0.0;        // |u_hat(0)|
  /// h2^2 - (f^2 h1^2 - f^4 E_L(f)) and h2^2 - (f^2 h1^2 - f^4 l2^2) for
  /// f = (1+t)^{-1/2}, divided by max(h2^2, f^2 h1^2, tiny).
  double plancherel_ball_margin = 0.0;
  double plancherel_margin = 0.0;
  GMassIngredients ingredients;
};

/// Spectral amplitudes |u_hat(t, xi)| per storage slot.
struct SpectrumSnapshot {
  double t = 0.0;
  std::vector<float> magnitude;
};

struct SampleRecord {
  NormSample norms;
  SampleChecks checks;
  double dissipated = 0.0;  // cumulative 2 integral I_p dt from the scheme
  std::optional<SpectrumSnapshot> spectrum;
};

/// Split weight f, its derivative, and the ball radius of the splitting set
/// { C0 |xi|^2 f <= f' } (cubic) or { |xi| <= f } (sqrt_inverse).
double split_weight(SplitWeight kind, double t) noexcept;
double split_weight_derivative(SplitWeight kind, double t) noexcept;
double split_radius(SplitWeight kind, double C0, double t) noexcept;

/// Sum of mode energies with |xi| <= radius.
double low_ball_energy(const SpectralVector& u, double radius);
double low_ball_energy(const Grid& grid, const SpectrumSnapshot& s, double radius);

SpectrumSnapshot snapshot_spectrum(const SpectralVector& u, double t);

SampleRecord record(const SpectralVector& u, double t, const ExponentField& p, const DiagnosticsConfig& cfg);

/// Centered differences of l2^2 in the interior, one-sided at the ends.
void fill_kinetic_flux(std::vector<NormSample>& samples);

/// Centered derivative of y(t) at index i (one-sided at the ends).
double discrete_derivative(const std::vector<double>& t, const std::vector<double>& y, std::size_t i);

struct DecayFit {
  double exponent = 0.0;   // value ~ C (1+t)^{-exponent}
  double prefactor = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  double r2 = 0.0;
  std::size_t count = 0;
};

inline constexpr std::size_t kMinFitSamples = 10;

/// Least squares of log(value) against log(1+t) over samples with t in [t0, t1].
/// Throws InvalidArgument with fewer than 10 samples or on a nonpositive value.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, double t0, double t1);

struct SplittingAudit {
  double C0 = 1.0;
  SplitWeight kind = SplitWeight::cubic;
  std::vector<double> t;
  std::vector<double> lhs;
  std::vector<double> rhs;
  double max_violation = 0.0;  // max(lhs - rhs) / max(max |rhs|, floor)
  /// sqrt_inverse only: min over samples of h2^2 - f^2 h1^2 + f^4 l2^2, and of
  /// the version with the low-ball energy, each normalised like SampleChecks.
  std::optional<double> three_term_margin;
  std::optional<double> three_term_ball_margin;
};

/// Throws MissingData when spectra were not retained.
SplittingAudit splitting_audit(const Grid& grid, const std::vector<SampleRecord>& records, double C0,
                               SplitWeight kind);

struct AmplitudeAudit {
  GMassCase bracket = GMassCase::case1;
  std::vector<double> t;
  std::vector<double> ratio;
  std::vector<double> running_max;
  double growth = 0.0;  // running max at the end over the first ratio
};

/// Throws MissingData when spectra or the l2 history are absent.
AmplitudeAudit amplitude_audit(const Grid& grid, const std::vector<SampleRecord>& records,
                               const GMassCaseInfo& info);

struct EnergyAudit {
  double tolerance = 0.0;
  double worst_excess = 0.0;  // max_n (l2_n^2 + dissipated_n) / l2_0^2 - 1
  double worst_sample_excess = 0.0;  // same with a trapezoid over sampled I_p
  double enstrophy_ratio = 0.0;      // sup h1^2 / h1_0^2
  bool passed = true;
};

EnergyAudit energy_audit(const std::vector<SampleRecord>& records, double tolerance);

struct GMassAudit {
  GMassCaseInfo info;
  double lhs = 0.0;  // integral_0^T integral |G|
  double rhs = 0.0;  // case-appropriate bracket at T
  double ratio = 0.0;
  double ratio_half = 0.0;  // same on [0, T/2]
  double max_ratio = 0.0;   // over all sample times
  bool non_divergent = true;
};

GMassAudit g_mass_audit(const std::vector<SampleRecord>& records, const GMassCaseInfo& info);

/// Exact heat-flow (linear core) norms of u0 at the requested times:
/// (l2, h1, h2) per time.
struct OracleNorms {
  double t = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
};
std::vector<OracleNorms> linear_oracle(const SpectralVector& u0, const std::vector<double>& times);

struct DecayReport {
  std::vector<SampleRecord> records;
  std::optional<DecayFit> l2_fit;
  std::optional<DecayFit> h1_fit;
  std::optional<DecayFit> oracle_l2_fit;
  std::optional<DecayFit> oracle_h1_fit;
  std::string fit_error;  // why a fit is missing
  double fit_t0 = 0.0;
  double fit_t1 = 0.0;
  EnergyAudit energy;
  GMassAudit g_mass;
  std::optional<AmplitudeAudit> amplitude;
  std::optional<SplittingAudit> splitting;
  std::string audit_error;  // set when an enabled monitor could not run
  bool energy_monotone = true;     // per step
  bool enstrophy_monotone = true;  // per step
  long first_enstrophy_increase = -1;
  double dt = 0.0;
  long steps = 0;
  int cfl_warnings = 0;

  // Hard (invariant-class) audit summary.
  double worst_parseval = 0.0;
  double worst_korn = 0.0;
  double worst_divergence = 0.0;
  double worst_mean = 0.0;
  double worst_plancherel = 0.0;  // most negative margin
  bool hard_failure() const noexcept;
  std::vector<std::string> hard_failures() const;
};

inline constexpr double kParsevalTolerance = 1e-10;
inline constexpr double kKornTolerance = 1e-10;
inline constexpr double kDivergenceTolerance = 1e-10;
inline constexpr double kPlancherelTolerance = 1e-12;

}  // namespace pxflow
