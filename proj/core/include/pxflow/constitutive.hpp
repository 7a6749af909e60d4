#pragma once

#include <array>
#include <optional>

#include "pxflow/exponent_space.hpp"
#include "pxflow/fields.hpp"

namespace pxflow {

/// S = (1 + |Du|^2)^{(p-2)/2} Du and its remainder G = S - Du.
struct StressEval {
  SymTensorField S;
  SymTensorField G;
  ScalarField dbar;  // (1 + |Du|^2)^{1/2}
};

/// (1 + |D|^2)^{(p-2)/2} - 1, evaluated without cancellation for small |D|.
double remainder_factor(double frob2, double p) noexcept;
/// (1 + |D|^2)^{(p-2)/2}.
double viscosity_factor(double frob2, double p) noexcept;

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Stress at a single point for a full symmetric matrix (upper-left dim x dim block).
Mat3 node_stress(const Mat3& D, double p, int dim = 3);

StressEval stress(const SymTensorField& D, const ExponentField& p);

/// G only, written into `G` (resized on grid change). Used by the time stepper.
void remainder_stress(const SymTensorField& D, const ExponentField& p, SymTensorField& G);

struct EnergyPair {
  double I_p = 0.0;  // integral (Dbar)^{p-2} |Du|^2
  double J_p = 0.0;  // integral (Dbar)^{p-2} |grad Du|^2
};

EnergyPair energies(const SpectralVector& u, const ExponentField& p);
EnergyPair energies(const VectorField& u, const ExponentField& p);

enum class GMassCase { case1, case2 };

const char* to_string(GMassCase c) noexcept;

/// Case from p^-: case1 for p^- >= 3, case2 below; out of hypothesis below 11/5.
struct GMassCaseInfo {
  GMassCase tag = GMassCase::case1;
  bool out_of_hypothesis = false;
  std::optional<double> alpha;  // (7 - p^-) / 4, case2 only
  std::optional<double> beta;   // (5 p^- - 11) / 4, case2 only
};

GMassCaseInfo g_mass_case(double p_minus) noexcept;

struct GMassIngredients {
  double I_p = 0.0;
  double grad_power = 0.0;     // ||grad u||_{p^- - 1}^{p^- - 1}
  double l2 = 0.0;             // ||u||_2
  double h2 = 0.0;             // ||grad^2 u||_2
  double interpolation = 0.0;  // ||u||_2^alpha ||grad^2 u||_2^beta (case2 only)
};

struct GMassReport {
  double g_mass = 0.0;  // integral |G| (Frobenius)
  GMassCaseInfo info;
  GMassIngredients ingredients;
};

GMassReport g_mass_report(const SpectralVector& u, const ExponentField& p);
GMassReport g_mass_report(const VectorField& u, const ExponentField& p);

/// Smallest c with |G| <= c (|Du|^2 + |Du|^{p-1}) at every node; 0 where Du = 0.
double pointwise_g_constant(const SymTensorField& D, const ExponentField& p);

}  // namespace pxflow
