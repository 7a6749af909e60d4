#include "pxflow/constitutive.hpp"

#include <algorithm>
#include <cmath>

#include "pxflow/error.hpp"
#include "pxflow/reduce.hpp"
#include "pxflow/spectral.hpp"

namespace pxflow {

namespace {

constexpr double kHypothesisFloor = 11.0 / 5.0;
constexpr double kCaseBoundary = 3.0;
constexpr double kTol = 1e-12;

std::vector<double> frobenius2(const SymTensorField& D) {
  std::vector<double> out(D.grid().size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = D.frobenius2(n);
  return out;
}

}  // namespace

double remainder_factor(double frob2, double p) noexcept {
  return std::expm1(0.5 * (p - 2.0) * std::log1p(frob2));
}

double viscosity_factor(double frob2, double p) noexcept {
  return std::exp(0.5 * (p - 2.0) * std::log1p(frob2));
}

Mat3 node_stress(const Mat3& D, double p, int dim) {
  double f2 = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) f2 += D[i][j] * D[i][j];
  }
  const double w = viscosity_factor(f2, p);
  Mat3 S{};
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) S[i][j] = w * D[i][j];
  }
  return S;
}

StressEval stress(const SymTensorField& D, const ExponentField& p) {
  require_same_grid(D.grid(), p.grid(), "stress");
  const Grid& g = D.grid();
  StressEval out{SymTensorField(g), SymTensorField(g), ScalarField(g)};
  const auto f2 = frobenius2(D);
  const int nc = sym_components(g.dim);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double r = remainder_factor(f2[n], p[n]);
    out.dbar[n] = std::sqrt(1.0 + f2[n]);
    for (int c = 0; c < nc; ++c) {
      const double d = D.packed(c)[n];
      out.G.packed(c)[n] = r * d;
      out.S.packed(c)[n] = d + r * d;
    }
  }
  return out;
}

void remainder_stress(const SymTensorField& D, const ExponentField& p, SymTensorField& G) {
  require_same_grid(D.grid(), p.grid(), "remainder_stress");
  const Grid& g = D.grid();
  if (!(G.grid() == g)) G = SymTensorField(g);
  const int nc = sym_components(g.dim);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double r = remainder_factor(D.frobenius2(n), p[n]);
    for (int c = 0; c < nc; ++c) G.packed(c)[n] = r * D.packed(c)[n];
  }
}

EnergyPair energies(const SpectralVector& u, const ExponentField& p) {
  require_same_grid(u.grid(), p.grid(), "energies");
  const Grid& g = u.grid();
  const int d = g.dim;
  const SymTensorField D = symmetric_gradient(u);
  const auto f2 = frobenius2(D);

  // |grad Du|^2 accumulated over packed components and derivative axes.
  std::vector<double> grad2(g.size(), 0.0);
  SpectralBuffer tmp(g.size());
  std::vector<double> phys(g.size());
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const double mult = i == j ? 1.0 : 2.0;
      auto ui = u.component(i);
      auto uj = u.component(j);
      for (int k = 0; k < d; ++k) {
        for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
          tmp[idx] = resolved ? -0.5 * xi[k] * (xi[j] * ui[idx] + xi[i] * uj[idx]) : Complex{};
        });
        inverse_transform(g, tmp, phys);
        for (std::size_t n = 0; n < g.size(); ++n) grad2[n] += mult * phys[n] * phys[n];
      }
    }
  }

  const double h = g.cell_volume();
  EnergyPair e;
  e.I_p = h * pairwise_sum(g.size(), [&](std::size_t n) { return viscosity_factor(f2[n], p[n]) * f2[n]; });
  e.J_p = h * pairwise_sum(g.size(), [&](std::size_t n) { return viscosity_factor(f2[n], p[n]) * grad2[n]; });
  return e;
}

EnergyPair energies(const VectorField& u, const ExponentField& p) { return energies(to_spectral(u), p); }

const char* to_string(GMassCase c) noexcept { return c == GMassCase::case1 ? "case1" : "case2"; }

GMassCaseInfo g_mass_case(double p_minus) noexcept {
  GMassCaseInfo info;
  info.out_of_hypothesis = p_minus < kHypothesisFloor - kTol;
  if (p_minus >= kCaseBoundary || info.out_of_hypothesis) {
    info.tag = GMassCase::case1;
    return info;
  }
  info.tag = GMassCase::case2;
  info.alpha = (7.0 - p_minus) / 4.0;
  info.beta = (5.0 * p_minus - 11.0) / 4.0;
  return info;
}

GMassReport g_mass_report(const SpectralVector& u, const ExponentField& p) {
  require_same_grid(u.grid(), p.grid(), "g_mass_report");
  const Grid& g = u.grid();
  const SymTensorField D = symmetric_gradient(u);
  const TensorField grad = gradient(u);
  const double h = g.cell_volume();
  const double pm = p.p_minus();

  GMassReport rep;
  rep.info = g_mass_case(pm);
  rep.g_mass = h * pairwise_sum(g.size(), [&](std::size_t n) {
                 const double f2 = D.frobenius2(n);
                 return std::fabs(remainder_factor(f2, p[n])) * std::sqrt(f2);
               });
  auto& ing = rep.ingredients;
  ing.I_p = h * pairwise_sum(g.size(), [&](std::size_t n) {
              const double f2 = D.frobenius2(n);
              return viscosity_factor(f2, p[n]) * f2;
            });
  const double q = pm - 1.0;
  ing.grad_power = h * pairwise_sum(g.size(), [&](std::size_t n) {
                     const double a2 = grad.frobenius2(n);
                     return a2 == 0.0 ? 0.0 : std::pow(a2, 0.5 * q);
                   });
  ing.l2 = h_seminorm(u, 0);
  ing.h2 = h_seminorm(u, 2);
  if (rep.info.alpha && rep.info.beta) {
    ing.interpolation = std::pow(ing.l2, *rep.info.alpha) * std::pow(ing.h2, *rep.info.beta);
  }
  return rep;
}

GMassReport g_mass_report(const VectorField& u, const ExponentField& p) { return g_mass_report(to_spectral(u), p); }

double pointwise_g_constant(const SymTensorField& D, const ExponentField& p) {
  require_same_grid(D.grid(), p.grid(), "pointwise_g_constant");
  double c = 0.0;
  for (std::size_t n = 0; n < D.grid().size(); ++n) {
    const double f2 = D.frobenius2(n);
    if (f2 == 0.0) continue;
    const double a = std::sqrt(f2);
    const double g = std::fabs(remainder_factor(f2, p[n])) * a;
    c = std::max(c, g / (f2 + std::pow(a, p[n] - 1.0)));
  }
  return c;
}

}  // namespace pxflow
