#include "pxflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pxflow/error.hpp"
#include "pxflow/reduce.hpp"
#include "pxflow/spectral.hpp"

namespace pxflow {

double split_weight(SplitWeight kind, double t) noexcept {
  return kind == SplitWeight::cubic ? std::pow(1.0 + t, 3) : 1.0 / std::sqrt(1.0 + t);
}

double split_weight_derivative(SplitWeight kind, double t) noexcept {
  return kind == SplitWeight::cubic ? 3.0 * (1.0 + t) * (1.0 + t) : -0.5 * std::pow(1.0 + t, -1.5);
}

double split_radius(SplitWeight kind, double C0, double t) noexcept {
  if (kind == SplitWeight::cubic) return std::sqrt(3.0 / (C0 * (1.0 + t)));
  return split_weight(kind, t);
}

double low_ball_energy(const SpectralVector& u, double radius) {
  const Grid& g = u.grid();
  std::vector<double> e(g.size(), 0.0);
  const double r2 = radius * radius;
  for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool) {
    // Compare squared magnitudes of the true lattice vector; Nyquist slots
    // carry no energy.
    if (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2] <= r2) e[idx] = u.mode_energy(idx);
  });
  return pairwise_sum(e);
}

double low_ball_energy(const Grid& g, const SpectrumSnapshot& s, double radius) {
  if (s.magnitude.size() != g.size()) throw GridMismatch("low_ball_energy: spectrum size mismatch");
  std::vector<double> e(g.size(), 0.0);
  const double r2 = radius * radius;
  for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool) {
    if (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2] <= r2) {
      const double m = s.magnitude[idx];
      e[idx] = m * m;
    }
  });
  return pairwise_sum(e);
}

SpectrumSnapshot snapshot_spectrum(const SpectralVector& u, double t) {
  SpectrumSnapshot s;
  s.t = t;
  s.magnitude.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) s.magnitude[i] = static_cast<float>(std::sqrt(u.mode_energy(i)));
  return s;
}

SampleRecord record(const SpectralVector& u, double t, const ExponentField& p, const DiagnosticsConfig& cfg) {
  require_same_grid(u.grid(), p.grid(), "record");
  SampleRecord rec;
  NormSample& s = rec.norms;
  SampleChecks& c = rec.checks;

  s.t = t;
  s.l2 = h_seminorm(u, 0);
  s.h1_semi = h_seminorm(u, 1);
  s.h2_semi = h_seminorm(u, 2);
  const EnergyPair e = energies(u, p);
  s.I_p = e.I_p;
  s.J_p = e.J_p;
  const GMassReport gm = g_mass_report(u, p);
  s.g_mass = gm.g_mass;
  c.ingredients = gm.ingredients;
  s.split_radius = split_radius(cfg.split_weight, cfg.C0, t);
  s.low_ball_energy = low_ball_energy(u, s.split_radius);

  const double l2sq = s.l2 * s.l2;
  const double quad = lp_norm(to_physical(u), 2.0);
  c.parseval_defect = l2sq > 0.0 ? std::fabs(quad * quad - l2sq) / l2sq : quad * quad;
  const double h1sq = s.h1_semi * s.h1_semi;
  const double du = lp_norm(symmetric_gradient(u), 2.0);
  c.korn_defect = h1sq > 0.0 ? std::fabs(h1sq - 2.0 * du * du) / h1sq : 2.0 * du * du;
  c.divergence = divergence_bound(u);
  c.mean_mode = std::sqrt(u.mode_energy(0));

  const double f = split_weight(SplitWeight::sqrt_inverse, t);
  const double f2 = f * f;
  const double h2sq = s.h2_semi * s.h2_semi;
  const double scale = std::max({h2sq, f2 * h1sq, 1e-300});
  const double ball = low_ball_energy(u, f);
  c.plancherel_ball_margin = (h2sq - (f2 * h1sq - f2 * f2 * ball)) / scale;
  c.plancherel_margin = (h2sq - (f2 * h1sq - f2 * f2 * l2sq)) / scale;

  if (cfg.retain_spectra) rec.spectrum = snapshot_spectrum(u, t);
  return rec;
}

double discrete_derivative(const std::vector<double>& t, const std::vector<double>& y, std::size_t i) {
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  if (i == 0) return (y[1] - y[0]) / (t[1] - t[0]);
  if (i + 1 == n) return (y[n - 1] - y[n - 2]) / (t[n - 1] - t[n - 2]);
  return (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]);
}

void fill_kinetic_flux(std::vector<NormSample>& samples) {
  std::vector<double> t(samples.size());
  std::vector<double> e(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    t[i] = samples[i].t;
    e[i] = samples[i].l2 * samples[i].l2;
  }
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i].kinetic_flux = discrete_derivative(t, e, i);
}

DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, double t0, double t1) {
  if (!(t0 < t1)) throw InvalidArgument("fit_decay: window must satisfy t0 < t1");
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto [t, v] = series[i];
    if (t < t0 || t > t1) continue;
    if (!(v > 0.0)) {
      std::ostringstream os;
      os << "fit_decay: nonpositive value " << v << " at sample " << i << " (t = " << t << ")";
      throw InvalidArgument(os.str());
    }
    x.push_back(std::log1p(t));
    y.push_back(std::log(v));
  }
  if (x.size() < kMinFitSamples) {
    std::ostringstream os;
    os << "fit_decay: " << x.size() << " samples in [" << t0 << ", " << t1 << "], need at least "
       << kMinFitSamples;
    throw InvalidArgument(os.str());
  }
  const double n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n;
  const double my = pairwise_sum(y) / n;
  const double sxy = pairwise_sum(x.size(), [&](std::size_t i) { return (x[i] - mx) * (y[i] - my); });
  const double sxx = pairwise_sum(x.size(), [&](std::size_t i) { return (x[i] - mx) * (x[i] - mx); });
  const double syy = pairwise_sum(y.size(), [&](std::size_t i) { return (y[i] - my) * (y[i] - my); });
  if (!(sxx > 0.0)) throw InvalidArgument("fit_decay: samples share a single time");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  const double ssr = pairwise_sum(x.size(), [&](std::size_t i) {
    const double r = y[i] - (intercept + slope * x[i]);
    return r * r;
  });

  DecayFit fit;
  fit.exponent = -slope;
  fit.prefactor = std::exp(intercept);
  fit.t0 = t0;
  fit.t1 = t1;
  fit.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  fit.count = x.size();
  return fit;
}

std::vector<OracleNorms> linear_oracle(const SpectralVector& u0, const std::vector<double>& times) {
  const Grid& g = u0.grid();
  std::vector<double> k2(g.size());
  std::vector<double> e0(g.size());
  for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
    k2[idx] = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    e0[idx] = resolved ? u0.mode_energy(idx) : 0.0;
  });
  std::vector<OracleNorms> out;
  out.reserve(times.size());
  for (double t : times) {
    OracleNorms o;
    o.t = t;
    auto sum = [&](int order) {
      return std::sqrt(pairwise_sum(g.size(), [&](std::size_t i) {
        const double w = order == 0 ? 1.0 : (order == 1 ? k2[i] : k2[i] * k2[i]);
        return w * std::exp(-k2[i] * t) * e0[i];
      }));
    };
    o.l2 = sum(0);
    o.h1 = sum(1);
    o.h2 = sum(2);
    out.push_back(o);
  }
  return out;
}

bool DecayReport::hard_failure() const noexcept {
  return worst_parseval > kParsevalTolerance || worst_korn > kKornTolerance ||
         worst_divergence > kDivergenceTolerance || worst_mean != 0.0 || worst_plancherel < -kPlancherelTolerance;
}

std::vector<std::string> DecayReport::hard_failures() const {
  std::vector<std::string> out;
  auto add = [&](bool bad, const char* name, double v) {
    if (!bad) return;
    std::ostringstream os;
    os << name << " (" << v << ")";
    out.push_back(os.str());
  };
  add(worst_parseval > kParsevalTolerance, "parseval", worst_parseval);
  add(worst_korn > kKornTolerance, "korn", worst_korn);
  add(worst_divergence > kDivergenceTolerance, "divergence", worst_divergence);
  add(worst_mean != 0.0, "mean", worst_mean);
  add(worst_plancherel < -kPlancherelTolerance, "plancherel", worst_plancherel);
  return out;
}

}  // namespace pxflow
