#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pxflow/diagnostics.hpp"
#include "pxflow/error.hpp"

namespace pxflow {

namespace {

// Cumulative trapezoid of y over t, same length as t.
std::vector<double> cumulative_trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return out;
}

std::vector<double> times_of(const std::vector<SampleRecord>& records) {
  std::vector<double> t(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) t[i] = records[i].norms.t;
  return t;
}

void require_spectra(const std::vector<SampleRecord>& records, const char* who) {
  for (const auto& r : records) {
    if (!r.spectrum) {
      throw MissingData(std::string(who) +
                        ": spectra were not retained; set diagnostics.retain_spectra = true");
    }
  }
}

// Case-appropriate extra term (int ||u||^{2a/(2-b)})^{(2-b)/2}, cumulative.
std::vector<double> case2_term(const std::vector<double>& t, const std::vector<double>& l2, const GMassCaseInfo& info) {
  std::vector<double> out(t.size(), 0.0);
  if (info.tag != GMassCase::case2 || !info.alpha || !info.beta) return out;
  const double a = *info.alpha;
  const double b = *info.beta;
  std::vector<double> y(l2.size());
  for (std::size_t i = 0; i < l2.size(); ++i) y[i] = std::pow(l2[i], 2.0 * a / (2.0 - b));
  const auto cum = cumulative_trapezoid(t, y);
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = std::pow(cum[i], 0.5 * (2.0 - b));
  return out;
}

}  // namespace

SplittingAudit splitting_audit(const Grid& grid, const std::vector<SampleRecord>& records, double C0,
                               SplitWeight kind) {
  if (!(C0 > 0.0)) throw InvalidArgument("splitting_audit: C0 must be positive");
  require_spectra(records, "splitting_audit");
  SplittingAudit a;
  a.C0 = C0;
  a.kind = kind;
  a.t = times_of(records);
  const std::size_t n = records.size();
  a.lhs.resize(n);
  a.rhs.resize(n);

  std::vector<double> weighted(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = records[i].norms;
    const double f = split_weight(kind, s.t);
    weighted[i] = kind == SplitWeight::cubic ? f * s.l2 * s.l2 : s.h1_semi * s.h1_semi;
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = records[i].norms;
    const double f = split_weight(kind, s.t);
    const double d = discrete_derivative(a.t, weighted, i);
    if (kind == SplitWeight::cubic) {
      const double ball = low_ball_energy(grid, *records[i].spectrum, split_radius(kind, C0, s.t));
      a.lhs[i] = d;
      a.rhs[i] = split_weight_derivative(kind, s.t) * ball;
    } else {
      a.lhs[i] = d + f * f * s.h1_semi * s.h1_semi;
      a.rhs[i] = f * f * f * f * s.l2 * s.l2;
    }
    scale = std::max(scale, std::fabs(a.rhs[i]));
  }
  scale = std::max(scale, 1e-300);
  a.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) a.max_violation = std::max(a.max_violation, (a.lhs[i] - a.rhs[i]) / scale);
  if (n == 0) a.max_violation = 0.0;

  if (kind == SplitWeight::sqrt_inverse) {
    double m = std::numeric_limits<double>::infinity();
    double mb = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = records[i].norms;
      const double f2 = std::pow(split_weight(kind, s.t), 2);
      const double h1sq = s.h1_semi * s.h1_semi;
      const double h2sq = s.h2_semi * s.h2_semi;
      const double sc = std::max({h2sq, f2 * h1sq, 1e-300});
      const double ball = low_ball_energy(grid, *records[i].spectrum, std::sqrt(f2));
      m = std::min(m, (h2sq - f2 * h1sq + f2 * f2 * s.l2 * s.l2) / sc);
      mb = std::min(mb, (h2sq - f2 * h1sq + f2 * f2 * ball) / sc);
    }
    a.three_term_margin = n == 0 ? 0.0 : m;
    a.three_term_ball_margin = n == 0 ? 0.0 : mb;
  }
  return a;
}

AmplitudeAudit amplitude_audit(const Grid& grid, const std::vector<SampleRecord>& records, const GMassCaseInfo& info) {
  if (records.empty()) throw MissingData("amplitude_audit: no norm history");
  require_spectra(records, "amplitude_audit");
  AmplitudeAudit a;
  a.bracket = info.tag;
  a.t = times_of(records);
  const std::size_t n = records.size();
  std::vector<double> l2(n);
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) {
    l2[i] = records[i].norms.l2;
    e[i] = l2[i] * l2[i];
  }
  const auto energy_integral = cumulative_trapezoid(a.t, e);
  const auto extra = case2_term(a.t, l2, info);

  std::vector<double> kmag(grid.size());
  for_each_mode(grid, [&](std::size_t idx, const std::array<double, 3>& xi, bool resolved) {
    kmag[idx] = resolved ? std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) : 0.0;
  });
  const auto& m0 = records.front().spectrum->magnitude;
  double run = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double B = 1.0 + extra[i] + energy_integral[i];
    const auto& m = records[i].spectrum->magnitude;
    if (m.size() != grid.size()) throw GridMismatch("amplitude_audit: spectrum size mismatch");
    double r = 0.0;
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      if (kmag[idx] == 0.0) continue;
      const double num = m[idx];
      if (num == 0.0) continue;
      r = std::max(r, num / (static_cast<double>(m0[idx]) + kmag[idx] * B));
    }
    run = std::max(run, r);
    a.ratio.push_back(r);
    a.running_max.push_back(run);
  }
  a.growth = a.ratio.front() > 0.0 ? run / a.ratio.front() : (run > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return a;
}

EnergyAudit energy_audit(const std::vector<SampleRecord>& records, double tolerance) {
  EnergyAudit a;
  a.tolerance = tolerance;
  if (records.empty()) return a;
  const double e0 = records.front().norms.l2 * records.front().norms.l2;
  const double h0 = records.front().norms.h1_semi * records.front().norms.h1_semi;
  const auto t = times_of(records);
  std::vector<double> ip(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) ip[i] = records[i].norms.I_p;
  const auto sampled = cumulative_trapezoid(t, ip);
  double hmax = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& s = records[i].norms;
    const double e = s.l2 * s.l2;
    if (e0 > 0.0) {
      a.worst_excess = std::max(a.worst_excess, (e + records[i].dissipated) / e0 - 1.0);
      a.worst_sample_excess = std::max(a.worst_sample_excess, (e + 2.0 * sampled[i]) / e0 - 1.0);
    }
    hmax = std::max(hmax, s.h1_semi * s.h1_semi);
  }
  a.enstrophy_ratio = h0 > 0.0 ? hmax / h0 : 0.0;
  a.passed = a.worst_excess <= tolerance;
  return a;
}

GMassAudit g_mass_audit(const std::vector<SampleRecord>& records, const GMassCaseInfo& info) {
  GMassAudit a;
  a.info = info;
  if (records.size() < 2) return a;
  const auto t = times_of(records);
  std::vector<double> g(records.size());
  std::vector<double> l2(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    g[i] = records[i].norms.g_mass;
    l2[i] = records[i].norms.l2;
  }
  const auto lhs = cumulative_trapezoid(t, g);
  const auto extra = case2_term(t, l2, info);
  auto ratio_at = [&](std::size_t i) { return lhs[i] / (1.0 + extra[i]); };

  const std::size_t last = records.size() - 1;
  const double half = t.front() + 0.5 * (t[last] - t.front());
  std::size_t ih = 0;
  for (std::size_t i = 0; i <= last; ++i) {
    if (t[i] <= half + 1e-12 * std::max(1.0, half)) ih = i;
  }
  a.lhs = lhs[last];
  a.rhs = 1.0 + extra[last];
  a.ratio = ratio_at(last);
  a.ratio_half = ratio_at(ih);
  for (std::size_t i = 0; i <= last; ++i) a.max_ratio = std::max(a.max_ratio, ratio_at(i));
  a.non_divergent = a.ratio_half > 0.0 ? a.ratio < 2.0 * a.ratio_half : a.ratio == 0.0;
  return a;
}

}  // namespace pxflow
