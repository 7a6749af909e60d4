#include "pxflow/exponent_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "pxflow/error.hpp"
#include "pxflow/reduce.hpp"

namespace pxflow {

namespace {

constexpr double kE = std::numbers::e;

double smoothstep(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * (3.0 - 2.0 * s);
}

double bump_profile(double s) {
  if (s >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double boundary_distance(const Grid& g, const Point& x) {
  double b = std::numeric_limits<double>::infinity();
  for (int a = 0; a < g.dim; ++a) b = std::min({b, x[a], g.length[a] - x[a]});
  return b;
}

struct Sampler {
  const Grid& grid;

  double operator()(const ConstantExponent& s, const Point&) const { return s.value; }

  double operator()(const RadialLogExponent& s, const Point& x) const {
    const Point c = s.center.value_or(grid.center());
    const double r = grid.periodic_distance(x, c);
    const double v = s.p_infinity + s.coefficient / std::log(kE + r);
    const double w = smoothstep(boundary_distance(grid, x) / grid.min_spacing());
    return s.p_infinity + w * (v - s.p_infinity);
  }

  double operator()(const BumpExponent& s, const Point& x) const {
    const Point c = s.center.value_or(grid.center());
    const double r = grid.periodic_distance(x, c);
    return s.base + s.amplitude * bump_profile(r / s.width);
  }

  double operator()(const StepExponent& s, const Point& x) const {
    return x[s.axis] < 0.5 * grid.length[s.axis] ? s.high : s.low;
  }
};

struct InfinityValue {
  double operator()(const ConstantExponent& s) const { return s.value; }
  double operator()(const RadialLogExponent& s) const { return s.p_infinity; }
  double operator()(const BumpExponent& s) const { return s.base; }
  double operator()(const StepExponent& s) const { return s.low; }
};

struct CenterOf {
  const Grid& grid;
  Point operator()(const RadialLogExponent& s) const { return s.center.value_or(grid.center()); }
  Point operator()(const BumpExponent& s) const { return s.center.value_or(grid.center()); }
  template <class T>
  Point operator()(const T&) const {
    return grid.center();
  }
};

void validate_spec(const ExponentSpec& spec, const Grid& grid) {
  if (const auto* b = std::get_if<BumpExponent>(&spec); b != nullptr && !(b->width > 0.0)) {
    throw InvalidArgument("bump exponent width must be positive");
  }
  if (const auto* s = std::get_if<StepExponent>(&spec); s != nullptr && (s->axis < 0 || s->axis >= grid.dim)) {
    throw InvalidArgument("step exponent axis out of range");
  }
}

}  // namespace

ExponentField::ExponentField(ScalarField values, double p_infinity, Point center)
    : values_(std::move(values)), p_infinity_(p_infinity), center_(center) {
  const auto v = values_.values();
  if (v.empty()) throw InvalidArgument("exponent field is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 1.0) || !std::isfinite(v[i])) throw InvalidExponent(i, v[i]);
  }
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  p_minus_ = *lo;
  p_plus_ = *hi;
}

ExponentField build_exponent_field(const ExponentSpec& spec, const Grid& grid) {
  grid.validate();
  validate_spec(spec, grid);
  ScalarField values(grid);
  const Sampler sampler{grid};
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Point x = grid.coordinate(n);
    values[n] = std::visit([&](const auto& s) { return sampler(s, x); }, spec);
  }
  return ExponentField(std::move(values), std::visit(InfinityValue{}, spec),
                       std::visit(CenterOf{grid}, spec));
}

std::pair<double, double> exponent_bounds(const ExponentField& p) {
  const auto v = p.values().values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

double modular(std::span<const double> magnitudes, const ExponentField& p) {
  if (magnitudes.size() != p.grid().size()) throw GridMismatch("modular: field and exponent differ in size");
  const double h = p.grid().cell_volume();
  return h * pairwise_sum(magnitudes.size(), [&](std::size_t i) {
           const double a = std::fabs(magnitudes[i]);
           return a == 0.0 ? 0.0 : std::pow(a, p[i]);
         });
}

double modular(const ScalarField& f, const ExponentField& p) {
  require_same_grid(f.grid(), p.grid(), "modular");
  return modular(f.values(), p);
}

double modular(const VectorField& u, const ExponentField& p) {
  require_same_grid(u.grid(), p.grid(), "modular");
  std::vector<double> mag(u.grid().size());
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = u.magnitude(i);
  return modular(mag, p);
}

double luxemburg_norm(std::span<const double> magnitudes, const ExponentField& p, LuxemburgOptions opts) {
  if (!(opts.tolerance > 0.0)) throw InvalidArgument("luxemburg_norm: tolerance must be positive");
  if (magnitudes.size() != p.grid().size()) throw GridMismatch("luxemburg_norm: size mismatch");

  std::vector<double> logf;
  std::vector<double> expo;
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    const double a = std::fabs(magnitudes[i]);
    if (a > 0.0) {
      logf.push_back(std::log(a));
      expo.push_back(p[i]);
    }
  }
  if (logf.empty()) return 0.0;

  const double h = p.grid().cell_volume();
  // lambda -> modular(f / lambda) is strictly decreasing for f != 0.
  auto scaled_modular = [&](double lambda) {
    const double ll = std::log(lambda);
    return h * pairwise_sum(logf.size(), [&](std::size_t i) { return std::exp(expo[i] * (logf[i] - ll)); });
  };

  int iterations = 0;
  double lo = 1.0;
  double hi = 1.0;
  auto bump_iter = [&]() {
    if (++iterations > opts.max_iterations) {
      throw ConvergenceError("luxemburg_norm: iteration cap reached", lo, hi);
    }
  };

  if (scaled_modular(1.0) > 1.0) {
    hi = 2.0;
    while (scaled_modular(hi) > 1.0) {
      bump_iter();
      lo = hi;
      hi *= 2.0;
    }
  } else {
    lo = 0.5;
    while (scaled_modular(lo) <= 1.0) {
      bump_iter();
      hi = lo;
      lo *= 0.5;
    }
  }
  while (hi - lo > opts.tolerance * hi) {
    bump_iter();
    const double mid = 0.5 * (lo + hi);
    if (scaled_modular(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double luxemburg_norm(const ScalarField& f, const ExponentField& p, LuxemburgOptions opts) {
  require_same_grid(f.grid(), p.grid(), "luxemburg_norm");
  return luxemburg_norm(f.values(), p, opts);
}

double luxemburg_norm(const VectorField& u, const ExponentField& p, LuxemburgOptions opts) {
  require_same_grid(u.grid(), p.grid(), "luxemburg_norm");
  std::vector<double> mag(u.grid().size());
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = u.magnitude(i);
  return luxemburg_norm(mag, p, opts);
}

namespace {

using Offset = std::array<int, 3>;

// Geometrically spaced lengths 1, 2, 3, 4, 6, 8, 11, 16, ... up to n/2.
std::vector<int> stratified_lengths(int half) {
  std::set<int> lengths;
  for (double m = 1.0; m <= half + 1e-9; m *= std::sqrt(2.0)) lengths.insert(static_cast<int>(std::lround(m)));
  for (int m = 1; m <= std::min(4, half); ++m) lengths.insert(m);
  std::vector<int> out;
  for (int m : lengths) {
    if (m >= 1 && m <= half) out.push_back(m);
  }
  return out;
}

std::vector<Offset> stratified_offsets(const Grid& g) {
  std::vector<Offset> dirs;
  const int d = g.dim;
  // Axis, face-diagonal and body-diagonal directions, up to sign.
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      for (int c = (d == 3 ? -1 : 0); c <= (d == 3 ? 1 : 0); ++c) {
        const Offset o{a, b, c};
        if (o == Offset{0, 0, 0}) continue;
        // keep one of each +/- pair: first nonzero entry positive
        const int first = a != 0 ? a : (b != 0 ? b : c);
        if (first > 0) dirs.push_back(o);
      }
    }
  }
  int half = g.nodes[0] / 2;
  for (int a = 1; a < d; ++a) half = std::min(half, g.nodes[a] / 2);
  std::vector<std::pair<double, Offset>> all;
  for (int m : stratified_lengths(half)) {
    for (const auto& e : dirs) {
      Offset o{m * e[0], m * e[1], m * e[2]};
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) r2 += (o[a] * g.spacing(a)) * (o[a] * g.spacing(a));
      all.emplace_back(r2, o);
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Offset> out;
  out.reserve(all.size());
  for (const auto& [r2, o] : all) out.push_back(o);
  return out;
}

}  // namespace

LogHolderEstimate log_holder_constants(const ExponentField& p, std::size_t pair_budget, std::optional<Point> center) {
  if (pair_budget < 1) throw InvalidArgument("log_holder_constants: pair budget must be >= 1");
  const Grid& g = p.grid();
  const std::size_t n = g.size();
  const Point c = center.value_or(p.center());
  LogHolderEstimate est;

  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.periodic_distance(g.coordinate(i), c);
    est.c_decay = std::max(est.c_decay, std::fabs(p[i] - p.p_infinity()) * std::log(kE + r));
  }

  const std::size_t all_pairs = n * (n - 1) / 2;
  if (all_pairs <= pair_budget) {
    for (std::size_t i = 0; i < n; ++i) {
      const Point xi = g.coordinate(i);
      for (std::size_t j = i + 1; j < n; ++j) {
        const double r = g.periodic_distance(xi, g.coordinate(j));
        est.c_local = std::max(est.c_local, std::fabs(p[i] - p[j]) * std::log(kE + 1.0 / r));
      }
    }
    est.pair_count = all_pairs;
  } else {
    auto offsets = stratified_offsets(g);
    if (offsets.size() > pair_budget) offsets.resize(pair_budget);
    const std::size_t per_offset = std::max<std::size_t>(1, pair_budget / offsets.size());
    const std::size_t stride = std::max<std::size_t>(1, (n + per_offset - 1) / per_offset);
    for (const auto& o : offsets) {
      double r2 = 0.0;
      for (int a = 0; a < g.dim; ++a) r2 += (o[a] * g.spacing(a)) * (o[a] * g.spacing(a));
      const double weight = std::log(kE + 1.0 / std::sqrt(r2));
      for (std::size_t i = 0; i < n; i += stride) {
        const auto ijk = g.unravel(i);
        std::array<int, 3> q{};
        for (int a = 0; a < 3; ++a) {
          const int na = g.nodes[a];
          q[a] = ((ijk[a] + o[a]) % na + na) % na;
        }
        const std::size_t j = g.index(q[0], q[1], q[2]);
        est.c_local = std::max(est.c_local, std::fabs(p[i] - p[j]) * weight);
        ++est.pair_count;
      }
    }
  }
  est.c_log = std::max(est.c_local, est.c_decay);
  return est;
}

}  // namespace pxflow
