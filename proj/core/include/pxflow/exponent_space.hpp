#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <variant>

#include "pxflow/fields.hpp"

namespace pxflow {

// Exponent profiles. `center` defaults to the box center.

struct ConstantExponent {
  double value = 2.0;
};

/// p(x) = p_inf + c / log(e + |x - x_c|), blended to p_inf on the box boundary.
struct RadialLogExponent {
  double p_infinity = 2.0;
  double coefficient = 1.0;
  std::optional<Point> center;
};

/// p(x) = base + amplitude * phi(|x - x_c| / width) with the compactly
/// supported C-infinity bump phi(s) = exp(1 - 1 / (1 - s^2)) for s < 1.
struct BumpExponent {
  double base = 2.2;
  double amplitude = 0.4;
  double width = 1.0;
  std::optional<Point> center;
};

/// Two-valued profile: `high` on the lower half of `axis`, `low` elsewhere.
struct StepExponent {
  double low = 2.2;
  double high = 2.6;
  int axis = 0;
};

using ExponentSpec = std::variant<ConstantExponent, RadialLogExponent, BumpExponent, StepExponent>;

/// Sampled variable exponent with its bounds.
class ExponentField {
 public:
  ExponentField() = default;
  ExponentField(ScalarField values, double p_infinity, Point center);

  const Grid& grid() const noexcept { return values_.grid(); }
  const ScalarField& values() const noexcept { return values_; }
  double operator[](std::size_t node) const noexcept { return values_[node]; }
  double p_minus() const noexcept { return p_minus_; }
  double p_plus() const noexcept { return p_plus_; }
  /// Limit value used by the decay condition; on the torus, the boundary value.
  double p_infinity() const noexcept { return p_infinity_; }
  const Point& center() const noexcept { return center_; }
  bool is_constant() const noexcept { return p_minus_ == p_plus_; }

 private:
  ScalarField values_;
  double p_minus_ = 2.0;
  double p_plus_ = 2.0;
  double p_infinity_ = 2.0;
  Point center_{};
};

/// Throws InvalidExponent naming the first node with p <= 1.
ExponentField build_exponent_field(const ExponentSpec& spec, const Grid& grid);

/// (ess inf, ess sup) recomputed from the samples.
std::pair<double, double> exponent_bounds(const ExponentField& p);

/// integral |f(x)|^{p(x)} dx.
double modular(const ScalarField& f, const ExponentField& p);
/// Uses the pointwise Euclidean magnitude of u.
double modular(const VectorField& u, const ExponentField& p);
double modular(std::span<const double> magnitudes, const ExponentField& p);

struct LuxemburgOptions {
  double tolerance = 1e-12;  // relative bracket width
  int max_iterations = 200;
};

/// inf{lambda > 0 : modular(f / lambda) <= 1}; 0 for f == 0.
/// Throws ConvergenceError with the last bracket if the cap is hit.
double luxemburg_norm(const ScalarField& f, const ExponentField& p, LuxemburgOptions opts = {});
double luxemburg_norm(const VectorField& u, const ExponentField& p, LuxemburgOptions opts = {});
double luxemburg_norm(std::span<const double> magnitudes, const ExponentField& p,
                      LuxemburgOptions opts = {});

struct LogHolderEstimate {
  double c_local = 0.0;  // sup |p(x)-p(y)| log(e + 1/|x-y|)
  double c_decay = 0.0;  // sup |p(x)-p_inf| log(e + |x - center|)
  double c_log = 0.0;    // max of the two
  std::size_t pair_count = 0;
};

inline constexpr std::size_t kDefaultPairBudget = 1'000'000;

/// Distances are minimum-image distances on the torus. All pairs are visited
/// when N(N-1)/2 fits the budget; otherwise a deterministic set of lattice
/// offsets with geometrically spaced lengths is applied to every node.
LogHolderEstimate log_holder_constants(const ExponentField& p,
                                       std::size_t pair_budget = kDefaultPairBudget,
                                       std::optional<Point> center = std::nullopt);

}  // namespace pxflow
