#pragma once

#include "carleson/curve.hpp"

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace carleson {

/// Continuous branch of arg(tau - t0) along the samples of a curve, fixed by
/// taking the principal value at anchor_index.
struct ArgBranch {
  Point t0;
  std::vector<double> values;
  std::size_t anchor_index = 0;
};

ArgBranch unwrap_arg(const Curve& curve, Point t0);

enum class WeightKind { power, oscillating, tabulated };

/// A positive weight sampled on a curve, held in log space: deep spirals push
/// |(tau - t0)^gamma| across hundreds of orders of magnitude.
struct Weight {
  WeightKind kind = WeightKind::tabulated;
  Point t0{};
  std::complex<double> gamma{}; ///< exponent for power (real) and oscillating weights
  std::vector<double> log_values;
  bool clamped = false; ///< some value left the representable double range

  std::size_t size() const { return log_values.size(); }
  /// exp(log_values[k]), clamped to the representable range.
  double value(std::size_t k) const;
};

Weight tabulated_weight(std::vector<double> log_values);
Weight unit_weight(const Curve& curve);

/// |tau - t0|^lambda.
Weight power_weight(const Curve& curve, Point t0, double lambda);

/// eta(tau) = exp(-arg(tau - t0)).
Weight eta(const ArgBranch& branch);

/// phi(tau) = |(tau - t0)^gamma| = exp(Re gamma log|tau - t0| - Im gamma arg(tau - t0)).
Weight phi(const Curve& curve, const ArgBranch& branch, std::complex<double> gamma);

/// Pointwise product.
Weight operator*(const Weight& a, const Weight& b);

/// Pointwise power w(tau)^{e(tau)}.
Weight pow(const Weight& w, std::span<const double> exponents);
Weight pow(const Weight& w, double exponent);

/// sup(w1/w2) * sup(w2/w1) over the nodes of the curve (>= 1). Finite and
/// stable under refinement means the two weights are equivalent.
double equivalent(const Curve& curve, const Weight& w1, const Weight& w2);

/// CSV export with columns arclen, re, im, weight_log.
std::string weight_csv(const Curve& curve, const Weight& w);

} // namespace carleson
