#pragma once

#include "carleson/argbranch.hpp"
#include "carleson/curve.hpp"

#include <complex>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace carleson {

/// Variable exponent p(.) sampled on a curve.
struct ExponentField {
  std::vector<double> values;
  double p_min = 0.0;
  double p_max = 0.0;
  double dini_constant = 0.0; ///< max of |p(tau)-p(t)| (-log|tau-t|) over sampled pairs, |tau-t| <= 1/2
  double at_t0 = 0.0;         ///< p at the distinguished point (a limit when t0 is not sampled)

  /// min of p over the nodes flagged in `scope` together with p(t0).
  double p_star(std::span<const unsigned char> scope) const;
};

struct ConstantExponent {
  double value;
};

/// p(tau) = at_t0 + (far - at_t0) / (1 + log(d_t0 / |tau - t0|)): log-Hoelder
/// continuous, equal to `far` at the farthest sample and tending to at_t0.
struct ProfileExponent {
  Point t0;
  double at_t0;
  double far;
};

struct TableExponent {
  std::vector<double> values;
  std::optional<double> at_t0; ///< defaults to the value at sample 0
};

using ExponentSpec = std::variant<ConstantExponent, ProfileExponent, TableExponent>;

ExponentField make_exponent(const Curve& curve, const ExponentSpec& spec);

/// Dini-Lipschitz constant measured over a strided subset of node pairs
/// (at most about 10^6 pairs).
double measure_dini_constant(const Curve& curve, std::span<const double> p);

/// Complex samples of a function on a curve.
struct SampledFunction {
  std::vector<std::complex<double>> values;
};

SampledFunction constant_function(const Curve& curve, double c);

/// int |f w / lambda|^{p} |dtau| by the trapezoidal rule on the curve samples.
/// Overflowing integrands give +inf.
double modular(const Curve& curve, const SampledFunction& f, const Weight& w,
               const ExponentField& p, double lambda);

/// inf{lambda > 0 : modular <= 1}, by bisection on log lambda (relative 1e-10).
double luxemburg_norm(const Curve& curve, const SampledFunction& f, const Weight& w,
                      const ExponentField& p);
double luxemburg_norm(const Curve& curve, const SampledFunction& f, const ExponentField& p);

/// (int |f w|^p)^{1/p}, same quadrature as modular().
double classic_p_norm(const Curve& curve, const SampledFunction& f, const Weight& w, double p);

/// Grid lower bound of the A_p characteristic
/// sup (1/eps int w^p)^{1/p} (1/eps int w^{-q})^{1/q} over t in t_nodes and
/// eps in eps_grid; an empty eps_grid means every realized distance |tau_k - t|.
/// Integrals clip each half-segment to the disk, so a disk holding a single
/// node is not charged for the arc outside it.
double muckenhoupt_ap(const Curve& curve, const Weight& w, double p,
                      std::span<const std::size_t> t_nodes, std::span<const double> eps_grid);

/// Every stride-th node index.
std::vector<std::size_t> strided_nodes(const Curve& curve, std::size_t max_count);

} // namespace carleson
