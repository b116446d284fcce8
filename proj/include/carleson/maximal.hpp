#pragma once

#include "carleson/curve.hpp"
#include "carleson/norms.hpp"

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace carleson {

struct MaximalResult {
  std::vector<double> values;     ///< per sample
  std::vector<double> argmax_eps; ///< radius whose portion attains the supremum
};

/// Discrete Hardy-Littlewood maximal function. Portions are measured with the
/// trapezoidal node weights, so the portion average is piecewise constant in
/// eps and the supremum runs exactly over the realized distances |tau_k - t|.
MaximalResult maximal(const Curve& curve, const SampledFunction& f);

/// w(t) sup_eps avg_{Gamma(t,eps)} |f| / w for a batch of functions sharing one
/// distance sort per evaluation point. An empty log_weight means w == 1.
std::vector<MaximalResult> conjugated_maximal(const Curve& curve,
                                              std::span<const double> log_weight,
                                              std::span<const SampledFunction> fs);

/// M_{t0,gamma} f = phi_{t0,gamma}(t) M(f / phi_{t0,gamma})(t).
MaximalResult weighted_maximal(const Curve& curve, const SampledFunction& f, Point t0,
                               std::complex<double> gamma);

/// Same with the power weight |tau - t0|^lambda.
MaximalResult power_weighted_maximal(const Curve& curve, const SampledFunction& f, Point t0,
                                     double lambda);

/// The four localized pieces of M_{t0,gamma} f around omega = omega(t0, delta):
/// [0] chi_w M chi_w f, [1] chi_(G\w) M chi_w f,
/// [2] chi_w M chi_(G\w) f, [3] chi_(G\w) M chi_(G\w) f.
struct Decomposition {
  Arc arc;
  std::array<std::vector<double>, 4> pieces;
};

Decomposition decompose(const Curve& curve, const SampledFunction& f, Point t0,
                        std::complex<double> gamma, double delta);

/// CSV export with columns arclen, Mf, argmax_eps.
std::string maximal_csv(const Curve& curve, const MaximalResult& m);

} // namespace carleson
