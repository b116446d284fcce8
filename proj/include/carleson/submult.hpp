#pragma once

#include "carleson/argbranch.hpp"
#include "carleson/curve.hpp"

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace carleson {

/// Samples of the submultiplicative majorant (W_t psi)(x) on a multiplicative grid.
struct SubmultSamples {
  std::vector<double> xs;      ///< ascending, contains 1
  std::vector<double> rho;     ///< (W_t psi)(x)
  std::vector<double> log_rho; ///< kept separately; rho may overflow
  std::vector<double> radii;   ///< the R-grid used for the inner supremum
};

struct IndexPair {
  double alpha = 0.0;
  double beta = 0.0;
  // Fit diagnostics. Residuals are RMS deviations of log rho from the fitted
  // line, divided by ln 10, i.e. expressed per decade (index units).
  double alpha_residual = 0.0;
  double beta_residual = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
};

/// 64 log-spaced points per side over [1e-3, 1e3], plus x = 1.
std::vector<double> default_x_grid(std::size_t per_side = 64, double decades = 3.0);

/// 64 log-spaced radii in [10 * (closest node distance to t0), d_t0].
std::vector<double> default_r_grid(const Curve& curve, Point t0, std::size_t count = 64);

/// (W_t0 psi)(x) = sup_R max_{|tau-t0|=xR} psi / min_{|tau-t0|=R} psi (x <= 1),
/// mirrored for x >= 1. Circles are replaced by annulus bands wide enough to
/// catch a sample of every segment crossing the circle.
SubmultSamples compute_W(const Curve& curve, Point t0, const Weight& psi,
                         std::span<const double> x_grid, std::span<const double> r_grid);

/// Least-squares slopes of log rho against log x over the extreme decades.
IndexPair estimate_indices(const SubmultSamples& s);

/// (delta^-, delta^+) at t0: unwrap_arg -> eta -> compute_W -> estimate_indices.
IndexPair spirality_indices(const Curve& curve, Point t0);

/// Indices of W phi_{t0, gamma} from the spirality indices:
/// Re gamma + min/max(delta^- Im gamma, delta^+ Im gamma).
IndexPair phi_indices_closed_form(std::complex<double> gamma, const IndexPair& spirality);

struct SandwichConstants {
  double c1 = 0.0; ///< w(t)/w(tau) <= c1 |(t-t0)/(tau-t0)|^{beta+eps}, t outside, tau inside omega
  double c2 = 0.0; ///< w(t)/w(tau) <= c2 |(t-t0)/(tau-t0)|^{alpha-eps}, t inside, tau outside
  double log_c1 = 0.0;
  double log_c2 = 0.0;
};

/// Smallest constants of the two-sided power sandwich of w around the arc
/// omega(t0, delta), over all node pairs.
SandwichConstants power_sandwich(const Curve& curve, Point t0, const Weight& w,
                                 const IndexPair& indices, double eps, double delta);

/// CSV export with columns x, rho, log_x, log_rho.
std::string submult_csv(const SubmultSamples& s);

} // namespace carleson
