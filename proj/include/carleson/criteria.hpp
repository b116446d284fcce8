#pragma once

#include "carleson/curve.hpp"
#include "carleson/norms.hpp"
#include "carleson/submult.hpp"

#include <complex>
#include <optional>
#include <string>

namespace carleson {

enum class Classification {
  main_thm_bounded,
  kps_bounded,
  ersatz_bounded,
  necessary_violated,
  indeterminate,
};

std::string to_string(Classification c);

/// Outcome of a boundedness predicate, with the numbers it was decided on.
struct Verdict {
  double lower = 0.0;       ///< 1/p(t0) + alpha(W phi)
  double upper = 0.0;       ///< 1/p(t0) + beta(W phi)
  double upper_bound = 1.0; ///< what `upper` must stay below (p_* / p(t0) for the ersatz test)
  Classification classification = Classification::indeterminate;
  double margin_low = 0.0;  ///< lower - 0
  double margin_high = 0.0; ///< upper_bound - upper
  bool provably_unbounded = false; ///< set only where a criterion is an equivalence (power weights)
  std::optional<double> eps;
  std::optional<double> delta;
};

/// 0 < 1/p + Re g + min(d- Im g, d+ Im g) <= 1/p + Re g + max(...) < 1.
Verdict check_main(double p_at_t0, std::complex<double> gamma, const IndexPair& spirality);

/// Power weight |tau - t0|^lambda: bounded iff 0 < 1/p + lambda < 1.
Verdict check_kps(double p_at_t0, double lambda);

/// The p_*-variant: upper must stay below p_* / p(t0), with p_* the minimum of
/// p over `scope` (whole curve when empty).
Verdict check_ersatz(const ExponentField& p, std::complex<double> gamma,
                     const IndexPair& spirality, std::span<const unsigned char> scope = {});

struct DeltaEps {
  double delta = 0.0;
  double eps = 0.0;
};

/// eps = half the smaller margin of the main condition; delta = the largest
/// radius in d_t0/4 * 2^-j whose arc keeps 1 + beta p(t0) < p_* on it.
DeltaEps select_delta_and_eps(const Curve& curve, const ExponentField& p, Point t0,
                              std::complex<double> gamma, const IndexPair& spirality);

/// JSON object {lower, upper, classification, margins, eps, delta}.
std::string verdict_json(const Verdict& v);

} // namespace carleson
