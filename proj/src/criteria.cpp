#include "carleson/criteria.hpp"

#include "carleson/error.hpp"

#include <json.hpp>

#include <cmath>

namespace carleson {

namespace {

void check_p(double p) { require(std::isfinite(p) && p > 1, "p(t0) must lie in (1, inf)"); }

Verdict classify(double p_at_t0, const IndexPair& phi_indices, double upper_bound,
                 Classification bounded_label) {
  Verdict v;
  v.lower = 1.0 / p_at_t0 + phi_indices.alpha;
  v.upper = 1.0 / p_at_t0 + phi_indices.beta;
  v.upper_bound = upper_bound;
  v.margin_low = v.lower;
  v.margin_high = upper_bound - v.upper;
  if (v.lower > 0 && v.upper < upper_bound)
    v.classification = bounded_label;
  else if (v.lower < 0 || v.upper > 1)
    v.classification = Classification::necessary_violated;
  else
    v.classification = Classification::indeterminate;
  return v;
}

} // namespace

std::string to_string(Classification c) {
  switch (c) {
  case Classification::main_thm_bounded: return "MAIN_THM_BOUNDED";
  case Classification::kps_bounded: return "KPS_BOUNDED";
  case Classification::ersatz_bounded: return "ERSATZ_BOUNDED";
  case Classification::necessary_violated: return "NECESSARY_VIOLATED";
  case Classification::indeterminate: return "INDETERMINATE";
  }
  return "INDETERMINATE";
}

Verdict check_main(double p_at_t0, std::complex<double> gamma, const IndexPair& spirality) {
  check_p(p_at_t0);
  return classify(p_at_t0, phi_indices_closed_form(gamma, spirality), 1.0,
                  Classification::main_thm_bounded);
}

Verdict check_kps(double p_at_t0, double lambda) {
  check_p(p_at_t0);
  IndexPair power;
  power.alpha = power.beta = lambda;
  Verdict v = classify(p_at_t0, power, 1.0, Classification::kps_bounded);
  v.provably_unbounded = !(v.lower > 0 && v.upper < 1);
  return v;
}

Verdict check_ersatz(const ExponentField& p, std::complex<double> gamma,
                     const IndexPair& spirality, std::span<const unsigned char> scope) {
  check_p(p.at_t0);
  const double p_star =
      scope.empty() ? std::min(p.p_min, p.at_t0) : p.p_star(scope);
  const IndexPair idx = phi_indices_closed_form(gamma, spirality);
  Verdict v = classify(p.at_t0, idx, p_star / p.at_t0, Classification::ersatz_bounded);
  if (v.classification != Classification::ersatz_bounded) {
    // the ersatz test failed; report what the main condition says
    const Verdict main = classify(p.at_t0, idx, 1.0, Classification::main_thm_bounded);
    v.classification = main.classification;
  }
  return v;
}

DeltaEps select_delta_and_eps(const Curve& curve, const ExponentField& p, Point t0,
                              std::complex<double> gamma, const IndexPair& spirality) {
  const Verdict v = check_main(p.at_t0, gamma, spirality);
  require(v.classification == Classification::main_thm_bounded,
          "delta/eps selection needs the main condition to hold strictly");
  const IndexPair idx = phi_indices_closed_form(gamma, spirality);
  DeltaEps out;
  out.eps = 0.5 * std::min(v.margin_low, v.margin_high);
  const double need = 1.0 + idx.beta * p.at_t0;
  const double reach = d_t(curve, t0);
  double delta = reach / 4;
  for (int j = 0; j < 200; ++j, delta /= 2) {
    const Arc arc = arc_around(curve, t0, delta);
    if (arc.node_count == 0)
      break;
    if (need < p.p_star(arc.inside)) {
      out.delta = delta;
      return out;
    }
  }
  throw Error(ErrorCode::no_admissible_delta,
              "no arc around t0 keeps 1 + beta p(t0) below the local minimum of p");
}

std::string verdict_json(const Verdict& v) {
  nlohmann::json j;
  j["lower"] = v.lower;
  j["upper"] = v.upper;
  j["upper_bound"] = v.upper_bound;
  j["classification"] = to_string(v.classification);
  j["margins"] = {{"low", v.margin_low}, {"high", v.margin_high}};
  j["provably_unbounded"] = v.provably_unbounded;
  j["eps"] = v.eps ? nlohmann::json(*v.eps) : nlohmann::json(nullptr);
  j["delta"] = v.delta ? nlohmann::json(*v.delta) : nlohmann::json(nullptr);
  return j.dump();
}

} // namespace carleson
