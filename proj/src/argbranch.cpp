#include "carleson/argbranch.hpp"

#include "carleson/csv.hpp"
#include "carleson/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace carleson {

namespace {

const double log_max = std::log(std::numeric_limits<double>::max());
const double log_min = std::log(std::numeric_limits<double>::min());

bool out_of_range(std::span<const double> logs) {
  return std::any_of(logs.begin(), logs.end(),
                     [](double v) { return !(v <= log_max && v >= log_min); });
}

Weight finish(Weight w) {
  w.clamped = out_of_range(w.log_values);
  return w;
}

} // namespace

ArgBranch unwrap_arg(const Curve& curve, Point t0) {
  const auto pts = curve.points();
  for (const Point& q : pts)
    if (q == t0)
      throw Error(ErrorCode::invalid_argument, "curve sample coincides with t0");
  ArgBranch branch{t0, std::vector<double>(pts.size()), 0};

  // A closed curve through t0 is cut at the segment carrying t0.
  std::size_t start = 0;
  std::size_t count = pts.size();
  bool cut = false;
  if (curve.closed()) {
    const std::size_t s = nearest_segment(curve, t0);
    const Point a = pts[s], b = pts[s + 1];
    const double u = std::clamp(std::real((t0 - a) * std::conj(b - a)) / std::norm(b - a), 0.0, 1.0);
    if (std::abs(a + u * (b - a) - t0) <= curve.segment_length(s)) {
      cut = true;
      start = (s + 1) % curve.node_count();
      count = curve.node_count();
      branch.anchor_index = start;
    }
  }
  const std::size_t m = cut ? curve.node_count() : pts.size();
  Point prev = pts[start] - t0;
  branch.values[start] = std::arg(prev);
  for (std::size_t i = 1; i < count; ++i) {
    const std::size_t k = (start + i) % m;
    const Point cur = pts[k] - t0;
    const Point turn = std::conj(prev) * cur;
    const double step = std::atan2(turn.imag(), turn.real());
    if (std::abs(step) >= std::numbers::pi)
      throw Error(ErrorCode::branch_jump,
                  "argument increment reaches pi at sample " + std::to_string(k));
    branch.values[k] = branch.values[(start + i - 1) % m] + step;
    prev = cur;
  }
  if (cut)
    branch.values.back() = branch.values.front();
  return branch;
}

double Weight::value(std::size_t k) const {
  return std::exp(std::clamp(log_values[k], log_min, log_max));
}

Weight tabulated_weight(std::vector<double> log_values) {
  Weight w;
  w.log_values = std::move(log_values);
  return finish(std::move(w));
}

Weight unit_weight(const Curve& curve) {
  return tabulated_weight(std::vector<double>(curve.size(), 0.0));
}

Weight power_weight(const Curve& curve, Point t0, double lambda) {
  Weight w;
  w.kind = WeightKind::power;
  w.t0 = t0;
  w.gamma = lambda;
  w.log_values.resize(curve.size());
  const auto pts = curve.points();
  for (std::size_t k = 0; k < pts.size(); ++k)
    w.log_values[k] = lambda == 0.0 ? 0.0 : lambda * std::log(std::abs(pts[k] - t0));
  return finish(std::move(w));
}

Weight eta(const ArgBranch& branch) {
  Weight w;
  w.t0 = branch.t0;
  w.log_values.resize(branch.values.size());
  for (std::size_t k = 0; k < branch.values.size(); ++k)
    w.log_values[k] = -branch.values[k];
  return finish(std::move(w));
}

Weight phi(const Curve& curve, const ArgBranch& branch, std::complex<double> gamma) {
  require(branch.values.size() == curve.size(), "branch and curve sizes differ");
  Weight w;
  w.kind = WeightKind::oscillating;
  w.t0 = branch.t0;
  w.gamma = gamma;
  w.log_values.resize(curve.size());
  const auto pts = curve.points();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    double v = 0.0;
    if (gamma.real() != 0.0)
      v += gamma.real() * std::log(std::abs(pts[k] - branch.t0));
    if (gamma.imag() != 0.0)
      v -= gamma.imag() * branch.values[k];
    w.log_values[k] = v;
  }
  return finish(std::move(w));
}

Weight operator*(const Weight& a, const Weight& b) {
  require(a.size() == b.size(), "weights live on different curves");
  std::vector<double> logs(a.size());
  for (std::size_t k = 0; k < logs.size(); ++k)
    logs[k] = a.log_values[k] + b.log_values[k];
  return tabulated_weight(std::move(logs));
}

Weight pow(const Weight& w, std::span<const double> exponents) {
  require(exponents.size() == w.size(), "exponent table does not match weight");
  std::vector<double> logs(w.size());
  for (std::size_t k = 0; k < logs.size(); ++k)
    logs[k] = w.log_values[k] * exponents[k];
  return tabulated_weight(std::move(logs));
}

Weight pow(const Weight& w, double exponent) {
  std::vector<double> logs(w.size());
  for (std::size_t k = 0; k < logs.size(); ++k)
    logs[k] = w.log_values[k] * exponent;
  return tabulated_weight(std::move(logs));
}

double equivalent(const Curve& curve, const Weight& w1, const Weight& w2) {
  require(w1.size() == curve.size() && w2.size() == curve.size(),
          "weights must be tabulated on the same curve");
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < curve.node_count(); ++k) {
    const double d = w1.log_values[k] - w2.log_values[k];
    hi = std::max(hi, d);
    lo = std::min(lo, d);
  }
  return std::exp(hi - lo);
}

std::string weight_csv(const Curve& curve, const Weight& w) {
  require(w.size() == curve.size(), "weight does not match curve");
  csv::Writer out({"arclen", "re", "im", "weight_log"});
  const auto pts = curve.points();
  const auto len = curve.cumlen();
  for (std::size_t k = 0; k < pts.size(); ++k)
    out.row({csv::number(len[k]), csv::number(pts[k].real()), csv::number(pts[k].imag()),
             csv::number(w.log_values[k])});
  return out.str();
}

} // namespace carleson
