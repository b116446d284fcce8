#include "carleson/norms.hpp"

#include "carleson/error.hpp"
#include "carleson/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carleson {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct Summary {
  double p_min = inf;
  double p_max = -inf;
};

Summary check_values(std::span<const double> values) {
  Summary s;
  for (double v : values) {
    if (!std::isfinite(v) || !(v > 1.0))
      throw Error(ErrorCode::invalid_argument, "exponent values must be finite and > 1");
    s.p_min = std::min(s.p_min, v);
    s.p_max = std::max(s.p_max, v);
  }
  return s;
}

// log|f_k w_k| per sample (-inf where f vanishes)
std::vector<double> log_magnitudes(const Curve& curve, const SampledFunction& f,
                                   const Weight* w) {
  require(f.values.size() == curve.size(), "function is not sampled on this curve");
  if (w)
    require(w->size() == curve.size(), "weight is not tabulated on this curve");
  std::vector<double> g(curve.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double a = std::abs(f.values[k]);
    if (!std::isfinite(a))
      throw Error(ErrorCode::invalid_argument, "function values must be finite");
    g[k] = a == 0.0 ? -inf : std::log(a) + (w ? w->log_values[k] : 0.0);
  }
  return g;
}

double modular_from_logs(const Curve& curve, std::span<const double> g,
                         std::span<const double> p, double log_lambda) {
  const auto wts = curve.node_weights();
  double total = 0.0;
  for (std::size_t k = 0; k < curve.node_count(); ++k) {
    if (g[k] == -inf || wts[k] == 0.0)
      continue;
    total += wts[k] * std::exp(p[k] * (g[k] - log_lambda));
  }
  return std::isnan(total) ? inf : total;
}

double luxemburg_from_logs(const Curve& curve, std::span<const double> g,
                           std::span<const double> p) {
  double top = -inf;
  for (std::size_t k = 0; k < curve.node_count(); ++k)
    top = std::max(top, g[k]);
  if (top == -inf)
    return 0.0;
  if (top == inf)
    throw Error(ErrorCode::not_locally_integrable, "integrand is infinite");
  double lo = top + std::log(1e-18);
  double hi = top + std::log(curve.length() + 1.0);
  if (!(modular_from_logs(curve, g, p, hi) <= 1.0))
    throw Error(ErrorCode::not_locally_integrable, "modular stays above 1 for every lambda");
  while (modular_from_logs(curve, g, p, lo) <= 1.0) {
    hi = lo;
    lo -= std::log(1e18);
    if (lo < top - 2000)
      return std::exp(hi);
  }
  while (hi - lo > 1e-11) {
    const double mid = 0.5 * (lo + hi);
    if (modular_from_logs(curve, g, p, mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

} // namespace

double ExponentField::p_star(std::span<const unsigned char> scope) const {
  double best = at_t0;
  for (std::size_t k = 0; k < values.size() && k < scope.size(); ++k)
    if (scope[k])
      best = std::min(best, values[k]);
  return best;
}

double measure_dini_constant(const Curve& curve, std::span<const double> p) {
  const auto pts = curve.points();
  const std::vector<std::size_t> nodes = strided_nodes(curve, 1414);
  double best = 0.0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const double dist = std::abs(pts[nodes[a]] - pts[nodes[b]]);
      if (dist > 0.5 || dist == 0.0)
        continue;
      best = std::max(best, std::abs(p[nodes[a]] - p[nodes[b]]) * -std::log(dist));
    }
  }
  return best;
}

ExponentField make_exponent(const Curve& curve, const ExponentSpec& spec) {
  ExponentField out;
  if (const auto* c = std::get_if<ConstantExponent>(&spec)) {
    out.values.assign(curve.size(), c->value);
    check_values(out.values);
    out.at_t0 = c->value;
  } else if (const auto* prof = std::get_if<ProfileExponent>(&spec)) {
    check_values(std::vector<double>{prof->at_t0, prof->far});
    const double reach = d_t(curve, prof->t0);
    const auto pts = curve.points();
    out.values.resize(curve.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double r = std::abs(pts[k] - prof->t0);
      require(r > 0, "curve sample coincides with t0");
      out.values[k] = prof->at_t0 + (prof->far - prof->at_t0) / (1.0 + std::log(reach / r));
    }
    out.at_t0 = prof->at_t0;
  } else {
    const auto& table = std::get<TableExponent>(spec);
    require(table.values.size() == curve.size(), "exponent table does not match curve");
    out.values = table.values;
    out.at_t0 = table.at_t0.value_or(table.values.front());
    check_values(std::vector<double>{out.at_t0});
  }
  const Summary s = check_values(out.values);
  out.p_min = s.p_min;
  out.p_max = s.p_max;
  out.dini_constant = s.p_min == s.p_max ? 0.0 : measure_dini_constant(curve, out.values);
  return out;
}

SampledFunction constant_function(const Curve& curve, double c) {
  return SampledFunction{std::vector<std::complex<double>>(curve.size(), c)};
}

double modular(const Curve& curve, const SampledFunction& f, const Weight& w,
               const ExponentField& p, double lambda) {
  require(lambda > 0, "lambda must be positive");
  require(p.values.size() == curve.size(), "exponent is not sampled on this curve");
  const auto g = log_magnitudes(curve, f, &w);
  return modular_from_logs(curve, g, p.values, std::log(lambda));
}

double luxemburg_norm(const Curve& curve, const SampledFunction& f, const Weight& w,
                      const ExponentField& p) {
  require(p.values.size() == curve.size(), "exponent is not sampled on this curve");
  return luxemburg_from_logs(curve, log_magnitudes(curve, f, &w), p.values);
}

double luxemburg_norm(const Curve& curve, const SampledFunction& f, const ExponentField& p) {
  require(p.values.size() == curve.size(), "exponent is not sampled on this curve");
  return luxemburg_from_logs(curve, log_magnitudes(curve, f, nullptr), p.values);
}

double classic_p_norm(const Curve& curve, const SampledFunction& f, const Weight& w, double p) {
  require(p > 1, "p must exceed 1");
  const auto g = log_magnitudes(curve, f, &w);
  double top = -inf;
  for (std::size_t k = 0; k < curve.node_count(); ++k)
    top = std::max(top, g[k]);
  if (top == -inf)
    return 0.0;
  const auto wts = curve.node_weights();
  double total = 0.0;
  for (std::size_t k = 0; k < curve.node_count(); ++k)
    if (g[k] != -inf)
      total += wts[k] * std::exp(p * (g[k] - top));
  return std::exp(top) * std::pow(total, 1.0 / p);
}

std::vector<std::size_t> strided_nodes(const Curve& curve, std::size_t max_count) {
  const std::size_t nodes = curve.node_count();
  const std::size_t stride = std::max<std::size_t>(1, (nodes + max_count - 1) / max_count);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < nodes; k += stride)
    out.push_back(k);
  return out;
}

namespace {

// Length of the part of segment [a, b] inside the open disk |z - t| < eps.
double clipped_length(Point a, Point b, Point t, double eps) {
  const Point d = b - a, m = a - t;
  const double len2 = std::norm(d);
  const double half_b = (d.real() * m.real() + d.imag() * m.imag()) / len2;
  const double disc = half_b * half_b - (std::norm(m) - eps * eps) / len2;
  if (disc <= 0)
    return 0.0;
  const double root = std::sqrt(disc);
  const double lo = std::max(0.0, -half_b - root), hi = std::min(1.0, -half_b + root);
  return hi > lo ? (hi - lo) * std::sqrt(len2) : 0.0;
}

double point_segment_distance(Point a, Point b, Point t) {
  const Point d = b - a;
  const double s = std::clamp(((t - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  return std::abs(a + s * d - t);
}

} // namespace

double muckenhoupt_ap(const Curve& curve, const Weight& w, double p,
                      std::span<const std::size_t> t_nodes, std::span<const double> eps_grid) {
  require(p > 1 && std::isfinite(p), "A_p needs a constant 1 < p < inf");
  require(w.size() == curve.size(), "weight is not tabulated on this curve");
  require(!t_nodes.empty(), "t grid must be nonempty");
  const double q = p / (p - 1);
  const auto pts = curve.points();

  // Half-segments carry the value of their own end node (the trapezoid rule,
  // but clipped to the disk exactly).
  struct Piece {
    Point a, b;
    double up, down;
  };
  std::vector<Piece> pieces;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const Point mid = 0.5 * (pts[k] + pts[k + 1]);
    const std::size_t far = (k + 1 == curve.size() - 1 && curve.closed()) ? 0 : k + 1;
    const auto add = [&](Point a, Point b, std::size_t node) {
      if (a != b)
        pieces.push_back({a, b, std::exp(p * w.log_values[node]),
                          std::exp(-q * w.log_values[node])});
    };
    add(pts[k], mid, k);
    add(mid, pts[k + 1], far);
  }
  std::vector<double> eps_sorted(eps_grid.begin(), eps_grid.end());
  std::sort(eps_sorted.begin(), eps_sorted.end());

  std::vector<double> per_t(t_nodes.size(), 0.0);
  parallel_for(t_nodes.size(), [&](std::size_t i) {
    const Point t = pts[t_nodes[i]];
    // sweep eps upward: pieces enter the partial set at their nearest
    // distance and become full at their farthest
    std::vector<std::pair<double, std::size_t>> enter(pieces.size()), leave(pieces.size());
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      enter[k] = {point_segment_distance(pieces[k].a, pieces[k].b, t), k};
      leave[k] = {std::max(std::abs(pieces[k].a - t), std::abs(pieces[k].b - t)), k};
    }
    std::sort(enter.begin(), enter.end());
    std::sort(leave.begin(), leave.end());

    std::vector<double> grid = eps_sorted;
    if (grid.empty()) {
      grid.reserve(pts.size());
      for (std::size_t k = 0; k < curve.node_count(); ++k)
        if (k != t_nodes[i])
          grid.push_back(std::abs(pts[k] - t));
      std::sort(grid.begin(), grid.end());
      grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }

    std::vector<unsigned char> state(pieces.size(), 0); // 0 outside, 1 partial, 2 full
    std::vector<std::size_t> partial;
    double full_up = 0, full_down = 0, best = 0;
    std::size_t e = 0, l = 0;
    for (double eps : grid) {
      if (eps <= 0)
        continue;
      while (e < enter.size() && enter[e].first < eps) {
        if (state[enter[e].second] == 0) {
          state[enter[e].second] = 1;
          partial.push_back(enter[e].second);
        }
        ++e;
      }
      while (l < leave.size() && leave[l].first <= eps) {
        const std::size_t k = leave[l].second;
        if (state[k] != 2) {
          state[k] = 2;
          const double len = std::abs(pieces[k].b - pieces[k].a);
          full_up += len * pieces[k].up;
          full_down += len * pieces[k].down;
        }
        ++l;
      }
      std::erase_if(partial, [&](std::size_t k) { return state[k] == 2; });
      double s_up = full_up, s_down = full_down;
      for (std::size_t k : partial) {
        const double len = clipped_length(pieces[k].a, pieces[k].b, t, eps);
        s_up += len * pieces[k].up;
        s_down += len * pieces[k].down;
      }
      if (s_up > 0 && s_down > 0)
        best = std::max(best, std::pow(s_up / eps, 1 / p) * std::pow(s_down / eps, 1 / q));
    }
    per_t[i] = best;
  });
  return *std::max_element(per_t.begin(), per_t.end());
}

} // namespace carleson
