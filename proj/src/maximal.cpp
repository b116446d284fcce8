#include "carleson/maximal.hpp"

#include "carleson/argbranch.hpp"
#include "carleson/csv.hpp"
#include "carleson/error.hpp"
#include "carleson/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace carleson {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::vector<MaximalResult> run(const Curve& curve, std::span<const double> log_weight,
                               std::span<const SampledFunction> fs) {
  const std::size_t nodes = curve.node_count();
  const std::size_t count = fs.size();
  const auto pts = curve.points();
  const auto wts = curve.node_weights();
  const bool weighted = !log_weight.empty();
  if (weighted)
    require(log_weight.size() == curve.size(), "weight is not tabulated on this curve");

  // h = |f| / w rescaled by exp(-shift) so the largest value is 1.
  std::vector<double> shift(count, -inf);
  std::vector<double> h(nodes * count, 0.0);
  for (std::size_t f = 0; f < count; ++f) {
    require(fs[f].values.size() == curve.size(), "function is not sampled on this curve");
    for (std::size_t k = 0; k < nodes; ++k) {
      const double a = std::abs(fs[f].values[k]);
      require(std::isfinite(a), "function values must be finite");
      if (a > 0)
        shift[f] = std::max(shift[f], std::log(a) - (weighted ? log_weight[k] : 0.0));
    }
    for (std::size_t k = 0; k < nodes; ++k) {
      const double a = std::abs(fs[f].values[k]);
      if (a > 0)
        h[k * count + f] = std::exp(std::log(a) - (weighted ? log_weight[k] : 0.0) - shift[f]);
    }
  }

  std::vector<MaximalResult> out(count);
  for (auto& r : out) {
    r.values.assign(curve.size(), 0.0);
    r.argmax_eps.assign(curve.size(), 0.0);
  }

  parallel_for(nodes, [&](std::size_t i) {
    thread_local std::vector<std::pair<double, std::uint32_t>> order;
    thread_local std::vector<double> sums, best, best_r2;
    order.resize(nodes);
    const Point t = pts[i];
    for (std::size_t k = 0; k < nodes; ++k)
      order[k] = {std::norm(pts[k] - t), static_cast<std::uint32_t>(k)};
    std::sort(order.begin(), order.end());
    sums.assign(count, 0.0);
    best.assign(count, 0.0);
    best_r2.assign(count, 0.0);
    double measure = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) {
      const std::size_t k = order[j].second;
      const double wk = wts[k];
      measure += wk;
      const double* row = &h[k * count];
      for (std::size_t f = 0; f < count; ++f)
        sums[f] += wk * row[f];
      if (j + 1 < nodes && order[j + 1].first == order[j].first)
        continue;
      if (measure <= 0)
        continue;
      const double inv = 1.0 / measure;
      for (std::size_t f = 0; f < count; ++f) {
        const double avg = sums[f] * inv;
        if (avg > best[f]) {
          best[f] = avg;
          best_r2[f] = order[j].first;
        }
      }
    }
    for (std::size_t f = 0; f < count; ++f) {
      double v = 0.0;
      if (best[f] > 0) {
        const double lw = weighted ? log_weight[i] : 0.0;
        v = std::exp(lw + shift[f] + std::log(best[f]));
      }
      out[f].values[i] = v;
      out[f].argmax_eps[i] = std::sqrt(best_r2[f]);
    }
  });
  if (curve.closed()) {
    for (auto& r : out) {
      r.values.back() = r.values.front();
      r.argmax_eps.back() = r.argmax_eps.front();
    }
  }
  return out;
}

std::vector<double> phi_logs(const Curve& curve, Point t0, std::complex<double> gamma) {
  if (gamma == std::complex<double>(0, 0))
    return {};
  if (gamma.imag() == 0.0)
    return power_weight(curve, t0, gamma.real()).log_values;
  return phi(curve, unwrap_arg(curve, t0), gamma).log_values;
}

} // namespace

std::vector<MaximalResult> conjugated_maximal(const Curve& curve,
                                              std::span<const double> log_weight,
                                              std::span<const SampledFunction> fs) {
  return run(curve, log_weight, fs);
}

MaximalResult maximal(const Curve& curve, const SampledFunction& f) {
  return run(curve, {}, std::span(&f, 1)).front();
}

MaximalResult weighted_maximal(const Curve& curve, const SampledFunction& f, Point t0,
                               std::complex<double> gamma) {
  const auto logs = phi_logs(curve, t0, gamma);
  return run(curve, logs, std::span(&f, 1)).front();
}

MaximalResult power_weighted_maximal(const Curve& curve, const SampledFunction& f, Point t0,
                                     double lambda) {
  const auto logs = phi_logs(curve, t0, lambda);
  return run(curve, logs, std::span(&f, 1)).front();
}

Decomposition decompose(const Curve& curve, const SampledFunction& f, Point t0,
                        std::complex<double> gamma, double delta) {
  Decomposition d;
  d.arc = arc_around(curve, t0, delta);
  if (d.arc.node_count == 0 || d.arc.node_count == curve.node_count())
    throw Error(ErrorCode::empty_arc, "arc omega(t0, delta) or its complement is empty");
  std::array<SampledFunction, 2> split;
  for (auto& s : split)
    s.values.assign(curve.size(), 0.0);
  for (std::size_t k = 0; k < curve.size(); ++k)
    (d.arc.inside[k] ? split[0] : split[1]).values[k] = f.values.at(k);
  const auto logs = phi_logs(curve, t0, gamma);
  const auto m = run(curve, logs, split);
  for (auto& piece : d.pieces)
    piece.assign(curve.size(), 0.0);
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const bool in = d.arc.inside[k];
    d.pieces[in ? 0 : 1][k] = m[0].values[k];
    d.pieces[in ? 2 : 3][k] = m[1].values[k];
  }
  return d;
}

std::string maximal_csv(const Curve& curve, const MaximalResult& m) {
  csv::Writer out({"arclen", "Mf", "argmax_eps"});
  const auto len = curve.cumlen();
  for (std::size_t k = 0; k < curve.size(); ++k)
    out.row({csv::number(len[k]), csv::number(m.values[k]), csv::number(m.argmax_eps[k])});
  return out.str();
}

} // namespace carleson
