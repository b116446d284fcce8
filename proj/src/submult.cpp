#include "carleson/submult.hpp"

#include "carleson/csv.hpp"
#include "carleson/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>

namespace carleson {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Range max/min queries over a fixed array.
class SparseTable {
public:
  SparseTable(std::span<const double> values, bool maximum) : maximum_(maximum) {
    const std::size_t n = values.size();
    levels_.emplace_back(values.begin(), values.end());
    for (std::size_t width = 1; 2 * width <= n; width *= 2) {
      const auto& prev = levels_.back();
      std::vector<double> next(n - 2 * width + 1);
      for (std::size_t i = 0; i < next.size(); ++i)
        next[i] = pick(prev[i], prev[i + width]);
      levels_.push_back(std::move(next));
    }
  }

  // [lo, hi), nonempty
  double query(std::size_t lo, std::size_t hi) const {
    const std::size_t level = std::bit_width(hi - lo) - 1;
    const std::size_t width = std::size_t{1} << level;
    return pick(levels_[level][lo], levels_[level][hi - width]);
  }

private:
  double pick(double a, double b) const { return maximum_ ? std::max(a, b) : std::min(a, b); }

  bool maximum_;
  std::vector<std::vector<double>> levels_;
};

// Nodes sorted by distance to t0, with annulus max/min of log psi.
class AnnulusIndex {
public:
  AnnulusIndex(const Curve& curve, Point t0, const Weight& psi) {
    const auto pts = curve.points();
    const std::size_t nodes = curve.node_count();
    std::vector<std::size_t> order(nodes);
    std::vector<double> rad(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
      order[k] = k;
      rad[k] = std::abs(pts[k] - t0);
      if (!(rad[k] > 0))
        throw Error(ErrorCode::invalid_argument, "curve sample coincides with t0");
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rad[a] < rad[b]; });
    radii_.resize(nodes);
    std::vector<double> logs(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
      radii_[i] = rad[order[i]];
      logs[i] = psi.log_values[order[i]];
    }
    max_ = std::make_unique<SparseTable>(logs, true);
    min_ = std::make_unique<SparseTable>(logs, false);

    // Largest radial span of a segment touching each log-radius bin.
    log_lo_ = std::log(radii_.front());
    log_hi_ = std::log(radii_.back());
    spans_.assign(bins, 0.0);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const double a = rad[k % nodes];
      const double b = rad[(k + 1) % nodes];
      const std::size_t first = bin_of(std::min(a, b));
      const std::size_t last = bin_of(std::max(a, b));
      for (std::size_t i = first; i <= last; ++i)
        spans_[i] = std::max(spans_[i], std::abs(a - b));
    }
  }

  double min_radius() const { return radii_.front(); }
  double max_radius() const { return radii_.back(); }

  // max/min of log psi over the band around radius r; nullopt when empty
  std::optional<double> band_max(double r) const { return query(r, true); }
  std::optional<double> band_min(double r) const { return query(r, false); }

private:
  static constexpr std::size_t bins = 4096;

  std::size_t bin_of(double r) const {
    if (log_hi_ <= log_lo_)
      return 0;
    const double u = (std::log(r) - log_lo_) / (log_hi_ - log_lo_);
    return static_cast<std::size_t>(std::clamp(u * bins, 0.0, double(bins - 1)));
  }

  std::optional<double> query(double r, bool maximum) const {
    if (r < radii_.front() * (1 - 1e-12) || r > radii_.back() * (1 + 1e-12))
      return std::nullopt;
    const double h = std::max(1e-12, 0.5 * (1 + 1e-9) * spans_[bin_of(r)] / r);
    const auto lo = std::lower_bound(radii_.begin(), radii_.end(), r * (1 - h));
    const auto hi = std::upper_bound(radii_.begin(), radii_.end(), r * (1 + h));
    if (lo >= hi)
      return std::nullopt;
    const std::size_t a = lo - radii_.begin();
    const std::size_t b = hi - radii_.begin();
    return maximum ? max_->query(a, b) : min_->query(a, b);
  }

  std::vector<double> radii_;
  std::unique_ptr<SparseTable> max_, min_;
  std::vector<double> spans_;
  double log_lo_ = 0, log_hi_ = 0;
};

struct LineFit {
  double slope = 0.0;
  double rms = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + fit.slope * (x[i] - mx));
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

} // namespace

std::vector<double> default_x_grid(std::size_t per_side, double decades) {
  std::vector<double> xs;
  xs.reserve(2 * per_side + 1);
  for (std::size_t i = per_side; i > 0; --i)
    xs.push_back(std::pow(10.0, -decades * static_cast<double>(i) / double(per_side)));
  xs.push_back(1.0);
  for (std::size_t i = 1; i <= per_side; ++i)
    xs.push_back(std::pow(10.0, decades * static_cast<double>(i) / double(per_side)));
  return xs;
}

std::vector<double> default_r_grid(const Curve& curve, Point t0, std::size_t count) {
  const auto pts = curve.points();
  double closest = inf;
  for (std::size_t k = 0; k < curve.node_count(); ++k)
    closest = std::min(closest, std::abs(pts[k] - t0));
  const double hi = d_t(curve, t0);
  const double lo = std::min(10 * closest, hi);
  std::vector<double> r(count);
  for (std::size_t i = 0; i < count; ++i)
    r[i] = count == 1 ? hi : lo * std::pow(hi / lo, double(i) / double(count - 1));
  r.back() = hi;
  return r;
}

SubmultSamples compute_W(const Curve& curve, Point t0, const Weight& psi,
                         std::span<const double> x_grid, std::span<const double> r_grid) {
  require(psi.size() == curve.size(), "weight is not tabulated on this curve");
  require(!x_grid.empty() && !r_grid.empty(), "grids must be nonempty");
  require(std::is_sorted(x_grid.begin(), x_grid.end()), "x grid must be ascending");
  const AnnulusIndex annuli(curve, t0, psi);

  SubmultSamples out;
  out.xs.assign(x_grid.begin(), x_grid.end());
  out.radii.assign(r_grid.begin(), r_grid.end());
  out.log_rho.resize(x_grid.size());
  out.rho.resize(x_grid.size());
  for (std::size_t j = 0; j < x_grid.size(); ++j) {
    const double x = x_grid[j];
    require(x > 0, "x grid must be positive");
    double best = -inf;
    for (double R : r_grid) {
      const auto top = x <= 1 ? annuli.band_max(x * R) : annuli.band_max(R);
      const auto bottom = x <= 1 ? annuli.band_min(R) : annuli.band_min(R / x);
      if (top && bottom)
        best = std::max(best, *top - *bottom);
    }
    if (best == -inf)
      throw Error(ErrorCode::all_annuli_empty,
                  "no radius pair with samples at x = " + csv::number(x));
    out.log_rho[j] = best;
    out.rho[j] = std::exp(best);
  }
  return out;
}

IndexPair estimate_indices(const SubmultSamples& s) {
  require(!s.xs.empty() && s.xs.size() == s.log_rho.size(), "malformed samples");
  const double x_min = s.xs.front();
  const double x_max = s.xs.back();
  if (x_min > 1e-3 * (1 + 1e-9) || x_max < 1e3 * (1 - 1e-9))
    throw Error(ErrorCode::grid_too_narrow, "x grid must span three decades on each side of 1");

  auto tail = [&](bool lower) {
    std::vector<double> lx, ly;
    for (std::size_t j = 0; j < s.xs.size(); ++j) {
      const double x = s.xs[j];
      const bool in = lower ? x <= 10 * x_min * (1 + 1e-9) : x >= x_max / 10 * (1 - 1e-9);
      if (in) {
        lx.push_back(std::log(x));
        ly.push_back(s.log_rho[j]);
      }
    }
    if (lx.size() < 2)
      throw Error(ErrorCode::grid_too_narrow, "fewer than two grid points in a tail decade");
    return fit_line(lx, ly);
  };
  const LineFit low = tail(true);
  const LineFit high = tail(false);
  IndexPair out;
  out.alpha = low.slope;
  out.beta = high.slope;
  if (out.alpha > out.beta) // sampling noise on a (nearly) power-like weight
    out.alpha = out.beta = 0.5 * (low.slope + high.slope);
  out.alpha_residual = low.rms / std::log(10.0);
  out.beta_residual = high.rms / std::log(10.0);
  out.x_min = x_min;
  out.x_max = x_max;
  return out;
}

IndexPair spirality_indices(const Curve& curve, Point t0) {
  const ArgBranch branch = unwrap_arg(curve, t0);
  const Weight w = eta(branch);
  const auto xs = default_x_grid();
  const auto rs = default_r_grid(curve, t0);
  return estimate_indices(compute_W(curve, t0, w, xs, rs));
}

IndexPair phi_indices_closed_form(std::complex<double> gamma, const IndexPair& spirality) {
  require(spirality.alpha <= spirality.beta, "spirality indices must satisfy alpha <= beta");
  const double lo = spirality.alpha * gamma.imag();
  const double hi = spirality.beta * gamma.imag();
  IndexPair out;
  out.alpha = gamma.real() + std::min(lo, hi);
  out.beta = gamma.real() + std::max(lo, hi);
  return out;
}

SandwichConstants power_sandwich(const Curve& curve, Point t0, const Weight& w,
                                 const IndexPair& indices, double eps, double delta) {
  require(w.size() == curve.size(), "weight is not tabulated on this curve");
  require(eps > 0, "eps must be positive");
  const double reach = d_t(curve, t0);
  require(delta > 0 && delta < reach, "need 0 < delta < d_t0");
  const Arc arc = arc_around(curve, t0, delta);
  if (arc.node_count == 0 || arc.node_count == curve.node_count())
    throw Error(ErrorCode::empty_arc, "arc or its complement has no samples");

  // w(t)/w(tau) / |(t-t0)/(tau-t0)|^e separates as exp(A(t) - A(tau)) with
  // A = log w - e log|. - t0|, so the pair maximum is max A - min A.
  const auto pts = curve.points();
  double out1 = -inf, in1 = inf, in2 = -inf, out2 = inf;
  const double e1 = indices.beta + eps;
  const double e2 = indices.alpha - eps;
  for (std::size_t k = 0; k < curve.node_count(); ++k) {
    const double lr = std::log(std::abs(pts[k] - t0));
    const double a1 = w.log_values[k] - e1 * lr;
    const double a2 = w.log_values[k] - e2 * lr;
    if (arc.inside[k]) {
      in1 = std::min(in1, a1);
      in2 = std::max(in2, a2);
    } else {
      out1 = std::max(out1, a1);
      out2 = std::min(out2, a2);
    }
  }
  SandwichConstants c;
  c.log_c1 = out1 - in1;
  c.log_c2 = in2 - out2;
  c.c1 = std::exp(c.log_c1);
  c.c2 = std::exp(c.log_c2);
  return c;
}

std::string submult_csv(const SubmultSamples& s) {
  csv::Writer out({"x", "rho", "log_x", "log_rho"});
  for (std::size_t j = 0; j < s.xs.size(); ++j)
    out.row({csv::number(s.xs[j]), csv::number(s.rho[j]), csv::number(std::log(s.xs[j])),
             csv::number(s.log_rho[j])});
  return out.str();
}

} // namespace carleson
