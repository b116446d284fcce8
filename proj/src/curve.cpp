#include "carleson/curve.hpp"

#include "carleson/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace carleson {

namespace {

constexpr double pi = std::numbers::pi;

// Positions in [first, last]: log-spaced up to `transition`, uniform after it,
// with continuous spacing at the switch.
std::vector<double> graded_positions(std::size_t count, double first, double last,
                                     double transition) {
  transition = std::clamp(transition, first, last);
  const double log_part = std::log(transition / first);
  const double linear_part = (last - transition) / transition;
  const double step = (log_part + linear_part) / static_cast<double>(count - 1);
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double u = step * static_cast<double>(j);
    out[j] = u <= log_part ? first * std::exp(u) : transition * (1.0 + (u - log_part));
  }
  out.back() = last;
  return out;
}

// Mirror-graded signed positions around 0 on a loop of length total: count_up
// values rising from `first`, then negative values climbing to -first. Keeping
// the lower half signed preserves the resolution next to 0.
std::vector<double> two_sided_positions(std::size_t n, double first, double total,
                                        double transition) {
  const std::size_t up = (n + 1) / 2;
  const std::size_t down = n - up;
  // The two halves meet near total/2; leave half a step between them.
  double end = total / 2;
  std::vector<double> upper;
  for (int pass = 0; pass < 3; ++pass) {
    upper = graded_positions(up, first, end, std::min(transition, end));
    const double last_step = upper[up - 1] - upper[up - 2];
    end = total / 2 - last_step / 2;
  }
  std::vector<double> lower = graded_positions(std::max<std::size_t>(down, 2), first, end,
                                               std::min(transition, end));
  if (down < 2)
    lower.resize(down);
  std::vector<double> out = upper;
  for (std::size_t j = 0; j < lower.size(); ++j)
    out.push_back(-lower[lower.size() - 1 - j]);
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string t0_tag(Point t0) { return ";t0=" + fmt(t0.real()) + "," + fmt(t0.imag()); }

double max_angular_step(std::span<const double> angles) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < angles.size(); ++k)
    worst = std::max(worst, std::abs(angles[k + 1] - angles[k]));
  return worst;
}

void check_spiral_args(double r_min, double r_max, std::size_t n) {
  require(std::isfinite(r_min) && std::isfinite(r_max) && r_min > 0 && r_min < r_max,
          "spiral radii must satisfy 0 < r_min < r_max");
  require(n >= 2, "spiral needs at least two samples");
}

std::vector<double> log_radii(double r_min, double r_max, std::size_t n) {
  std::vector<double> r(n);
  const double span = std::log(r_max / r_min);
  for (std::size_t k = 0; k < n; ++k)
    r[k] = r_max * std::exp(-span * static_cast<double>(k) / static_cast<double>(n - 1));
  r.back() = r_min;
  return r;
}

Curve spiral_from_angles(std::span<const double> radii, std::span<const double> angles,
                         std::string provenance) {
  if (max_angular_step(angles) >= pi / 8)
    throw Error(ErrorCode::invalid_argument,
                "angular increment between samples reaches pi/8; increase n");
  std::vector<Point> pts(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k)
    pts[k] = std::polar(radii[k], angles[k]);
  return Curve(std::move(pts), false, std::move(provenance));
}

} // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::invalid_argument: return "InvalidArgument";
  case ErrorCode::parse_error: return "ParseError";
  case ErrorCode::branch_jump: return "BranchJump";
  case ErrorCode::all_annuli_empty: return "AllAnnuliEmpty";
  case ErrorCode::grid_too_narrow: return "GridTooNarrow";
  case ErrorCode::not_locally_integrable: return "NotLocallyIntegrable";
  case ErrorCode::empty_arc: return "EmptyArc";
  case ErrorCode::no_admissible_delta: return "NoAdmissibleDelta";
  }
  return "Unknown";
}

Curve::Curve(std::vector<Point> points, bool closed, std::string provenance)
    : points_(std::move(points)), closed_(closed), provenance_(std::move(provenance)) {
  require(points_.size() >= 2, "a curve needs at least two samples");
  double scale = 0.0;
  for (const Point& p : points_) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
      throw Error(ErrorCode::invalid_argument, "non-finite curve coordinate");
    scale = std::max(scale, std::abs(p));
  }
  if (closed_) {
    require(points_.size() >= 4, "a closed curve needs at least three nodes");
    require(std::abs(points_.back() - points_.front()) <= 1e-12 * std::max(scale, 1e-300),
            "closed curve must end at its first sample");
    points_.back() = points_.front();
  }
  cumlen_.resize(points_.size());
  cumlen_[0] = 0.0;
  for (std::size_t k = 1; k < points_.size(); ++k) {
    const double step = std::abs(points_[k] - points_[k - 1]);
    require(step > 0.0, "consecutive samples must be distinct");
    cumlen_[k] = cumlen_[k - 1] + step;
  }
  node_weights_.assign(points_.size(), 0.0);
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    const double half = 0.5 * segment_length(k);
    node_weights_[k] += half;
    node_weights_[k + 1] += half;
  }
  if (closed_) {
    node_weights_[0] += node_weights_.back();
    node_weights_.back() = 0.0;
  }
}

Curve Curve::reversed() const {
  std::vector<Point> pts(points_.rbegin(), points_.rend());
  return Curve(std::move(pts), closed_, provenance_);
}

std::optional<Point> provenance_t0(const Curve& curve) {
  const std::string& s = curve.provenance();
  const auto pos = s.find("t0=");
  if (pos == std::string::npos)
    return std::nullopt;
  std::istringstream in(s.substr(pos + 3));
  double re = 0, im = 0;
  char comma = 0;
  if (!(in >> re >> comma >> im) || comma != ',')
    return std::nullopt;
  return Point(re, im);
}

Curve generate_circle(double radius, std::size_t n) {
  require(std::isfinite(radius) && radius > 0, "circle radius must be positive");
  require(n >= 16, "circle needs at least 16 samples");
  std::vector<Point> pts(n + 1);
  for (std::size_t k = 0; k < n; ++k)
    pts[k] = std::polar(radius, 2 * pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
  pts[n] = pts[0];
  return Curve(std::move(pts), true,
               "circle(radius=" + fmt(radius) + ",n=" + std::to_string(n) + ")" +
                   t0_tag(Point(radius, 0)));
}

Curve generate_graded_circle(double radius, std::size_t n, double r_min) {
  require(std::isfinite(radius) && radius > 0, "circle radius must be positive");
  require(n >= 16, "circle needs at least 16 samples");
  const double theta_min = r_min / radius;
  require(theta_min > 0 && theta_min < 0.5, "graded circle needs 0 < r_min < radius/2");
  const std::vector<double> angles = two_sided_positions(n, theta_min, 2 * pi, 1.0);
  std::vector<Point> pts(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    // cos/sin of small angles keep |tau - radius| accurate to the last bit
    pts[k] = Point(radius * std::cos(angles[k]), radius * std::sin(angles[k]));
  }
  pts[n] = pts[0];
  return Curve(std::move(pts), true,
               "graded_circle(radius=" + fmt(radius) + ",n=" + std::to_string(n) +
                   ",r_min=" + fmt(r_min) + ")" + t0_tag(Point(radius, 0)));
}

Curve generate_log_spiral(double delta, double r_min, double r_max, std::size_t n) {
  require(std::isfinite(delta), "spiral delta must be finite");
  check_spiral_args(r_min, r_max, n);
  const std::vector<double> r = log_radii(r_min, r_max, n);
  std::vector<double> angles(n);
  for (std::size_t k = 0; k < n; ++k)
    angles[k] = -delta * std::log(r[k]);
  return spiral_from_angles(r, angles,
                            "log_spiral(delta=" + fmt(delta) + ",r_min=" + fmt(r_min) +
                                ",r_max=" + fmt(r_max) + ",n=" + std::to_string(n) + ")" +
                                t0_tag(Point(0, 0)));
}

double mixed_spirality_arg(double alpha, double beta, double r) {
  const double L = -std::log(r);
  const double mean = 0.5 * (alpha + beta);
  const double swing = 0.5 * (beta - alpha);
  if (swing == 0.0)
    return mean * L;
  return mean * L + swing * L * std::sin(std::log(L + std::numbers::e));
}

Curve generate_mixed_spirality(double alpha, double beta, double r_min, double r_max,
                               std::size_t n) {
  require(std::isfinite(alpha) && std::isfinite(beta), "spirality bounds must be finite");
  require(alpha <= beta, "mixed spirality needs alpha <= beta");
  check_spiral_args(r_min, r_max, n);
  require(-std::log(r_max) + std::numbers::e > 0, "r_max too large for the phase formula");
  const std::vector<double> r = log_radii(r_min, r_max, n);
  std::vector<double> angles(n);
  for (std::size_t k = 0; k < n; ++k)
    angles[k] = mixed_spirality_arg(alpha, beta, r[k]);
  return spiral_from_angles(r, angles,
                            "mixed_spirality(alpha=" + fmt(alpha) + ",beta=" + fmt(beta) +
                                ",r_min=" + fmt(r_min) + ",r_max=" + fmt(r_max) +
                                ",n=" + std::to_string(n) + ")" + t0_tag(Point(0, 0)));
}

Curve generate_polyline(std::span<const Point> vertices, bool closed, std::size_t n,
                        double r_min) {
  require(vertices.size() >= 2, "polyline needs at least two vertices");
  require(n >= 16, "polyline needs at least 16 samples");
  std::vector<Point> corners(vertices.begin(), vertices.end());
  if (closed) {
    require(vertices.size() >= 3, "closed polyline needs at least three vertices");
    corners.push_back(vertices.front());
  }
  std::vector<double> at(corners.size(), 0.0);
  for (std::size_t k = 1; k < corners.size(); ++k) {
    const double len = std::abs(corners[k] - corners[k - 1]);
    require(len > 0, "polyline vertices must be distinct");
    at[k] = at[k - 1] + len;
  }
  const double total = at.back();
  double transition = 0.5 * (at[1] - at[0]);
  if (closed)
    transition = std::min(transition, 0.5 * (at.back() - at[at.size() - 2]));
  require(r_min > 0 && r_min < transition, "polyline r_min must be below half an edge");

  std::vector<double> s = closed ? two_sided_positions(n, r_min, total, transition)
                                 : graded_positions(n, r_min, total, transition);
  // keep the corners
  for (std::size_t k = 1; k + 1 < at.size(); ++k)
    s.push_back(at[k]);
  if (!closed)
    s.push_back(total);
  // order by wrapped position, keep the signed value
  const auto wrapped = [&](double v) { return v < 0 ? total + v : v; };
  std::sort(s.begin(), s.end(), [&](double a, double b) { return wrapped(a) < wrapped(b); });
  s.erase(std::unique(s.begin(), s.end(),
                      [&](double a, double b) { return wrapped(b) - wrapped(a) <= 1e-12 * total; }),
          s.end());
  std::vector<Point> pts(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double pos = s[k] < 0 ? total + s[k] : s[k];
    const std::size_t edge =
        std::min<std::size_t>(std::upper_bound(at.begin(), at.end(), pos) - at.begin(),
                              at.size() - 1) - 1;
    const Point dir = (corners[edge + 1] - corners[edge]) / (at[edge + 1] - at[edge]);
    if (s[k] < 0) // measured back from the end, exact near t0
      pts[k] = corners[edge + 1] + ((at[edge + 1] - total) - s[k]) * -dir;
    else
      pts[k] = corners[edge] + (s[k] - at[edge]) * dir;
  }
  if (closed)
    pts.push_back(pts.front());
  std::string prov = std::string(closed ? "closed_" : "") + "polyline(vertices=" +
                     std::to_string(vertices.size()) + ",n=" + std::to_string(n) +
                     ",r_min=" + fmt(r_min) + ")" + t0_tag(vertices.front());
  return Curve(std::move(pts), closed, std::move(prov));
}

Portion portion(const Curve& curve, Point t, double eps) {
  require(eps > 0, "portion radius must be positive");
  const auto pts = curve.points();
  const std::size_t n = pts.size();
  const double eps2 = eps * eps;
  std::vector<unsigned char> inside(n);
  for (std::size_t k = 0; k < n; ++k)
    inside[k] = std::norm(pts[k] - t) < eps2;

  Portion out;
  bool open = false;
  PortionPiece current;
  bool first_piece_from_start = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    // |a + s d - t|^2 < eps^2 for s in (lo, hi)
    const Point a = pts[k] - t;
    const Point d = pts[k + 1] - pts[k];
    const double qa = std::norm(d);
    const double qb = (std::conj(d) * a).real();
    const double qc = std::norm(a) - eps2;
    const double disc = qb * qb - qa * qc;
    double lo = 1.0, hi = 0.0;
    if (disc > 0) {
      const double root = std::sqrt(disc);
      lo = std::max(0.0, (-qb - root) / qa);
      hi = std::min(1.0, (-qb + root) / qa);
    }
    if (inside[k])
      lo = 0.0;
    if (inside[k + 1])
      hi = 1.0;
    if (!(hi > lo)) {
      if (open) {
        out.pieces.push_back(current);
        open = false;
      }
      continue;
    }
    const double piece_len = (hi - lo) * std::sqrt(qa);
    if (!(open && inside[k])) {
      if (open)
        out.pieces.push_back(current);
      current = PortionPiece{inside[k] ? k : k + 1, inside[k] ? std::size_t{1} : 0, 0.0};
      if (k == 0 && inside[0])
        first_piece_from_start = true;
      open = true;
    }
    current.measure += piece_len;
    if (inside[k + 1]) {
      ++current.count;
    } else {
      out.pieces.push_back(current);
      open = false;
    }
  }
  if (open)
    out.pieces.push_back(current);

  if (curve.closed() && !out.pieces.empty()) {
    // The closing duplicate was counted as a separate sample; fold it back.
    PortionPiece& last = out.pieces.back();
    if (inside[n - 1]) {
      --last.count;
      if (first_piece_from_start && out.pieces.size() > 1) {
        PortionPiece& head = out.pieces.front();
        last.count += head.count;
        last.measure += head.measure;
        out.pieces.erase(out.pieces.begin());
      } else if (first_piece_from_start && out.pieces.size() == 1) {
        // whole curve inside: one piece starting at node 0
        out.pieces.front().first = 0;
      }
    }
  }
  for (const auto& piece : out.pieces)
    out.measure += piece.measure;
  return out;
}

double carleson_constant(const Curve& curve, std::span<const Point> t_grid,
                         std::span<const double> eps_grid) {
  require(!t_grid.empty() && !eps_grid.empty(), "Carleson grids must be nonempty");
  double best = 0.0;
  for (const Point& t : t_grid)
    for (double eps : eps_grid)
      best = std::max(best, portion(curve, t, eps).measure / eps);
  return best;
}

double d_t(const Curve& curve, Point t) {
  double best = 0.0;
  for (const Point& p : curve.points())
    best = std::max(best, std::abs(p - t));
  return best;
}

std::size_t nearest_segment(const Curve& curve, Point t) {
  const auto pts = curve.points();
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const Point d = pts[k + 1] - pts[k];
    const double s = std::clamp((std::conj(d) * (t - pts[k])).real() / std::norm(d), 0.0, 1.0);
    const double dist = std::norm(pts[k] + s * d - t);
    if (dist < best_dist) {
      best_dist = dist;
      best = k;
    }
  }
  return best;
}

Arc arc_around(const Curve& curve, Point t0, double delta) {
  require(delta > 0, "arc radius must be positive");
  const auto pts = curve.points();
  const std::size_t nodes = curve.node_count();
  Arc arc;
  arc.inside.assign(pts.size(), 0);
  auto in_disk = [&](std::size_t k) { return std::abs(pts[k] - t0) < delta; };
  const std::size_t seg = nearest_segment(curve, t0);
  const std::size_t left = seg % nodes;
  const std::size_t right = (seg + 1) % nodes;

  auto mark = [&](std::size_t k) {
    if (!arc.inside[k]) {
      arc.inside[k] = 1;
      ++arc.node_count;
    }
  };
  // walk right
  if (in_disk(right)) {
    std::size_t k = right;
    while (in_disk(k) && !arc.inside[k]) {
      mark(k);
      if (curve.closed())
        k = (k + 1) % nodes;
      else if (k + 1 < nodes)
        ++k;
      else
        break;
    }
  }
  // walk left
  if (in_disk(left)) {
    std::size_t k = left;
    while (in_disk(k) && !arc.inside[k]) {
      mark(k);
      if (curve.closed())
        k = (k + nodes - 1) % nodes;
      else if (k > 0)
        --k;
      else
        break;
    }
  }
  if (curve.closed())
    arc.inside.back() = arc.inside.front();
  return arc;
}

std::string curve_to_json(const Curve& curve) {
  nlohmann::json j;
  auto& arr = j["points"] = nlohmann::json::array();
  for (const Point& p : curve.points())
    arr.push_back({p.real(), p.imag()});
  j["closed"] = curve.closed();
  j["provenance"] = curve.provenance();
  return j.dump();
}

Curve curve_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
    throw Error(ErrorCode::parse_error, "curve JSON needs a \"points\" array");
  std::vector<Point> pts;
  pts.reserve(j["points"].size());
  for (const auto& item : j["points"]) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number())
      throw Error(ErrorCode::parse_error, "each point must be a [re, im] pair of numbers");
    const double re = item[0].get<double>();
    const double im = item[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
      throw Error(ErrorCode::parse_error, "non-finite coordinate");
    pts.emplace_back(re, im);
  }
  const bool closed = j.value("closed", false);
  const std::string provenance = j.value("provenance", std::string{});
  return Curve(std::move(pts), closed, provenance);
}

void write_curve_file(const Curve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::invalid_argument, "cannot write " + path);
  out << curve_to_json(curve) << '\n';
}

Curve read_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::invalid_argument, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return curve_from_json(buf.str());
}

} // namespace carleson
