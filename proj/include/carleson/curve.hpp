#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace carleson {

using Point = std::complex<double>;

/// A rectifiable simple curve stored as a dense polyline.
///
/// Closed curves repeat their first sample at the end. That closing duplicate
/// is a sample but not a node: per-node quantities (quadrature weights,
/// maxima, annulus searches) only look at the first node_count() samples.
class Curve {
public:
  Curve(std::vector<Point> points, bool closed, std::string provenance);

  std::span<const Point> points() const { return points_; }
  std::span<const double> cumlen() const { return cumlen_; }
  bool closed() const { return closed_; }
  const std::string& provenance() const { return provenance_; }

  std::size_t size() const { return points_.size(); }
  std::size_t node_count() const { return closed_ ? points_.size() - 1 : points_.size(); }
  std::size_t segment_count() const { return points_.size() - 1; }
  double length() const { return cumlen_.back(); }
  double segment_length(std::size_t k) const { return cumlen_[k + 1] - cumlen_[k]; }

  /// Trapezoidal quadrature weights per sample (zero on the closing duplicate).
  std::span<const double> node_weights() const { return node_weights_; }

  /// Same curve traversed backwards.
  Curve reversed() const;

private:
  std::vector<Point> points_;
  std::vector<double> cumlen_;
  std::vector<double> node_weights_;
  bool closed_;
  std::string provenance_;
};

/// Distinguished point recorded by a generator as "t0=re,im" in provenance.
std::optional<Point> provenance_t0(const Curve& curve);

// Generators. Each one records its parameters and distinguished point in the
// provenance string; none of them places a sample on that point.

/// Uniform circle centred at 0; samples sit half a step off angle 0, so the
/// distinguished point t0 = radius is on the curve but not a sample.
Curve generate_circle(double radius, std::size_t n);

/// Circle with samples log-graded in angle toward t0 = radius. The nearest
/// samples lie at distance about r_min from t0; away from t0 the spacing
/// becomes uniform.
Curve generate_graded_circle(double radius, std::size_t n, double r_min);

/// tau(r) = r exp(-i delta log r), r log-spaced from r_max (sample 0) down to
/// r_min; t0 = 0.
Curve generate_log_spiral(double delta, double r_min, double r_max, std::size_t n);

/// Spiral whose argument oscillates between two logarithmic rates:
/// arg tau(r) = a L + b L sin(log(L + e)), L = log(1/r),
/// a = (alpha + beta)/2, b = (beta - alpha)/2; t0 = 0.
Curve generate_mixed_spirality(double alpha, double beta, double r_min, double r_max,
                               std::size_t n);

/// Argument of a mixed-spirality sample at radius r (exact, for oracles).
double mixed_spirality_arg(double alpha, double beta, double r);

/// Polyline through the given vertices, sampled log-graded toward vertices[0]
/// (the distinguished point, never sampled itself); the other vertices are
/// always samples. Closed polylines get a
/// corner at t0.
Curve generate_polyline(std::span<const Point> vertices, bool closed, std::size_t n,
                        double r_min);

/// One connected piece of a portion. Samples first, first+1, ... (count of
/// them, modulo node_count on closed curves) lie in the disk; measure includes
/// the clipped parts of the boundary segments.
struct PortionPiece {
  std::size_t first = 0;
  std::size_t count = 0;
  double measure = 0.0;
};

/// Gamma(t, eps): the part of the curve inside the open disk |tau - t| < eps.
struct Portion {
  std::vector<PortionPiece> pieces;
  double measure = 0.0;
};

Portion portion(const Curve& curve, Point t, double eps);

/// Grid lower bound of sup_t sup_eps |Gamma(t, eps)| / eps.
double carleson_constant(const Curve& curve, std::span<const Point> t_grid,
                         std::span<const double> eps_grid);

/// max over samples of |tau - t|.
double d_t(const Curve& curve, Point t);

/// The arc omega(t0, delta): the maximal run of nodes around t0 (starting from
/// the segment nearest to t0) that stays inside the open delta-disk.
struct Arc {
  std::vector<unsigned char> inside; ///< per sample; duplicate mirrors node 0
  std::size_t node_count = 0;        ///< nodes in the arc
};

Arc arc_around(const Curve& curve, Point t0, double delta);

/// Index of the segment closest to t.
std::size_t nearest_segment(const Curve& curve, Point t);

// JSON curve files: {"points": [[re, im], ...], "closed": bool, "provenance": str}
std::string curve_to_json(const Curve& curve);
Curve curve_from_json(const std::string& text);
void write_curve_file(const Curve& curve, const std::string& path);
Curve read_curve_file(const std::string& path);

} // namespace carleson
