#pragma once

#include "carleson/criteria.hpp"
#include "carleson/curve.hpp"
#include "carleson/norms.hpp"
#include "carleson/submult.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace carleson {

enum class CurveKind { circle, graded_circle, log_spiral, mixed_spirality };

std::string to_string(CurveKind kind);
CurveKind parse_curve_kind(const std::string& name);

/// Curve family for an experiment. At refinement level i (0-based) the
/// smallest radius is r_min * 10^(-decades_per_level * i).
struct CurveSpec {
  CurveKind kind = CurveKind::graded_circle;
  double radius = 1.0;
  double delta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double r_min = 1e-3;
  double r_max = 1.0;
  double decades_per_level = 0.0;
};

double level_r_min(const CurveSpec& spec, std::size_t level_index);
Curve build_curve(const CurveSpec& spec, std::size_t n, std::size_t level_index);
Point distinguished_point(const CurveSpec& spec);

/// Constant exponent when `far` is empty, otherwise the log-Hoelder profile
/// running from at_t0 (near t0) to far.
struct ExponentConfig {
  double at_t0 = 2.0;
  std::optional<double> far;
};

ExponentField build_exponent(const ExponentConfig& config, const Curve& curve, Point t0);

struct FamilySpec {
  std::size_t nested_arcs = 8;      ///< arcs omega(t0, d/4 * 2^-j) spread down to the resolution
  std::size_t random_functions = 8; ///< seeded bounded random functions
  double profile_margin = 0.1;      ///< exponent margin of the near-extremal profile
};

struct ExperimentConfig {
  CurveSpec curve;
  ExponentConfig exponent;
  std::complex<double> gamma{};
  FamilySpec family;
  std::vector<std::size_t> levels{1024, 2048, 4096};
  std::uint64_t seed = 1;
};

/// Throws InvalidArgument unless levels are strictly increasing and nonempty.
void validate(const ExperimentConfig& config);

enum class Trend { stable, growing, indeterminate };
std::string to_string(Trend t);

/// growing: the last three values increase monotonically by >= 1.5x overall;
/// stable: otherwise, when they stay within a factor stable_spread;
/// indeterminate: anything else (including fewer than three levels).
Trend classify_trend(std::span<const double> ratios, double stable_spread = 1.25);

struct FunctionRatio {
  std::string name;
  double ratio = 0.0; ///< NaN when the function was skipped
  std::string note;
};

struct ProbeLevel {
  std::size_t n = 0;
  double r_min = 0.0;
  double max_ratio = 0.0;
  std::string argmax;
  std::vector<FunctionRatio> functions;
};

struct ProbeReport {
  std::vector<ProbeLevel> levels;
  IndexPair spirality;
  Verdict verdict;
  Trend trend = Trend::indeterminate;

  std::vector<double> max_ratios() const;
};

/// For each level, the largest ||M_{t0,gamma} f||_{p(.)} / ||f||_{p(.)} over
/// the test family. The spirality indices default to a measurement on the
/// finest curve.
ProbeReport run_probe(const ExperimentConfig& config,
                      std::optional<IndexPair> spirality = std::nullopt);

std::string probe_levels_csv(const ProbeReport& report);
std::string probe_functions_csv(const ProbeReport& report);
std::string probe_json(const ExperimentConfig& config, const ProbeReport& report);

struct GammaGrid {
  double re_min = -0.6, re_max = 0.6;
  double im_min = -0.6, im_max = 0.6;
  double step = 0.2;
};

std::vector<std::complex<double>> gamma_points(const GammaGrid& grid);

struct SweepRow {
  std::complex<double> gamma;
  std::optional<ProbeReport> report;
  std::string error;
};

/// One probe per gamma; spirality is measured once on the finest base curve.
std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const GammaGrid& grid);
std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace carleson
