#include "carleson/harness.hpp"

#include "carleson/argbranch.hpp"
#include "carleson/csv.hpp"
#include "carleson/error.hpp"
#include "carleson/maximal.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace carleson {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> log_phi(const Curve& curve, Point t0, std::complex<double> gamma) {
  if (gamma == std::complex<double>(0, 0))
    return std::vector<double>(curve.size(), 0.0);
  if (gamma.imag() == 0.0)
    return power_weight(curve, t0, gamma.real()).log_values;
  return phi(curve, unwrap_arg(curve, t0), gamma).log_values;
}

struct Family {
  std::vector<std::string> names;
  std::vector<SampledFunction> fs;
};

Family build_family(const ExperimentConfig& cfg, const Curve& curve, Point t0,
                    const ExponentField& p, std::span<const double> lphi, double r_min,
                    std::size_t level) {
  Family fam;
  const std::size_t n = curve.size();

  // nested arcs, 2^-j steps from d/4 down to ten times the resolution
  const double top = d_t(curve, t0) / 4;
  const double bottom = std::min(top, 10 * r_min);
  const double span = std::log2(top / bottom);
  const std::size_t arcs = cfg.family.nested_arcs;
  long last_j = -1;
  for (std::size_t i = 0; i < arcs; ++i) {
    const long j = arcs == 1 ? 0 : std::lround(span * double(i) / double(arcs - 1));
    if (j == last_j)
      continue;
    last_j = j;
    const Arc arc = arc_around(curve, t0, std::ldexp(top, -int(j)));
    if (arc.node_count == 0)
      continue;
    SampledFunction f;
    f.values.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      f.values[k] = arc.inside[k] ? 1.0 : 0.0;
    fam.names.push_back("arc_j" + std::to_string(j));
    fam.fs.push_back(std::move(f));
  }

  // near-extremal profile phi^-1 |tau - t0|^(-1/p + margin)
  {
    SampledFunction f;
    f.values.resize(n);
    const auto pts = curve.points();
    for (std::size_t k = 0; k < n; ++k) {
      const double r = std::abs(pts[k] - t0);
      const double e = -1.0 / p.values[k] + cfg.family.profile_margin;
      f.values[k] = std::exp(e * std::log(r) - lphi[k]);
    }
    fam.names.push_back("profile");
    fam.fs.push_back(std::move(f));
  }

  for (std::size_t i = 0; i < cfg.family.random_functions; ++i) {
    std::mt19937_64 rng(cfg.seed ^ (0x9e3779b97f4a7c15ULL * (level + 1)) ^ (i * 0x2545f491ULL));
    SampledFunction f;
    f.values.resize(n);
    for (std::size_t k = 0; k < curve.node_count(); ++k)
      f.values[k] = double(rng() >> 11) * 0x1.0p-53;
    if (curve.closed())
      f.values.back() = f.values.front();
    fam.names.push_back("random_" + std::to_string(i));
    fam.fs.push_back(std::move(f));
  }
  return fam;
}

ProbeLevel probe_level(const ExperimentConfig& cfg, std::size_t level) {
  ProbeLevel out;
  out.n = cfg.levels[level];
  out.r_min = level_r_min(cfg.curve, level);
  const Curve curve = build_curve(cfg.curve, out.n, level);
  const Point t0 = distinguished_point(cfg.curve);
  const ExponentField p = build_exponent(cfg.exponent, curve, t0);
  const auto lphi = log_phi(curve, t0, cfg.gamma);
  const Family fam = build_family(cfg, curve, t0, p, lphi, out.r_min, level);
  const auto ms = conjugated_maximal(curve, lphi, fam.fs);

  out.max_ratio = 0.0;
  for (std::size_t i = 0; i < fam.fs.size(); ++i) {
    FunctionRatio fr{fam.names[i], nan, ""};
    try {
      const double base = luxemburg_norm(curve, fam.fs[i], p);
      SampledFunction mf;
      mf.values.assign(ms[i].values.begin(), ms[i].values.end());
      const double image = luxemburg_norm(curve, mf, p);
      fr.ratio = image / base;
      if (!std::isfinite(fr.ratio)) {
        fr.note = "non-finite ratio";
        fr.ratio = nan;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::not_locally_integrable)
        throw;
      fr.note = e.what();
    }
    if (std::isfinite(fr.ratio) && fr.ratio > out.max_ratio) {
      out.max_ratio = fr.ratio;
      out.argmax = fr.name;
    }
    out.functions.push_back(std::move(fr));
  }
  return out;
}

} // namespace

std::string to_string(CurveKind kind) {
  switch (kind) {
  case CurveKind::circle: return "circle";
  case CurveKind::graded_circle: return "graded_circle";
  case CurveKind::log_spiral: return "log_spiral";
  case CurveKind::mixed_spirality: return "mixed_spirality";
  }
  return "circle";
}

CurveKind parse_curve_kind(const std::string& name) {
  for (CurveKind k : {CurveKind::circle, CurveKind::graded_circle, CurveKind::log_spiral,
                      CurveKind::mixed_spirality})
    if (to_string(k) == name)
      return k;
  throw Error(ErrorCode::invalid_argument, "unknown curve kind: " + name);
}

double level_r_min(const CurveSpec& spec, std::size_t level_index) {
  return spec.r_min * std::pow(10.0, -spec.decades_per_level * double(level_index));
}

Curve build_curve(const CurveSpec& spec, std::size_t n, std::size_t level_index) {
  const double r_min = level_r_min(spec, level_index);
  switch (spec.kind) {
  case CurveKind::circle: return generate_circle(spec.radius, n);
  case CurveKind::graded_circle: return generate_graded_circle(spec.radius, n, r_min);
  case CurveKind::log_spiral: return generate_log_spiral(spec.delta, r_min, spec.r_max, n);
  case CurveKind::mixed_spirality:
    return generate_mixed_spirality(spec.alpha, spec.beta, r_min, spec.r_max, n);
  }
  throw Error(ErrorCode::invalid_argument, "unknown curve kind");
}

Point distinguished_point(const CurveSpec& spec) {
  if (spec.kind == CurveKind::circle || spec.kind == CurveKind::graded_circle)
    return {spec.radius, 0.0};
  return {0.0, 0.0};
}

ExponentField build_exponent(const ExponentConfig& config, const Curve& curve, Point t0) {
  if (config.far)
    return make_exponent(curve, ProfileExponent{t0, config.at_t0, *config.far});
  return make_exponent(curve, ConstantExponent{config.at_t0});
}

void validate(const ExperimentConfig& config) {
  require(!config.levels.empty(), "at least one refinement level is needed");
  for (std::size_t i = 1; i < config.levels.size(); ++i)
    require(config.levels[i] > config.levels[i - 1], "levels must be strictly increasing");
  require(config.family.profile_margin > 0, "profile margin must be positive");
  require(config.curve.decades_per_level >= 0, "decades per level must be nonnegative");
}

std::string to_string(Trend t) {
  switch (t) {
  case Trend::stable: return "stable";
  case Trend::growing: return "growing";
  case Trend::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

Trend classify_trend(std::span<const double> r, double stable_spread) {
  if (r.size() < 3)
    return Trend::indeterminate;
  const auto last = r.subspan(r.size() - 3);
  for (double v : last)
    if (!std::isfinite(v) || v <= 0)
      return Trend::indeterminate;
  if (last[0] < last[1] && last[1] < last[2] && last[2] >= 1.5 * last[0])
    return Trend::growing;
  const auto [lo, hi] = std::minmax_element(last.begin(), last.end());
  if (*hi <= stable_spread * *lo)
    return Trend::stable;
  return Trend::indeterminate;
}

std::vector<double> ProbeReport::max_ratios() const {
  std::vector<double> out;
  for (const auto& l : levels)
    out.push_back(l.max_ratio);
  return out;
}

ProbeReport run_probe(const ExperimentConfig& config, std::optional<IndexPair> spirality) {
  validate(config);
  ProbeReport report;
  const Point t0 = distinguished_point(config.curve);
  if (spirality) {
    report.spirality = *spirality;
  } else {
    const std::size_t last = config.levels.size() - 1;
    report.spirality = spirality_indices(build_curve(config.curve, config.levels[last], last), t0);
  }
  report.verdict = check_main(config.exponent.at_t0, config.gamma, report.spirality);
  for (std::size_t i = 0; i < config.levels.size(); ++i)
    report.levels.push_back(probe_level(config, i));
  const auto ratios = report.max_ratios();
  report.trend = classify_trend(ratios);
  return report;
}

std::string probe_levels_csv(const ProbeReport& report) {
  csv::Writer out({"level", "n", "r_min", "max_ratio", "argmax"});
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const auto& l = report.levels[i];
    out.row({std::to_string(i), std::to_string(l.n), csv::number(l.r_min),
             csv::number(l.max_ratio), l.argmax});
  }
  return out.str();
}

std::string probe_functions_csv(const ProbeReport& report) {
  csv::Writer out({"level", "function", "ratio", "note"});
  for (std::size_t i = 0; i < report.levels.size(); ++i)
    for (const auto& f : report.levels[i].functions)
      out.row({std::to_string(i), f.name, csv::number(f.ratio), f.note});
  return out.str();
}

std::string probe_json(const ExperimentConfig& config, const ProbeReport& report) {
  nlohmann::json j;
  j["curve"] = {{"kind", to_string(config.curve.kind)},
                {"radius", config.curve.radius},
                {"delta", config.curve.delta},
                {"alpha", config.curve.alpha},
                {"beta", config.curve.beta},
                {"r_min", config.curve.r_min},
                {"r_max", config.curve.r_max},
                {"decades_per_level", config.curve.decades_per_level}};
  j["exponent"] = {{"at_t0", config.exponent.at_t0},
                   {"far", config.exponent.far ? nlohmann::json(*config.exponent.far)
                                               : nlohmann::json(nullptr)}};
  j["gamma"] = {config.gamma.real(), config.gamma.imag()};
  j["seed"] = config.seed;
  j["spirality"] = {{"alpha", report.spirality.alpha},
                    {"beta", report.spirality.beta},
                    {"alpha_residual", report.spirality.alpha_residual},
                    {"beta_residual", report.spirality.beta_residual}};
  j["verdict"] = nlohmann::json::parse(verdict_json(report.verdict));
  j["trend"] = to_string(report.trend);
  auto& levels = j["levels"] = nlohmann::json::array();
  for (const auto& l : report.levels)
    levels.push_back({{"n", l.n}, {"r_min", l.r_min}, {"max_ratio", l.max_ratio},
                      {"argmax", l.argmax}});
  return j.dump(2);
}

std::vector<std::complex<double>> gamma_points(const GammaGrid& g) {
  require(g.step > 0 && g.re_max >= g.re_min && g.im_max >= g.im_min, "bad gamma grid");
  const auto steps = [&](double lo, double hi) {
    return static_cast<std::size_t>(std::floor((hi - lo) / g.step + 1e-9)) + 1;
  };
  std::vector<std::complex<double>> out;
  for (std::size_t i = 0; i < steps(g.re_min, g.re_max); ++i)
    for (std::size_t k = 0; k < steps(g.im_min, g.im_max); ++k)
      out.emplace_back(g.re_min + double(i) * g.step, g.im_min + double(k) * g.step);
  return out;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const GammaGrid& grid) {
  validate(base);
  const std::size_t last = base.levels.size() - 1;
  const IndexPair spirality = spirality_indices(build_curve(base.curve, base.levels[last], last),
                                                distinguished_point(base.curve));
  std::vector<SweepRow> rows;
  for (const auto g : gamma_points(grid)) {
    SweepRow row{g, std::nullopt, ""};
    ExperimentConfig cfg = base;
    cfg.gamma = g;
    try {
      row.report = run_probe(cfg, spirality);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::size_t levels = 0;
  for (const auto& r : rows)
    if (r.report)
      levels = std::max(levels, r.report->levels.size());
  std::vector<std::string> header{"re_gamma", "im_gamma", "lower", "upper", "classification",
                                  "trend"};
  for (std::size_t i = 0; i < levels; ++i)
    header.push_back("ratio_" + std::to_string(i));
  header.push_back("error");
  csv::Writer out(header);
  for (const auto& r : rows) {
    std::vector<std::string> cells{csv::number(r.gamma.real()), csv::number(r.gamma.imag())};
    if (r.report) {
      cells.push_back(csv::number(r.report->verdict.lower));
      cells.push_back(csv::number(r.report->verdict.upper));
      cells.push_back(to_string(r.report->verdict.classification));
      cells.push_back(to_string(r.report->trend));
      for (std::size_t i = 0; i < levels; ++i)
        cells.push_back(i < r.report->levels.size() ? csv::number(r.report->levels[i].max_ratio)
                                                    : "");
    } else {
      cells.insert(cells.end(), 4 + levels, "");
    }
    cells.push_back(r.error);
    out.row(cells);
  }
  return out.str();
}

} // namespace carleson
