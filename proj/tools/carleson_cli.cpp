#include "carleson/argbranch.hpp"
#include "carleson/criteria.hpp"
#include "carleson/curve.hpp"
#include "carleson/error.hpp"
#include "carleson/harness.hpp"
#include "carleson/maximal.hpp"
#include "carleson/norms.hpp"
#include "carleson/submult.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

using namespace carleson;

namespace {

struct Globals {
  std::string curve_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  std::vector<std::size_t> levels;
};

// "re,im" or a plain real number
std::complex<double> parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos)
      return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse_error, "cannot read a complex number from '" + s + "'");
  }
}

void emit(const Globals& g, const std::string& name, const std::string& text) {
  if (g.out_dir.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n')
      std::cout << '\n';
    return;
  }
  std::filesystem::create_directories(g.out_dir);
  const auto path = std::filesystem::path(g.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::invalid_argument, "cannot write " + path.string());
  out << text;
  std::cerr << "wrote " << path.string() << '\n';
}

Curve load_curve(const Globals& g) {
  require(!g.curve_path.empty(), "--curve is required for this subcommand");
  return read_curve_file(g.curve_path);
}

Point resolve_t0(const Curve& curve, const std::string& given) {
  if (!given.empty())
    return parse_complex(given);
  if (auto t0 = provenance_t0(curve))
    return *t0;
  throw Error(ErrorCode::invalid_argument, "curve has no recorded t0; pass --t0 re,im");
}

SampledFunction random_function(const Curve& curve, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SampledFunction f;
  f.values.resize(curve.size());
  for (std::size_t k = 0; k < curve.node_count(); ++k)
    f.values[k] = double(rng() >> 11) * 0x1.0p-53;
  if (curve.closed())
    f.values.back() = f.values.front();
  return f;
}

std::string indices_json(const IndexPair& ip) {
  nlohmann::json j{{"alpha", ip.alpha},
                   {"beta", ip.beta},
                   {"alpha_residual", ip.alpha_residual},
                   {"beta_residual", ip.beta_residual},
                   {"x_min", ip.x_min},
                   {"x_max", ip.x_max}};
  return j.dump(2);
}

struct ExperimentFlags {
  std::string kind = "graded_circle";
  double radius = 1.0, delta = 0.0, alpha = 0.0, beta = 0.0;
  double r_min = 1e-3, r_max = 1.0, decades = 3.0;
  double p = 2.0;
  double p_far = 0.0;
  std::string gamma = "0";
  std::size_t arcs = 8, randoms = 8;
  double margin = 0.1;

  void attach(CLI::App* app) {
    app->add_option("--kind", kind, "circle|graded_circle|log_spiral|mixed_spirality");
    app->add_option("--radius", radius);
    app->add_option("--delta", delta);
    app->add_option("--alpha", alpha);
    app->add_option("--beta", beta);
    app->add_option("--r-min", r_min, "smallest radius at the first level");
    app->add_option("--r-max", r_max);
    app->add_option("--decades", decades, "decades of r_min added per level");
    app->add_option("--p", p, "p at t0 (constant unless --p-far is given)");
    app->add_option("--p-far", p_far, "p far from t0 for a log-Hoelder profile");
    app->add_option("--gamma", gamma, "re,im");
    app->add_option("--arcs", arcs);
    app->add_option("--randoms", randoms);
    app->add_option("--margin", margin);
  }

  ExperimentConfig config(const Globals& g) const {
    ExperimentConfig c;
    c.curve.kind = parse_curve_kind(kind);
    c.curve.radius = radius;
    c.curve.delta = delta;
    c.curve.alpha = alpha;
    c.curve.beta = beta;
    c.curve.r_min = r_min;
    c.curve.r_max = r_max;
    c.curve.decades_per_level = decades;
    c.exponent.at_t0 = p;
    if (p_far > 0)
      c.exponent.far = p_far;
    c.gamma = parse_complex(gamma);
    c.family.nested_arcs = arcs;
    c.family.random_functions = randoms;
    c.family.profile_margin = margin;
    if (!g.levels.empty())
      c.levels = g.levels;
    c.seed = g.seed;
    return c;
  }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal operators on Carleson curves with oscillating weights"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--curve", g.curve_path, "curve JSON file");
  app.add_option("--out", g.out_dir, "output directory (stdout when omitted)");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--levels", g.levels, "refinement levels n1,n2,...")->delimiter(',');

  // gen-curve
  auto* gen = app.add_subcommand("gen-curve", "generate a curve and write it as JSON");
  std::string gen_kind = "circle";
  std::size_t gen_n = 4096;
  double gen_radius = 1.0, gen_delta = 1.0, gen_alpha = -1.0, gen_beta = 1.0;
  double gen_r_min = 1e-4, gen_r_max = 1.0;
  std::vector<std::string> gen_vertices;
  bool gen_closed = false;
  gen->add_option("--kind", gen_kind, "circle|graded_circle|log_spiral|mixed_spirality|polyline");
  gen->add_option("--n", gen_n);
  gen->add_option("--radius", gen_radius);
  gen->add_option("--delta", gen_delta);
  gen->add_option("--alpha", gen_alpha);
  gen->add_option("--beta", gen_beta);
  gen->add_option("--r-min", gen_r_min);
  gen->add_option("--r-max", gen_r_max);
  gen->add_option("--vertex", gen_vertices, "polyline vertex re,im (repeatable; first is t0)");
  gen->add_flag("--closed", gen_closed, "close the polyline");

  // indices
  auto* idx = app.add_subcommand("indices", "spirality indices at t0");
  std::string idx_t0;
  idx->add_option("--t0", idx_t0, "re,im (default: from the curve file)");

  // apcheck
  auto* ap = app.add_subcommand("apcheck", "grid lower bound of the A_p characteristic of phi");
  std::string ap_t0, ap_gamma = "0";
  double ap_p = 2.0;
  std::size_t ap_points = 64;
  ap->add_option("--t0", ap_t0);
  ap->add_option("--gamma", ap_gamma, "re,im");
  ap->add_option("--p", ap_p);
  ap->add_option("--points", ap_points, "evaluation points (strided nodes)");

  // norm
  auto* nrm = app.add_subcommand("norm", "Luxemburg norm of a test function");
  std::string nrm_t0, nrm_gamma = "0", nrm_f = "one";
  double nrm_p = 2.0, nrm_p_far = 0.0;
  nrm->add_option("--t0", nrm_t0);
  nrm->add_option("--gamma", nrm_gamma, "weight phi_{t0,gamma}, re,im");
  nrm->add_option("--p", nrm_p);
  nrm->add_option("--p-far", nrm_p_far);
  nrm->add_option("--f", nrm_f, "one|random");

  // maximal
  auto* mx = app.add_subcommand("maximal", "weighted maximal function of a test function");
  std::string mx_t0, mx_gamma = "0", mx_f = "one";
  mx->add_option("--t0", mx_t0);
  mx->add_option("--gamma", mx_gamma, "re,im");
  mx->add_option("--f", mx_f, "one|random");

  // verdict
  auto* vd = app.add_subcommand("verdict", "boundedness verdict of the main criterion");
  std::string vd_t0, vd_gamma = "0", vd_spirality;
  double vd_p = 2.0, vd_p_far = 0.0;
  bool vd_kps = false, vd_ersatz = false;
  vd->add_option("--t0", vd_t0);
  vd->add_option("--gamma", vd_gamma, "re,im");
  vd->add_option("--p", vd_p, "p at t0");
  vd->add_option("--p-far", vd_p_far, "p far from t0 (ersatz test)");
  vd->add_option("--spirality", vd_spirality, "alpha,beta (default: measured on --curve)");
  vd->add_flag("--kps", vd_kps, "power-weight criterion (real gamma)");
  vd->add_flag("--ersatz", vd_ersatz, "p_* variant; needs --curve");

  // probe / sweep
  auto* pr = app.add_subcommand("probe", "empirical boundedness probe across refinement levels");
  ExperimentFlags pr_flags;
  pr_flags.attach(pr);

  auto* sw = app.add_subcommand("sweep", "probe over a rectangle of gamma values");
  ExperimentFlags sw_flags;
  sw_flags.attach(sw);
  GammaGrid grid;
  sw->add_option("--re-min", grid.re_min);
  sw->add_option("--re-max", grid.re_max);
  sw->add_option("--im-min", grid.im_min);
  sw->add_option("--im-max", grid.im_max);
  sw->add_option("--step", grid.step);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      Curve c = [&] {
        if (gen_kind == "circle")
          return generate_circle(gen_radius, gen_n);
        if (gen_kind == "graded_circle")
          return generate_graded_circle(gen_radius, gen_n, gen_r_min);
        if (gen_kind == "log_spiral")
          return generate_log_spiral(gen_delta, gen_r_min, gen_r_max, gen_n);
        if (gen_kind == "mixed_spirality")
          return generate_mixed_spirality(gen_alpha, gen_beta, gen_r_min, gen_r_max, gen_n);
        if (gen_kind == "polyline") {
          std::vector<Point> vs;
          for (const auto& v : gen_vertices)
            vs.push_back(parse_complex(v));
          return generate_polyline(vs, gen_closed, gen_n, gen_r_min);
        }
        throw Error(ErrorCode::invalid_argument, "unknown curve kind: " + gen_kind);
      }();
      emit(g, "curve.json", curve_to_json(c));
    } else if (*idx) {
      const Curve c = load_curve(g);
      const Point t0 = resolve_t0(c, idx_t0);
      const ArgBranch branch = unwrap_arg(c, t0);
      const Weight w = eta(branch);
      const auto s = compute_W(c, t0, w, default_x_grid(), default_r_grid(c, t0));
      const IndexPair ip = estimate_indices(s);
      if (!g.out_dir.empty())
        emit(g, "submult.csv", submult_csv(s));
      emit(g, "indices.json", indices_json(ip));
    } else if (*ap) {
      const Curve c = load_curve(g);
      const Point t0 = resolve_t0(c, ap_t0);
      const auto gamma = parse_complex(ap_gamma);
      const Weight w = gamma.imag() == 0.0 ? power_weight(c, t0, gamma.real())
                                            : phi(c, unwrap_arg(c, t0), gamma);
      const auto nodes = strided_nodes(c, ap_points);
      const double value = muckenhoupt_ap(c, w, ap_p, nodes, {});
      emit(g, "apcheck.json", nlohmann::json{{"ap_lower_bound", value}}.dump(2));
    } else if (*nrm) {
      const Curve c = load_curve(g);
      const auto gamma = parse_complex(nrm_gamma);
      const bool weighted = gamma != std::complex<double>(0, 0);
      const bool profile = nrm_p_far > 0;
      Point t0{};
      if (weighted || profile)
        t0 = resolve_t0(c, nrm_t0);
      const ExponentField p = profile ? make_exponent(c, ProfileExponent{t0, nrm_p, nrm_p_far})
                                      : make_exponent(c, ConstantExponent{nrm_p});
      const Weight w = !weighted                ? unit_weight(c)
                       : gamma.imag() == 0.0    ? power_weight(c, t0, gamma.real())
                                                : phi(c, unwrap_arg(c, t0), gamma);
      require(nrm_f == "one" || nrm_f == "random", "--f must be one or random");
      const SampledFunction f = nrm_f == "one" ? constant_function(c, 1.0) : random_function(c, g.seed);
      emit(g, "norm.json", nlohmann::json{{"luxemburg_norm", luxemburg_norm(c, f, w, p)}}.dump(2));
    } else if (*mx) {
      const Curve c = load_curve(g);
      const auto gamma = parse_complex(mx_gamma);
      require(mx_f == "one" || mx_f == "random", "--f must be one or random");
      const SampledFunction f = mx_f == "one" ? constant_function(c, 1.0) : random_function(c, g.seed);
      const MaximalResult m = gamma == std::complex<double>(0, 0)
                                  ? maximal(c, f)
                                  : weighted_maximal(c, f, resolve_t0(c, mx_t0), gamma);
      emit(g, "maximal.csv", maximal_csv(c, m));
    } else if (*vd) {
      const auto gamma = parse_complex(vd_gamma);
      Verdict v;
      if (vd_kps) {
        require(gamma.imag() == 0.0, "--kps needs a real gamma");
        v = check_kps(vd_p, gamma.real());
      } else {
        IndexPair sp;
        std::optional<Curve> c;
        Point t0{};
        if (!g.curve_path.empty()) {
          c = load_curve(g);
          t0 = resolve_t0(*c, vd_t0);
        }
        if (!vd_spirality.empty()) {
          const auto ab = parse_complex(vd_spirality);
          sp.alpha = ab.real();
          sp.beta = ab.imag();
        } else {
          require(c.has_value(), "pass --spirality alpha,beta or --curve");
          sp = spirality_indices(*c, t0);
        }
        if (vd_ersatz) {
          require(c.has_value(), "--ersatz needs --curve");
          const ExponentField p =
              vd_p_far > 0 ? make_exponent(*c, ProfileExponent{t0, vd_p, vd_p_far})
                           : make_exponent(*c, ConstantExponent{vd_p});
          v = check_ersatz(p, gamma, sp);
        } else {
          v = check_main(vd_p, gamma, sp);
          if (c && v.classification == Classification::main_thm_bounded) {
            const ExponentField p =
                vd_p_far > 0 ? make_exponent(*c, ProfileExponent{t0, vd_p, vd_p_far})
                             : make_exponent(*c, ConstantExponent{vd_p});
            try {
              const DeltaEps de = select_delta_and_eps(*c, p, t0, gamma, sp);
              v.eps = de.eps;
              v.delta = de.delta;
            } catch (const Error& e) {
              if (e.code() != ErrorCode::no_admissible_delta)
                throw;
              std::cerr << "warning: " << e.what() << '\n';
            }
          }
        }
      }
      emit(g, "verdict.json", verdict_json(v));
    } else if (*pr) {
      const ExperimentConfig cfg = pr_flags.config(g);
      const ProbeReport report = run_probe(cfg);
      if (!g.out_dir.empty()) {
        emit(g, "probe_levels.csv", probe_levels_csv(report));
        emit(g, "probe_functions.csv", probe_functions_csv(report));
      }
      emit(g, "probe.json", probe_json(cfg, report));
    } else if (*sw) {
      const ExperimentConfig cfg = sw_flags.config(g);
      emit(g, "sweep.csv", sweep_csv(run_sweep(cfg, grid)));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_precondition(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
