#include "carleson/argbranch.hpp"
#include "carleson/error.hpp"
#include "carleson/submult.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace carleson;

namespace {

Curve segment(std::size_t n, double r_min = 1e-4) {
  std::vector<Point> pts;
  for (std::size_t k = 0; k < n; ++k)
    pts.emplace_back(std::pow(r_min, double(k) / double(n - 1)), 0.0);
  return Curve(pts, false, "segment");
}

SubmultSamples exact(double (*rho)(double, double, double), double a, double b) {
  SubmultSamples s;
  s.xs = default_x_grid();
  for (double x : s.xs) {
    s.log_rho.push_back(std::log(rho(x, a, b)));
    s.rho.push_back(rho(x, a, b));
  }
  return s;
}

double power_rho(double x, double a, double) { return std::pow(x, a); }
double two_power_rho(double x, double a, double b) { return std::max(std::pow(x, a), std::pow(x, b)); }
double one_rho(double, double, double) { return 1.0; }

// exhaustive pair scan of the sandwich constants
std::pair<double, double> pair_scan(const Curve& c, const Weight& w, double e1, double e2,
                                    const Arc& arc) {
  const auto pts = c.points();
  double l1 = -1e300, l2 = -1e300;
  for (std::size_t t = 0; t < c.node_count(); ++t) {
    for (std::size_t s = 0; s < c.node_count(); ++s) {
      if (arc.inside[t] == arc.inside[s])
        continue;
      const double lr = std::log(std::abs(pts[t]) / std::abs(pts[s]));
      const double lw = w.log_values[t] - w.log_values[s];
      if (!arc.inside[t])
        l1 = std::max(l1, lw - e1 * lr);
      else
        l2 = std::max(l2, lw - e2 * lr);
    }
  }
  return {l1, l2};
}

void check_submultiplicative(const SubmultSamples& s, double tol) {
  // default grid: index offsets add in log x
  const long mid = long(s.xs.size() / 2);
  for (long i = 0; i < long(s.xs.size()); ++i)
    for (long j = 0; j < long(s.xs.size()); ++j) {
      const long k = i + j - mid;
      if (k < 0 || k >= long(s.xs.size()))
        continue;
      CHECK(s.log_rho[k] <= s.log_rho[i] + s.log_rho[j] + std::log1p(tol));
    }
}

} // namespace

TEST_CASE("grids") {
  const auto xs = default_x_grid();
  CHECK(xs.size() == 129);
  CHECK(xs[64] == 1.0);
  CHECK(xs.front() == doctest::Approx(1e-3));
  CHECK(xs.back() == doctest::Approx(1e3));
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(xs[i] * xs[xs.size() - 1 - i] == doctest::Approx(1.0).epsilon(1e-12));

  const Curve s = generate_log_spiral(1.0, 1e-4, 1.0, 1024);
  const auto rs = default_r_grid(s, 0);
  CHECK(rs.size() == 64);
  CHECK(rs.front() == doctest::Approx(1e-3));
  CHECK(rs.back() == doctest::Approx(1.0));
}

TEST_CASE("W of a power weight on a segment") {
  const Curve c = segment(4096);
  for (double lambda : {-0.7, 0.3, 1.5}) {
    const SubmultSamples s =
        compute_W(c, 0, power_weight(c, 0, lambda), default_x_grid(), default_r_grid(c, 0));
    for (std::size_t j = 0; j < s.xs.size(); ++j)
      CHECK(s.rho[j] == doctest::Approx(std::pow(s.xs[j], lambda)).epsilon(0.01));
    CHECK(s.rho[64] >= 1.0);
    check_submultiplicative(s, 1e-9);
  }
}

TEST_CASE("W of eta on the delta = 1 spiral") {
  const Curve c = generate_log_spiral(1.0, 1e-4, 1.0, 8192);
  const SubmultSamples s = compute_W(c, 0, eta(unwrap_arg(c, 0)), default_x_grid(),
                                     default_r_grid(c, 0));
  for (std::size_t j = 0; j < s.xs.size(); ++j)
    if (s.xs[j] >= 1e-2 && s.xs[j] <= 1e2)
      CHECK(s.rho[j] == doctest::Approx(s.xs[j]).epsilon(0.1));
  check_submultiplicative(s, 0.05);
}

TEST_CASE("W of the unit weight") {
  const Curve c = generate_mixed_spirality(-1, 1, 1e-5, 1.0, 4096);
  const SubmultSamples s = compute_W(c, 0, unit_weight(c), default_x_grid(), default_r_grid(c, 0));
  for (double v : s.rho)
    CHECK(v == 1.0);
}

TEST_CASE("empty annuli") {
  const Curve c = segment(256);
  const std::vector<double> xs{1e-3, 1.0};
  const std::vector<double> far{5.0, 6.0};
  CHECK_THROWS_AS(compute_W(c, 0, unit_weight(c), xs, far), Error);
}

TEST_CASE("estimate_indices") {
  for (double d : {-1.0, 0.0, 0.5, 2.0}) {
    const IndexPair ip = estimate_indices(exact(power_rho, d, 0));
    CHECK(ip.alpha == doctest::Approx(d).epsilon(1e-6));
    CHECK(ip.beta == doctest::Approx(d).epsilon(1e-6));
    CHECK(ip.alpha_residual < 1e-9);
  }
  const IndexPair two = estimate_indices(exact(two_power_rho, -0.4, 0.9));
  CHECK(std::abs(two.alpha + 0.4) < 1e-3);
  CHECK(std::abs(two.beta - 0.9) < 1e-3);
  const IndexPair one = estimate_indices(exact(one_rho, 0, 0));
  CHECK(one.alpha == 0.0);
  CHECK(one.beta == 0.0);

  SubmultSamples narrow;
  narrow.xs = default_x_grid(32, 2.0);
  narrow.log_rho.assign(narrow.xs.size(), 0.0);
  narrow.rho.assign(narrow.xs.size(), 1.0);
  CHECK_THROWS_AS(estimate_indices(narrow), Error);
}

TEST_CASE("spirality indices") {
  SUBCASE("circle") {
    const Curve c = generate_graded_circle(1.0, 4096, 1e-6);
    const IndexPair ip = spirality_indices(c, Point(1, 0));
    CHECK(std::abs(ip.alpha) <= 0.05);
    CHECK(std::abs(ip.beta) <= 0.05);
    CHECK(ip.alpha <= ip.beta);
  }
  SUBCASE("log spiral") {
    const Curve c = generate_log_spiral(1.0, 1e-4, 1.0, 8192);
    const IndexPair ip = spirality_indices(c, 0);
    CHECK(std::abs(ip.alpha - 1) <= 0.1);
    CHECK(std::abs(ip.beta - 1) <= 0.1);
  }
  SUBCASE("mixed spirality widens under refinement") {
    double prev_width = -1;
    double prev_alpha = 1e9;
    for (double r_min : {1e-3, 1e-6, 1e-9, 1e-12}) {
      const IndexPair ip = spirality_indices(generate_mixed_spirality(-1, 1, r_min, 1.0, 8192), 0);
      CHECK(ip.beta - ip.alpha >= prev_width - 1e-3);
      CHECK(ip.alpha <= prev_alpha + 1e-3);
      prev_width = ip.beta - ip.alpha;
      prev_alpha = ip.alpha;
    }
  }
  SUBCASE("mixed spirality regression baseline") {
    const IndexPair ip = spirality_indices(generate_mixed_spirality(-1, 1, 1e-6, 1.0, 65536), 0);
    MESSAGE("mixed(-1,1) at r_min 1e-6: alpha " << ip.alpha << ", beta " << ip.beta);
    CHECK(ip.alpha == doctest::Approx(0.1828).epsilon(0.02));
    CHECK(ip.beta == doctest::Approx(0.4776).epsilon(0.02));
  }
}

TEST_CASE("closed-form indices of W phi") {
  IndexPair sp;
  sp.alpha = -1;
  sp.beta = 1;
  IndexPair ip = phi_indices_closed_form(0.3, sp);
  CHECK(ip.alpha == 0.3);
  CHECK(ip.beta == 0.3);
  ip = phi_indices_closed_form(std::complex<double>(0, 1), sp);
  CHECK(ip.alpha == -1);
  CHECK(ip.beta == 1);
  sp.alpha = 0;
  sp.beta = 2;
  ip = phi_indices_closed_form(std::complex<double>(0.5, -1), sp);
  CHECK(ip.alpha == doctest::Approx(-1.5));
  CHECK(ip.beta == doctest::Approx(0.5));
  sp.alpha = 1;
  sp.beta = 0;
  CHECK_THROWS_AS(phi_indices_closed_form(0.1, sp), Error);

  // numeric W phi on the spiral matches
  const Curve c = generate_log_spiral(1.0, 1e-4, 1.0, 8192);
  const ArgBranch b = unwrap_arg(c, 0);
  const IndexPair spiral = spirality_indices(c, 0);
  for (auto g : {std::complex<double>(0.5, -1), {0.2, 0.3}, {-0.3, 0.6}}) {
    const IndexPair want = phi_indices_closed_form(g, spiral);
    const IndexPair got = estimate_indices(
        compute_W(c, 0, phi(c, b, g), default_x_grid(), default_r_grid(c, 0)));
    CHECK(std::abs(got.alpha - want.alpha) <= 0.15);
    CHECK(std::abs(got.beta - want.beta) <= 0.15);
  }
}

TEST_CASE("index bounds of Theorem 3.1") {
  const Curve c = generate_log_spiral(0.5, 1e-4, 1.0, 8192);
  const SubmultSamples s = compute_W(c, 0, eta(unwrap_arg(c, 0)), default_x_grid(),
                                     default_r_grid(c, 0));
  const IndexPair ip = estimate_indices(s);
  for (std::size_t j = 0; j < s.xs.size(); ++j) {
    const double lx = std::log(s.xs[j]);
    if (s.xs[j] < 1)
      CHECK(s.log_rho[j] >= (ip.alpha + ip.alpha_residual) * lx - 1e-12);
    if (s.xs[j] > 1)
      CHECK(s.log_rho[j] >= (ip.beta - ip.beta_residual) * lx - 1e-12);
  }
}

TEST_CASE("power sandwich") {
  const Curve c = generate_log_spiral(1.0, 1e-4, 1.0, 1024);
  const double delta = d_t(c, 0) / 8;
  const Arc arc = arc_around(c, 0, delta);

  SUBCASE("pair scan oracle") {
    const ArgBranch b = unwrap_arg(c, 0);
    for (const Weight& w : {unit_weight(c), power_weight(c, 0, 0.4), eta(b),
                            phi(c, b, std::complex<double>(0.3, 0.2))}) {
      const IndexPair ip = estimate_indices(
          compute_W(c, 0, w, default_x_grid(), default_r_grid(c, 0)));
      const SandwichConstants k = power_sandwich(c, 0, w, ip, 0.1, delta);
      const auto [l1, l2] = pair_scan(c, w, ip.beta + 0.1, ip.alpha - 0.1, arc);
      CHECK(k.log_c1 == doctest::Approx(l1).epsilon(1e-9));
      CHECK(k.log_c2 == doctest::Approx(l2).epsilon(1e-9));
      CHECK(std::isfinite(k.c1));
      CHECK(std::isfinite(k.c2));
    }
  }
  SUBCASE("power weight constant is close to one") {
    IndexPair ip;
    ip.alpha = ip.beta = 0.4;
    const SandwichConstants k = power_sandwich(c, 0, power_weight(c, 0, 0.4), ip, 0.1, delta);
    CHECK(k.c1 <= 1.0 + 1e-9);
    CHECK(k.c1 >= 0.9);
  }
  SUBCASE("stable under refinement") {
    const Curve fine = generate_log_spiral(1.0, 1e-4, 1.0, 2048);
    IndexPair ip;
    ip.alpha = ip.beta = 1.0;
    const SandwichConstants a = power_sandwich(c, 0, eta(unwrap_arg(c, 0)), ip, 0.1, delta);
    const SandwichConstants f = power_sandwich(fine, 0, eta(unwrap_arg(fine, 0)), ip, 0.1, delta);
    CHECK(std::abs(a.c1 - f.c1) <= 0.1 * a.c1);
    CHECK(std::abs(a.c2 - f.c2) <= 0.1 * a.c2);
  }
  CHECK_THROWS_AS(power_sandwich(c, 0, unit_weight(c), IndexPair{}, 0.1, 2.0), Error);
  CHECK_THROWS_AS(power_sandwich(c, 0, unit_weight(c), IndexPair{}, 0.1, 1e-6), Error);
}

TEST_CASE("submult csv") {
  const SubmultSamples s = exact(power_rho, 1.0, 0);
  const std::string text = submult_csv(s);
  CHECK(text.rfind("x,rho,log_x,log_rho\r\n", 0) == 0);
}
