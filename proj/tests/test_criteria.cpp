#include "carleson/criteria.hpp"
#include "carleson/error.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <random>

using namespace carleson;

namespace {

IndexPair pair(double a, double b) {
  IndexPair p;
  p.alpha = a;
  p.beta = b;
  return p;
}

} // namespace

TEST_CASE("main condition examples") {
  Verdict v = check_main(2.0, 0.3, pair(0, 0));
  CHECK(v.lower == doctest::Approx(0.8));
  CHECK(v.upper == doctest::Approx(0.8));
  CHECK(v.classification == Classification::main_thm_bounded);

  v = check_main(2.0, std::complex<double>(0, 1), pair(-1, 1));
  CHECK(v.lower == doctest::Approx(-0.5));
  CHECK(v.classification == Classification::necessary_violated);

  v = check_main(2.0, std::complex<double>(0, 0.1), pair(-1, 1));
  CHECK(v.lower == doctest::Approx(0.4));
  CHECK(v.upper == doctest::Approx(0.6));
  CHECK(v.classification == Classification::main_thm_bounded);
  CHECK(v.margin_low == doctest::Approx(0.4));
  CHECK(v.margin_high == doctest::Approx(0.4));

  // equality is not strict
  v = check_main(2.0, 0.5, pair(0, 0));
  CHECK(v.classification == Classification::indeterminate);
  CHECK(!v.provably_unbounded);
  CHECK_THROWS_AS(check_main(1.0, 0.0, pair(0, 0)), Error);
}

TEST_CASE("power weight examples") {
  CHECK(check_kps(2.0, 0.0).classification == Classification::kps_bounded);
  const Verdict edge = check_kps(2.0, 0.5);
  CHECK(edge.classification == Classification::indeterminate);
  CHECK(edge.provably_unbounded);
  const Verdict low = check_kps(1.5, -0.6);
  CHECK(low.lower == doctest::Approx(1 / 1.5 - 0.6));
  CHECK(low.classification == Classification::kps_bounded);
  CHECK(!low.provably_unbounded);
  CHECK(check_kps(2.0, 0.7).provably_unbounded);
  CHECK(check_kps(2.0, -0.7).provably_unbounded);
}

TEST_CASE("main and power criteria agree on real exponents") {
  for (double p : {1.2, 2.0, 3.5})
    for (double lambda = -1.0; lambda <= 1.0; lambda += 0.05) {
      const Verdict m = check_main(p, lambda, pair(0.3, 0.9));
      const Verdict k = check_kps(p, lambda);
      CHECK(m.lower == k.lower);
      CHECK(m.upper == k.upper);
    }
}

TEST_CASE("swap symmetry") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng);
    const IndexPair s = pair(std::min(a, b), std::max(a, b));
    const std::complex<double> g(u(rng), u(rng));
    const double p = 1.1 + std::abs(u(rng)) * 2;
    const Verdict v = check_main(p, g, s);
    // (d-, d+) -> (-d+, -d-) with Im g negated leaves the products unchanged
    const Verdict w = check_main(p, std::conj(g), pair(-s.beta, -s.alpha));
    CHECK(v.lower == doctest::Approx(w.lower).epsilon(1e-14));
    CHECK(v.upper == doctest::Approx(w.upper).epsilon(1e-14));
    CHECK(v.classification == w.classification);
    CHECK(v.lower <= v.upper);
  }
}

TEST_CASE("ersatz condition") {
  const Curve c = generate_graded_circle(1.0, 2048, 1e-6);
  const Point t0(1, 0);
  const ExponentField constant = make_exponent(c, ConstantExponent{2.5});
  for (double g : {-0.5, 0.0, 0.2, 0.5}) {
    const Verdict e = check_ersatz(constant, g, pair(0, 0));
    const Verdict m = check_main(2.5, g, pair(0, 0));
    CHECK(e.upper_bound == 1.0);
    CHECK(e.lower == m.lower);
    CHECK(e.upper == m.upper);
  }

  const ExponentField wide = make_exponent(c, ProfileExponent{t0, 3.0, 1.5});
  CHECK(wide.p_min == doctest::Approx(1.5).epsilon(1e-9));
  const Verdict ok = check_ersatz(wide, 0.1, pair(0, 0));
  CHECK(ok.upper == doctest::Approx(1.0 / 3 + 0.1));
  CHECK(ok.upper_bound == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(ok.classification == Classification::ersatz_bounded);
  const Verdict miss = check_ersatz(wide, 0.25, pair(0, 0));
  CHECK(miss.upper > miss.upper_bound);
  CHECK(miss.classification == Classification::main_thm_bounded);

  // ersatz implies main
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const std::complex<double> g(u(rng), u(rng));
    const Verdict e = check_ersatz(wide, g, pair(-0.5, 0.5));
    if (e.classification == Classification::ersatz_bounded)
      CHECK(check_main(3.0, g, pair(-0.5, 0.5)).classification ==
            Classification::main_thm_bounded);
  }
}

TEST_CASE("delta and eps selection") {
  const Curve c = generate_log_spiral(1.0, 1e-8, 1.0, 4096);
  const IndexPair s = pair(1, 1);

  const ExponentField two = make_exponent(c, ConstantExponent{2.0});
  const DeltaEps plain = select_delta_and_eps(c, two, 0, 0.4, s);
  CHECK(plain.delta == doctest::Approx(d_t(c, 0) / 4));
  // 1/2 + 0.4 = 0.9: margins 0.9 and 0.1
  CHECK(plain.eps == doctest::Approx(0.05));

  // steeper drop away from t0 forces a smaller arc
  double last = std::numeric_limits<double>::infinity();
  for (double drop : {0.3, 0.5, 0.7, 0.9}) {
    const ExponentField prof = make_exponent(c, ProfileExponent{0, 2.0, 2.0 - drop});
    const DeltaEps de = select_delta_and_eps(c, prof, 0, 0.45, s);
    CHECK(de.delta < last);
    last = de.delta;
    // the chosen arc really satisfies 1 + beta p(t0) < p_*
    CHECK(1 + 0.45 * 2.0 < prof.p_star(arc_around(c, 0, de.delta).inside));
  }

  const Curve shallow = generate_log_spiral(1.0, 1e-2, 1.0, 512);
  const ExponentField steep = make_exponent(shallow, ProfileExponent{0, 2.0, 1.1});
  try {
    select_delta_and_eps(shallow, steep, 0, 0.45, s);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_admissible_delta);
  }
  CHECK_THROWS_AS(select_delta_and_eps(c, two, 0, std::complex<double>(0, 1), pair(-1, 1)), Error);
}

TEST_CASE("verdict json") {
  Verdict v = check_main(2.0, 0.3, pair(0, 0));
  v.eps = 0.1;
  const auto j = nlohmann::json::parse(verdict_json(v));
  for (const char* key : {"lower", "upper", "classification", "margins", "eps", "delta"})
    CHECK(j.contains(key));
  CHECK(j["classification"] == "MAIN_THM_BOUNDED");
  CHECK(j["eps"] == 0.1);
  CHECK(j["delta"].is_null());
}
