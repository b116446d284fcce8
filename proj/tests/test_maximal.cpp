#include "carleson/argbranch.hpp"
#include "carleson/error.hpp"
#include "carleson/maximal.hpp"
#include "carleson/submult.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace carleson;

namespace {

SampledFunction from_values(const std::vector<double>& v) {
  SampledFunction f;
  for (double x : v)
    f.values.emplace_back(x);
  return f;
}

SampledFunction indicator(const Curve& c, const Arc& arc) {
  SampledFunction f;
  for (std::size_t k = 0; k < c.size(); ++k)
    f.values.emplace_back(arc.inside[k] ? 1.0 : 0.0);
  return f;
}

std::vector<double> abs_values(const SampledFunction& f) {
  std::vector<double> out;
  for (auto v : f.values)
    out.push_back(std::abs(v));
  return out;
}

} // namespace

TEST_CASE("constant functions") {
  for (const Curve& c : {generate_circle(1.0, 256), generate_log_spiral(1.0, 1e-4, 1.0, 512),
                         generate_graded_circle(1.0, 512, 1e-6)}) {
    const MaximalResult one = maximal(c, constant_function(c, 1.0));
    REQUIRE(one.values.size() == c.size());
    for (double v : one.values)
      CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : maximal(c, constant_function(c, 0.0)).values)
      CHECK(v == 0.0);
  }
}

TEST_CASE("brute-force radius scan") {
  SUBCASE("random f on the graded circle") {
    const Curve c = generate_graded_circle(1.0, 256, 1e-4);
    const auto h = oracle::random_values(c, 5);
    const MaximalResult m = maximal(c, from_values(h));
    for (std::size_t i = 0; i < c.node_count(); ++i)
      CHECK(m.values[i] == doctest::Approx(oracle::maximal_at(c, h, i)).epsilon(1e-12));
  }
  SUBCASE("arc indicator on the unit circle") {
    const Curve c = generate_circle(1.0, 1024);
    const Arc arc = arc_around(c, Point(1, 0), 0.3);
    const SampledFunction f = indicator(c, arc);
    const auto h = abs_values(f);
    const MaximalResult m = maximal(c, f);
    CHECK(m.values[0] == doctest::Approx(1.0));
    for (std::size_t i = 0; i < c.node_count(); i += 37)
      CHECK(m.values[i] == doctest::Approx(oracle::maximal_at(c, h, i)).epsilon(1e-12));
    // the antipode sees the arc only once the disk reaches it
    const double anti = m.values[512];
    CHECK(anti > 0.0);
    CHECK(anti < 0.2);
  }
  SUBCASE("spiral, gamma = i, small arc") {
    const Curve c = generate_log_spiral(1.0, 1e-3, 1.0, 384);
    const ArgBranch b = unwrap_arg(c, 0);
    const Weight w = phi(c, b, std::complex<double>(0, 1));
    const SampledFunction f = indicator(c, arc_around(c, 0, 0.01));
    std::vector<double> h(c.size());
    for (std::size_t k = 0; k < c.size(); ++k)
      h[k] = std::abs(f.values[k]) / w.value(k);
    const MaximalResult m = weighted_maximal(c, f, 0, std::complex<double>(0, 1));
    for (std::size_t i = 0; i < c.node_count(); i += 5)
      CHECK(m.values[i] ==
            doctest::Approx(w.value(i) * oracle::maximal_at(c, h, i)).epsilon(1e-10));
  }
}

TEST_CASE("argmax radius realizes the supremum") {
  const Curve c = generate_graded_circle(1.0, 200, 1e-3);
  const auto h = oracle::random_values(c, 9);
  const MaximalResult m = maximal(c, from_values(h));
  const auto pts = c.points();
  const auto w = oracle::node_weights(c);
  for (std::size_t i = 0; i < c.node_count(); i += 11) {
    double num = 0, den = 0;
    for (std::size_t k = 0; k < c.node_count(); ++k)
      if (std::abs(pts[k] - pts[i]) <= m.argmax_eps[i]) {
        num += w[k] * h[k];
        den += w[k];
      }
    CHECK(num / den == doctest::Approx(m.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("bounds, sublinearity, homogeneity") {
  const Curve c = generate_mixed_spirality(-1, 1, 1e-5, 1.0, 1024);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto fv = oracle::random_values(c, seed);
    const auto gv = oracle::random_values(c, seed + 100);
    std::vector<double> sum(fv.size()), scaled(fv.size());
    for (std::size_t k = 0; k < fv.size(); ++k) {
      sum[k] = fv[k] + gv[k];
      scaled[k] = -2.5 * fv[k];
    }
    const auto mf = maximal(c, from_values(fv)).values;
    const auto mg = maximal(c, from_values(gv)).values;
    const auto ms = maximal(c, from_values(sum)).values;
    const auto mc = maximal(c, from_values(scaled)).values;
    const double top = *std::max_element(fv.begin(), fv.end());
    for (std::size_t k = 0; k < c.size(); ++k) {
      CHECK(mf[k] >= 0);
      CHECK(mf[k] <= top * (1 + 1e-12));
      CHECK(mf[k] >= fv[k] * (1 - 1e-12));
      CHECK(ms[k] <= (mf[k] + mg[k]) * (1 + 1e-12));
      CHECK(mc[k] == doctest::Approx(2.5 * mf[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("weighted variants") {
  const Curve c = generate_log_spiral(1.0, 1e-4, 1.0, 1024);
  const auto h = oracle::random_values(c, 3);
  const SampledFunction f = from_values(h);
  const auto plain = maximal(c, f).values;
  const auto zero = weighted_maximal(c, f, 0, 0.0).values;
  const auto zero_pow = power_weighted_maximal(c, f, 0, 0.0).values;
  const auto real = weighted_maximal(c, f, 0, 0.35).values;
  const auto power = power_weighted_maximal(c, f, 0, 0.35).values;
  for (std::size_t k = 0; k < c.size(); ++k) {
    CHECK(zero[k] == plain[k]);
    CHECK(zero_pow[k] == plain[k]);
    CHECK(real[k] == doctest::Approx(power[k]).epsilon(1e-12));
  }

  // batch interface agrees with single evaluations
  std::vector<SampledFunction> fs{f, from_values(oracle::random_values(c, 4))};
  const auto batch = conjugated_maximal(c, {}, fs);
  CHECK(batch[0].values == plain);
  CHECK(batch[1].values == maximal(c, fs[1]).values);
}

TEST_CASE("dominance by the power majorants") {
  const Curve c = generate_log_spiral(1.0, 1e-4, 1.0, 1024);
  const std::complex<double> gamma(0.3, 0.2);
  const Weight w = phi(c, unwrap_arg(c, 0), gamma);
  // |phi| = |tau|^{0.3 + 0.2}: both indices 0.5
  const IndexPair idx{0.5, 0.5};
  const double eps = 0.1, delta = 0.05;
  const SandwichConstants k = power_sandwich(c, 0, w, idx, eps, delta);
  const Arc omega = arc_around(c, 0, delta);

  // support inside omega, evaluated outside
  SampledFunction inner = from_values(oracle::random_values(c, 21));
  SampledFunction outer = inner;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (!omega.inside[j])
      inner.values[j] = 0.0;
    else
      outer.values[j] = 0.0;
  }
  const auto wm_in = weighted_maximal(c, inner, 0, gamma).values;
  const auto up = power_weighted_maximal(c, inner, 0, idx.beta + eps).values;
  const auto wm_out = weighted_maximal(c, outer, 0, gamma).values;
  const auto down = power_weighted_maximal(c, outer, 0, idx.alpha - eps).values;
  std::size_t checked = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (!omega.inside[j]) {
      CHECK(wm_in[j] <= k.c1 * up[j] * (1 + 1e-9));
      ++checked;
    } else {
      CHECK(wm_out[j] <= k.c2 * down[j] * (1 + 1e-9));
    }
  }
  CHECK(checked > 0);
  CHECK(checked < c.size());
}

TEST_CASE("four-way decomposition") {
  const Curve c = generate_log_spiral(1.0, 1e-4, 1.0, 1024);
  const std::complex<double> gamma(0.2, 0.1);
  const double delta = 0.02;
  const Arc omega = arc_around(c, 0, delta);

  SampledFunction inside = from_values(oracle::random_values(c, 1));
  SampledFunction outside = inside;
  for (std::size_t j = 0; j < c.size(); ++j)
    (omega.inside[j] ? outside : inside).values[j] = 0.0;

  const Decomposition di = decompose(c, inside, 0, gamma, delta);
  for (double v : di.pieces[2])
    CHECK(v == 0.0);
  for (double v : di.pieces[3])
    CHECK(v == 0.0);
  const Decomposition dout = decompose(c, outside, 0, gamma, delta);
  for (double v : dout.pieces[0])
    CHECK(v == 0.0);
  for (double v : dout.pieces[1])
    CHECK(v == 0.0);

  for (std::uint64_t seed = 50; seed < 55; ++seed) {
    const SampledFunction f = from_values(oracle::random_values(c, seed));
    const auto whole = weighted_maximal(c, f, 0, gamma).values;
    const Decomposition d = decompose(c, f, 0, gamma, delta);
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double sum = d.pieces[0][j] + d.pieces[1][j] + d.pieces[2][j] + d.pieces[3][j];
      CHECK(whole[j] <= sum * (1 + 1e-12));
      // pieces live on their own side of omega
      if (omega.inside[j]) {
        CHECK(d.pieces[1][j] == 0.0);
        CHECK(d.pieces[3][j] == 0.0);
      } else {
        CHECK(d.pieces[0][j] == 0.0);
        CHECK(d.pieces[2][j] == 0.0);
      }
    }
  }

  try {
    decompose(c, inside, 0, gamma, 1e-9);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_arc);
  }
}

TEST_CASE("omega sits inside the portion") {
  const Curve c = generate_log_spiral(2.0, 1e-6, 1.0, 2048);
  const auto pts = c.points();
  for (double delta : {0.5, 0.05, 0.005}) {
    const Arc omega = arc_around(c, 0, delta);
    std::size_t in_disk = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (omega.inside[j])
        CHECK(std::abs(pts[j]) < delta);
      in_disk += std::abs(pts[j]) < delta;
    }
    CHECK(omega.node_count <= in_disk);
  }
}

TEST_CASE("maximal csv") {
  const Curve c = generate_circle(1.0, 16);
  const std::string text = maximal_csv(c, maximal(c, constant_function(c, 2.0)));
  CHECK(text.rfind("arclen,Mf,argmax_eps\r\n", 0) == 0);
}
