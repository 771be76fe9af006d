#include <catch_amalgamated.hpp>

#include <map>

#include "frozen_constants.hpp"
#include "subent/experiments.hpp"
#include "subent/measures.hpp"
#include "subent/states.hpp"

using namespace subent;
using Catch::Matchers::WithinAbs;

TEST_CASE("qubit Dicke thresholds match the frozen table", "[fig1]") {
  for (auto [n, dim] : frozen::kFig1Dims) {
    const auto t = dicke_ces_threshold_exact(n);
    CHECK(t.satisfied);
    CHECK(t.dim == dim);
    CHECK(n - 2 * dicke_ces_threshold_float(n) + 1 == dim);
  }
}

TEST_CASE("qubit Dicke threshold is the largest centred span with sum q_k < 1", "[fig1]") {
  for (int n = 4; n <= 40; n += 2) {
    const auto t = dicke_ces_threshold_exact(n);
    Rational q = 0;
    for (int k = t.m_star; k <= n - t.m_star; ++k) q += 1 - gm_dicke_qubit_closed_exact(n, k);
    if (t.satisfied) {
      CHECK(q < 1);
      CHECK(q == t.overlap_sum);
      if (t.m_star > 1) CHECK(q + 2 - gm_dicke_qubit_closed_exact(n, t.m_star - 1) - gm_dicke_qubit_closed_exact(n, n - t.m_star + 1) >= 1);
    }
  }
  CHECK(dicke_ces_threshold_exact(4).dim == 1);
  CHECK(dicke_ces_threshold_exact(4).overlap_sum == Rational(3, 8));
}

TEST_CASE("detection of the Dicke span agrees with the criterion on the states", "[fig1]") {
  for (int n : {6, 8}) {
    const auto t = dicke_ces_threshold_exact(n);
    std::vector<MeasureValue> vals;
    for (int k = t.m_star; k <= n - t.m_star; ++k) vals.push_back(evaluate(states::dicke_qubit(n, k), MeasureSpec::gm()));
    std::vector<double> e;
    for (const auto& v : vals) e.push_back(v.value);
    CHECK(subspace_bound(e) > 0);
  }
}

TEST_CASE("Stirling threshold tracks the asymptotic form", "[fig1]") {
  const auto a = dicke_ces_threshold_analytic(10000);
  const double deviation = std::numbers::pi / (2 * std::numbers::e) * std::sqrt(10000.0);
  CHECK(std::abs(a.m_bound - a.m_asymptotic) / deviation < 0.01);
  for (int n : {1000, 4000, 10000}) {
    const auto x = dicke_ces_threshold_analytic(n);
    CHECK(x.m_min > 0);
    CHECK(dicke_stirling_lhs(n, x.m_min) < 1.0);
    if (x.m_min > 1) CHECK(dicke_stirling_lhs(n, x.m_min - 1) >= 1.0);
  }
}

TEST_CASE("antisymmetric region: black line is sufficient", "[fig2]") {
  const auto region = antisym_detection_region(50);
  CHECK(region.black_line_ok);
  CHECK(region.orange_detected_below.empty());
  CHECK(region.points.size() == 49 * 50 / 2);
  CHECK(antisym_min_detected(2) == 2);
  CHECK(antisym_min_detected(3) == 3);
  CHECK(antisym_min_detected(7) == 5);
  CHECK(antisym_min_detected(9) == 6);
  for (int d = 2; d <= 50; ++d) CHECK(antisym_min_detected(d) <= antisym_black_line(d));
}

TEST_CASE("qudit Dicke GES dimensions match the frozen table", "[fig3]") {
  for (const auto& e : frozen::kFig3Dims) {
    const auto s = qudit_dicke_ges_search(e.n, e.d);
    CHECK(s.max_dim == e.dim);
    CHECK(static_cast<int>(s.chosen.size()) == s.max_dim);
    Rational q = 0;
    for (const auto& k : s.chosen) q += 1 - ggm_dicke_qudit_exact(k).value;
    CHECK(q < 1);
    CHECK(q == 1 - s.bound);
  }
  CHECK(qudit_dicke_ges_search(3, 3).max_dim == 1);
  CHECK_THROWS(qudit_dicke_ges_search(11, 3));
  CHECK_THROWS(qudit_dicke_ges_search(3, 12));
}

TEST_CASE("maximal qudit Dicke GGM matches the frozen table", "[figD]") {
  for (const auto& e : frozen::kFigDMax) {
    const auto p = max_ggm_dicke(e.d, e.n);
    CHECK(p.value == Rational(e.num, e.den));
    CHECK(ggm_dicke_qudit_exact(p.argmax).value == p.value);
  }
}

TEST_CASE("GHZ + W bound", "[ghzw]") {
  CHECK(ghz_w_bound_exact(3) == Rational(1, 18));
  CHECK_THAT(ghz_w_bound(3), WithinAbs(1.0 / 18, 1e-15));
  const auto family = ghz_w_family(3, 10000, 60);
  for (const auto& p : family) CHECK(p.positive);
  for (const auto& p : family)
    if (p.exact) CHECK_THAT(p.bound, WithinAbs(to_double(*p.exact), 1e-13));
  CHECK_THAT(family.back().bound, WithinAbs(0.5 - std::exp(-1.0), 1e-4));
}

TEST_CASE("sweeps are well-formed and reproducible", "[sweep]") {
  const auto a = fig1_sweep(60, true, 1), b = fig1_sweep(60, true, 3);
  CHECK_NOTHROW(a.validate());
  CHECK(a.csv() == b.csv());
  CHECK(a.columns == std::vector<std::string>{"N", "dim_exact", "dim_analytic", "m_exact", "m_analytic", "m_bound", "extension"});
  CHECK_NOTHROW(fig2_sweep(20).validate());
  const auto f3 = fig3_sweep(3, 5, 3, 5);
  CHECK_NOTHROW(f3.validate());
  CHECK(f3.rows.size() == 9);
  const std::vector<int> ds{3, 4};
  const auto fd = figD_sweep(ds, 2, 8, 2);
  CHECK_NOTHROW(fd.validate());
  CHECK(fd.csv() == figD_sweep(ds, 2, 8, 1).csv());

  SweepResult bad = f3;
  std::swap(bad.rows[0], bad.rows[1]);
  CHECK_THROWS(bad.validate());
}

TEST_CASE("doubles print in shortest round-trip form", "[sweep]") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0 / 3) == "0.3333333333333333");
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}
