#include <catch_amalgamated.hpp>

#include "subent/criterion.hpp"
#include "subent/oracle.hpp"
#include "subent/random.hpp"
#include "subent/states.hpp"
#include "subent/validation.hpp"

using namespace subent;
using Catch::Matchers::WithinAbs;

namespace {

OptimizerConfig config_with(int restarts, int threads = 1) {
  OptimizerConfig c;
  c.restarts = restarts;
  c.threads = threads;
  return c;
}

GridOptions coarse_grid() {
  GridOptions g;
  g.resolution = 96;
  return g;
}

Subspace ghz_w(int n) { return Subspace({states::ghz(n, 2), states::w_state(n)}); }

Subspace bell_span(int d, int k) {
  std::vector<PureState> b;
  for (int j = 0; j < k; ++j) b.push_back(states::bell_basis_vector(d, j));
  return Subspace(std::move(b));
}

}  // namespace

TEST_CASE("GHZ and W span: both oracles find (5 - sqrt 5)/10", "[oracle]") {
  const double expect = (5.0 - std::sqrt(5.0)) / 10.0;
  const auto v = ghz_w(3);
  const auto s = min_subspace_entanglement(v, MeasureSpec::gm(), config_with(32));
  const auto g = min_entanglement_grid_2d(v, MeasureSpec::gm(), config_with(2), coarse_grid());
  CHECK_THAT(s.min_value, WithinAbs(expect, 1e-7));
  CHECK_THAT(g.min_value, WithinAbs(expect, 1e-5));
  CHECK_THAT(s.min_value, WithinAbs(g.min_value, 1e-5));
  CHECK(s.min_value >= 1.0 / 18 - 1e-12);
}

TEST_CASE("Bell span oracle meets the subspace bound", "[oracle]") {
  for (auto [d, k] : {std::pair{3, 2}, {4, 2}, {4, 3}}) {
    const auto v = bell_span(d, k);
    const auto o = min_subspace_entanglement(v, MeasureSpec::schmidt_bounded(2), config_with(16));
    CHECK_THAT(o.min_value, WithinAbs(static_cast<double>(d - k) / d, 1e-8));
    REQUIRE(o.cut);
  }
  const auto g = min_entanglement_grid_2d(bell_span(3, 2), MeasureSpec::schmidt_bounded(2), config_with(1), coarse_grid());
  CHECK_THAT(g.min_value, WithinAbs(1.0 / 3, 1e-5));
}

TEST_CASE("oracle argmin lies in the subspace and attains the value", "[oracle]") {
  auto rng = make_rng(21, 0);
  const auto v = random_subspace(SystemShape({2, 2, 3}), 3, rng);
  const auto o = min_subspace_entanglement(v, MeasureSpec::gm(), config_with(16));
  REQUIRE(o.state.size() == v.shape().total_dim());
  const auto psi = PureState::normalized(v.shape(), o.state);
  CHECK(project_onto(v, psi).norm > 1.0 - 1e-9);
  CHECK_THAT(subent::norm(o.coefficients), WithinAbs(1.0, 1e-12));
  const auto again = evaluate(psi, MeasureSpec::gm(), config_with(16));
  CHECK(again.value <= o.min_value + 1e-6);
  CHECK(again.value >= o.min_value - 1e-6);
}

TEST_CASE("oracle minimum never exceeds the measure of a basis vector", "[oracle]") {
  auto rng = make_rng(22, 0);
  for (const auto& dims : {std::vector<int>{2, 2, 2}, {3, 3}, {2, 4}}) {
    const auto v = random_subspace(SystemShape(dims), 2, rng);
    const auto spec = dims.size() == 2 ? MeasureSpec::schmidt_bounded(2) : MeasureSpec::gm();
    const auto o = min_subspace_entanglement(v, spec, config_with(16));
    for (const auto& b : v.basis()) CHECK(o.min_value <= evaluate(b, spec, config_with(16)).value + 1e-9);
  }
}

TEST_CASE("warm starts and extra restarts never raise the minimum", "[oracle]") {
  auto rng = make_rng(23, 0);
  const auto v = random_subspace(SystemShape::uniform(3, 2), 3, rng);
  const auto few = min_subspace_entanglement(v, MeasureSpec::gm(), config_with(2));
  const auto many = min_subspace_entanglement(v, MeasureSpec::gm(), config_with(12));
  const auto warm = min_subspace_entanglement(v, MeasureSpec::gm(), config_with(2), &few);
  CHECK(many.min_value <= few.min_value + 1e-12);
  CHECK(warm.min_value <= few.min_value + 1e-12);

  const auto w = random_subspace(SystemShape::uniform(3, 2), 2, rng);
  const auto ggm_few = min_subspace_entanglement(w, MeasureSpec::ggm(), config_with(2));
  const auto ggm_warm = min_subspace_entanglement(w, MeasureSpec::ggm(), config_with(2), &ggm_few);
  CHECK(ggm_warm.min_value <= ggm_few.min_value + 1e-12);
}

TEST_CASE("oracle output is deterministic across runs and thread counts", "[oracle]") {
  auto rng = make_rng(24, 0);
  const auto v = random_subspace(SystemShape({2, 3, 2}), 2, rng);
  const auto a = min_subspace_entanglement(v, MeasureSpec::gm(), config_with(8, 1));
  const auto b = min_subspace_entanglement(v, MeasureSpec::gm(), config_with(8, 1));
  const auto c = min_subspace_entanglement(v, MeasureSpec::gm(), config_with(8, 3));
  CHECK(a.min_value == b.min_value);
  CHECK(a.min_value == c.min_value);
  CHECK(a.coefficients == c.coefficients);
  GridOptions grid = coarse_grid();
  grid.resolution = 64;
  const auto g1 = min_entanglement_grid_2d(v, MeasureSpec::gm(), config_with(1, 1), grid);
  const auto g3 = min_entanglement_grid_2d(v, MeasureSpec::gm(), config_with(1, 3), grid);
  CHECK(g1.min_value == g3.min_value);
}

TEST_CASE("UPB complement is completely entangled", "[oracle]") {
  const auto o = min_subspace_entanglement(states::upb_complement_3qubit(), MeasureSpec::gm(), config_with(32));
  CHECK(o.min_value > 1e-3);
}

TEST_CASE("rotated GHZ/W basis: criterion silent, oracle still positive", "[oracle]") {
  const std::vector<PureState> gw{states::ghz(3, 2), states::w_state(3)};
  const double s = 1 / std::sqrt(2.0);
  const cplx plus[] = {s, s}, minus[] = {s, -s};
  const Subspace rotated({superpose(gw, plus), superpose(gw, minus)});
  CHECK_FALSE(check_subspace(rotated, MeasureSpec::gm(), config_with(16)).detected());
  CHECK_THAT(min_subspace_entanglement(rotated, MeasureSpec::gm(), config_with(16)).min_value,
             WithinAbs((5.0 - std::sqrt(5.0)) / 10.0, 1e-7));
}

TEST_CASE("oracle input validation", "[oracle]") {
  const auto v3 = Subspace({states::ghz(3, 2), states::w_state(3), states::dicke_qubit(3, 2)});
  CHECK_THROWS(min_entanglement_grid_2d(v3, MeasureSpec::gm(), config_with(1), coarse_grid()));
  GridOptions tiny;
  tiny.resolution = 16;
  CHECK_THROWS(min_entanglement_grid_2d(ghz_w(3), MeasureSpec::gm(), config_with(1), tiny));
  CHECK_THROWS(min_subspace_entanglement(ghz_w(3), MeasureSpec::schmidt_bounded(2), config_with(1)));
}

TEST_CASE("soundness check fails under an injected fault", "[oracle][validation]") {
  validation::Options o;
  o.quick = true;
  const auto good = validation::soundness(o);
  CHECK(good.passed);
  o.inject_fault = true;
  const auto bad = validation::soundness(o);
  CHECK_FALSE(bad.passed);
}
