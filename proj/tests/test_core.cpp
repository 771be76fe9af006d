#include <catch_amalgamated.hpp>

#include <bit>
#include <set>
#include <sstream>

#include "reference.hpp"
#include "subent/combinatorics.hpp"
#include "subent/parallel.hpp"
#include "subent/random.hpp"
#include "subent/state_io.hpp"
#include "subent/states.hpp"
#include "subent/tensor.hpp"

using namespace subent;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<cplx> amps_of(const PureState& psi) { return {psi.amplitudes().begin(), psi.amplitudes().end()}; }

std::vector<int> left_of(const Bipartition& c) { return {c.left().begin(), c.left().end()}; }

}  // namespace

TEST_CASE("shape indexing is row-major with site 0 slowest", "[tensor]") {
  const SystemShape s({2, 3, 4});
  CHECK(s.total_dim() == 24);
  CHECK(s.stride(0) == 12);
  CHECK(s.stride(2) == 1);
  const std::vector<int> dg{1, 2, 3};
  CHECK(s.index(dg) == 23);
  for (std::size_t i = 0; i < s.total_dim(); ++i) CHECK(s.index(s.digits(i)) == i);
  CHECK_THROWS(SystemShape({2, 1}));
  CHECK_THROWS(SystemShape(std::vector<int>{}));
  CHECK_THROWS(SystemShape::uniform(25, 2));
}

TEST_CASE("states must be normalized to 1e-12", "[tensor]") {
  const SystemShape s({2, 2});
  CHECK_NOTHROW(PureState(s, {1.0, 0, 0, 0}));
  CHECK_THROWS(PureState(s, {1.0 + 1e-9, 0, 0, 0}));
  CHECK_THROWS(PureState(s, {1.0, 0, 0}));
  CHECK_THROWS(PureState::normalized(s, {0, 0, 0, 0}));
}

TEST_CASE("bipartitions enumerate every cut once", "[tensor]") {
  for (int n = 2; n <= 7; ++n) {
    const auto cuts = enumerate_bipartitions(n);
    CHECK(cuts.size() == (std::size_t{1} << (n - 1)) - 1);
    std::set<std::vector<int>> seen;
    for (const auto& c : cuts) {
      CHECK(c.is_canonical());
      CHECK(seen.insert(left_of(c)).second);
      CHECK(!seen.contains(left_of(c.complement())));
    }
  }
  CHECK(Bipartition({0, 2}, 4).to_string() == "{1,3}|{2,4}");
  CHECK_THROWS(Bipartition({}, 3));
  CHECK_THROWS(Bipartition({0, 1, 2}, 3));
}

TEST_CASE("Schmidt spectra match explicit partial traces", "[tensor]") {
  auto rng = make_rng(7, 0);
  for (const auto& dims : {std::vector<int>{2, 3}, {3, 3}, {2, 2, 3}, {2, 3, 2, 2}, {3, 2, 2}}) {
    const SystemShape shape(dims);
    const auto psi = random_state(shape, rng);
    for (const auto& cut : enumerate_bipartitions(shape)) {
      const auto ref = reference::squared_schmidt(amps_of(psi), dims, left_of(cut));
      for (auto route : {SchmidtRoute::Svd, SchmidtRoute::Gram}) {
        const auto d = schmidt_decompose(psi, cut, route);
        REQUIRE(d.spectrum.rank() <= static_cast<int>(ref.size()));
        for (int i = 0; i < d.spectrum.rank(); ++i) {
          const double l = d.spectrum.coefficients[static_cast<std::size_t>(i)];
          CHECK_THAT(l * l, WithinAbs(ref[static_cast<std::size_t>(i)], 1e-12));
        }
        CHECK_THAT(d.spectrum.sum_squares(), WithinAbs(1.0, 1e-12));
        const auto back = reconstruct(d, shape, cut);
        for (std::size_t i = 0; i < back.size(); ++i) CHECK(std::abs(back[i] - psi[i]) < 1e-12);
      }
    }
  }
}

TEST_CASE("Schmidt rank drops below the cutoff", "[tensor]") {
  const auto ghz = states::ghz(4, 3);
  for (const auto& cut : enumerate_bipartitions(4)) {
    const auto s = schmidt_spectrum(ghz, cut);
    CHECK(s.rank() == 3);
    for (double l : s.coefficients) CHECK_THAT(l * l, WithinAbs(1.0 / 3, 1e-14));
  }
  const Amplitudes f0{1.0, 0.0}, f1{0.6, 0.8};
  const std::vector<Amplitudes> fs{f0, f1, f0};
  const auto prod = PureState::product(fs);
  for (const auto& cut : enumerate_bipartitions(3)) CHECK(schmidt_spectrum(prod, cut).rank() == 1);
  CHECK_THAT(reduced_purity(prod, {0}), WithinAbs(1.0, 1e-14));
}

TEST_CASE("subspace accepts, repairs or rejects near-orthonormal bases", "[tensor]") {
  const SystemShape s({2, 2});
  const auto e0 = PureState::basis(s, 0), e1 = PureState::basis(s, 1);
  CHECK(Subspace({e0, e1}).dimension() == 2);
  const auto skew = [&](double eps) {
    return PureState::normalized(s, {eps, 1.0, 0, 0});
  };
  const Subspace fixed({e0, skew(5e-7)});
  CHECK(fixed.max_gram_deviation() < 1e-14);
  CHECK_THROWS(Subspace({e0, skew(1e-4)}));
  CHECK_THROWS(Subspace({e0, PureState::basis(SystemShape({2, 3}), 1)}));
  CHECK_THROWS(Subspace(std::vector<PureState>{}));
}

TEST_CASE("projection onto a span", "[tensor]") {
  const auto gw = Subspace({states::ghz(3, 2), states::w_state(3)});
  const std::vector<PureState> parts{states::ghz(3, 2), states::w_state(3)};
  const cplx c[] = {0.6, cplx(0, 0.8)};
  CHECK_THAT(project_onto(gw, superpose(parts, c)).norm, WithinAbs(1.0, 1e-14));
  CHECK_THAT(project_onto(gw, PureState::basis(gw.shape(), 3)).norm, WithinAbs(0.0, 1e-14));
}

TEST_CASE("named families agree with brute-force constructions", "[states]") {
  for (const auto& k : {Composition{1, 1, 1}, Composition{2, 1, 0}, Composition{2, 1, 1}, Composition{1, 2, 1, 1}}) {
    const auto psi = states::dicke_qudit(k);
    const auto ref = reference::dicke(k);
    REQUIRE(psi.dim() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(psi[i] - ref[i]) < 1e-14);
  }
  const auto w = states::w_state(4);
  for (std::size_t i = 0; i < w.dim(); ++i)
    CHECK_THAT(std::abs(w[i]), WithinAbs(std::popcount(i) == 1 ? 0.5 : 0.0, 1e-15));

  const int n = 3, d = 4;
  const auto slater = states::antisymmetric_basis(n, d);
  CHECK(slater.size() == 4);
  const SystemShape shape = SystemShape::uniform(n, d);
  for (const auto& psi : slater) {
    for (std::size_t i = 0; i < psi.dim(); ++i) {
      auto dg = shape.digits(i);
      auto sorted = dg;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        CHECK(psi[i] == cplx{});
        continue;
      }
      std::vector<int> perm;
      for (int x : dg) perm.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin()));
      const cplx head = psi[shape.index(sorted)];
      CHECK(std::abs(psi[i] - static_cast<double>(reference::permutation_sign(perm)) * head) < 1e-15);
    }
  }
  CHECK(Subspace(slater).dimension() == 4);

  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l)
      CHECK_THAT(std::abs(inner_product(states::bell_basis_vector(3, j), states::bell_basis_vector(3, l))),
                 WithinAbs(j == l ? 1.0 : 0.0, 1e-14));
}

TEST_CASE("AME states are maximally mixed on every half", "[states]") {
  for (auto [n, d] : {std::pair{2, 3}, {3, 2}, {4, 3}, {5, 2}, {6, 2}}) {
    const auto psi = states::ame_state(n, d);
    const std::vector<int> dims(static_cast<std::size_t>(n), d);
    for (const auto& cut : enumerate_bipartitions(n)) {
      const auto ev = reference::squared_schmidt(amps_of(psi), dims, left_of(cut));
      double expect = 1.0;
      for (int i = 0; i < cut.size(); ++i) expect /= d;
      for (double x : ev) CHECK_THAT(x, WithinAbs(expect, 1e-12));
    }
  }
  CHECK_FALSE(states::ame_supported(4, 2));
  CHECK_THROWS(states::ame_state(4, 2));
}

TEST_CASE("UPB vectors are orthogonal to their complement", "[states]") {
  const auto upb = states::upb_3qubit();
  for (std::size_t i = 0; i < upb.size(); ++i)
    for (std::size_t j = i + 1; j < upb.size(); ++j) CHECK(std::abs(inner_product(upb[i], upb[j])) < 1e-14);
  const auto comp = states::upb_complement_3qubit();
  CHECK(comp.dimension() == 4);
  for (const auto& b : comp.basis())
    for (const auto& u : upb) CHECK(std::abs(inner_product(b, u)) < 1e-12);
}

TEST_CASE("combinatorics", "[combinatorics]") {
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(5, 7) == 0);
  CHECK(factorial(20) == Integer("2432902008176640000"));
  CHECK(binomial(100, 50) == Integer("100891344545564193334812497256"));
  CHECK(to_string(Rational(6, 4)) == "3/2");
  const auto cs = compositions(4, 3);
  CHECK(cs.size() == 15);
  CHECK(cs.front() == Composition{4, 0, 0});
  CHECK(cs.back() == Composition{0, 0, 4});
  CHECK(set_partitions(4, 4).size() == 15);
  CHECK(set_partitions(4, 2).size() == 10);
  CHECK(set_partitions(4, 2, true).size() == 3);
  CHECK(set_partitions(5, 2, true).size() == 15);
}

TEST_CASE("seeded streams are reproducible and distinct", "[random]") {
  auto a = make_rng(kDefaultSeed, 3), b = make_rng(kDefaultSeed, 3), c = make_rng(kDefaultSeed, 4);
  CHECK(a() == b());
  CHECK(make_rng(kDefaultSeed, 3)() != c());
  auto r1 = make_rng(1, 0), r2 = make_rng(1, 0);
  const auto v1 = random_subspace(SystemShape({3, 3}), 3, r1);
  const auto v2 = random_subspace(SystemShape({3, 3}), 3, r2);
  CHECK(v1.max_gram_deviation() < 1e-12);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 9; ++j) CHECK(v1[i][j] == v2[i][j]);
}

TEST_CASE("parallel_for visits every index and propagates errors", "[parallel]") {
  std::vector<int> hit(100, 0);
  parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
  CHECK(std::all_of(hit.begin(), hit.end(), [](int x) { return x == 1; }));
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 5) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("state files round-trip exactly", "[io]") {
  auto rng = make_rng(11, 0);
  const auto psi = random_state(SystemShape({2, 3, 2}), rng);
  std::stringstream ss;
  write_state(ss, psi);
  const auto back = read_state(ss);
  CHECK(back.shape() == psi.shape());
  for (std::size_t i = 0; i < psi.dim(); ++i) CHECK(back[i] == psi[i]);

  const auto v = random_subspace(SystemShape({2, 2, 2}), 3, rng);
  std::stringstream sv;
  write_subspace(sv, v);
  const auto vb = read_subspace(sv);
  REQUIRE(vb.dimension() == 3);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t i = 0; i < 8; ++i) CHECK(vb[a][i] == v[a][i]);
}

TEST_CASE("state file errors carry line numbers", "[io]") {
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return read_state(is);
  };
  CHECK_NOTHROW(parse("# ghz\ndims: 2 2\n0 0.7071067811865476 0\n3 0.7071067811865476 0\n"));
  CHECK_NOTHROW(parse("dims: 2\n0 0.9999999 0\n"));
  CHECK_THROWS_WITH(parse("dims: 2\n0 0.99 0\n"), Catch::Matchers::ContainsSubstring("norm"));
  CHECK_THROWS_WITH(parse("dims: 2 2\n4 1 0\n"), Catch::Matchers::ContainsSubstring("line 2"));
  CHECK_THROWS_WITH(parse("dims: 2\n0 1 0\n0 1 0\n"), Catch::Matchers::ContainsSubstring("duplicate"));
  CHECK_THROWS_WITH(parse("dims: 2\n0 x 0\n"), Catch::Matchers::ContainsSubstring("bad number"));
  CHECK_THROWS(parse("0 1 0\n"));
  CHECK_THROWS(parse("dims: 2 2\nvector\n0 1 0\nvector\n1 1 0\n"));
}
