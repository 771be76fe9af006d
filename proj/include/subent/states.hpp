#pragma once

// Constructors for the named state families: GHZ and shifted GHZ, the
// two-qudit phase basis of maximally entangled states, qubit and qudit Dicke
// states, Slater-determinant bases of the antisymmetric subspace, a fixed
// table of AME states, and the complement of a three-qubit UPB.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "subent/combinatorics.hpp"
#include "subent/tensor.hpp"

namespace subent::states {

/// (1/sqrt d) sum_i |i>^N
inline PureState ghz(int sites, int d) {
  if (sites < 2 || d < 2) throw std::invalid_argument("ghz: need N >= 2 and d >= 2");
  const auto shape = SystemShape::uniform(sites, d);
  Amplitudes a(shape.total_dim());
  for (int i = 0; i < d; ++i) {
    std::vector<int> digits(static_cast<std::size_t>(sites), i);
    a[shape.index(digits)] = 1.0 / std::sqrt(static_cast<double>(d));
  }
  return PureState::normalized(shape, std::move(a));
}

/// (1/sqrt d) sum_i |i>^(N-1) |i + j mod d>
inline PureState ghz_shifted(int sites, int d, int shift) {
  if (sites < 2 || d < 2) throw std::invalid_argument("ghz_shifted: need N >= 2 and d >= 2");
  if (shift < 0 || shift >= d) throw std::out_of_range("ghz_shifted: shift must lie in [0, d)");
  const auto shape = SystemShape::uniform(sites, d);
  Amplitudes a(shape.total_dim());
  for (int i = 0; i < d; ++i) {
    std::vector<int> digits(static_cast<std::size_t>(sites), i);
    digits.back() = (i + shift) % d;
    a[shape.index(digits)] = 1.0 / std::sqrt(static_cast<double>(d));
  }
  return PureState::normalized(shape, std::move(a));
}

/// (1/sqrt d) sum_i w^(ij) |ii>, w = exp(2 pi i / d)
inline PureState bell_basis_vector(int d, int j) {
  if (d < 2) throw std::invalid_argument("bell_basis_vector: need d >= 2");
  if (j < 0 || j >= d) throw std::out_of_range("bell_basis_vector: j must lie in [0, d)");
  const auto shape = SystemShape::uniform(2, d);
  Amplitudes a(shape.total_dim());
  for (int i = 0; i < d; ++i) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>((i * j) % d) / d;
    a[static_cast<std::size_t>(i * d + i)] = std::polar(1.0 / std::sqrt(static_cast<double>(d)), phase);
  }
  return PureState::normalized(shape, std::move(a));
}

/// Maximally entangled two-qudit state, equal to bell_basis_vector(d, 0).
inline PureState max_entangled(int d) { return bell_basis_vector(d, 0); }

/// Qudit Dicke state for occupation vector k: equal-weight superposition of
/// all distinct arrangements of k_0 zeros, k_1 ones, ...
inline PureState dicke_qudit(const Composition& k) {
  if (k.size() < 2) throw std::invalid_argument("dicke_qudit: need d >= 2 levels");
  const int n = composition_total(k);
  if (n < 1) throw std::invalid_argument("dicke_qudit: need N >= 1");
  const int d = static_cast<int>(k.size());
  const auto shape = SystemShape::uniform(n, d);
  std::vector<int> word;
  for (int level = 0; level < d; ++level) word.insert(word.end(), static_cast<std::size_t>(k[static_cast<std::size_t>(level)]), level);
  Amplitudes a(shape.total_dim());
  std::size_t count = 0;
  do {
    a[shape.index(word)] = 1.0;
    ++count;
  } while (std::next_permutation(word.begin(), word.end()));
  const double amp = 1.0 / std::sqrt(static_cast<double>(count));
  for (auto& x : a) x *= amp;
  return PureState::normalized(shape, std::move(a));
}

/// N-qubit Dicke state with k excitations.
inline PureState dicke_qubit(int sites, int excitations) {
  if (sites < 1) throw std::invalid_argument("dicke_qubit: need N >= 1");
  if (excitations < 0 || excitations > sites) throw std::out_of_range("dicke_qubit: k must lie in [0, N]");
  return dicke_qudit({sites - excitations, excitations});
}

inline PureState w_state(int sites) { return dicke_qubit(sites, 1); }

/// Slater determinants, one per N-subset of the d levels in lexicographic
/// order, with +1 on the sorted basis string.
inline std::vector<PureState> antisymmetric_basis(int sites, int d) {
  if (sites < 2) throw std::invalid_argument("antisymmetric_basis: need N >= 2");
  if (d < sites) throw std::invalid_argument("antisymmetric_basis: need d >= N");
  const auto shape = SystemShape::uniform(sites, d);
  const double amp = 1.0 / std::sqrt(to_double(Rational(factorial(sites))));
  std::vector<PureState> out;
  std::vector<int> subset(static_cast<std::size_t>(sites));
  for (int i = 0; i < sites; ++i) subset[static_cast<std::size_t>(i)] = i;
  while (true) {
    Amplitudes a(shape.total_dim());
    std::vector<int> perm(subset.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    do {
      int inversions = 0;
      for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
          if (perm[i] > perm[j]) ++inversions;
      std::vector<int> word(perm.size());
      for (std::size_t i = 0; i < perm.size(); ++i) word[i] = subset[static_cast<std::size_t>(perm[i])];
      a[shape.index(word)] = (inversions % 2 == 0) ? amp : -amp;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.push_back(PureState::normalized(shape, std::move(a)));

    int i = sites - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == d - sites + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < sites; ++j) subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// AME states

namespace detail {

/// Applies a Pauli string such as "XZZXI" to an n-qubit vector; character i
/// acts on site i.
inline Amplitudes apply_pauli(std::string_view ops, const Amplitudes& in) {
  const auto n = ops.size();
  Amplitudes out(in.size());
  for (std::size_t idx = 0; idx < in.size(); ++idx) {
    std::size_t target = idx;
    cplx factor = 1.0;
    for (std::size_t q = 0; q < n; ++q) {
      const std::size_t bit = std::size_t{1} << (n - 1 - q);
      const bool one = (idx & bit) != 0;
      switch (ops[q]) {
        case 'X': target ^= bit; break;
        case 'Z': if (one) factor = -factor; break;
        case 'Y': target ^= bit; factor *= one ? cplx(0, -1) : cplx(0, 1); break;
        default: break;
      }
    }
    out[target] += factor * in[idx];
  }
  return out;
}

/// |0_L> of the five-qubit perfect code: |00000> projected onto the +1
/// eigenspace of the cyclic stabilizers XZZXI, IXZZX, XIXZZ, ZXIXZ.
inline Amplitudes five_qubit_code_zero() {
  Amplitudes v(32);
  v[0] = 1.0;
  for (std::string_view g : {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"}) {
    const auto gv = apply_pauli(g, v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (v[i] + gv[i]);
  }
  return v;
}

}  // namespace detail

/// Whether ame_state(N, d) has a built-in construction.
inline bool ame_supported(int sites, int d) {
  if (sites == 2) return d >= 2;
  return (sites == 3 && d == 2) || (sites == 4 && d == 3) || (sites == 5 && d == 2) || (sites == 6 && d == 2);
}

/// AME(N, d) from a fixed table:
///   (2, d)  maximally entangled state
///   (3, 2)  GHZ
///   (4, 3)  (1/3) sum_{i,j} |i, j, i+j, i+2j>  (mod 3)
///   (5, 2)  |0_L> of the five-qubit code
///   (6, 2)  (|0_L>|0> + |1_L>|1>) / sqrt 2, |1_L> = XXXXX |0_L>
inline PureState ame_state(int sites, int d) {
  if (!ame_supported(sites, d))
    throw std::invalid_argument("ame_state: no construction for (N=" + std::to_string(sites) + ", d=" + std::to_string(d) + ")");
  if (sites == 2) return max_entangled(d);
  if (sites == 3) return ghz(3, 2);
  if (sites == 4) {
    const auto shape = SystemShape::uniform(4, 3);
    Amplitudes a(shape.total_dim());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const std::vector<int> digits{i, j, (i + j) % 3, (i + 2 * j) % 3};
        a[shape.index(digits)] = 1.0 / 3.0;
      }
    return PureState::normalized(shape, std::move(a));
  }
  const auto zero = detail::five_qubit_code_zero();
  if (sites == 5) return PureState::normalized(SystemShape::uniform(5, 2), zero);
  const auto one = detail::apply_pauli("XXXXX", zero);
  const double z = norm(zero);
  Amplitudes a(64);
  for (std::size_t i = 0; i < 32; ++i) {
    a[2 * i] = zero[i] / z;
    a[2 * i + 1] = one[i] / z;
  }
  return PureState::normalized(SystemShape::uniform(6, 2), std::move(a));
}

// ---------------------------------------------------------------------------
// UPB complement

/// The four product vectors |000>, |1,+,->, |-,1,+>, |+,-,1>.
inline std::vector<PureState> upb_3qubit() {
  const double s = 1.0 / std::sqrt(2.0);
  const Amplitudes zero{1.0, 0.0}, one{0.0, 1.0}, plus{s, s}, minus{s, -s};
  return {PureState::product(std::vector<Amplitudes>{zero, zero, zero}),
          PureState::product(std::vector<Amplitudes>{one, plus, minus}),
          PureState::product(std::vector<Amplitudes>{minus, one, plus}),
          PureState::product(std::vector<Amplitudes>{plus, minus, one})};
}

/// Orthogonal complement of upb_3qubit(), built by Gram-Schmidt over the
/// computational basis in index order.
inline Subspace upb_complement_3qubit() {
  std::vector<Amplitudes> accepted;
  for (const auto& p : upb_3qubit()) accepted.emplace_back(p.amplitudes().begin(), p.amplitudes().end());
  std::vector<PureState> basis;
  const auto shape = SystemShape::uniform(3, 2);
  for (std::size_t e = 0; e < 8 && basis.size() < 4; ++e) {
    Amplitudes v(8);
    v[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : accepted) {
        const cplx c = dot(u, v);
        for (std::size_t i = 0; i < 8; ++i) v[i] -= c * u[i];
      }
    const double n = norm(v);
    if (n < 1e-6) continue;
    for (auto& x : v) x /= n;
    accepted.push_back(v);
    basis.push_back(PureState::normalized(shape, std::move(v)));
  }
  return Subspace(std::move(basis));
}

}  // namespace subent::states
