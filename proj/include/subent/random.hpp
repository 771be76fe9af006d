#pragma once

// Seeded randomness. Every randomized routine derives independent streams
// from one master seed:
//
//   stream_seed(master, i) = splitmix64(master + i * 0x9E3779B97F4A7C15)
//
// and feeds it to std::mt19937_64. Restart i of an optimizer always uses
// stream i, so results do not depend on thread count or scheduling.

#include <cmath>
#include <cstdint>
#include <random>

#include "subent/tensor.hpp"

namespace subent {

inline constexpr std::uint64_t kDefaultSeed = 20240531;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master + stream * 0x9E3779B97F4A7C15ULL);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master, std::uint64_t stream) { return Rng(stream_seed(master, stream)); }

/// Haar-random unit vector (normalized complex Gaussian).
inline Amplitudes random_unit_vector(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Amplitudes v(dim);
  double n2 = 0.0;
  while (n2 < 1e-24) {
    n2 = 0.0;
    for (auto& a : v) {
      a = cplx(g(rng), g(rng));
      n2 += std::norm(a);
    }
  }
  const double n = std::sqrt(n2);
  for (auto& a : v) a /= n;
  return v;
}

inline PureState random_state(const SystemShape& shape, Rng& rng) {
  return PureState::normalized(shape, random_unit_vector(shape.total_dim(), rng));
}

/// Span of k Haar-random orthonormal vectors.
inline Subspace random_subspace(const SystemShape& shape, std::size_t k, Rng& rng) {
  if (k == 0 || k > shape.total_dim()) throw std::invalid_argument("random_subspace: invalid dimension");
  std::vector<Amplitudes> vs;
  while (vs.size() < k) {
    auto v = random_unit_vector(shape.total_dim(), rng);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : vs) {
        const cplx c = dot(u, v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
      }
    const double n = norm(v);
    if (n < 1e-6) continue;
    for (auto& a : v) a /= n;
    vs.push_back(std::move(v));
  }
  std::vector<PureState> basis;
  for (auto& v : vs) basis.push_back(PureState::normalized(shape, std::move(v)));
  return Subspace(std::move(basis));
}

}  // namespace subent
