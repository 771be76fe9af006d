#pragma once

// Exact integer and rational helpers plus the combinatorial enumerations the
// measures and sweeps need: compositions, bounded compositions and set
// partitions.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace subent {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  Integer r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline Integer factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  Integer r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// base^exp with 0^0 = 1.
inline Integer ipow(const Integer& base, unsigned exp) { return boost::multiprecision::pow(base, exp); }

/// C(n, k) in 64 bits; throws if it does not fit.
inline std::int64_t binomial_i64(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > static_cast<__int128>(INT64_MAX)) throw std::overflow_error("binomial_i64: overflow");
  }
  return static_cast<std::int64_t>(r);
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational make_rational(const Integer& num, const Integer& den) { return Rational(num, den); }

inline std::string to_string(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// ---------------------------------------------------------------------------
// Compositions

/// Occupation vector (k_0, ..., k_{d-1}) of nonnegative parts.
using Composition = std::vector<int>;

inline int composition_total(std::span<const int> k) {
  int n = 0;
  for (int x : k) {
    if (x < 0) throw std::invalid_argument("composition: negative part");
    n += x;
  }
  return n;
}

/// Visits every pi with 0 <= pi_i <= caps_i and sum(pi) = total, in
/// lexicographically decreasing order.
template <class Visit>
void for_each_bounded_composition(int total, std::span<const int> caps, Visit&& visit) {
  std::vector<int> pi(caps.size(), 0);
  std::vector<int> suffix(caps.size() + 1, 0);
  for (std::size_t i = caps.size(); i-- > 0;) suffix[i] = suffix[i + 1] + caps[i];
  if (total < 0 || total > suffix[0]) return;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == caps.size() || caps.empty()) {
      if (!caps.empty()) pi[i] = left;
      visit(std::span<const int>(pi));
      return;
    }
    const int hi = std::min(left, caps[i]);
    const int lo = std::max(0, left - suffix[i + 1]);
    for (int v = hi; v >= lo; --v) {
      pi[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, total);
}

/// All compositions of `total` into `parts` nonnegative parts, in
/// lexicographically decreasing order: (N,0,...,0) first.
inline std::vector<Composition> compositions(int total, int parts) {
  if (parts < 1 || total < 0) throw std::invalid_argument("compositions: invalid arguments");
  std::vector<Composition> out;
  const std::vector<int> caps(static_cast<std::size_t>(parts), total);
  for_each_bounded_composition(total, caps, [&](std::span<const int> c) { out.emplace_back(c.begin(), c.end()); });
  return out;
}

// ---------------------------------------------------------------------------
// Set partitions

/// Partition of {0, ..., n-1} into blocks; blocks sorted by smallest element.
using SetPartition = std::vector<std::vector<int>>;

/// Set partitions of n elements whose blocks have at most `max_block`
/// elements. With `maximal_only`, partitions in which two blocks could be
/// merged without exceeding `max_block` are skipped.
inline std::vector<SetPartition> set_partitions(int n, int max_block, bool maximal_only = false) {
  if (n < 1 || max_block < 1) throw std::invalid_argument("set_partitions: invalid arguments");
  std::vector<SetPartition> out;
  SetPartition current;
  std::function<void(int)> rec = [&](int element) {
    if (element == n) {
      if (maximal_only) {
        for (std::size_t a = 0; a < current.size(); ++a)
          for (std::size_t b = a + 1; b < current.size(); ++b)
            if (static_cast<int>(current[a].size() + current[b].size()) <= max_block) return;
      }
      out.push_back(current);
      return;
    }
    for (std::size_t b = 0; b < current.size(); ++b) {
      if (static_cast<int>(current[b].size()) < max_block) {
        current[b].push_back(element);
        rec(element + 1);
        current[b].pop_back();
      }
    }
    current.push_back({element});
    rec(element + 1);
    current.pop_back();
  };
  rec(0);
  return out;
}

}  // namespace subent
