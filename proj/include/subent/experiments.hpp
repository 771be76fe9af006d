#pragma once

// Parameter sweeps over the state families where the subspace bound has a
// closed form:
//
//   * subspaces of qubit Dicke states D_{N,m}, ..., D_{N,N-m} (CES thresholds)
//   * the antisymmetric subspace of N qudits, detected iff C(d,N) < N!
//   * subspaces of qudit Dicke states chosen to maximize the GGM bound
//   * maximal GGM over qudit Dicke states, and the GHZ + W family
//
// Thresholds use exact integer arithmetic; floating point only renders them.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "subent/combinatorics.hpp"
#include "subent/criterion.hpp"
#include "subent/measures.hpp"
#include "subent/parallel.hpp"

namespace subent {

/// Shortest round-trip decimal form.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(x);
}

// ---------------------------------------------------------------------------
// Qubit Dicke CES thresholds

struct DickeThreshold {
  int n = 0;
  int m_star = 0;  ///< smallest m with sum_{k=m}^{N-m} q_k < 1
  int dim = 1;     ///< N - 2 m_star + 1
  bool satisfied = true;      ///< false: no m works; dim = 1 is the sentinel
  bool odd_extension = false; ///< odd N, central pair k = (N -+ 1)/2
  Rational overlap_sum;       ///< sum of q_k = 1 - E(D_{N,k}) over the detected set
};

/// C(N,k) k^k (N-k)^(N-k), the numerator of 1 - E(D_{N,k}) over N^N.
inline Integer dicke_overlap_numerator(int n, int k) {
  return binomial(n, k) * ipow(Integer(k), static_cast<unsigned>(k)) * ipow(Integer(n - k), static_cast<unsigned>(n - k));
}

/// Largest detectable subspace spanned by qubit Dicke states symmetric about
/// the centre. The subspace bound for {D_{N,m}, ..., D_{N,N-m}} is
/// 1 - sum q_k, so the condition reduces to
/// sum_{k=m}^{N-m} C(N,k) k^k (N-k)^(N-k) < N^N, monotone in m.
inline DickeThreshold dicke_ces_threshold_exact(int n) {
  if (n < 2) throw std::invalid_argument("dicke_ces_threshold: need N >= 2");
  DickeThreshold out;
  out.n = n;
  out.odd_extension = n % 2 == 1;
  const Integer total = ipow(Integer(n), static_cast<unsigned>(n));
  const int centre_lo = n % 2 == 0 ? n / 2 : (n - 1) / 2;
  Integer sum = 0;
  for (int k = centre_lo; k <= n - centre_lo; ++k) sum += dicke_overlap_numerator(n, k);
  if (sum >= total) {
    out.m_star = centre_lo;
    out.dim = 1;
    out.satisfied = false;
    out.overlap_sum = Rational(dicke_overlap_numerator(n, centre_lo), total);
    return out;
  }
  int m = centre_lo;
  while (m - 1 >= 1) {
    const Integer next = sum + dicke_overlap_numerator(n, m - 1) + dicke_overlap_numerator(n, n - m + 1);
    if (next >= total) break;
    sum = next;
    --m;
  }
  out.m_star = m;
  out.dim = n - 2 * m + 1;
  out.overlap_sum = Rational(sum, total);
  return out;
}

/// q_k = 1 - E(D_{N,k}) in long double via log-gamma.
inline long double dicke_overlap_float(int n, int k) {
  const long double nn = n, kk = k, rest = n - k;
  long double lg = std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(rest + 1);
  if (k > 0) lg += kk * std::log(kk / nn);
  if (k < n) lg += rest * std::log(rest / nn);
  return std::exp(lg);
}

/// Same threshold as dicke_ces_threshold_exact, evaluated in floating point.
inline int dicke_ces_threshold_float(int n) {
  if (n < 2) throw std::invalid_argument("dicke_ces_threshold: need N >= 2");
  const int centre_lo = n % 2 == 0 ? n / 2 : (n - 1) / 2;
  long double sum = 0;
  for (int k = centre_lo; k <= n - centre_lo; ++k) sum += dicke_overlap_float(n, k);
  if (sum >= 1.0L) return centre_lo;
  int m = centre_lo;
  while (m - 1 >= 1) {
    const long double next = sum + dicke_overlap_float(n, m - 1) + dicke_overlap_float(n, n - m + 1);
    if (next >= 1.0L) break;
    sum = next;
    --m;
  }
  return m;
}

struct DickeAnalytic {
  int n = 0;
  double m_bound = 0.0;       ///< closed-form root of the Stirling condition
  double m_asymptotic = 0.0;  ///< N/2 - (pi / 2e) sqrt N
  int m_min = 0;              ///< smallest integer m satisfying the condition; 0 if none
  int dim = 0;                ///< N - 2 m_min + 1, or 0
};

/// (N - 2m + 1)(e / 2 pi) sqrt(N / (m (N - m))), the Stirling estimate of
/// the left-hand side of the threshold condition.
inline double dicke_stirling_lhs(int n, int m) {
  const long double nn = n, mm = m;
  return static_cast<double>((nn - 2 * mm + 1) * (std::numbers::e_v<long double> / (2 * std::numbers::pi_v<long double>)) *
                             std::sqrt(nn / (mm * (nn - mm))));
}

inline DickeAnalytic dicke_ces_threshold_analytic(int n) {
  if (n < 2) throw std::invalid_argument("dicke_ces_threshold_analytic: need N >= 2");
  DickeAnalytic out;
  out.n = n;
  const double nn = n, e = std::numbers::e, pi = std::numbers::pi;
  out.m_bound = nn / 2 - (pi * std::sqrt(nn * (e * e * (nn * nn - 1) + pi * pi * nn)) - e * e * nn) / (2 * (e * e * nn + pi * pi));
  out.m_asymptotic = nn / 2 - pi / (2 * e) * std::sqrt(nn);
  for (int m = 1; 2 * m <= n; ++m)
    if (dicke_stirling_lhs(n, m) < 1.0) {
      out.m_min = m;
      out.dim = n - 2 * m + 1;
      break;
    }
  return out;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares: need two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("least_squares: degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0 ? 1.0 : sxy * sxy / (sxx * syy);
  return f;
}

struct DickeScaling {
  std::vector<int> n;
  std::vector<int> dim;
  LinearFit sqrt_fit;    ///< dim against sqrt N
  LinearFit loglog_fit;  ///< log dim against log N
  double reference_slope = std::numbers::pi / std::numbers::e;
  double relative_deviation = 0.0;  ///< |slope - pi/e| / (pi/e)
};

inline DickeScaling dicke_dimension_scaling(std::vector<int> ns, int threads = 1) {
  DickeScaling out;
  out.n = std::move(ns);
  out.dim.assign(out.n.size(), 0);
  parallel_for(out.n.size(), threads, [&](std::size_t i) { out.dim[i] = dicke_ces_threshold_exact(out.n[i]).dim; });
  std::vector<double> sx, lx, ly, y;
  for (std::size_t i = 0; i < out.n.size(); ++i) {
    sx.push_back(std::sqrt(static_cast<double>(out.n[i])));
    lx.push_back(std::log(static_cast<double>(out.n[i])));
    y.push_back(out.dim[i]);
    ly.push_back(std::log(static_cast<double>(out.dim[i])));
  }
  out.sqrt_fit = least_squares(sx, y);
  out.loglog_fit = least_squares(lx, ly);
  out.relative_deviation = std::abs(out.sqrt_fit.slope - out.reference_slope) / out.reference_slope;
  return out;
}

// ---------------------------------------------------------------------------
// Antisymmetric subspace

struct AntisymPoint {
  int d = 0;
  int n = 0;
  Integer binom;
  Integer fact;
  bool detected = false;
  int black_line = 0;   ///< floor((d+1)/2) + 1
  double orange = 0.0;  ///< sqrt(2d+2) - sqrt(d-3) - 1, NaN for d < 3
};

struct AntisymRegion {
  int d_max = 0;
  std::vector<AntisymPoint> points;  ///< ordered by d, then N
  bool black_line_ok = true;         ///< every N >= floor((d+1)/2)+1 detected
  /// Detected points lying strictly below the orange curve.
  std::vector<std::pair<int, int>> orange_detected_below;
  /// Undetected points lying strictly above the orange curve.
  std::vector<std::pair<int, int>> orange_undetected_above;
};

inline double antisym_orange_curve(int d) {
  if (d < 3) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(2.0 * d + 2.0) - std::sqrt(d - 3.0) - 1.0;
}

inline int antisym_black_line(int d) { return (d + 1) / 2 + 1; }

/// The detection grid C(d,N) < N! for 2 <= N <= d <= d_max.
inline AntisymRegion antisym_detection_region(int d_max) {
  if (d_max < 2) throw std::invalid_argument("antisym_detection_region: need d_max >= 2");
  AntisymRegion out;
  out.d_max = d_max;
  for (int d = 2; d <= d_max; ++d)
    for (int n = 2; n <= d; ++n) {
      AntisymPoint p;
      p.d = d;
      p.n = n;
      p.binom = binomial(d, n);
      p.fact = factorial(n);
      p.detected = p.binom < p.fact;
      p.black_line = antisym_black_line(d);
      p.orange = antisym_orange_curve(d);
      if (n >= p.black_line && !p.detected) out.black_line_ok = false;
      if (!std::isnan(p.orange)) {
        if (p.detected && n < p.orange) out.orange_detected_below.emplace_back(d, n);
        if (!p.detected && n > p.orange) out.orange_undetected_above.emplace_back(d, n);
      }
      out.points.push_back(std::move(p));
    }
  return out;
}

/// Smallest N with C(d,N) < N!, scanning N = 2..d; 0 if none.
inline int antisym_min_detected(int d) {
  for (int n = 2; n <= d; ++n)
    if (binomial(d, n) < factorial(n)) return n;
  return 0;
}

// ---------------------------------------------------------------------------
// Qudit Dicke GES search

struct GesSearch {
  int n = 0;
  int d = 0;
  std::size_t num_compositions = 0;
  int max_dim = 0;                 ///< largest detectable subspace of Dicke states
  std::vector<Composition> chosen; ///< its basis, by decreasing GGM
  Rational bound;                  ///< subspace bound of the chosen set: 1 - sum q
};

namespace detail {

inline GesSearch ges_search_unchecked(int n, int d) {
  GesSearch out;
  out.n = n;
  out.d = d;
  struct Entry {
    Composition k;
    OverlapFraction q;
  };
  std::vector<Entry> entries;
  for (auto& k : compositions(n, d)) {
    const auto q = dicke_qudit_max_biproduct_overlap(k);
    entries.push_back({std::move(k), q});
  }
  out.num_compositions = entries.size();
  // Increasing q is decreasing GGM; stable keeps enumeration order on ties.
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return static_cast<__int128>(a.q.num) * b.q.den < static_cast<__int128>(b.q.num) * a.q.den;
  });
  Rational sum = 0;
  out.bound = 0;
  for (const auto& e : entries) {
    sum += Rational(e.q.num, e.q.den);
    if (sum >= 1) break;
    out.chosen.push_back(e.k);
    out.bound = 1 - sum;
  }
  out.max_dim = static_cast<int>(out.chosen.size());
  return out;
}

}  // namespace detail

inline constexpr int kGesMinSites = 3, kGesMaxSites = 10, kGesMinLevels = 3, kGesMaxLevels = 11;

/// Largest subspace spanned by qudit Dicke states that the GGM bound
/// detects. The bound is additive, so the optimal subset is a prefix of the
/// states sorted by decreasing GGM.
inline GesSearch qudit_dicke_ges_search(int n, int d) {
  if (n < kGesMinSites || n > kGesMaxSites || d < kGesMinLevels || d > kGesMaxLevels)
    throw std::out_of_range("qudit_dicke_ges_search: need 3 <= N <= 10 and 3 <= d <= 11");
  return detail::ges_search_unchecked(n, d);
}

// ---------------------------------------------------------------------------
// Maximal qudit Dicke GGM

struct MaxGgmPoint {
  int d = 0;
  int n = 0;
  Rational value;
  Composition argmax;  ///< first maximizer in enumeration order
};

inline MaxGgmPoint max_ggm_dicke(int d, int n) {
  if (d < 2 || n < 2) throw std::invalid_argument("max_ggm_dicke: need d >= 2 and N >= 2");
  MaxGgmPoint out;
  out.d = d;
  out.n = n;
  OverlapFraction best{2, 1};
  for (auto& k : compositions(n, d)) {
    const auto q = dicke_qudit_max_biproduct_overlap(k);
    if (static_cast<__int128>(q.num) * best.den < static_cast<__int128>(best.num) * q.den) {
      best = q;
      out.argmax = std::move(k);
    }
  }
  out.value = 1 - Rational(best.num, best.den);
  return out;
}

inline std::vector<MaxGgmPoint> max_ggm_dicke_curve(int d, int n_min, int n_max, int threads = 1) {
  if (n_min < 2 || n_max < n_min) throw std::invalid_argument("max_ggm_dicke_curve: invalid N range");
  std::vector<MaxGgmPoint> out(static_cast<std::size_t>(n_max - n_min + 1));
  parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = max_ggm_dicke(d, n_min + static_cast<int>(i)); });
  return out;
}

// ---------------------------------------------------------------------------
// GHZ + W

/// 1/2 - ((N-1)/N)^(N-1): the subspace bound for span{GHZ_N, W_N}.
inline double ghz_w_bound(int n) {
  if (n < 2) throw std::invalid_argument("ghz_w_bound: need N >= 2");
  const long double nn = n;
  return static_cast<double>(0.5L - std::exp((nn - 1) * std::log1p(-1.0L / nn)));
}

inline Rational ghz_w_bound_exact(int n) {
  if (n < 2) throw std::invalid_argument("ghz_w_bound: need N >= 2");
  const auto e = static_cast<unsigned>(n - 1);
  return Rational(1, 2) - Rational(ipow(Integer(n - 1), e), ipow(Integer(n), e));
}

struct GhzWPoint {
  int n = 0;
  double bound = 0.0;
  std::optional<Rational> exact;
  bool positive = false;
};

/// Bounds for N in [n_min, n_max]; exact rationals up to `exact_limit`.
inline std::vector<GhzWPoint> ghz_w_family(int n_min, int n_max, int exact_limit = 200) {
  if (n_min < 3 || n_max < n_min) throw std::invalid_argument("ghz_w_family: need 3 <= n_min <= n_max");
  std::vector<GhzWPoint> out;
  for (int n = n_min; n <= n_max; ++n) {
    GhzWPoint p;
    p.n = n;
    p.bound = ghz_w_bound(n);
    if (n <= exact_limit) {
      p.exact = ghz_w_bound_exact(n);
      p.positive = *p.exact > 0;
    } else {
      p.positive = p.bound > 0;
    }
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweep tables

struct SweepResult {
  std::string name;
  std::vector<std::string> axes;     ///< leading integer columns indexing the grid
  std::vector<std::string> columns;  ///< every column, axes first
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  /// Throws unless every row has one value per column and the axis tuples
  /// strictly increase.
  void validate() const {
    if (axes.size() > columns.size() || !std::equal(axes.begin(), axes.end(), columns.begin()))
      throw std::logic_error("SweepResult: axes must be the leading columns");
    std::vector<long long> prev;
    for (const auto& row : rows) {
      if (row.size() != columns.size()) throw std::logic_error("SweepResult: row width does not match columns");
      std::vector<long long> key;
      for (std::size_t a = 0; a < axes.size(); ++a) {
        long long v = 0;
        const auto& s = row[a];
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
          throw std::logic_error("SweepResult: non-integer axis value '" + s + "'");
        key.push_back(v);
      }
      if (!prev.empty() && !(prev < key)) throw std::logic_error("SweepResult: grid points are not strictly increasing");
      prev = std::move(key);
    }
  }

  void write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << '\n';
    }
  }

  std::string csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
  }
};

inline std::string composition_label(std::span<const int> k) {
  std::string s;
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? ";" : "") + std::to_string(k[i]);
  return s;
}

/// fig1: N,dim_exact,dim_analytic,m_exact,m_analytic,m_bound,extension
inline SweepResult fig1_sweep(int n_max, bool include_odd = false, int threads = 1) {
  if (n_max < 4) throw std::invalid_argument("fig1: need nmax >= 4");
  std::vector<int> ns;
  for (int n = 4; n <= n_max; ++n)
    if (include_odd || n % 2 == 0) ns.push_back(n);
  std::vector<DickeThreshold> exact(ns.size());
  parallel_for(ns.size(), threads, [&](std::size_t i) { exact[i] = dicke_ces_threshold_exact(ns[i]); });
  SweepResult s;
  s.name = "fig1";
  s.axes = {"N"};
  s.columns = {"N", "dim_exact", "dim_analytic", "m_exact", "m_analytic", "m_bound", "extension"};
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto a = dicke_ces_threshold_analytic(ns[i]);
    s.rows.push_back({std::to_string(ns[i]), std::to_string(exact[i].dim), std::to_string(a.dim),
                      std::to_string(exact[i].m_star), std::to_string(a.m_min), format_double(a.m_bound),
                      exact[i].odd_extension ? "odd" : ""});
  }
  s.metadata = {{"nmax", std::to_string(n_max)}, {"include_odd", include_odd ? "true" : "false"}};
  s.validate();
  return s;
}

/// fig2: d,N,binom,factorial,detected,black_line,orange_curve
inline SweepResult fig2_sweep(int d_max) {
  const auto region = antisym_detection_region(d_max);
  SweepResult s;
  s.name = "fig2";
  s.axes = {"d", "N"};
  s.columns = {"d", "N", "binom", "factorial", "detected", "black_line", "orange_curve"};
  for (const auto& p : region.points)
    s.rows.push_back({std::to_string(p.d), std::to_string(p.n), p.binom.str(), p.fact.str(), p.detected ? "1" : "0",
                      std::to_string(p.black_line), format_double(p.orange)});
  s.metadata = {{"dmax", std::to_string(d_max)},
                {"black_line_ok", region.black_line_ok ? "true" : "false"},
                {"orange_detected_below", std::to_string(region.orange_detected_below.size())},
                {"orange_undetected_above", std::to_string(region.orange_undetected_above.size())}};
  s.validate();
  return s;
}

/// fig3: N,d,num_compositions,max_ges_dim,bound,bound_float
inline SweepResult fig3_sweep(int n_min = kGesMinSites, int n_max = kGesMaxSites, int d_min = kGesMinLevels,
                              int d_max = kGesMaxLevels, int threads = 1) {
  std::vector<std::pair<int, int>> grid;
  for (int n = n_min; n <= n_max; ++n)
    for (int d = d_min; d <= d_max; ++d) grid.emplace_back(n, d);
  std::vector<GesSearch> results(grid.size());
  parallel_for(grid.size(), threads,
               [&](std::size_t i) { results[i] = qudit_dicke_ges_search(grid[i].first, grid[i].second); });
  SweepResult s;
  s.name = "fig3";
  s.axes = {"N", "d"};
  s.columns = {"N", "d", "num_compositions", "max_ges_dim", "bound", "bound_float"};
  for (const auto& r : results)
    s.rows.push_back({std::to_string(r.n), std::to_string(r.d), std::to_string(r.num_compositions),
                      std::to_string(r.max_dim), to_string(r.bound), format_double(to_double(r.bound))});
  s.validate();
  return s;
}

/// figD: d,N,max_ggm_exact,max_ggm,argmax_kvec
inline SweepResult figD_sweep(std::span<const int> ds, int n_min, int n_max, int threads = 1) {
  SweepResult s;
  s.name = "figD";
  s.axes = {"d", "N"};
  s.columns = {"d", "N", "max_ggm_exact", "max_ggm", "argmax_kvec"};
  std::vector<int> sorted(ds.begin(), ds.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int d : sorted)
    for (const auto& p : max_ggm_dicke_curve(d, n_min, n_max, threads))
      s.rows.push_back({std::to_string(p.d), std::to_string(p.n), to_string(p.value), format_double(to_double(p.value)),
                        composition_label(p.argmax)});
  s.metadata = {{"nmin", std::to_string(n_min)}, {"nmax", std::to_string(n_max)}};
  s.validate();
  return s;
}

}  // namespace subent
