#pragma once

// Geometric entanglement measures E(psi) = 1 - max_{phi in S} |<phi|psi>|^2
// for the families S used throughout the library:
//
//   SchmidtBounded(r)   S = states of Schmidt rank <= r-1 across a cut (E_r)
//   Producibility(k)    S = (k-1)-producible states
//   GM                  S = fully product states (Producibility(2))
//   GGM                 S = biproduct states (Producibility(N))
//   GMEBoundedRank(r)   S = states of Schmidt rank <= r-1 across some cut
//
// E_r, GGM and GMEBoundedRank are exact via Schmidt spectra. GM and
// Producibility(k) in general need the see-saw search, which can only
// under-estimate the maximal overlap and so may over-estimate the measure.

#include <algorithm>
#include <charconv>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "subent/combinatorics.hpp"
#include "subent/seesaw.hpp"
#include "subent/states.hpp"
#include "subent/tensor.hpp"

namespace subent {

enum class MeasureKind { SchmidtBounded, Producibility, GM, GGM, GMEBoundedRank };

struct MeasureSpec {
  MeasureKind kind = MeasureKind::GM;
  int order = 2;  ///< r for the Schmidt-rank kinds, k for Producibility

  static MeasureSpec gm() { return {MeasureKind::GM, 2}; }
  static MeasureSpec ggm() { return {MeasureKind::GGM, 0}; }
  static MeasureSpec schmidt_bounded(int r) { return checked({MeasureKind::SchmidtBounded, r}); }
  static MeasureSpec producibility(int k) { return checked({MeasureKind::Producibility, k}); }
  static MeasureSpec gme_bounded_rank(int r) { return checked({MeasureKind::GMEBoundedRank, r}); }

  /// Canonical form for an N-site system: Producibility(2) is GM and
  /// Producibility(N) is GGM. Throws if k > N.
  MeasureSpec resolved(int sites) const {
    if (kind != MeasureKind::Producibility) return *this;
    if (order > sites) throw std::invalid_argument("MeasureSpec: producibility order exceeds number of sites");
    if (order == 2) return gm();
    if (order == sites) return ggm();
    return *this;
  }

  std::string name() const {
    switch (kind) {
      case MeasureKind::GM: return "gm";
      case MeasureKind::GGM: return "ggm";
      case MeasureKind::SchmidtBounded: return "er:" + std::to_string(order);
      case MeasureKind::Producibility: return "producibility:" + std::to_string(order);
      case MeasureKind::GMEBoundedRank: return "gme-er:" + std::to_string(order);
    }
    return "?";
  }

  /// Inverse of name(): "gm", "ggm", "er:R", "producibility:K", "gme-er:R".
  static MeasureSpec parse(std::string_view text) {
    if (text == "gm") return gm();
    if (text == "ggm") return ggm();
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("unknown measure '" + std::string(text) + "'");
    const auto head = text.substr(0, colon), tail = text.substr(colon + 1);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), value);
    if (ec != std::errc{} || ptr != tail.data() + tail.size())
      throw std::invalid_argument("bad measure order in '" + std::string(text) + "'");
    if (head == "er") return schmidt_bounded(value);
    if (head == "producibility" || head == "depth") return producibility(value);
    if (head == "gme-er") return gme_bounded_rank(value);
    throw std::invalid_argument("unknown measure '" + std::string(text) + "'");
  }

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;

 private:
  static MeasureSpec checked(MeasureSpec s) {
    if (s.order < 2) throw std::invalid_argument("MeasureSpec: order must be >= 2");
    return s;
  }
};

/// How a measure value was obtained.
enum class Method { ClosedForm, Exact, Seesaw };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed-form";
    case Method::Exact: return "exact";
    case Method::Seesaw: return "see-saw";
  }
  return "?";
}

struct MeasureValue {
  double value = 0.0;
  Method method = Method::Exact;
  bool converged = true;
  Amplitudes certificate;       ///< a maximizing state from S, when one is produced
  std::optional<Rational> exact;  ///< set for closed forms
  std::string detail;           ///< cut, family or partition that attained the value
};

// ---------------------------------------------------------------------------
// Exact routes

/// 1 - (lambda_1^2 + ... + lambda_{r-1}^2) across `cut`.
inline double e_r(const PureState& psi, const Bipartition& cut, int r) {
  if (r < 2) throw std::invalid_argument("e_r: r must be >= 2");
  const auto spec = schmidt_spectrum(psi, cut);
  return std::clamp(1.0 - spec.top_weight(r - 1), 0.0, 1.0);
}

/// E_r of a two-site state.
inline double e_r(const PureState& psi, int r) {
  if (psi.sites() != 2) throw std::invalid_argument("e_r: state is not bipartite; give a cut");
  return e_r(psi, bipartite_cut(), r);
}

/// Rank m if every squared coefficient equals 1/m within 1e-12; then
/// E_r = 1 - (r-1)/m exactly.
inline std::optional<int> flat_rank(const SchmidtSpectrum& s) {
  const int m = s.rank();
  if (m == 0) return std::nullopt;
  for (double l : s.coefficients)
    if (std::abs(l * l - 1.0 / m) > 1e-12) return std::nullopt;
  return m;
}

inline Rational e_r_flat_exact(int rank, int r) {
  return r - 1 >= rank ? Rational(0) : Rational(rank - r + 1, rank);
}

struct CutMinimum {
  double value = 1.0;
  Bipartition cut = bipartite_cut();
  std::optional<Rational> exact;  ///< set when every cut has a flat spectrum
};

/// min over canonical cuts of E_r across that cut.
inline CutMinimum min_over_cuts(const PureState& psi, int r) {
  if (psi.sites() < 2) throw std::invalid_argument("need at least two sites");
  if (r < 2) throw std::invalid_argument("e_r: r must be >= 2");
  CutMinimum best{std::numeric_limits<double>::infinity(), bipartite_cut(), std::nullopt};
  bool all_flat = true;
  std::optional<Rational> exact;
  for (const auto& cut : enumerate_bipartitions(psi.shape())) {
    const auto spec = schmidt_spectrum(psi, cut);
    const double v = std::clamp(1.0 - spec.top_weight(r - 1), 0.0, 1.0);
    if (v < best.value) best = {v, cut, std::nullopt};
    if (const auto m = flat_rank(spec); m && all_flat) {
      const auto q = e_r_flat_exact(*m, r);
      if (!exact || q < *exact) exact = q;
    } else {
      all_flat = false;
    }
  }
  if (all_flat) best.exact = exact;
  return best;
}

/// Generalized geometric measure: min over cuts of 1 - lambda_1^2.
inline double ggm(const PureState& psi) { return min_over_cuts(psi, 2).value; }

/// Genuine entanglement of r-bounded Schmidt rank: min over cuts of E_r.
/// Zero exactly when some cut has Schmidt rank <= r-1.
inline double e_r_gme(const PureState& psi, int r) { return min_over_cuts(psi, r).value; }

// ---------------------------------------------------------------------------
// See-saw routes

struct GmResult {
  double value = 1.0;
  double overlap = 0.0;
  std::vector<Amplitudes> factors;  ///< one local vector per site
  Amplitudes product;               ///< the certificate state
  bool converged = false;
  std::vector<std::vector<double>> traces;
};

/// GM by see-saw over fully product states. The reported overlap is attained
/// by `product`, so it is a lower bound on the true maximum.
inline GmResult gm_seesaw(const PureState& psi, const OptimizerConfig& config = {},
                          std::span<const std::vector<Amplitudes>> warm_starts = {}) {
  const auto layout = BlockLayout::fully_product(psi.shape());
  const TargetList targets{psi.amplitudes()};
  auto r = maximize_product_overlap(targets, layout, config, warm_starts);
  GmResult out;
  out.overlap = r.overlap;
  out.value = std::clamp(1.0 - r.overlap, 0.0, 1.0);
  out.factors = std::move(r.factors);
  out.product = std::move(r.state);
  out.converged = r.converged;
  out.traces = std::move(r.traces);
  return out;
}

/// Largest number of sites for which producibility_measure enumerates
/// set partitions.
inline constexpr int kMaxProducibilitySites = 8;

struct ProducibilityResult {
  double value = 1.0;
  SetPartition partition;
  Amplitudes certificate;
  bool converged = false;
};

/// 1 - max over (k-1)-producible states, searched over every maximal set
/// partition into blocks of at most k-1 sites.
inline ProducibilityResult producibility_measure(const PureState& psi, int k, const OptimizerConfig& config = {}) {
  const int n = psi.sites();
  if (k < 2 || k > n) throw std::invalid_argument("producibility_measure: need 2 <= k <= N");
  if (n > kMaxProducibilitySites) throw std::invalid_argument("producibility_measure: too many sites to enumerate partitions");
  const TargetList targets{psi.amplitudes()};
  ProducibilityResult best;
  double best_overlap = -1.0;
  for (auto& partition : set_partitions(n, k - 1, true)) {
    const BlockLayout layout(psi.shape(), partition);
    const auto r = maximize_product_overlap(targets, layout, config);
    if (r.overlap > best_overlap) {
      best_overlap = r.overlap;
      best.partition = partition;
      best.certificate = r.state;
      best.converged = r.converged;
    }
  }
  best.value = std::clamp(1.0 - best_overlap, 0.0, 1.0);
  return best;
}

// ---------------------------------------------------------------------------
// Closed forms

/// GM of the qubit Dicke state D_{N,k}: 1 - C(N,k) k^k (N-k)^(N-k) / N^N.
inline Rational gm_dicke_qubit_closed_exact(int n, int k) {
  if (n < 1) throw std::invalid_argument("gm_dicke_qubit_closed: need N >= 1");
  if (k < 0 || k > n) throw std::out_of_range("gm_dicke_qubit_closed: k must lie in [0, N]");
  const Integer num = binomial(n, k) * ipow(Integer(k), static_cast<unsigned>(k)) *
                      ipow(Integer(n - k), static_cast<unsigned>(n - k));
  return Rational(1) - Rational(num, ipow(Integer(n), static_cast<unsigned>(n)));
}

inline double gm_dicke_qubit_closed(int n, int k) { return to_double(gm_dicke_qubit_closed_exact(n, k)); }

/// GM (and GGM) of GHZ_{N,d}: 1 - 1/d.
inline Rational gm_ghz_closed_exact(int d) {
  if (d < 2) throw std::invalid_argument("gm_ghz_closed: need d >= 2");
  return Rational(d - 1, d);
}

/// E_r of the two-qudit maximally entangled state: 1 - (r-1)/d.
inline Rational e_r_max_entangled_exact(int d, int r) {
  if (r < 2) throw std::invalid_argument("e_r: r must be >= 2");
  return r - 1 >= d ? Rational(0) : Rational(d - r + 1, d);
}

struct CutValue {
  Rational value;
  Composition pi;  ///< maximizing split of the occupations
};

/// GM of the qudit Dicke state across any n | N-n cut:
///   1 - C(N,n)^-1 max_pi prod_i C(k_i, pi_i),  pi_i <= k_i,  sum pi = n.
inline CutValue gm_dicke_qudit_cut_exact(const Composition& k, int n) {
  const int total = composition_total(k);
  if (n < 1 || 2 * n > total) throw std::invalid_argument("gm_dicke_qudit_cut: need 1 <= n <= N/2");
  Integer best = 0;
  Composition arg;
  for_each_bounded_composition(n, k, [&](std::span<const int> pi) {
    Integer p = 1;
    for (std::size_t i = 0; i < pi.size(); ++i) p *= binomial(k[i], pi[i]);
    if (p > best) {
      best = p;
      arg.assign(pi.begin(), pi.end());
    }
  });
  return {Rational(1) - Rational(best, binomial(total, n)), arg};
}

inline double gm_dicke_qudit_cut(const Composition& k, int n) { return to_double(gm_dicke_qudit_cut_exact(k, n).value); }

struct DickeGgm {
  Rational value;
  int cut_size = 1;
  Composition pi;
};

/// GGM of the qudit Dicke state: min over n = 1..N/2 of the cut values.
inline DickeGgm ggm_dicke_qudit_exact(const Composition& k) {
  const int total = composition_total(k);
  if (total < 2) throw std::invalid_argument("ggm_dicke_qudit: need N >= 2");
  DickeGgm best{Rational(2), 0, {}};
  for (int n = 1; 2 * n <= total; ++n) {
    auto c = gm_dicke_qudit_cut_exact(k, n);
    if (c.value < best.value) best = {c.value, n, std::move(c.pi)};
  }
  return best;
}

inline double ggm_dicke_qudit(const Composition& k) { return to_double(ggm_dicke_qudit_exact(k).value); }

/// Fast 64-bit version of ggm_dicke_qudit for sweeps: returns the maximal
/// overlap as a fraction num/den (GGM = 1 - num/den).
struct OverlapFraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

inline OverlapFraction dicke_qudit_max_biproduct_overlap(const Composition& k) {
  const int total = composition_total(k);
  if (total < 2) throw std::invalid_argument("ggm_dicke_qudit: need N >= 2");
  OverlapFraction best{0, 1};
  std::vector<int> caps(k.begin(), k.end());
  for (int n = 1; 2 * n <= total; ++n) {
    std::int64_t m = 0;
    for_each_bounded_composition(n, caps, [&](std::span<const int> pi) {
      std::int64_t p = 1;
      for (std::size_t i = 0; i < pi.size(); ++i) p *= binomial_i64(k[i], pi[i]);
      m = std::max(m, p);
    });
    const std::int64_t den = binomial_i64(total, n);
    if (static_cast<__int128>(m) * best.den > static_cast<__int128>(best.num) * den) best = {m, den};
  }
  return best;
}

struct ClosedFormMatch {
  Rational value;
  std::string family;
};

/// Recognizes qubit Dicke states and GHZ states (up to a global phase) and
/// returns their exact GM.
inline std::optional<ClosedFormMatch> closed_form_gm(const PureState& psi) {
  const auto& shape = psi.shape();
  if (shape.sites() < 2 || !shape.is_uniform() || shape.total_dim() > (std::size_t{1} << 16)) return std::nullopt;
  const int n = shape.sites(), d = shape.dim(0);
  constexpr double kMatch = 1e-12;
  if (std::abs(inner_product(states::ghz(n, d), psi)) > 1.0 - kMatch)
    return ClosedFormMatch{gm_ghz_closed_exact(d), "ghz(" + std::to_string(n) + "," + std::to_string(d) + ")"};
  if (d == 2) {
    for (int k = 0; k <= n; ++k)
      if (std::abs(inner_product(states::dicke_qubit(n, k), psi)) > 1.0 - kMatch)
        return ClosedFormMatch{gm_dicke_qubit_closed_exact(n, k),
                               "dicke(" + std::to_string(n) + "," + std::to_string(k) + ")"};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Dispatch

/// Evaluates a measure, preferring closed forms and exact routes; falls back
/// to the see-saw only for GM on three or more sites and for intermediate
/// producibility orders.
inline MeasureValue evaluate(const PureState& psi, const MeasureSpec& raw_spec, const OptimizerConfig& config = {}) {
  const int n = psi.sites();
  const MeasureSpec spec = raw_spec.resolved(n);
  MeasureValue out;
  switch (spec.kind) {
    case MeasureKind::SchmidtBounded:
      if (n != 2) throw std::invalid_argument("measure " + spec.name() + " needs a bipartite state");
      [[fallthrough]];
    case MeasureKind::GGM:
    case MeasureKind::GMEBoundedRank: {
      if (n < 2) throw std::invalid_argument("measure " + spec.name() + " needs at least two sites");
      const auto m = min_over_cuts(psi, spec.kind == MeasureKind::GGM ? 2 : spec.order);
      out.value = m.value;
      out.detail = m.cut.to_string();
      if (m.exact) {
        out.exact = m.exact;
        out.value = to_double(*m.exact);
        out.method = Method::ClosedForm;
        out.detail += " flat spectrum";
      }
      return out;
    }
    case MeasureKind::GM: {
      if (n == 1) {
        out.value = 0.0;
        out.exact = Rational(0);
        return out;
      }
      if (n == 2) return evaluate(psi, MeasureSpec::schmidt_bounded(2), config);
      if (auto cf = closed_form_gm(psi)) {
        out.value = to_double(cf->value);
        out.exact = cf->value;
        out.method = Method::ClosedForm;
        out.detail = cf->family;
        return out;
      }
      auto r = gm_seesaw(psi, config);
      out.value = r.value;
      out.method = Method::Seesaw;
      out.converged = r.converged;
      out.certificate = std::move(r.product);
      return out;
    }
    case MeasureKind::Producibility: {
      auto r = producibility_measure(psi, spec.order, config);
      out.value = r.value;
      out.method = Method::Seesaw;
      out.converged = r.converged;
      out.certificate = std::move(r.certificate);
      return out;
    }
  }
  throw std::logic_error("evaluate: unhandled measure");
}

}  // namespace subent
