#pragma once

// Sufficient conditions for subspace entanglement built from the measure
// values E_i of an orthonormal spanning set {phi_i}:
//
//   superposition bound   E(sum a_i phi_i) >= sum |a_i|^2 E_i
//                                             - 2 sum_{i<j} |a_i a_j| sqrt(1-E_i) sqrt(1-E_j)
//   subspace bound        E_min(V) >= sum E_i - (k - 1)
//
// A positive subspace bound certifies the property the measure detects
// (complete entanglement, genuine entanglement, Schmidt rank, depth). The
// bound is only sound when no E_i is over-estimated, so reports track how
// each value was obtained.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "subent/measures.hpp"

namespace subent {

inline constexpr double kDetectionTolerance = 1e-9;

enum class Verdict { Detected, NotDetected };

inline std::string to_string(Verdict v) { return v == Verdict::Detected ? "Detected" : "NotDetected"; }

enum class ClaimKind { CES, GES, SchmidtRankAtLeast, EntanglementDepthAtLeast, GenuineSchmidtRankAtLeast };

struct Claim {
  ClaimKind kind = ClaimKind::CES;
  int order = 0;

  std::string to_string() const {
    switch (kind) {
      case ClaimKind::CES: return "CES";
      case ClaimKind::GES: return "GES";
      case ClaimKind::SchmidtRankAtLeast: return "SchmidtRankAtLeast(" + std::to_string(order) + ")";
      case ClaimKind::EntanglementDepthAtLeast: return "EntanglementDepthAtLeast(" + std::to_string(order) + ")";
      case ClaimKind::GenuineSchmidtRankAtLeast: return "GenuineSchmidtRankAtLeast(" + std::to_string(order) + ")";
    }
    return "?";
  }

  /// "ces", "ges", "rank:R", "depth:K"
  static Claim parse(std::string_view text) {
    if (text == "ces") return {ClaimKind::CES, 0};
    if (text == "ges") return {ClaimKind::GES, 0};
    const auto colon = text.find(':');
    if (colon != std::string_view::npos) {
      const auto head = text.substr(0, colon);
      int v = 0;
      const auto tail = text.substr(colon + 1);
      const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), v);
      if (ec == std::errc{} && ptr == tail.data() + tail.size() && v >= 2) {
        if (head == "rank") return {ClaimKind::SchmidtRankAtLeast, v};
        if (head == "depth") return {ClaimKind::EntanglementDepthAtLeast, v};
      }
    }
    throw std::invalid_argument("unknown claim '" + std::string(text) + "' (expected ces|ges|rank:R|depth:K)");
  }
};

/// Measure whose positive subspace bound establishes `claim` on N sites.
inline MeasureSpec measure_for(const Claim& claim, int sites) {
  switch (claim.kind) {
    case ClaimKind::CES: return sites == 2 ? MeasureSpec::schmidt_bounded(2) : MeasureSpec::gm();
    case ClaimKind::GES: return MeasureSpec::ggm();
    case ClaimKind::SchmidtRankAtLeast:
      return sites == 2 ? MeasureSpec::schmidt_bounded(claim.order) : MeasureSpec::gme_bounded_rank(claim.order);
    case ClaimKind::GenuineSchmidtRankAtLeast: return MeasureSpec::gme_bounded_rank(claim.order);
    case ClaimKind::EntanglementDepthAtLeast: return MeasureSpec::producibility(claim.order);
  }
  throw std::logic_error("measure_for: unhandled claim");
}

/// Property certified by a positive bound for `measure` on N sites.
inline Claim claim_for(const MeasureSpec& measure, int sites) {
  const auto m = measure.resolved(sites);
  switch (m.kind) {
    case MeasureKind::GM: return {ClaimKind::CES, 0};
    case MeasureKind::GGM: return {ClaimKind::GES, 0};
    case MeasureKind::SchmidtBounded:
      return m.order == 2 ? Claim{ClaimKind::CES, 0} : Claim{ClaimKind::SchmidtRankAtLeast, m.order};
    case MeasureKind::GMEBoundedRank:
      return m.order == 2 ? Claim{ClaimKind::GES, 0} : Claim{ClaimKind::GenuineSchmidtRankAtLeast, m.order};
    case MeasureKind::Producibility: return {ClaimKind::EntanglementDepthAtLeast, m.order};
  }
  throw std::logic_error("claim_for: unhandled measure");
}

namespace detail {

inline void check_measure_values(std::span<const double> e) {
  for (double x : e)
    if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) throw std::invalid_argument("measure values must lie in [0, 1]");
}

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace detail

inline double superposition_lower_bound(std::span<const double> e, std::span<const cplx> alpha) {
  if (e.size() != alpha.size() || e.empty()) throw std::invalid_argument("superposition_lower_bound: size mismatch");
  detail::check_measure_values(e);
  double weight = 0.0;
  for (const auto& a : alpha) weight += std::norm(a);
  if (std::abs(weight - 1.0) > 1e-10) throw std::invalid_argument("superposition_lower_bound: coefficients are not normalized");
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) s += std::norm(alpha[i]) * detail::clamp01(e[i]);
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j)
      s -= 2.0 * std::abs(alpha[i] * alpha[j]) * std::sqrt(1.0 - detail::clamp01(e[i])) *
           std::sqrt(1.0 - detail::clamp01(e[j]));
  return s;
}

/// sum E_i - (k - 1)
inline double subspace_bound(std::span<const double> e) {
  detail::check_measure_values(e);
  double s = 0.0;
  for (double x : e) s += detail::clamp01(x);
  return s - static_cast<double>(e.size() - 1);
}

inline Rational subspace_bound_exact(std::span<const Rational> e) {
  Rational s = 0;
  for (const auto& x : e) {
    if (x < 0 || x > 1) throw std::invalid_argument("measure values must lie in [0, 1]");
    s += x;
  }
  return s - Rational(static_cast<long long>(e.size()) - 1);
}

/// Real weights a_i = sqrt(1-E_i) / sqrt(k - sum E) that minimize the
/// superposition bound, where it equals the subspace bound.
inline std::vector<double> optimal_superposition_weights(std::span<const double> e) {
  detail::check_measure_values(e);
  double rest = 0.0;
  for (double x : e) rest += 1.0 - detail::clamp01(x);
  if (!(rest > 0.0)) throw std::invalid_argument("optimal_superposition_weights: all values equal 1");
  std::vector<double> a;
  for (double x : e) a.push_back(std::sqrt(1.0 - detail::clamp01(x)) / std::sqrt(rest));
  return a;
}

struct CriterionReport {
  MeasureSpec measure;
  Claim claim;
  std::vector<double> values;
  std::vector<Method> methods;
  std::vector<bool> converged;
  std::vector<std::string> details;
  double bound = 0.0;
  std::optional<Rational> exact_bound;  ///< when every value is a closed form
  Verdict verdict = Verdict::NotDetected;
  /// False when some value came from the see-saw, which may over-estimate.
  bool certified = true;
  double tolerance = kDetectionTolerance;
  std::vector<std::string> notes;

  bool detected() const { return verdict == Verdict::Detected; }

  std::string verdict_label() const {
    if (!detected()) return "NotDetected";
    return certified ? "Detected (certified)" : "Detected (heuristic)";
  }
};

/// Builds a report from per-basis measure values.
inline CriterionReport assemble_report(const MeasureSpec& measure, const Claim& claim, std::vector<MeasureValue> values) {
  if (values.empty()) throw std::invalid_argument("assemble_report: no values");
  CriterionReport r;
  r.measure = measure;
  r.claim = claim;
  bool all_exact = true;
  std::vector<Rational> exact;
  for (auto& v : values) {
    r.values.push_back(v.value);
    r.methods.push_back(v.method);
    r.converged.push_back(v.converged);
    r.details.push_back(v.detail);
    if (v.method == Method::Seesaw) r.certified = false;
    if (v.exact) exact.push_back(*v.exact);
    else all_exact = false;
  }
  r.bound = subspace_bound(r.values);
  if (all_exact) {
    r.exact_bound = subspace_bound_exact(exact);
    r.bound = to_double(*r.exact_bound);
    r.verdict = *r.exact_bound > 0 ? Verdict::Detected : Verdict::NotDetected;
  } else {
    r.verdict = r.bound > r.tolerance ? Verdict::Detected : Verdict::NotDetected;
  }
  if (!r.certified)
    r.notes.push_back("some values come from the see-saw search, which can over-estimate a measure; verdict is heuristic");
  if (std::find(r.converged.begin(), r.converged.end(), false) != r.converged.end())
    r.notes.push_back("a see-saw search hit the iteration limit before converging");
  return r;
}

/// Evaluates the measure on every basis vector and applies the subspace
/// bound.
inline CriterionReport check_subspace(const Subspace& v, const MeasureSpec& measure, const OptimizerConfig& config = {}) {
  const int n = v.shape().sites();
  const auto resolved = measure.resolved(n);
  if (resolved.kind == MeasureKind::SchmidtBounded && n != 2)
    throw std::invalid_argument("check_subspace: " + resolved.name() + " needs a bipartite subspace");
  std::vector<MeasureValue> values;
  for (const auto& phi : v.basis()) values.push_back(evaluate(phi, resolved, config));
  return assemble_report(resolved, claim_for(resolved, n), std::move(values));
}

inline CriterionReport check_subspace(const Subspace& v, const Claim& claim, const OptimizerConfig& config = {}) {
  return check_subspace(v, measure_for(claim, v.shape().sites()), config);
}

// ---------------------------------------------------------------------------
// Schmidt-coefficient form

struct SchmidtSumResult {
  double sum = 0.0;                   ///< sum over basis vectors of the r-1 largest lambda^2
  std::vector<double> partial_sums;   ///< per basis vector
  bool detected = false;              ///< sum < 1 - tolerance
};

/// Bipartite restatement of the criterion for E_r: detected iff
/// sum_i (lambda_1^i^2 + ... + lambda_{r-1}^i^2) < 1.
inline SchmidtSumResult schmidt_sum_check(const Subspace& v, int r = 2) {
  if (v.shape().sites() != 2) throw std::invalid_argument("schmidt_sum_check: subspace is not bipartite");
  if (r < 2) throw std::invalid_argument("schmidt_sum_check: r must be >= 2");
  SchmidtSumResult out;
  for (const auto& phi : v.basis()) {
    const double s = schmidt_spectrum(phi, bipartite_cut()).top_weight(r - 1);
    out.partial_sums.push_back(s);
    out.sum += s;
  }
  out.detected = out.sum < 1.0 - kDetectionTolerance;
  return out;
}

// ---------------------------------------------------------------------------
// Mixed states

enum class MixedKind { Entanglement, Genuine };

struct MixedStateReport {
  double bound = 0.0;
  Verdict verdict = Verdict::NotDetected;
  MixedKind kind = MixedKind::Entanglement;
  std::size_t support = 0;  ///< eigenvectors with nonzero weight
  std::string note;
};

/// rho = sum p_i |psi_i><psi_i| with orthogonal psi_i and measure values E_i.
/// Only the support enters: the bound uses E_i for p_i > 0 and ignores the
/// weights themselves.
inline MixedStateReport mixed_state_check(std::span<const double> p, std::span<const double> e, MixedKind kind) {
  if (p.size() != e.size() || p.empty()) throw std::invalid_argument("mixed_state_check: size mismatch");
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw std::invalid_argument("mixed_state_check: negative probability");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("mixed_state_check: probabilities do not sum to 1");
  detail::check_measure_values(e);
  std::vector<double> support;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) support.push_back(e[i]);
  MixedStateReport r;
  r.kind = kind;
  r.support = support.size();
  r.bound = subspace_bound(support);
  r.verdict = r.bound > kDetectionTolerance ? Verdict::Detected : Verdict::NotDetected;
  r.note = "the verdict depends only on the support of the state; the probabilities do not enter the bound";
  if (r.verdict == Verdict::Detected)
    r.note += kind == MixedKind::Genuine ? "; the state is genuinely multipartite entangled" : "; the state is entangled";
  return r;
}

// ---------------------------------------------------------------------------
// Schmidt-rank bound for comparison

/// min_m { r_m - sum_{i<m} r_i } over Schmidt ranks sorted ascending. The
/// subspace has minimal Schmidt rank at least this value; values <= 1 are
/// uninformative.
inline int gour_roy_bound(std::vector<int> ranks) {
  if (ranks.empty()) throw std::invalid_argument("gour_roy_bound: empty rank list");
  for (int r : ranks)
    if (r < 1) throw std::invalid_argument("gour_roy_bound: ranks must be >= 1");
  std::sort(ranks.begin(), ranks.end());
  int best = ranks.front();
  int prefix = 0;
  for (int r : ranks) {
    best = std::min(best, r - prefix);
    prefix += r;
  }
  return best;
}

}  // namespace subent
