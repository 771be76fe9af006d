#pragma once

// End-to-end checks of the library's headline claims, shared by the
// acceptance test binary and `subspace-ent validate`. Each check returns a
// named pass/fail record; `quick` trims sample counts, not tolerances.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "subent/criterion.hpp"
#include "subent/experiments.hpp"
#include "subent/measures.hpp"
#include "subent/oracle.hpp"
#include "subent/random.hpp"
#include "subent/states.hpp"

namespace subent::validation {

struct Options {
  bool quick = false;
  /// Test-only negative control: inflates every soundness bound by 0.5.
  bool inject_fault = false;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Regression tables captured from independent computations; checks compare
/// against them when given.
struct Frozen {
  std::map<int, int> fig1_dims;                    ///< even N -> exact dimension
  std::map<std::pair<int, int>, int> fig3_dims;    ///< (N, d) -> max detected dimension
};

namespace detail {

inline std::string fmt(double x) { return format_double(x); }

template <class Body>
CheckResult timed(int id, std::string name, Body&& body) {
  CheckResult r;
  r.id = id;
  r.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::ostringstream detail;
    r.passed = body(detail);
    r.detail = detail.str();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline OptimizerConfig config_of(const Options& o, int restarts = 64) {
  OptimizerConfig c;
  c.seed = o.seed;
  c.threads = o.threads;
  c.restarts = restarts;
  return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 1-3, 12: measure values

inline CheckResult gm_values(const Options& o) {
  return detail::timed(1, "GM values of GHZ and W", [&](std::ostream& os) {
    double worst = 0.0;
    for (int n = 3; n <= 6; ++n) worst = std::max(worst, std::abs(gm_seesaw(states::ghz(n, 2), detail::config_of(o)).value - 0.5));
    const double w = gm_seesaw(states::w_state(3), detail::config_of(o)).value;
    const double werr = std::abs(w - 5.0 / 9.0);
    os << "max |E(GHZ_N) - 1/2| over N=3..6: " << detail::fmt(worst) << "; E(W_3) = " << detail::fmt(w);
    return worst <= 1e-7 && werr <= 1e-7;
  });
}

inline CheckResult dicke_closed_form(const Options& o) {
  return detail::timed(2, "qubit Dicke closed form vs see-saw", [&](std::ostream& os) {
    double worst = 0.0;
    int count = 0;
    for (int n = 2; n <= 6; ++n)
      for (int k = 0; k <= n; ++k) {
        const double s = gm_seesaw(states::dicke_qubit(n, k), detail::config_of(o)).value;
        worst = std::max(worst, std::abs(s - gm_dicke_qubit_closed(n, k)));
        ++count;
      }
    os << count << " states, max deviation " << detail::fmt(worst);
    return worst <= 1e-6;
  });
}

inline CheckResult qudit_dicke_ggm(const Options&) {
  return detail::timed(3, "qudit Dicke GGM formula vs SVD", [&](std::ostream& os) {
    double worst = 0.0;
    int count = 0;
    for (int d = 2; d <= 4; ++d)
      for (int n = 2; n <= 6; ++n)
        for (const auto& k : compositions(n, d)) {
          worst = std::max(worst, std::abs(ggm_dicke_qudit(k) - ggm(states::dicke_qudit(k))));
          ++count;
        }
    os << count << " compositions, max deviation " << detail::fmt(worst);
    return worst <= 1e-9;
  });
}

inline CheckResult ame_antisymmetric(const Options& o) {
  return detail::timed(12, "AME and antisymmetric constants", [&](std::ostream& os) {
    const std::vector<std::pair<int, int>> ame{{2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 2}, {4, 3}, {5, 2}, {6, 2}};
    double ame_err = 0.0;
    for (auto [n, d] : ame) ame_err = std::max(ame_err, std::abs(ggm(states::ame_state(n, d)) - (1.0 - 1.0 / d)));
    double ggm_err = 0.0, gm_err = 0.0;
    int vectors = 0;
    for (int n = 2; n <= 4; ++n)
      for (int d = n; d <= 5; ++d) {
        const double fact = to_double(Rational(factorial(n)));
        for (const auto& v : states::antisymmetric_basis(n, d)) {
          ggm_err = std::max(ggm_err, std::abs(ggm(v) - (1.0 - 1.0 / n)));
          gm_err = std::max(gm_err, std::abs(gm_seesaw(v, detail::config_of(o, 16)).value - (1.0 - 1.0 / fact)));
          ++vectors;
        }
      }
    os << "AME max err " << detail::fmt(ame_err) << "; " << vectors << " Slater determinants: GGM err "
       << detail::fmt(ggm_err) << ", GM err " << detail::fmt(gm_err);
    return ame_err <= 1e-10 && ggm_err <= 1e-10 && gm_err <= 1e-6;
  });
}

// ---------------------------------------------------------------------------
// 4: soundness

struct SoundCase {
  std::string name;
  Subspace space;
  MeasureSpec measure;
};

inline Subspace span_of(std::vector<PureState> v) { return Subspace(std::move(v)); }

/// Structured families plus Haar-random subspaces with k <= 3, d <= 4, N <= 4.
inline std::vector<SoundCase> soundness_cases(const Options& o) {
  std::vector<SoundCase> cases;
  auto add = [&](std::string name, const Subspace& v, std::initializer_list<MeasureSpec> specs) {
    for (const auto& s : specs) cases.push_back({name + " " + s.name(), v, s});
  };
  for (int d = 2; d <= 4; ++d)
    for (int k = 1; k <= d; ++k) {
      std::vector<PureState> b;
      for (int j = 0; j < k; ++j) b.push_back(states::bell_basis_vector(d, j));
      add("bell d=" + std::to_string(d) + " k=" + std::to_string(k), span_of(b),
          {MeasureSpec::schmidt_bounded(2), MeasureSpec::schmidt_bounded(3)});
    }
  for (int n = 3; n <= 4; ++n) {
    add("ghz+w N=" + std::to_string(n), span_of({states::ghz(n, 2), states::w_state(n)}), {MeasureSpec::gm(), MeasureSpec::ggm()});
    const auto g = states::ghz(n, 2), w = states::w_state(n);
    const double s = 1.0 / std::sqrt(2.0);
    const std::vector<PureState> gw{g, w};
    const cplx plus[] = {s, s}, minus[] = {s, -s};
    add("ghz+w rotated N=" + std::to_string(n), span_of({superpose(gw, plus), superpose(gw, minus)}),
        {MeasureSpec::gm(), MeasureSpec::ggm()});
    for (int m = 1; 2 * m <= n; ++m) {
      std::vector<PureState> b;
      for (int k = m; k <= n - m; ++k) b.push_back(states::dicke_qubit(n, k));
      add("dicke N=" + std::to_string(n) + " m=" + std::to_string(m), span_of(b), {MeasureSpec::gm(), MeasureSpec::ggm()});
    }
  }
  for (int d = 3; d <= 4; ++d) {
    auto basis = states::antisymmetric_basis(3, d);
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, basis.size()); ++k)
      add("antisym N=3 d=" + std::to_string(d) + " k=" + std::to_string(k),
          span_of({basis.begin(), basis.begin() + static_cast<std::ptrdiff_t>(k)}), {MeasureSpec::gm(), MeasureSpec::ggm()});
  }
  add("upb complement", states::upb_complement_3qubit(), {MeasureSpec::gm(), MeasureSpec::ggm()});
  {
    std::vector<PureState> shifted;
    for (int j = 0; j < 3; ++j) shifted.push_back(states::ghz_shifted(3, 3, j));
    for (std::size_t k = 1; k <= 3; ++k)
      add("ghz shifted N=3 d=3 k=" + std::to_string(k), span_of({shifted.begin(), shifted.begin() + static_cast<std::ptrdiff_t>(k)}),
          {MeasureSpec::gm(), MeasureSpec::ggm(), MeasureSpec::gme_bounded_rank(3)});
  }
  {
    std::vector<PureState> dk;
    for (const Composition& k : {Composition{1, 1, 1}, Composition{2, 1, 0}, Composition{0, 1, 2}})
      dk.push_back(states::dicke_qudit(k));
    for (std::size_t k = 1; k <= 3; ++k)
      add("qudit dicke N=3 d=3 k=" + std::to_string(k), span_of({dk.begin(), dk.begin() + static_cast<std::ptrdiff_t>(k)}),
          {MeasureSpec::gm(), MeasureSpec::ggm()});
  }
  {
    const Amplitudes z{1.0, 0.0}, one{0.0, 1.0};
    add("product |0>(|0>,|1>)",
        span_of({PureState::product(std::vector<Amplitudes>{z, z}), PureState::product(std::vector<Amplitudes>{z, one})}),
        {MeasureSpec::schmidt_bounded(2)});
  }

  const std::vector<std::pair<int, int>> shapes{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {4, 2}, {3, 4}, {4, 3}};
  const int reps = o.quick ? 2 : 9;
  std::uint64_t stream = 1000;
  for (auto [n, d] : shapes)
    for (std::size_t k = 1; k <= 3; ++k)
      for (int rep = 0; rep < reps; ++rep) {
        auto rng = make_rng(o.seed, stream++);
        const auto v = random_subspace(SystemShape::uniform(n, d), k, rng);
        const std::string name = "haar N=" + std::to_string(n) + " d=" + std::to_string(d) + " k=" + std::to_string(k) +
                                 " #" + std::to_string(rep);
        if (n == 2) {
          if (d >= 3 && rep % 2 == 1) add(name, v, {MeasureSpec::schmidt_bounded(3)});
          else add(name, v, {MeasureSpec::schmidt_bounded(2)});
        } else {
          add(name, v, {rep % 2 == 0 ? MeasureSpec::gm() : MeasureSpec::ggm()});
        }
      }
  return cases;
}

inline CheckResult soundness(const Options& o) {
  return detail::timed(4, "criterion soundness against the oracles", [&](std::ostream& os) {
    const auto cases = soundness_cases(o);
    std::set<std::string> subspaces;
    int violations = 0;
    std::string first;
    double worst_margin = -1e300;
    GridOptions grid;
    grid.resolution = 64;
    for (const auto& c : cases) {
      subspaces.insert(c.name.substr(0, c.name.rfind(' ')));
      std::vector<double> e;
      for (const auto& phi : c.space.basis()) e.push_back(evaluate(phi, c.measure, detail::config_of(o)).value);
      double bound = subspace_bound(e);
      if (o.inject_fault) bound += 0.5;
      double oracle = min_subspace_entanglement(c.space, c.measure, detail::config_of(o)).min_value;
      if (c.space.dimension() == 2)
        oracle = std::min(oracle, min_entanglement_grid_2d(c.space, c.measure, detail::config_of(o, 2), grid).min_value);
      worst_margin = std::max(worst_margin, bound - oracle);
      if (bound > oracle + 1e-6) {
        if (!violations) first = c.name + " (bound " + detail::fmt(bound) + " > oracle " + detail::fmt(oracle) + ")";
        ++violations;
      }
    }
    os << subspaces.size() << " subspaces, " << cases.size() << " (subspace, measure) cases, " << violations
       << " violations; max bound - oracle = " << detail::fmt(worst_margin);
    if (violations) os << "; first: " << first;
    return violations == 0 && (o.quick || subspaces.size() >= 200);
  });
}

// ---------------------------------------------------------------------------
// 5: superposition bound

inline CheckResult superposition(const Options& o) {
  return detail::timed(5, "superposition bound and its optimal weights", [&](std::ostream& os) {
    const std::vector<PureState> basis{states::ghz(3, 2), states::w_state(3)};
    const std::vector<double> e{0.5, 5.0 / 9.0};
    const int samples = o.quick ? 1000 : 10000;
    auto rng = make_rng(o.seed, 77);
    auto cfg = detail::config_of(o, 8);
    cfg.threads = 1;
    std::vector<double> margin(static_cast<std::size_t>(samples));
    std::vector<Amplitudes> alphas;
    for (int i = 0; i < samples; ++i) alphas.push_back(random_unit_vector(2, rng));
    parallel_for(alphas.size(), o.threads, [&](std::size_t i) {
      const double lb = superposition_lower_bound(e, alphas[i]);
      margin[i] = lb - gm_seesaw(superpose(basis, alphas[i]), cfg).value;
    });
    const double worst = *std::max_element(margin.begin(), margin.end());
    // Optimal weights turn the superposition bound into the subspace bound.
    double eq_err = 0.0;
    auto erng = make_rng(o.seed, 78);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
      std::vector<double> ev(2 + t % 3);
      for (auto& x : ev) x = u(erng);
      const auto a = optimal_superposition_weights(ev);
      const Amplitudes alpha(a.begin(), a.end());
      eq_err = std::max(eq_err, std::abs(superposition_lower_bound(ev, alpha) - subspace_bound(ev)));
    }
    {
      const auto a = optimal_superposition_weights(e);
      const Amplitudes alpha(a.begin(), a.end());
      eq_err = std::max(eq_err, std::abs(superposition_lower_bound(e, alpha) - subspace_bound(e)));
    }
    os << samples << " coefficient vectors, max (bound - GM) = " << detail::fmt(worst)
       << "; optimal-weight equality error " << detail::fmt(eq_err);
    return worst <= 1e-5 && eq_err <= 1e-10;
  });
}

// ---------------------------------------------------------------------------
// 6: Bell spans

inline CheckResult bell_spans(const Options& o) {
  return detail::timed(6, "Bell-span tightness", [&](std::ostream& os) {
    bool ok = true;
    int spans = 0;
    double worst_full = 0.0;
    for (int d = 2; d <= 6; ++d) {
      std::vector<PureState> b;
      for (int k = 1; k <= d; ++k) {
        b.push_back(states::bell_basis_vector(d, k - 1));
        const Subspace v(b);
        const auto r = check_subspace(v, Claim{ClaimKind::CES, 0}, detail::config_of(o));
        ++spans;
        if (k < d) {
          const bool exact = r.exact_bound && *r.exact_bound == Rational(d - k, d);
          if (!r.detected() || !r.certified || !exact) {
            ok = false;
            os << "d=" << d << " k=" << k << " unexpected report; ";
          }
        } else {
          const auto oracle = min_subspace_entanglement(v, MeasureSpec::gm(), detail::config_of(o));
          worst_full = std::max(worst_full, oracle.min_value);
          if (r.detected() || oracle.min_value >= 1e-6) {
            ok = false;
            os << "d=" << d << " full span not rejected; ";
          }
        }
      }
    }
    os << spans << " spans, bounds equal 1 - k/d exactly; full spans: max oracle GM " << detail::fmt(worst_full);
    return ok;
  });
}

// ---------------------------------------------------------------------------
// 7: GHZ + W

inline CheckResult ghz_w(const Options& o) {
  return detail::timed(7, "GHZ + W family", [&](std::ostream& os) {
    const auto family = ghz_w_family(3, 10000, 200);
    bool positive = std::all_of(family.begin(), family.end(), [](const GhzWPoint& p) { return p.positive; });
    bool matches = true;
    for (int n = 3; n <= 60; ++n) {
      const Rational e[] = {gm_ghz_closed_exact(2), gm_dicke_qubit_closed_exact(n, 1)};
      matches = matches && subspace_bound_exact(e) == ghz_w_bound_exact(n);
    }
    const bool n3 = ghz_w_bound_exact(3) == Rational(1, 18);
    const Subspace v({states::ghz(3, 2), states::w_state(3)});
    GridOptions grid;
    if (o.quick) grid.resolution = 64;
    const auto g = min_entanglement_grid_2d(v, MeasureSpec::gm(), detail::config_of(o), grid);
    os << "positive for N=3..10000: " << (positive ? "yes" : "no") << "; limit value at N=10000 "
       << detail::fmt(family.back().bound) << "; grid minimum at N=3 " << detail::fmt(g.min_value) << " (bound 1/18)";
    return positive && matches && n3 && g.min_value >= 1.0 / 18.0 - 1e-4;
  });
}

// ---------------------------------------------------------------------------
// 8-10: figure sweeps

inline CheckResult fig1(const Options& o, const Frozen* frozen = nullptr) {
  return detail::timed(8, "qubit Dicke CES thresholds", [&](std::ostream& os) {
    bool ok = true;
    int float_mismatch = 0, dominance = 0, frozen_mismatch = 0;
    const int n_max = 400;
    std::vector<int> ns;
    for (int n = 4; n <= n_max; n += 2) ns.push_back(n);
    std::vector<DickeThreshold> exact(ns.size());
    parallel_for(ns.size(), o.threads, [&](std::size_t i) { exact[i] = dicke_ces_threshold_exact(ns[i]); });
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (dicke_ces_threshold_float(ns[i]) != exact[i].m_star) ++float_mismatch;
      if (dicke_ces_threshold_analytic(ns[i]).dim > exact[i].dim) ++dominance;
      if (frozen) {
        const auto it = frozen->fig1_dims.find(ns[i]);
        if (it != frozen->fig1_dims.end() && it->second != exact[i].dim) ++frozen_mismatch;
      }
    }
    ok = ok && float_mismatch == 0 && dominance == 0 && frozen_mismatch == 0;
    ok = ok && exact.front().m_star == 2 && exact.front().dim == 1;
    std::vector<int> fit_ns;
    for (int n = 100; n <= 2000; n += o.quick ? 100 : 50) fit_ns.push_back(n);
    const auto sc = dicke_dimension_scaling(fit_ns, o.threads);
    ok = ok && sc.relative_deviation < 0.10 && std::abs(sc.loglog_fit.slope - 0.5) <= 0.05;
    os << ns.size() << " even N <= " << n_max << ": float/exact disagreements " << float_mismatch
       << ", analytic > exact at " << dominance << " N";
    if (frozen) os << ", frozen mismatches " << frozen_mismatch;
    os << "; fit over N=100..2000: slope " << detail::fmt(sc.sqrt_fit.slope) << " vs pi/e "
       << detail::fmt(sc.reference_slope) << " (" << detail::fmt(100 * sc.relative_deviation) << "%), exponent "
       << detail::fmt(sc.loglog_fit.slope);
    return ok;
  });
}

inline CheckResult fig2(const Options&) {
  return detail::timed(9, "antisymmetric detection region", [&](std::ostream& os) {
    const auto r = antisym_detection_region(50);
    const bool examples = binomial(3, 3) < factorial(3) && !(binomial(4, 2) < factorial(2));
    os << r.points.size() << " points; black line respected: " << (r.black_line_ok ? "yes" : "no")
       << "; detected points under the orange curve: " << r.orange_detected_below.size()
       << "; undetected points above it: " << r.orange_undetected_above.size();
    std::size_t plus_below = 0, plus_above = 0;
    for (const auto& p : r.points) {
      if (p.d < 3) continue;
      const double c = std::sqrt(2.0 * p.d + 2.0) + std::sqrt(p.d - 3.0) - 1.0;
      if (p.detected && p.n < c) ++plus_below;
      if (!p.detected && p.n > c) ++plus_above;
    }
    os << " (with +sqrt(d-3): " << plus_below << " detected below, " << plus_above << " undetected above)";
    return examples && r.black_line_ok && r.orange_detected_below.size() <= 10;
  });
}

inline CheckResult fig3(const Options& o, const Frozen* frozen = nullptr) {
  return detail::timed(10, "qudit Dicke GES dimensions", [&](std::ostream& os) {
    std::vector<std::pair<int, int>> grid;
    for (int n = kGesMinSites; n <= kGesMaxSites; ++n)
      for (int d = kGesMinLevels; d <= kGesMaxLevels; ++d) grid.emplace_back(n, d);
    std::vector<int> dims(grid.size());
    parallel_for(grid.size(), o.threads,
                 [&](std::size_t i) { dims[i] = qudit_dicke_ges_search(grid[i].first, grid[i].second).max_dim; });
    int below = 0, frozen_mismatch = 0, non_monotone = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto [n, d] = grid[i];
      if (d > n && dims[i] < n - 1) ++below;
      if (i > 0 && grid[i - 1].first == n && dims[i] < dims[i - 1]) ++non_monotone;
      if (frozen) {
        const auto it = frozen->fig3_dims.find({n, d});
        if (it != frozen->fig3_dims.end() && it->second != dims[i]) ++frozen_mismatch;
      }
    }
    os << grid.size() << " grid points; d > N below N-1: " << below << "; non-monotone in d (report only): " << non_monotone;
    if (frozen) os << "; frozen mismatches " << frozen_mismatch;
    return below == 0 && frozen_mismatch == 0;
  });
}

// ---------------------------------------------------------------------------
// 11: comparison with the Schmidt-rank bound

inline CheckResult counterexample_duality(const Options& o) {
  return detail::timed(11, "Schmidt-rank bound vs criterion", [&](std::ostream& os) {
    const auto shape = SystemShape::uniform(2, 4);
    Amplitudes a1(16), a2(16);
    a1[2 * 4 + 2] = 1.0 / std::sqrt(2.0);
    a1[3 * 4 + 3] = -1.0 / std::sqrt(2.0);
    a2[0] = 2.0 / std::sqrt(7.0);
    for (int i = 1; i < 4; ++i) a2[static_cast<std::size_t>(i * 4 + i)] = 1.0 / std::sqrt(7.0);
    const Subspace pair({PureState(shape, a1), PureState::normalized(shape, a2)});
    std::vector<int> ranks;
    for (const auto& v : pair.basis()) ranks.push_back(schmidt_spectrum(v, bipartite_cut()).rank());
    const int gr = gour_roy_bound(ranks);
    const auto fact3 = check_subspace(pair, Claim{ClaimKind::CES, 0}, detail::config_of(o));

    const Subspace bell({states::bell_basis_vector(3, 0), states::bell_basis_vector(3, 1)});
    std::vector<int> bell_ranks;
    for (const auto& v : bell.basis()) bell_ranks.push_back(schmidt_spectrum(v, bipartite_cut()).rank());
    const int gr_bell = gour_roy_bound(bell_ranks);
    const auto fact3_bell = check_subspace(bell, Claim{ClaimKind::CES, 0}, detail::config_of(o));

    os << "ranks (" << ranks[0] << "," << ranks[1] << "): rank bound " << gr << ", criterion bound "
       << detail::fmt(fact3.bound) << "; Bell pair d=3: rank bound " << gr_bell << ", criterion bound "
       << detail::fmt(fact3_bell.bound);
    return gr >= 2 && fact3.bound <= 0 && !fact3.detected() && gr_bell == 0 && fact3_bell.detected();
  });
}

// ---------------------------------------------------------------------------

inline std::vector<CheckResult> run_all(const Options& o, const Frozen* frozen = nullptr) {
  std::vector<CheckResult> out;
  out.push_back(gm_values(o));
  out.push_back(dicke_closed_form(o));
  out.push_back(qudit_dicke_ggm(o));
  out.push_back(soundness(o));
  out.push_back(superposition(o));
  out.push_back(bell_spans(o));
  out.push_back(ghz_w(o));
  out.push_back(fig1(o, frozen));
  out.push_back(fig2(o));
  out.push_back(fig3(o, frozen));
  out.push_back(counterexample_duality(o));
  out.push_back(ame_antisymmetric(o));
  return out;
}

}  // namespace subent::validation
