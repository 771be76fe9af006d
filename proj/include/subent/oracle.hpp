#pragma once

// Brute-force minimal subspace entanglement, used to validate criterion
// bounds. Two independent routes:
//
//   projector see-saw   E_min(V) = 1 - max_{phi in S} <phi|P_V|phi>, with the
//                       maximization done by the see-saw over S
//   2-D grid            for k = 2, scan psi = cos(t) v_1 + e^{ip} sin(t) v_2
//                       and evaluate the measure at every point
//
// Both can only miss the optimum, so both report upper bounds on E_min.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "subent/measures.hpp"
#include "subent/parallel.hpp"
#include "subent/seesaw.hpp"
#include "subent/tensor.hpp"

namespace subent {

/// Largest total dimension the oracles accept.
inline constexpr std::size_t kMaxOracleDim = std::size_t{1} << 20;

enum class OracleMethod { ProjectorSeesaw, Grid2d, Hybrid };

inline std::string to_string(OracleMethod m) {
  switch (m) {
    case OracleMethod::ProjectorSeesaw: return "projector-seesaw";
    case OracleMethod::Grid2d: return "grid-2d";
    case OracleMethod::Hybrid: return "hybrid";
  }
  return "?";
}

struct OracleResult {
  double min_value = 1.0;
  Amplitudes coefficients;  ///< argmin in the subspace basis, normalized
  Amplitudes state;         ///< sum_a c_a v_a
  OracleMethod method = OracleMethod::ProjectorSeesaw;
  int restarts = 0;
  bool converged = true;
  MeasureSpec measure;
  std::string detail;               ///< cut or partition of the best overlap
  Amplitudes certificate;           ///< the maximizing phi from S (see-saw route)
  std::vector<Amplitudes> factors;  ///< its block factors, when block-product
  std::optional<Bipartition> cut;   ///< cut of the certificate, for rank searches
};

namespace detail {

inline void check_oracle_input(const Subspace& v) {
  if (v.shape().total_dim() > kMaxOracleDim)
    throw std::invalid_argument("oracle: total dimension " + std::to_string(v.shape().total_dim()) +
                                " exceeds the cap " + std::to_string(kMaxOracleDim));
}

/// Fills coefficients and state from the certificate phi: c_a = <v_a|phi>,
/// normalized.
inline void project_certificate(const Subspace& v, OracleResult& out) {
  out.coefficients.assign(v.dimension(), 0.0);
  double w = 0.0;
  for (std::size_t a = 0; a < v.dimension(); ++a) {
    out.coefficients[a] = dot(v[a].amplitudes(), out.certificate);
    w += std::norm(out.coefficients[a]);
  }
  if (w <= 0.0) {
    out.coefficients.assign(v.dimension(), 0.0);
    out.coefficients[0] = 1.0;
    w = 1.0;
  }
  const double s = 1.0 / std::sqrt(w);
  for (auto& c : out.coefficients) c *= s;
  out.state.assign(v.shape().total_dim(), 0.0);
  for (std::size_t a = 0; a < v.dimension(); ++a)
    for (std::size_t i = 0; i < out.state.size(); ++i) out.state[i] += out.coefficients[a] * v[a][i];
}

}  // namespace detail

/// Projector see-saw oracle. `warm`, when given, must come from the same
/// measure on a subspace contained in V; its certificate then seeds the
/// search, so the result can only improve on it.
inline OracleResult min_subspace_entanglement(const Subspace& v, const MeasureSpec& raw_spec,
                                              const OptimizerConfig& config = {},
                                              const OracleResult* warm = nullptr) {
  detail::check_oracle_input(v);
  const int n = v.shape().sites();
  const auto spec = raw_spec.resolved(n);
  TargetList targets;
  for (const auto& b : v.basis()) targets.push_back(b.amplitudes());
  OracleResult out;
  out.method = OracleMethod::ProjectorSeesaw;
  out.measure = spec;
  out.restarts = config.restarts;
  double best = -1.0;

  auto take_block = [&](OverlapResult r, const SetPartition& blocks) {
    if (r.overlap > best) {
      best = r.overlap;
      out.certificate = std::move(r.state);
      out.factors = std::move(r.factors);
      out.converged = r.converged;
      out.cut.reset();
      std::string text;
      for (const auto& b : blocks) {
        text += "{";
        for (std::size_t i = 0; i < b.size(); ++i) text += (i ? "," : "") + std::to_string(b[i] + 1);
        text += "}";
      }
      out.detail = text;
    }
  };
  auto take_cut = [&](OverlapResult r, const Bipartition& cut) {
    if (r.overlap > best) {
      best = r.overlap;
      out.certificate = std::move(r.state);
      out.factors.clear();
      out.converged = r.converged;
      out.cut = cut;
      out.detail = cut.to_string();
    }
  };

  switch (spec.kind) {
    case MeasureKind::GM: {
      if (n == 1) {
        out.min_value = 0.0;
        out.certificate.assign(v[0].amplitudes().begin(), v[0].amplitudes().end());
        detail::project_certificate(v, out);
        return out;
      }
      const auto layout = BlockLayout::fully_product(v.shape());
      std::vector<std::vector<Amplitudes>> starts;
      if (warm && warm->factors.size() == static_cast<std::size_t>(n)) starts.push_back(warm->factors);
      take_block(maximize_product_overlap(targets, layout, config, starts), layout.blocks());
      break;
    }
    case MeasureKind::Producibility: {
      if (n > kMaxProducibilitySites) throw std::invalid_argument("oracle: too many sites to enumerate partitions");
      for (const auto& partition : set_partitions(n, spec.order - 1, true)) {
        const BlockLayout layout(v.shape(), partition);
        take_block(maximize_product_overlap(targets, layout, config), layout.blocks());
      }
      break;
    }
    case MeasureKind::SchmidtBounded:
    case MeasureKind::GGM:
    case MeasureKind::GMEBoundedRank: {
      if (spec.kind == MeasureKind::SchmidtBounded && n != 2)
        throw std::invalid_argument("oracle: " + spec.name() + " needs a bipartite subspace");
      if (n < 2) throw std::invalid_argument("oracle: " + spec.name() + " needs at least two sites");
      const int rank = spec.kind == MeasureKind::GGM ? 1 : spec.order - 1;
      for (const auto& cut : enumerate_bipartitions(v.shape())) {
        std::vector<Amplitudes> starts;
        if (warm && warm->cut && *warm->cut == cut && warm->certificate.size() == v.shape().total_dim())
          starts.push_back(warm->certificate);
        take_cut(maximize_bounded_rank_overlap(targets, v.shape(), cut, rank, config, starts), cut);
      }
      break;
    }
  }
  out.min_value = std::clamp(1.0 - best, 0.0, 1.0);
  detail::project_certificate(v, out);
  return out;
}

struct GridOptions {
  int resolution = 256;
  int refine_cells = 2;   ///< half-width of the refinement window, in coarse cells
  int refine_factor = 10; ///< zoom of the refinement pass
  int seesaw_restarts = 2;  ///< random restarts per point when GM needs the see-saw
};

/// Direct 2-D scan of psi(t, p) = cos(t) v_1 + e^{ip} sin(t) v_2 over
/// [0, pi/2] x [0, 2 pi), followed by one refinement pass around the best
/// point. Ties go to the lowest grid index.
inline OracleResult min_entanglement_grid_2d(const Subspace& v, const MeasureSpec& raw_spec,
                                             const OptimizerConfig& config = {}, GridOptions grid = {}) {
  detail::check_oracle_input(v);
  if (v.dimension() != 2) throw std::invalid_argument("grid oracle: subspace dimension must be 2");
  if (grid.resolution < 64) throw std::invalid_argument("grid oracle: resolution must be >= 64");
  if (grid.refine_cells < 0 || grid.refine_factor < 1 || grid.seesaw_restarts < 0)
    throw std::invalid_argument("grid oracle: invalid refinement options");
  const int n = v.shape().sites();
  const auto spec = raw_spec.resolved(n);
  const bool needs_seesaw = spec.kind == MeasureKind::GM && n >= 3;
  OptimizerConfig point_config = config;
  point_config.threads = 1;
  point_config.record_trace = false;
  point_config.restarts = std::max(1, grid.seesaw_restarts);

  const auto& a = v[0].amplitudes();
  const auto& b = v[1].amplitudes();
  auto make = [&](double t, double p) {
    const cplx ca = std::cos(t), cb = std::polar(std::sin(t), p);
    Amplitudes x(a.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = ca * a[i] + cb * b[i];
    return PureState::normalized(v.shape(), std::move(x));
  };

  struct Point {
    double value = 2.0;
    double t = 0.0, p = 0.0;
    bool converged = true;
    std::vector<Amplitudes> factors;
  };
  // Evaluates one row of points; GM see-saw runs warm-start from the
  // previous point of the same row.
  auto eval_row = [&](double t, std::span<const double> ps, std::vector<Point>& row,
                      const std::vector<Amplitudes>* seed) {
    row.assign(ps.size(), Point{});
    std::vector<Amplitudes> last = seed ? *seed : std::vector<Amplitudes>{};
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const auto psi = make(t, ps[j]);
      Point& pt = row[j];
      pt.t = t;
      pt.p = ps[j];
      if (needs_seesaw) {
        std::vector<std::vector<Amplitudes>> starts;
        if (!last.empty()) starts.push_back(last);
        auto r = gm_seesaw(psi, point_config, starts);
        pt.value = r.value;
        pt.converged = r.converged;
        pt.factors = r.factors;
        last = std::move(r.factors);
      } else {
        pt.value = evaluate(psi, spec, point_config).value;
      }
    }
  };

  const int res = grid.resolution;
  const double dt = (std::numbers::pi / 2) / (res - 1);
  const double dp = 2 * std::numbers::pi / res;
  std::vector<double> ps(static_cast<std::size_t>(res));
  for (int j = 0; j < res; ++j) ps[static_cast<std::size_t>(j)] = dp * j;

  std::vector<std::vector<Point>> rows(static_cast<std::size_t>(res));
  parallel_for(rows.size(), config.threads,
               [&](std::size_t i) { eval_row(dt * static_cast<double>(i), ps, rows[i], nullptr); });

  bool all_converged = true;
  const Point* best = &rows[0][0];
  for (const auto& row : rows)
    for (const auto& pt : row) {
      all_converged = all_converged && pt.converged;
      if (pt.value < best->value) best = &pt;
    }
  Point winner = *best;

  if (grid.refine_cells > 0) {
    const int m = 2 * grid.refine_cells * grid.refine_factor + 1;
    const double fine_t = dt / grid.refine_factor, fine_p = dp / grid.refine_factor;
    const double t0 = winner.t - grid.refine_cells * dt, p0 = winner.p - grid.refine_cells * dp;
    std::vector<double> fine_ps(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) fine_ps[static_cast<std::size_t>(j)] = p0 + fine_p * j;
    std::vector<std::vector<Point>> fine(static_cast<std::size_t>(m));
    const std::vector<Amplitudes>* seed = winner.factors.empty() ? nullptr : &winner.factors;
    parallel_for(fine.size(), config.threads, [&](std::size_t i) {
      const double t = std::clamp(t0 + fine_t * static_cast<double>(i), 0.0, std::numbers::pi / 2);
      eval_row(t, fine_ps, fine[i], seed);
    });
    for (const auto& row : fine)
      for (const auto& pt : row) {
        all_converged = all_converged && pt.converged;
        if (pt.value < winner.value) winner = pt;
      }
  }

  OracleResult out;
  out.method = OracleMethod::Grid2d;
  out.measure = spec;
  out.min_value = std::clamp(winner.value, 0.0, 1.0);
  out.restarts = needs_seesaw ? point_config.restarts : 0;
  out.converged = all_converged;
  out.coefficients = {std::cos(winner.t), std::polar(std::sin(winner.t), winner.p)};
  const auto psi = make(winner.t, winner.p);
  out.state.assign(psi.amplitudes().begin(), psi.amplitudes().end());
  out.detail = "t=" + std::to_string(winner.t) + " p=" + std::to_string(winner.p);
  return out;
}

/// Smaller of the two routes for k = 2, the see-saw alone otherwise.
inline OracleResult min_subspace_entanglement_hybrid(const Subspace& v, const MeasureSpec& spec,
                                                     const OptimizerConfig& config = {}, GridOptions grid = {}) {
  auto s = min_subspace_entanglement(v, spec, config);
  if (v.dimension() != 2) return s;
  auto g = min_entanglement_grid_2d(v, spec, config, grid);
  OracleResult& best = g.min_value < s.min_value ? g : s;
  best.method = OracleMethod::Hybrid;
  return std::move(best);
}

}  // namespace subent
