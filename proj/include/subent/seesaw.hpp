#pragma once

// Alternating ("see-saw") maximization of sum_a |<phi|v_a>|^2 over
// structured states phi, for one or more orthonormal targets v_a. With a
// single target this is the squared overlap; with a basis of V it is
// <phi|P_V|phi>.
//
// Two families of phi are supported:
//   * block-product states phi = phi_1 (x) ... (x) phi_B over a partition of
//     the sites. Updating block j with the others fixed maximizes a
//     Hermitian form whose dominant eigenvector is the new phi_j.
//   * states of Schmidt rank <= q across one cut. With the left (or right)
//     support frame fixed, the optimum is again a dominant eigenvector; the
//     frames alternate.
//
// Every update can only increase the objective, so each restart produces a
// non-decreasing sequence of overlaps.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "subent/combinatorics.hpp"
#include "subent/parallel.hpp"
#include "subent/random.hpp"
#include "subent/tensor.hpp"

namespace subent {

struct OptimizerConfig {
  int restarts = 64;
  int max_iters = 500;
  double tol = 1e-11;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  /// Keep the per-update objective sequence of every restart.
  bool record_trace = false;

  void validate() const {
    if (restarts < 1) throw std::invalid_argument("OptimizerConfig: restarts must be >= 1");
    if (max_iters < 1) throw std::invalid_argument("OptimizerConfig: max_iters must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("OptimizerConfig: tol must be > 0");
  }
};

struct OverlapResult {
  double overlap = 0.0;             ///< best sum_a |<phi|v_a>|^2 found
  Amplitudes state;                 ///< the maximizing phi, normalized
  std::vector<Amplitudes> factors;  ///< block factors (block-product searches only)
  bool converged = false;           ///< whether the best restart converged
  int iterations = 0;               ///< sweeps used by the best restart
  std::size_t best_restart = 0;
  std::vector<std::vector<double>> traces;
};

// ---------------------------------------------------------------------------
// Block layouts

class BlockLayout {
 public:
  BlockLayout(SystemShape shape, SetPartition blocks) : shape_(std::move(shape)), blocks_(std::move(blocks)) {
    std::vector<int> seen(static_cast<std::size_t>(shape_.sites()), 0);
    for (auto& b : blocks_) {
      if (b.empty()) throw std::invalid_argument("BlockLayout: empty block");
      std::sort(b.begin(), b.end());
      for (int s : b) {
        if (s < 0 || s >= shape_.sites()) throw std::out_of_range("BlockLayout: site out of range");
        if (seen[static_cast<std::size_t>(s)]++) throw std::invalid_argument("BlockLayout: site in two blocks");
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
      throw std::invalid_argument("BlockLayout: blocks must cover every site");

    const std::size_t n = shape_.total_dim();
    dims_.assign(blocks_.size(), 1);
    index_.assign(blocks_.size(), std::vector<std::uint32_t>(n));
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (int s : blocks_[b]) dims_[b] *= static_cast<std::size_t>(shape_.dim(s));
    for (std::size_t flat = 0; flat < n; ++flat) {
      const auto digits = shape_.digits(flat);
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        std::size_t local = 0;
        for (int s : blocks_[b])
          local = local * static_cast<std::size_t>(shape_.dim(s)) + static_cast<std::size_t>(digits[static_cast<std::size_t>(s)]);
        index_[b][flat] = static_cast<std::uint32_t>(local);
      }
    }
  }

  static BlockLayout fully_product(const SystemShape& shape) {
    SetPartition blocks;
    for (int s = 0; s < shape.sites(); ++s) blocks.push_back({s});
    return BlockLayout(shape, std::move(blocks));
  }

  static BlockLayout from_cut(const SystemShape& shape, const Bipartition& cut) {
    return BlockLayout(shape, SetPartition{{cut.left().begin(), cut.left().end()}, {cut.right().begin(), cut.right().end()}});
  }

  const SystemShape& shape() const { return shape_; }
  const SetPartition& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t block_dim(std::size_t b) const { return dims_[b]; }
  std::uint32_t local_index(std::size_t b, std::size_t flat) const { return index_[b][flat]; }

  /// Product state with the given block factors, in original site order.
  Amplitudes assemble(std::span<const Amplitudes> factors) const {
    Amplitudes out(shape_.total_dim());
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
      cplx v = 1.0;
      for (std::size_t b = 0; b < blocks_.size(); ++b) v *= factors[b][index_[b][flat]];
      out[flat] = v;
    }
    return out;
  }

 private:
  SystemShape shape_;
  SetPartition blocks_;
  std::vector<std::size_t> dims_;
  std::vector<std::vector<std::uint32_t>> index_;
};

namespace detail {

struct Dominant {
  double value = 0.0;
  Eigen::VectorXcd vector;
};

/// Dominant eigenpair of W W^dagger for the columns w_a of W, via the
/// smaller of W W^dagger and W^dagger W.
inline Dominant dominant_of_columns(const Eigen::MatrixXcd& w) {
  Dominant out;
  if (w.cols() == 1) {
    const double n = w.col(0).norm();
    out.value = n * n;
    out.vector = n > 0 ? Eigen::VectorXcd(w.col(0) / n) : Eigen::VectorXcd::Unit(w.rows(), 0);
    return out;
  }
  if (w.cols() <= w.rows()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(w.adjoint() * w);
    const auto last = eig.eigenvalues().size() - 1;
    out.value = eig.eigenvalues()(last);
    Eigen::VectorXcd x = w * eig.eigenvectors().col(last);
    const double n = x.norm();
    out.vector = n > 0 ? Eigen::VectorXcd(x / n) : Eigen::VectorXcd::Unit(w.rows(), 0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(w * w.adjoint());
    const auto last = eig.eigenvalues().size() - 1;
    out.value = eig.eigenvalues()(last);
    out.vector = eig.eigenvectors().col(last);
  }
  out.value = std::max(0.0, out.value);
  return out;
}

inline double projector_overlap(std::span<const std::span<const cplx>> targets, std::span<const cplx> phi) {
  double s = 0.0;
  for (const auto& t : targets) s += std::norm(dot(phi, t));
  return s;
}

template <class Run>
OverlapResult best_of_restarts(std::size_t runs, int threads, Run&& run) {
  std::vector<OverlapResult> results(runs);
  parallel_for(runs, threads, [&](std::size_t r) { results[r] = run(r); });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs; ++r)
    if (results[r].overlap > results[best].overlap) best = r;
  std::vector<std::vector<double>> traces;
  for (auto& r : results)
    if (!r.traces.empty()) traces.push_back(std::move(r.traces.front()));
  OverlapResult out = std::move(results[best]);
  out.best_restart = best;
  out.traces = std::move(traces);
  return out;
}

}  // namespace detail

using TargetList = std::vector<std::span<const cplx>>;

inline TargetList targets_of(std::span<const PureState> states) {
  TargetList t;
  for (const auto& s : states) t.push_back(s.amplitudes());
  return t;
}

/// One see-saw run from the given starting factors.
inline OverlapResult seesaw_product_run(const TargetList& targets, const BlockLayout& layout,
                                        std::vector<Amplitudes> factors, const OptimizerConfig& config) {
  const std::size_t nblocks = layout.block_count();
  const std::size_t n = layout.shape().total_dim();
  const std::size_t k = targets.size();
  OverlapResult out;
  std::vector<double> trace;
  double current = detail::projector_overlap(targets, layout.assemble(factors));
  if (config.record_trace) trace.push_back(current);

  std::vector<cplx> weight(n);
  for (int sweep = 1; sweep <= config.max_iters; ++sweep) {
    const double before = current;
    for (std::size_t j = 0; j < nblocks; ++j) {
      // weight[flat] = prod_{b != j} conj(phi_b[local_b(flat)])
      for (std::size_t flat = 0; flat < n; ++flat) {
        cplx v = 1.0;
        for (std::size_t b = 0; b < nblocks; ++b)
          if (b != j) v *= std::conj(factors[b][layout.local_index(b, flat)]);
        weight[flat] = v;
      }
      Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(layout.block_dim(j)), static_cast<Eigen::Index>(k));
      for (std::size_t a = 0; a < k; ++a) {
        const auto& t = targets[a];
        for (std::size_t flat = 0; flat < n; ++flat)
          w(layout.local_index(j, flat), static_cast<Eigen::Index>(a)) += weight[flat] * t[flat];
      }
      const auto dom = detail::dominant_of_columns(w);
      // Keep the old factor if the eigen-solver offers no improvement.
      if (dom.value >= current) {
        factors[j].assign(dom.vector.data(), dom.vector.data() + dom.vector.size());
        current = dom.value;
      }
      if (config.record_trace) trace.push_back(current);
    }
    out.iterations = sweep;
    if (current - before < config.tol || current >= 1.0 - 1e-15) {
      out.converged = true;
      break;
    }
  }
  out.overlap = std::min(1.0, current);
  out.state = layout.assemble(factors);
  const double nrm = norm(out.state);
  for (auto& a : out.state) a /= nrm;
  out.factors = std::move(factors);
  if (config.record_trace) out.traces.push_back(std::move(trace));
  return out;
}

/// Maximizes sum_a |<phi|v_a>|^2 over block-product phi. Warm starts, if
/// given, are tried in addition to config.restarts random starts.
inline OverlapResult maximize_product_overlap(const TargetList& targets, const BlockLayout& layout,
                                              const OptimizerConfig& config,
                                              std::span<const std::vector<Amplitudes>> warm_starts = {}) {
  config.validate();
  if (targets.empty()) throw std::invalid_argument("maximize_product_overlap: no targets");
  for (const auto& t : targets)
    if (t.size() != layout.shape().total_dim()) throw std::invalid_argument("maximize_product_overlap: size mismatch");
  const std::size_t runs = warm_starts.size() + static_cast<std::size_t>(config.restarts);
  return detail::best_of_restarts(runs, config.threads, [&](std::size_t r) {
    std::vector<Amplitudes> start;
    if (r < warm_starts.size()) {
      start = warm_starts[r];
    } else {
      auto rng = make_rng(config.seed, r - warm_starts.size());
      for (std::size_t b = 0; b < layout.block_count(); ++b) start.push_back(random_unit_vector(layout.block_dim(b), rng));
    }
    return seesaw_product_run(targets, layout, std::move(start), config);
  });
}

// ---------------------------------------------------------------------------
// Bounded Schmidt rank across one cut

namespace detail {

/// Best unit X in span over {B_a}: maximizes sum_a |<X, B_a>|^2.
inline std::pair<double, Eigen::MatrixXcd> best_in_frame(const std::vector<Eigen::MatrixXcd>& b) {
  const auto k = static_cast<Eigen::Index>(b.size());
  const auto rows = b.front().rows(), cols = b.front().cols();
  Eigen::MatrixXcd stacked(rows * cols, k);
  for (Eigen::Index a = 0; a < k; ++a)
    stacked.col(a) = Eigen::Map<const Eigen::VectorXcd>(b[static_cast<std::size_t>(a)].data(), rows * cols);
  const auto dom = dominant_of_columns(stacked);
  Eigen::MatrixXcd x = Eigen::Map<const Eigen::MatrixXcd>(dom.vector.data(), rows, cols);
  return {dom.value, x};
}

inline Eigen::MatrixXcd random_frame(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXcd g(rows, cols);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = cplx(dist(rng), dist(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
}

}  // namespace detail

/// Maximizes sum_a |<phi|v_a>|^2 over phi of Schmidt rank <= max_rank across
/// `cut`. For max_rank = 1 this is the two-block product search. A warm
/// state seeds the left frame with its leading left singular vectors.
inline OverlapResult maximize_bounded_rank_overlap(const TargetList& targets, const SystemShape& shape,
                                                   const Bipartition& cut, int max_rank,
                                                   const OptimizerConfig& config,
                                                   std::span<const Amplitudes> warm_states = {}) {
  config.validate();
  if (targets.empty()) throw std::invalid_argument("maximize_bounded_rank_overlap: no targets");
  if (max_rank < 1) throw std::invalid_argument("maximize_bounded_rank_overlap: rank must be >= 1");
  const auto dims = cut_dims(shape, cut);
  std::vector<Eigen::MatrixXcd> mats;
  for (const auto& t : targets) mats.push_back(coefficient_matrix(t, shape, cut));
  const auto q = static_cast<Eigen::Index>(max_rank);

  if (static_cast<std::size_t>(max_rank) >= std::min(dims.left, dims.right)) {
    // Every state qualifies; the first target itself attains overlap 1.
    OverlapResult out;
    out.overlap = 1.0;
    out.state.assign(targets.front().begin(), targets.front().end());
    out.converged = true;
    return out;
  }

  const std::size_t runs = warm_states.size() + static_cast<std::size_t>(config.restarts);
  return detail::best_of_restarts(runs, config.threads, [&](std::size_t r) {
    Eigen::MatrixXcd u;
    if (r < warm_states.size()) {
      if (warm_states[r].size() != shape.total_dim())
        throw std::invalid_argument("maximize_bounded_rank_overlap: warm state size mismatch");
      Eigen::BDCSVD<Eigen::MatrixXcd> s0(coefficient_matrix(warm_states[r], shape, cut), Eigen::ComputeFullU);
      u = s0.matrixU().leftCols(q);
    } else {
      auto rng = make_rng(config.seed, r - warm_states.size());
      u = detail::random_frame(static_cast<Eigen::Index>(dims.left), q, rng);
    }
    Eigen::MatrixXcd phi;
    OverlapResult out;
    std::vector<double> trace;
    double current = 0.0;
    std::vector<Eigen::MatrixXcd> proj(mats.size());
    for (int sweep = 1; sweep <= config.max_iters; ++sweep) {
      const double before = current;
      // left frame fixed: phi = U X
      for (std::size_t a = 0; a < mats.size(); ++a) proj[a] = u.adjoint() * mats[a];
      auto [v1, x] = detail::best_in_frame(proj);
      if (v1 >= current || phi.size() == 0) {
        phi = u * x;
        current = v1;
      }
      if (config.record_trace) trace.push_back(current);
      Eigen::BDCSVD<Eigen::MatrixXcd> s1(phi, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Eigen::MatrixXcd v = s1.matrixV().leftCols(q);
      // right frame fixed: phi = Y V^dagger
      for (std::size_t a = 0; a < mats.size(); ++a) proj[a] = mats[a] * v;
      auto [v2, y] = detail::best_in_frame(proj);
      if (v2 >= current) {
        phi = y * v.adjoint();
        current = v2;
      }
      if (config.record_trace) trace.push_back(current);
      Eigen::BDCSVD<Eigen::MatrixXcd> s2(phi, Eigen::ComputeFullU | Eigen::ComputeFullV);
      u = s2.matrixU().leftCols(q);
      out.iterations = sweep;
      if (sweep > 1 && (current - before < config.tol || current >= 1.0 - 1e-15)) {
        out.converged = true;
        break;
      }
    }
    out.overlap = std::min(1.0, current);
    phi /= phi.norm();
    out.state = flatten_coefficients(phi, shape, cut);
    if (config.record_trace) out.traces.push_back(std::move(trace));
    return out;
  });
}

}  // namespace subent
