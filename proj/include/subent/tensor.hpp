#pragma once

// Dense multipartite pure states: shapes, states, bipartitions, Schmidt
// decompositions and orthonormal subspaces.
//
// Amplitudes are stored row-major over the multi-index (i_1, ..., i_N) with
// site 1 varying slowest. Site indices are 0-based in code and 1-based when
// printed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace subent {

using cplx = std::complex<double>;
using Amplitudes = std::vector<cplx>;

/// Largest number of amplitudes a dense state may hold.
inline constexpr std::size_t kMaxAmplitudes = std::size_t{1} << 24;
inline constexpr double kNormTolerance = 1e-12;
/// Pairwise overlap allowed between basis vectors of a Subspace.
inline constexpr double kOrthogonalityTolerance = 1e-10;
/// Inputs this close to orthonormal are repaired by Gram-Schmidt instead of
/// rejected.
inline constexpr double kReorthonormalizeTolerance = 1e-6;
/// Schmidt coefficients below this are treated as zero.
inline constexpr double kSchmidtCutoff = 1e-10;

inline double squared_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return s;
}

inline double norm(std::span<const cplx> v) { return std::sqrt(squared_norm(v)); }

/// <a|b>, conjugate-linear in the first argument.
inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// SystemShape

class SystemShape {
 public:
  SystemShape() : SystemShape(std::vector<int>{2}) {}

  explicit SystemShape(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("SystemShape: at least one site required");
    total_ = 1;
    for (int d : dims_) {
      if (d < 2) throw std::invalid_argument("SystemShape: local dimensions must be >= 2");
      if (total_ > kMaxAmplitudes / static_cast<std::size_t>(d))
        throw std::length_error("SystemShape: total dimension exceeds the dense cap of 2^24");
      total_ *= static_cast<std::size_t>(d);
    }
  }

  static SystemShape uniform(int sites, int local_dim) {
    if (sites < 1) throw std::invalid_argument("SystemShape: at least one site required");
    return SystemShape(std::vector<int>(static_cast<std::size_t>(sites), local_dim));
  }

  int sites() const { return static_cast<int>(dims_.size()); }
  int dim(int site) const { return dims_.at(static_cast<std::size_t>(site)); }
  std::span<const int> dims() const { return dims_; }
  std::size_t total_dim() const { return total_; }

  bool is_uniform() const {
    return std::all_of(dims_.begin(), dims_.end(), [&](int d) { return d == dims_.front(); });
  }

  /// Row-major stride of a site (site 0 slowest).
  std::size_t stride(int site) const {
    std::size_t s = 1;
    for (int i = sites() - 1; i > site; --i) s *= static_cast<std::size_t>(dims_[static_cast<std::size_t>(i)]);
    return s;
  }

  std::vector<int> digits(std::size_t index) const {
    if (index >= total_) throw std::out_of_range("SystemShape: index out of range");
    std::vector<int> out(dims_.size());
    for (int i = sites() - 1; i >= 0; --i) {
      const auto d = static_cast<std::size_t>(dims_[static_cast<std::size_t>(i)]);
      out[static_cast<std::size_t>(i)] = static_cast<int>(index % d);
      index /= d;
    }
    return out;
  }

  std::size_t index(std::span<const int> digits) const {
    if (digits.size() != dims_.size()) throw std::invalid_argument("SystemShape: digit count mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (digits[i] < 0 || digits[i] >= dims_[i]) throw std::out_of_range("SystemShape: digit out of range");
      idx = idx * static_cast<std::size_t>(dims_[i]) + static_cast<std::size_t>(digits[i]);
    }
    return idx;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(dims_[i]);
    }
    return s;
  }

  friend bool operator==(const SystemShape& a, const SystemShape& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<int> dims_;
  std::size_t total_ = 1;
};

// ---------------------------------------------------------------------------
// PureState

class PureState {
 public:
  /// Throws unless the amplitudes have unit norm within kNormTolerance.
  PureState(SystemShape shape, Amplitudes amplitudes)
      : shape_(std::move(shape)), amps_(std::move(amplitudes)) {
    if (amps_.size() != shape_.total_dim())
      throw std::invalid_argument("PureState: amplitude count does not match shape");
    if (std::abs(subent::norm(amps_) - 1.0) > kNormTolerance)
      throw std::invalid_argument("PureState: amplitudes are not normalized");
  }

  /// Rescales to unit norm; throws on a (numerically) zero vector.
  static PureState normalized(SystemShape shape, Amplitudes amplitudes) {
    const double n = subent::norm(amplitudes);
    if (!(n > 1e-300) || !std::isfinite(n)) throw std::invalid_argument("PureState: cannot normalize a zero vector");
    for (auto& a : amplitudes) a /= n;
    return PureState(std::move(shape), std::move(amplitudes));
  }

  static PureState basis(SystemShape shape, std::size_t index) {
    Amplitudes a(shape.total_dim());
    a.at(index) = 1.0;
    return PureState(std::move(shape), std::move(a));
  }

  /// Tensor product of per-site (or per-block) normalized vectors, in order.
  static PureState product(std::span<const Amplitudes> factors) {
    std::vector<int> dims;
    Amplitudes out{1.0};
    for (const auto& f : factors) {
      dims.push_back(static_cast<int>(f.size()));
      Amplitudes next(out.size() * f.size());
      for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = 0; j < f.size(); ++j) next[i * f.size() + j] = out[i] * f[j];
      out = std::move(next);
    }
    return normalized(SystemShape(std::move(dims)), std::move(out));
  }

  const SystemShape& shape() const { return shape_; }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::size_t dim() const { return amps_.size(); }
  int sites() const { return shape_.sites(); }
  cplx operator[](std::size_t i) const { return amps_[i]; }

  Eigen::Map<const Eigen::VectorXcd> vector() const {
    return {amps_.data(), static_cast<Eigen::Index>(amps_.size())};
  }

 private:
  SystemShape shape_;
  Amplitudes amps_;
};

inline cplx inner_product(const PureState& a, const PureState& b) {
  if (!(a.shape() == b.shape())) throw std::invalid_argument("inner_product: shape mismatch");
  return dot(a.amplitudes(), b.amplitudes());
}

inline double fidelity(const PureState& a, const PureState& b) { return std::norm(inner_product(a, b)); }

/// Superposition sum_i c_i |v_i>, renormalized.
inline PureState superpose(std::span<const PureState> states, std::span<const cplx> coefficients) {
  if (states.empty() || states.size() != coefficients.size())
    throw std::invalid_argument("superpose: need one coefficient per state");
  Amplitudes out(states.front().dim());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(states[i].shape() == states.front().shape())) throw std::invalid_argument("superpose: shape mismatch");
    const auto a = states[i].amplitudes();
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += coefficients[i] * a[j];
  }
  return PureState::normalized(states.front().shape(), std::move(out));
}

// ---------------------------------------------------------------------------
// Bipartition

class Bipartition {
 public:
  Bipartition(std::vector<int> left, int sites) : sites_(sites), left_(std::move(left)) {
    std::sort(left_.begin(), left_.end());
    if (sites_ < 2) throw std::invalid_argument("Bipartition: need at least two sites");
    if (left_.empty() || static_cast<int>(left_.size()) >= sites_)
      throw std::invalid_argument("Bipartition: left part must be a nonempty proper subset");
    if (std::adjacent_find(left_.begin(), left_.end()) != left_.end())
      throw std::invalid_argument("Bipartition: duplicate site");
    if (left_.front() < 0 || left_.back() >= sites_) throw std::out_of_range("Bipartition: site out of range");
    for (int s = 0; s < sites_; ++s)
      if (!std::binary_search(left_.begin(), left_.end(), s)) right_.push_back(s);
  }

  int sites() const { return sites_; }
  std::span<const int> left() const { return left_; }
  std::span<const int> right() const { return right_; }
  int size() const { return static_cast<int>(left_.size()); }

  Bipartition complement() const { return Bipartition(right_, sites_); }

  /// Smaller side on the left; for equal halves, the side holding site 0.
  Bipartition canonical() const {
    const auto n = left_.size(), m = right_.size();
    if (n < m || (n == m && left_.front() == 0)) return *this;
    return complement();
  }

  bool is_canonical() const { return canonical().left_ == left_; }

  std::string to_string() const {
    auto part = [](std::span<const int> s) {
      std::string out = "{";
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(s[i] + 1);
      }
      return out + "}";
    };
    return part(left_) + "|" + part(right_);
  }

  friend bool operator==(const Bipartition& a, const Bipartition& b) {
    return a.sites_ == b.sites_ && a.left_ == b.left_;
  }

 private:
  int sites_;
  std::vector<int> left_;
  std::vector<int> right_;
};

/// The 2^(N-1) - 1 canonical cuts, ordered by left size then lexicographically.
inline std::vector<Bipartition> enumerate_bipartitions(int sites) {
  if (sites < 2) throw std::invalid_argument("enumerate_bipartitions: need at least two sites");
  std::vector<Bipartition> cuts;
  for (int n = 1; 2 * n <= sites; ++n) {
    std::vector<int> pick(static_cast<std::size_t>(n));
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      if (2 * n < sites || pick.front() == 0) cuts.emplace_back(pick, sites);
      int i = n - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == sites - n + i) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return cuts;
}

inline std::vector<Bipartition> enumerate_bipartitions(const SystemShape& shape) {
  return enumerate_bipartitions(shape.sites());
}

/// The single cut of a two-site system.
inline Bipartition bipartite_cut() { return Bipartition({0}, 2); }

// ---------------------------------------------------------------------------
// Reshaping and Schmidt decomposition

struct CutDims {
  std::size_t left = 1;
  std::size_t right = 1;
};

inline CutDims cut_dims(const SystemShape& shape, const Bipartition& cut) {
  if (cut.sites() != shape.sites()) throw std::invalid_argument("Bipartition does not match shape");
  CutDims d;
  for (int s : cut.left()) d.left *= static_cast<std::size_t>(shape.dim(s));
  for (int s : cut.right()) d.right *= static_cast<std::size_t>(shape.dim(s));
  return d;
}

/// For each flat index, its (row, column) position in the cut's coefficient
/// matrix. Row index is row-major over the left sites in ascending order.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> cut_index_map(const SystemShape& shape,
                                                                          const Bipartition& cut) {
  const auto dims = cut_dims(shape, cut);
  std::vector<std::size_t> left_stride(static_cast<std::size_t>(shape.sites()), 0);
  std::vector<std::size_t> right_stride(static_cast<std::size_t>(shape.sites()), 0);
  std::size_t s = dims.left;
  for (int site : cut.left()) {
    s /= static_cast<std::size_t>(shape.dim(site));
    left_stride[static_cast<std::size_t>(site)] = s;
  }
  s = dims.right;
  for (int site : cut.right()) {
    s /= static_cast<std::size_t>(shape.dim(site));
    right_stride[static_cast<std::size_t>(site)] = s;
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> map(shape.total_dim());
  std::vector<int> digit(static_cast<std::size_t>(shape.sites()), 0);
  std::size_t row = 0, col = 0;
  for (std::size_t flat = 0; flat < map.size(); ++flat) {
    map[flat] = {static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(col)};
    // odometer increment, last site fastest
    for (int site = shape.sites() - 1; site >= 0; --site) {
      const auto u = static_cast<std::size_t>(site);
      row += left_stride[u];
      col += right_stride[u];
      if (++digit[u] < shape.dim(site)) break;
      row -= left_stride[u] * static_cast<std::size_t>(shape.dim(site));
      col -= right_stride[u] * static_cast<std::size_t>(shape.dim(site));
      digit[u] = 0;
    }
  }
  return map;
}

inline Eigen::MatrixXcd coefficient_matrix(std::span<const cplx> amplitudes, const SystemShape& shape,
                                           const Bipartition& cut) {
  if (amplitudes.size() != shape.total_dim()) throw std::invalid_argument("coefficient_matrix: size mismatch");
  const auto dims = cut_dims(shape, cut);
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(dims.left), static_cast<Eigen::Index>(dims.right));
  const auto map = cut_index_map(shape, cut);
  for (std::size_t flat = 0; flat < map.size(); ++flat) m(map[flat].first, map[flat].second) = amplitudes[flat];
  return m;
}

inline Eigen::MatrixXcd coefficient_matrix(const PureState& psi, const Bipartition& cut) {
  return coefficient_matrix(psi.amplitudes(), psi.shape(), cut);
}

/// Inverse of coefficient_matrix.
inline Amplitudes flatten_coefficients(const Eigen::MatrixXcd& m, const SystemShape& shape, const Bipartition& cut) {
  const auto map = cut_index_map(shape, cut);
  Amplitudes out(map.size());
  for (std::size_t flat = 0; flat < map.size(); ++flat) out[flat] = m(map[flat].first, map[flat].second);
  return out;
}

struct SchmidtSpectrum {
  /// Non-increasing, strictly above kSchmidtCutoff.
  std::vector<double> coefficients;

  int rank() const { return static_cast<int>(coefficients.size()); }
  double largest() const { return coefficients.empty() ? 0.0 : coefficients.front(); }

  /// Sum of the m largest squared coefficients.
  double top_weight(int m) const {
    double s = 0.0;
    for (int i = 0; i < std::min(m, rank()); ++i) s += coefficients[static_cast<std::size_t>(i)] * coefficients[static_cast<std::size_t>(i)];
    return s;
  }
  double sum_squares() const { return top_weight(rank()); }
};

struct SchmidtDecomposition {
  SchmidtSpectrum spectrum;
  Eigen::MatrixXcd left;   // dim_left x rank, orthonormal columns
  Eigen::MatrixXcd right;  // dim_right x rank, orthonormal columns
};

enum class SchmidtRoute {
  Svd,   ///< singular values of the coefficient matrix
  Gram,  ///< eigenvalues of the smaller Gram matrix M M^dagger or M^dagger M
};

namespace detail {

inline SchmidtSpectrum truncate(const Eigen::VectorXd& singular) {
  SchmidtSpectrum s;
  for (Eigen::Index i = 0; i < singular.size(); ++i)
    if (singular(i) > kSchmidtCutoff) s.coefficients.push_back(singular(i));
  std::sort(s.coefficients.begin(), s.coefficients.end(), std::greater<>());
  return s;
}

}  // namespace detail

inline SchmidtDecomposition schmidt_decompose(const PureState& psi, const Bipartition& cut,
                                              SchmidtRoute route = SchmidtRoute::Svd) {
  const Eigen::MatrixXcd m = coefficient_matrix(psi, cut);
  SchmidtDecomposition out;
  if (route == SchmidtRoute::Svd) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.spectrum = detail::truncate(svd.singularValues());
    const auto r = static_cast<Eigen::Index>(out.spectrum.rank());
    out.left = svd.matrixU().leftCols(r);
    out.right = svd.matrixV().leftCols(r).conjugate();
    return out;
  }
  const bool rows_small = m.rows() <= m.cols();
  const Eigen::MatrixXcd gram = rows_small ? Eigen::MatrixXcd(m * m.adjoint()) : Eigen::MatrixXcd(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  const auto n = gram.rows();
  Eigen::VectorXd sv(n);
  for (Eigen::Index i = 0; i < n; ++i) sv(i) = std::sqrt(std::max(0.0, eig.eigenvalues()(n - 1 - i)));
  out.spectrum = detail::truncate(sv);
  const auto r = static_cast<Eigen::Index>(out.spectrum.rank());
  Eigen::MatrixXcd small(n, r);
  for (Eigen::Index i = 0; i < r; ++i) small.col(i) = eig.eigenvectors().col(n - 1 - i);
  if (rows_small) {
    out.left = small;
    out.right.resize(m.cols(), r);
    for (Eigen::Index i = 0; i < r; ++i) out.right.col(i) = (m.transpose() * small.col(i).conjugate()) / sv(i);
  } else {
    out.right = small.conjugate();
    out.left.resize(m.rows(), r);
    for (Eigen::Index i = 0; i < r; ++i) out.left.col(i) = (m * small.col(i)) / sv(i);
  }
  return out;
}

/// Spectrum only (skips singular vectors).
inline SchmidtSpectrum schmidt_spectrum(const PureState& psi, const Bipartition& cut) {
  const Eigen::MatrixXcd m = coefficient_matrix(psi, cut);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return detail::truncate(svd.singularValues());
}

/// sum_i lambda_i |e_i>|f_i>, mapped back to the original site order.
inline Amplitudes reconstruct(const SchmidtDecomposition& d, const SystemShape& shape, const Bipartition& cut) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d.left.rows(), d.right.rows());
  for (int i = 0; i < d.spectrum.rank(); ++i)
    m += d.spectrum.coefficients[static_cast<std::size_t>(i)] * d.left.col(i) * d.right.col(i).transpose();
  return flatten_coefficients(m, shape, cut);
}

/// Tr rho_S^2 for the reduction onto the given sites.
inline double reduced_purity(const PureState& psi, std::vector<int> sites) {
  if (static_cast<int>(sites.size()) == psi.sites() || sites.empty()) return 1.0;
  const auto spec = schmidt_spectrum(psi, Bipartition(std::move(sites), psi.sites()));
  double p = 0.0;
  for (double l : spec.coefficients) p += l * l * l * l;
  return p;
}

// ---------------------------------------------------------------------------
// Subspace

class Subspace {
 public:
  /// Accepts vectors orthonormal within kOrthogonalityTolerance as given,
  /// repairs vectors within kReorthonormalizeTolerance by modified
  /// Gram-Schmidt, and rejects anything further off.
  explicit Subspace(std::vector<PureState> basis) : basis_(std::move(basis)) {
    if (basis_.empty()) throw std::invalid_argument("Subspace: empty basis");
    for (const auto& v : basis_)
      if (!(v.shape() == basis_.front().shape())) throw std::invalid_argument("Subspace: shape mismatch");
    const double dev = max_gram_deviation();
    if (dev <= kOrthogonalityTolerance) return;
    if (dev > kReorthonormalizeTolerance)
      throw std::invalid_argument("Subspace: basis vectors are not orthonormal");
    reorthonormalize();
  }

  const SystemShape& shape() const { return basis_.front().shape(); }
  std::size_t dimension() const { return basis_.size(); }
  std::span<const PureState> basis() const { return basis_; }
  const PureState& operator[](std::size_t i) const { return basis_[i]; }

  Eigen::MatrixXcd gram() const {
    const auto k = static_cast<Eigen::Index>(basis_.size());
    Eigen::MatrixXcd g(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j)
        g(i, j) = inner_product(basis_[static_cast<std::size_t>(i)], basis_[static_cast<std::size_t>(j)]);
    return g;
  }

  double max_gram_deviation() const {
    const auto g = gram();
    return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  }

 private:
  void reorthonormalize() {
    std::vector<Amplitudes> vs;
    for (const auto& b : basis_) vs.emplace_back(b.amplitudes().begin(), b.amplitudes().end());
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          const cplx c = dot(vs[j], vs[i]);
          for (std::size_t t = 0; t < vs[i].size(); ++t) vs[i][t] -= c * vs[j][t];
        }
        const double n = subent::norm(vs[i]);
        for (auto& a : vs[i]) a /= n;
      }
    }
    const SystemShape shape = basis_.front().shape();
    basis_.clear();
    for (auto& v : vs) basis_.push_back(PureState::normalized(shape, std::move(v)));
  }

  std::vector<PureState> basis_;
};

struct Projection {
  Amplitudes vector;  ///< unnormalized P|psi>
  double norm = 0.0;  ///< ||P|psi>||, in [0, 1]
};

inline Projection project_onto(const Subspace& v, const PureState& psi) {
  if (!(v.shape() == psi.shape())) throw std::invalid_argument("project_onto: shape mismatch");
  Projection p;
  p.vector.assign(psi.dim(), cplx{});
  for (const auto& b : v.basis()) {
    const cplx c = inner_product(b, psi);
    const auto a = b.amplitudes();
    for (std::size_t i = 0; i < p.vector.size(); ++i) p.vector[i] += c * a[i];
  }
  p.norm = std::min(1.0, subent::norm(p.vector));
  return p;
}

}  // namespace subent
