#pragma once

// Slow, independent reference computations for the unit tests. Nothing here
// reuses the library's reshaping, SVD or combinatorial enumeration.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace reference {

using cplx = std::complex<double>;

inline std::vector<int> digits_of(std::size_t index, const std::vector<int>& dims) {
  std::vector<int> out(dims.size());
  for (std::size_t i = dims.size(); i-- > 0;) {
    out[i] = static_cast<int>(index % static_cast<std::size_t>(dims[i]));
    index /= static_cast<std::size_t>(dims[i]);
  }
  return out;
}

/// Reduced density matrix on `keep` by explicit summation over every pair of
/// basis strings that agree outside `keep`.
inline Eigen::MatrixXcd reduced_density(const std::vector<cplx>& psi, const std::vector<int>& dims,
                                        const std::vector<int>& keep) {
  std::size_t kdim = 1;
  for (int s : keep) kdim *= static_cast<std::size_t>(dims[static_cast<std::size_t>(s)]);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(kdim), static_cast<Eigen::Index>(kdim));
  auto kept_index = [&](const std::vector<int>& dg) {
    std::size_t k = 0;
    for (int s : keep) k = k * static_cast<std::size_t>(dims[static_cast<std::size_t>(s)]) + static_cast<std::size_t>(dg[static_cast<std::size_t>(s)]);
    return k;
  };
  for (std::size_t a = 0; a < psi.size(); ++a) {
    if (psi[a] == cplx{}) continue;
    const auto da = digits_of(a, dims);
    for (std::size_t b = 0; b < psi.size(); ++b) {
      if (psi[b] == cplx{}) continue;
      const auto db = digits_of(b, dims);
      bool same = true;
      for (std::size_t s = 0; s < dims.size() && same; ++s)
        if (std::find(keep.begin(), keep.end(), static_cast<int>(s)) == keep.end() && da[s] != db[s]) same = false;
      if (same)
        rho(static_cast<Eigen::Index>(kept_index(da)), static_cast<Eigen::Index>(kept_index(db))) += psi[a] * std::conj(psi[b]);
    }
  }
  return rho;
}

/// Eigenvalues of the reduced state, descending: the squared Schmidt
/// coefficients across keep | rest.
inline std::vector<double> squared_schmidt(const std::vector<cplx>& psi, const std::vector<int>& dims,
                                           const std::vector<int>& keep) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(reduced_density(psi, dims, keep));
  std::vector<double> ev(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

/// Every nonempty proper subset that contains site 0 or is smaller than its
/// complement; each cut appears at least once.
inline std::vector<std::vector<int>> all_cuts(int n) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    out.push_back(s);
  }
  return out;
}

/// min over cuts of 1 - (sum of the r-1 largest squared coefficients).
inline double e_r_min_over_cuts(const std::vector<cplx>& psi, const std::vector<int>& dims, int r) {
  double best = 1.0;
  for (const auto& cut : all_cuts(static_cast<int>(dims.size()))) {
    const auto ev = squared_schmidt(psi, dims, cut);
    double top = 0.0;
    for (int i = 0; i < r - 1 && i < static_cast<int>(ev.size()); ++i) top += ev[static_cast<std::size_t>(i)];
    best = std::min(best, 1.0 - top);
  }
  return std::max(0.0, best);
}

/// Qudit Dicke state by scanning every basis string and counting levels.
inline std::vector<cplx> dicke(const std::vector<int>& k) {
  const int n = [&] {
    int s = 0;
    for (int x : k) s += x;
    return s;
  }();
  const std::vector<int> dims(static_cast<std::size_t>(n), static_cast<int>(k.size()));
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  std::vector<cplx> psi(total);
  double count = 0;
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<int> occ(k.size(), 0);
    for (int dg : digits_of(i, dims)) ++occ[static_cast<std::size_t>(dg)];
    if (occ == k) {
      psi[i] = 1.0;
      ++count;
    }
  }
  for (auto& a : psi) a /= std::sqrt(count);
  return psi;
}

/// Sign of a permutation via cycle decomposition.
inline int permutation_sign(std::vector<int> p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    while (p[i] != static_cast<int>(i)) {
      std::swap(p[i], p[static_cast<std::size_t>(p[i])]);
      sign = -sign;
    }
  return sign;
}

/// Symmetric product |u>^N with u = (cos t, e^{ip} sin t).
inline std::vector<cplx> symmetric_product(int n, double t, double p) {
  const cplx u[2] = {std::cos(t), std::polar(std::sin(t), p)};
  std::vector<cplx> out(std::size_t{1} << n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    cplx v = 1.0;
    for (int q = 0; q < n; ++q) v *= u[(i >> (n - 1 - q)) & 1];
    out[i] = v;
  }
  return out;
}

/// GM of a permutation-symmetric N-qubit state. For such states the closest
/// product state can be taken symmetric, leaving a two-parameter search; a
/// coarse scan is followed by shrinking-step coordinate polishing.
inline double symmetric_qubit_gm(const std::vector<cplx>& psi, int n) {
  auto overlap = [&](double t, double p) {
    const auto phi = symmetric_product(n, t, p);
    cplx s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) s += std::conj(phi[i]) * psi[i];
    return std::norm(s);
  };
  constexpr int kScan = 120;
  double bt = 0, bp = 0, best = -1;
  for (int i = 0; i <= kScan; ++i)
    for (int j = 0; j < 2 * kScan; ++j) {
      const double t = (std::numbers::pi / 2) * i / kScan, p = std::numbers::pi * j / kScan;
      const double v = overlap(t, p);
      if (v > best) {
        best = v;
        bt = t;
        bp = p;
      }
    }
  for (double step = std::numbers::pi / kScan; step > 1e-12; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (auto [dt, dp] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
        const double v = overlap(bt + dt, bp + dp);
        if (v > best) {
          best = v;
          bt += dt;
          bp += dp;
          moved = true;
        }
      }
    }
  }
  return 1.0 - best;
}

}  // namespace reference
