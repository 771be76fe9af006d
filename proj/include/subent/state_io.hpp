#pragma once

// Plain-text state and subspace files.
//
//   # comment
//   dims: 2 2 2
//   vector            (optional; starts each vector of a subspace file)
//   0 0.70710678118654757 0
//   7 0.70710678118654757 0
//
// Each amplitude line is "index real imag" with a flat row-major index.
// Omitted indices are zero. Vectors whose norm is within 1e-6 of one are
// renormalized on reading; anything further off is rejected.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "subent/tensor.hpp"

namespace subent {

inline constexpr double kReadNormTolerance = 1e-6;

class StateFormatError : public std::runtime_error {
 public:
  StateFormatError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what) {}
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

template <class T>
T parse_number(const std::string& tok, int line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw StateFormatError("bad number '" + tok + "'", line);
  return v;
}

struct RawVectors {
  SystemShape shape;
  std::vector<Amplitudes> vectors;
};

inline RawVectors read_raw(std::istream& in) {
  std::optional<SystemShape> shape;
  std::vector<Amplitudes> vectors;
  std::vector<std::vector<bool>> seen;
  std::string line;
  int lineno = 0;
  bool explicit_vectors = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "dims:") {
      if (shape) throw StateFormatError("duplicate dims line", lineno);
      std::vector<int> dims;
      for (std::size_t i = 1; i < tok.size(); ++i) dims.push_back(parse_number<int>(tok[i], lineno));
      try {
        shape = SystemShape(dims);
      } catch (const std::exception& e) {
        throw StateFormatError(e.what(), lineno);
      }
      continue;
    }
    if (!shape) throw StateFormatError("expected 'dims:' before amplitudes", lineno);
    if (tok[0] == "vector") {
      if (tok.size() != 1) throw StateFormatError("unexpected text after 'vector'", lineno);
      if (!explicit_vectors && !vectors.empty()) throw StateFormatError("amplitudes before the first 'vector' line", lineno);
      explicit_vectors = true;
      vectors.emplace_back(shape->total_dim());
      seen.emplace_back(shape->total_dim(), false);
      continue;
    }
    if (tok.size() != 3) throw StateFormatError("expected 'index real imag'", lineno);
    if (vectors.empty()) {
      vectors.emplace_back(shape->total_dim());
      seen.emplace_back(shape->total_dim(), false);
    }
    const auto idx = parse_number<unsigned long long>(tok[0], lineno);
    if (idx >= shape->total_dim()) throw StateFormatError("index " + tok[0] + " out of range", lineno);
    if (seen.back()[idx]) throw StateFormatError("duplicate index " + tok[0], lineno);
    seen.back()[idx] = true;
    vectors.back()[idx] = cplx(parse_number<double>(tok[1], lineno), parse_number<double>(tok[2], lineno));
  }
  if (!shape) throw StateFormatError("missing 'dims:' line", 0);
  if (vectors.empty()) throw StateFormatError("no amplitudes", 0);
  return {*shape, std::move(vectors)};
}

inline PureState checked_state(const SystemShape& shape, Amplitudes a, std::size_t which) {
  const double n = norm(a);
  if (!std::isfinite(n) || std::abs(n - 1.0) > kReadNormTolerance)
    throw StateFormatError("vector " + std::to_string(which + 1) + " has norm " + std::to_string(n) +
                               ", more than 1e-6 away from 1",
                           0);
  return PureState::normalized(shape, std::move(a));
}

inline void write_vector(std::ostream& os, std::span<const cplx> a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != cplx{}) os << i << ' ' << a[i].real() << ' ' << a[i].imag() << '\n';
}

inline void write_dims(std::ostream& os, const SystemShape& shape) {
  os << "dims:";
  for (int d : shape.dims()) os << ' ' << d;
  os << '\n';
}

}  // namespace detail

inline PureState read_state(std::istream& in) {
  auto raw = detail::read_raw(in);
  if (raw.vectors.size() != 1) throw StateFormatError("expected a single vector, found " + std::to_string(raw.vectors.size()), 0);
  return detail::checked_state(raw.shape, std::move(raw.vectors.front()), 0);
}

inline Subspace read_subspace(std::istream& in) {
  auto raw = detail::read_raw(in);
  std::vector<PureState> basis;
  for (std::size_t i = 0; i < raw.vectors.size(); ++i)
    basis.push_back(detail::checked_state(raw.shape, std::move(raw.vectors[i]), i));
  return Subspace(std::move(basis));
}

inline void write_state(std::ostream& os, const PureState& psi) {
  const auto flags = os.flags();
  const auto prec = os.precision(std::numeric_limits<double>::max_digits10);
  detail::write_dims(os, psi.shape());
  detail::write_vector(os, psi.amplitudes());
  os.precision(prec);
  os.flags(flags);
}

inline void write_subspace(std::ostream& os, const Subspace& v) {
  const auto flags = os.flags();
  const auto prec = os.precision(std::numeric_limits<double>::max_digits10);
  detail::write_dims(os, v.shape());
  for (const auto& b : v.basis()) {
    os << "vector\n";
    detail::write_vector(os, b.amplitudes());
  }
  os.precision(prec);
  os.flags(flags);
}

inline PureState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_state(in);
}

/// Reads a subspace file; a single-vector state file gives a 1-dimensional
/// subspace.
inline Subspace load_subspace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_subspace(in);
}

}  // namespace subent
