// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qubo/errors.hpp"

namespace qubo {

/// Absolute tolerance used for energy equality throughout the library.
inline constexpr double kDefaultTol = 1e-9;

inline constexpr int kMaxVariables = 64;

/// Assignment of n binary variables packed into a 64-bit word: bit i holds
/// x_{i} (0-based), so the encoding enumerates configurations densely.
struct Configuration {
  std::uint64_t bits = 0;
  int n = 0;

  Configuration() = default;
  Configuration(std::uint64_t bits, int n) : bits(bits), n(n) {
    if (n < 0 || n > kMaxVariables) throw SizeError("configuration size out of range");
    if (n < kMaxVariables) this->bits &= (std::uint64_t{1} << n) - 1;
  }

  bool bit(int i) const { return (bits >> i) & 1u; }

  static Configuration from_bits(const std::vector<int>& xs) {
    Configuration c(0, static_cast<int>(xs.size()));
    for (int i = 0; i < c.n; ++i)
      if (xs[i]) c.bits |= std::uint64_t{1} << i;
    return c;
  }

  std::vector<int> to_bits() const {
    std::vector<int> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = bit(i) ? 1 : 0;
    return xs;
  }

  /// Canonical text form: variable 1 leftmost.
  std::string to_string() const {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
      if (bit(i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
  }

  static Configuration from_string(const std::string& s) {
    Configuration c(0, static_cast<int>(s.size()));
    for (int i = 0; i < c.n; ++i) {
      char ch = s[static_cast<std::size_t>(i)];
      if (ch == '1')
        c.bits |= std::uint64_t{1} << i;
      else if (ch != '0')
        throw ParseError("configuration string must be over {0,1}");
    }
    return c;
  }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.n == b.n && a.bits == b.bits;
  }
  friend bool operator!=(const Configuration& a, const Configuration& b) { return !(a == b); }
};

/// Spin view S_i = 1 - 2 x_i.
inline std::vector<int> bits_to_spins(const Configuration& c) {
  std::vector<int> s(c.n);
  for (int i = 0; i < c.n; ++i) s[i] = 1 - 2 * (c.bit(i) ? 1 : 0);
  return s;
}

inline Configuration spins_to_bits(const std::vector<int>& spins) {
  Configuration c(0, static_cast<int>(spins.size()));
  for (int i = 0; i < c.n; ++i) {
    if (spins[i] == -1)
      c.bits |= std::uint64_t{1} << i;
    else if (spins[i] != 1)
      throw InvalidSpinError("spin entries must be +1 or -1");
  }
  return c;
}

/// Symmetric QUBO coefficient matrix; only the upper triangle (i <= j) is
/// stored. Cost(x) = sum_{i<=j} Q_ij x_i x_j over x in {0,1}^n.
class QuboProblem {
 public:
  explicit QuboProblem(int n) : n_(n) {
    if (n < 1 || n > kMaxVariables) throw SizeError("variable count must be in 1..64");
    q_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
  }

  int n() const { return n_; }

  double q(int i, int j) const { return q_[index(i, j)]; }

  void set(int i, int j, double value) {
    if (!std::isfinite(value)) throw Error("QUBO coefficient must be finite");
    q_[index(i, j)] = value;
  }

  void add(int i, int j, double value) {
    if (!std::isfinite(value)) throw Error("QUBO coefficient must be finite");
    q_[index(i, j)] += value;
  }

  friend bool operator==(const QuboProblem& a, const QuboProblem& b) {
    return a.n_ == b.n_ && a.q_ == b.q_;
  }

 private:
  std::size_t index(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_) throw IndexError("QUBO index out of range");
    std::size_t ui = static_cast<std::size_t>(i);
    return ui * n_ - ui * (ui - 1) / 2 + static_cast<std::size_t>(j - i);
  }

  int n_;
  std::vector<double> q_;  // row-major upper triangle incl. diagonal
};

/// Ising model H(S) = sum_{i<j} J_ij S_i S_j + sum_i h_i S_i with an energy
/// offset chosen so that qubo_cost(x) = H(S(x)) + offset. Couplings are kept
/// sparse; pairs absent from the map are structural zeros.
class IsingModel {
 public:
  explicit IsingModel(int n) : n_(n), h_(static_cast<std::size_t>(n), 0.0) {
    if (n < 1 || n > kMaxVariables) throw SizeError("spin count must be in 1..64");
  }

  int n() const { return n_; }

  double coupling(int i, int j) const {
    auto it = j_.find(key(i, j));
    return it == j_.end() ? 0.0 : it->second;
  }

  void set_coupling(int i, int j, double value) {
    if (!std::isfinite(value)) throw Error("coupling must be finite");
    j_[key(i, j)] = value;
  }

  void add_coupling(int i, int j, double value) {
    if (!std::isfinite(value)) throw Error("coupling must be finite");
    j_[key(i, j)] += value;
  }

  double field(int i) const { return h_.at(static_cast<std::size_t>(i)); }

  void set_field(int i, double value) {
    if (!std::isfinite(value)) throw Error("field must be finite");
    h_.at(static_cast<std::size_t>(i)) = value;
  }

  void add_field(int i, double value) {
    if (!std::isfinite(value)) throw Error("field must be finite");
    h_.at(static_cast<std::size_t>(i)) += value;
  }

  double offset() const { return offset_; }
  void set_offset(double value) {
    if (!std::isfinite(value)) throw Error("offset must be finite");
    offset_ = value;
  }

  /// Stored couplings, keyed (i, j) with i < j, in ascending key order.
  const std::map<std::pair<int, int>, double>& couplings() const { return j_; }
  const std::vector<double>& fields() const { return h_; }

  friend bool operator==(const IsingModel& a, const IsingModel& b) {
    return a.n_ == b.n_ && a.j_ == b.j_ && a.h_ == b.h_ && a.offset_ == b.offset_;
  }

 private:
  std::pair<int, int> key(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_ || i == j) throw IndexError("coupling index invalid (need 0 <= i < j < n)");
    return {i, j};
  }

  int n_;
  std::map<std::pair<int, int>, double> j_;
  std::vector<double> h_;
  double offset_ = 0.0;
};

/// Cost(x) = sum_{i<=j} Q_ij x_i x_j, accumulated in fixed ascending (i, j)
/// order so repeated evaluations of the same input are bit-identical.
inline double qubo_cost(const QuboProblem& p, std::uint64_t bits) {
  double acc = 0.0;
  const int n = p.n();
  for (int i = 0; i < n; ++i) {
    if (!((bits >> i) & 1u)) continue;
    acc += p.q(i, i);
    for (int j = i + 1; j < n; ++j)
      if ((bits >> j) & 1u) acc += p.q(i, j);
  }
  return acc;
}

inline double qubo_cost(const QuboProblem& p, const Configuration& c) {
  if (c.n != p.n()) throw DimensionError("configuration length does not match problem size");
  return qubo_cost(p, c.bits);
}

/// H(S) = sum_{i<j} J_ij S_i S_j + sum_i h_i S_i. The offset is not included;
/// add m.offset() to obtain the QUBO cost.
inline double ising_energy(const IsingModel& m, const std::vector<int>& spins) {
  if (static_cast<int>(spins.size()) != m.n())
    throw DimensionError("spin sequence length does not match model size");
  for (int s : spins)
    if (s != 1 && s != -1) throw InvalidSpinError("spin entries must be +1 or -1");
  double acc = 0.0;
  for (const auto& [ij, v] : m.couplings()) acc += v * spins[ij.first] * spins[ij.second];
  for (int i = 0; i < m.n(); ++i) acc += m.field(i) * spins[i];
  return acc;
}

inline double ising_energy(const IsingModel& m, const Configuration& c) {
  return ising_energy(m, bits_to_spins(c));
}

/// The constant C0 with Cost(x) = H(S(x)) + C0, computed from Q.
inline double qubo_offset_c0(const QuboProblem& p) {
  const int n = p.n();
  double diag = 0.0, upper = 0.0;
  for (int i = 0; i < n; ++i) diag += p.q(i, i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) upper += p.q(i, j);
  return 0.5 * diag + 0.25 * upper;
}

/// J_ij = Q_ij / 4 (i != j, zeros omitted), h_i = -(Q_ii + sum_{j!=i} Q_ij / 2) / 2,
/// offset = C0.
inline IsingModel qubo_to_ising(const QuboProblem& p) {
  const int n = p.n();
  IsingModel m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (p.q(i, j) != 0.0) m.set_coupling(i, j, p.q(i, j) / 4.0);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) row += p.q(i, j);
    m.set_field(i, -(p.q(i, i) + 0.5 * row) / 2.0);
  }
  m.set_offset(qubo_offset_c0(p));
  return m;
}

/// Q_ij = 4 J_ij (i != j), Q_ii = -2 (h_i + sum_{k!=i} J_ik).
inline QuboProblem ising_to_qubo(const IsingModel& m) {
  const int n = m.n();
  QuboProblem p(n);
  std::vector<double> rowsum(static_cast<std::size_t>(n), 0.0);
  for (const auto& [ij, v] : m.couplings()) {
    p.set(ij.first, ij.second, 4.0 * v);
    rowsum[static_cast<std::size_t>(ij.first)] += v;
    rowsum[static_cast<std::size_t>(ij.second)] += v;
  }
  for (int i = 0; i < n; ++i)
    p.set(i, i, -2.0 * (m.field(i) + rowsum[static_cast<std::size_t>(i)]));
  return p;
}

}  // namespace qubo
