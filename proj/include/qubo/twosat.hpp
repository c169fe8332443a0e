// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qubo/errors.hpp"
#include "qubo/model.hpp"
#include "qubo/rng.hpp"

namespace qubo {

/// One literal: a variable index and whether it appears negated.
struct Literal {
  int var = 0;
  bool negated = false;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.var == b.var && a.negated == b.negated;
  }
};

struct Clause {
  Literal a, b;

  friend bool operator==(const Clause& x, const Clause& y) { return x.a == y.a && x.b == y.b; }
};

/// Conjunction of two-literal clauses over n binary variables. Both literals
/// of a clause reference distinct variables.
struct TwoSatInstance {
  int n = 0;
  std::vector<Clause> clauses;

  void validate() const {
    if (n < 1 || n > kMaxVariables) throw SizeError("variable count must be in 1..64");
    if (clauses.empty()) throw SizeError("instance needs at least one clause");
    for (const auto& c : clauses) {
      if (c.a.var < 0 || c.a.var >= n || c.b.var < 0 || c.b.var >= n)
        throw IndexError("clause variable index out of range");
      if (c.a.var == c.b.var) throw Error("clause literals must use distinct variables");
    }
  }
};

/// Number of clauses whose literals are both false under c.
inline int twosat_cost(const TwoSatInstance& t, const Configuration& c) {
  if (c.n != t.n) throw DimensionError("configuration length does not match instance");
  int violated = 0;
  for (const auto& cl : t.clauses) {
    bool a_true = c.bit(cl.a.var) != cl.a.negated;
    bool b_true = c.bit(cl.b.var) != cl.b.negated;
    if (!a_true && !b_true) ++violated;
  }
  return violated;
}

/// Penalty encoding: each clause contributes (1 + s_a S_a)(1 + s_b S_b) with
/// s = +1 for a plain literal and -1 for a negated one, which is 4 exactly
/// when both literals are false. Hence H(S) + offset = 4 * twosat_cost(x),
/// with offset = M absorbed into the model.
inline IsingModel twosat_to_ising(const TwoSatInstance& t) {
  t.validate();
  IsingModel m(t.n);
  for (const auto& cl : t.clauses) {
    double sa = cl.a.negated ? -1.0 : 1.0;
    double sb = cl.b.negated ? -1.0 : 1.0;
    m.add_coupling(cl.a.var, cl.b.var, sa * sb);
    m.add_field(cl.a.var, sa);
    m.add_field(cl.b.var, sb);
  }
  m.set_offset(static_cast<double>(t.clauses.size()));
  return m;
}

/// Violated-clause counts for every assignment, indexed by encoding.
/// Each clause marks its subcube of 2^(n-2) violating assignments.
inline std::vector<std::uint16_t> twosat_violation_table(const TwoSatInstance& t) {
  t.validate();
  if (t.n > 24) throw SizeError("exhaustive violation table limited to n <= 24");
  if (t.clauses.size() > 0xFFFF) throw SizeError("too many clauses for the violation table");
  const std::uint64_t total = std::uint64_t{1} << t.n;
  std::vector<std::uint16_t> viol(total, 0);
  const std::uint64_t full = total - 1;
  for (const auto& cl : t.clauses) {
    // Both literals false: plain literal needs bit 0, negated needs bit 1.
    std::uint64_t base = 0;
    if (cl.a.negated) base |= std::uint64_t{1} << cl.a.var;
    if (cl.b.negated) base |= std::uint64_t{1} << cl.b.var;
    const std::uint64_t free_mask =
        full & ~((std::uint64_t{1} << cl.a.var) | (std::uint64_t{1} << cl.b.var));
    std::uint64_t sub = 0;
    while (true) {
      ++viol[base | sub];
      if (sub == free_mask) break;
      sub = (sub - free_mask) & free_mask;  // next submask of free_mask
    }
  }
  return viol;
}

struct TwoSatGenStats {
  std::uint64_t attempts = 0;       // search moves consumed
  std::uint64_t first_excited = 0;  // assignments violating exactly one clause
};

namespace detail {

// Per-assignment violated-clause counts with running tallies of the zero-
// and one-violation populations; clause swaps update only the two affected
// subcubes.
class ViolationCounts {
 public:
  explicit ViolationCounts(int n)
      : n_(n), viol_(std::size_t{1} << n, 0), n0_(std::uint64_t{1} << n) {}

  std::uint64_t satisfying() const { return n0_; }
  std::uint64_t one_violation() const { return n1_; }

  void add(const Clause& cl) { apply<+1>(cl); }
  void remove(const Clause& cl) { apply<-1>(cl); }

 private:
  template <int Dir>
  void apply(const Clause& cl) {
    const std::uint64_t full = (std::uint64_t{1} << n_) - 1;
    std::uint64_t base = 0;
    if (cl.a.negated) base |= std::uint64_t{1} << cl.a.var;
    if (cl.b.negated) base |= std::uint64_t{1} << cl.b.var;
    const std::uint64_t free_mask =
        full & ~((std::uint64_t{1} << cl.a.var) | (std::uint64_t{1} << cl.b.var));
    std::uint64_t sub = 0;
    while (true) {
      std::uint16_t& v = viol_[base | sub];
      if constexpr (Dir > 0) {
        if (v == 0) {
          --n0_;
          ++n1_;
        } else if (v == 1) {
          --n1_;
        }
        ++v;
      } else {
        if (v == 1) {
          --n1_;
          ++n0_;
        } else if (v == 2) {
          ++n1_;
        }
        --v;
      }
      if (sub == free_mask) break;
      sub = (sub - free_mask) & free_mask;
    }
  }

  int n_;
  std::vector<std::uint16_t> viol_;
  std::uint64_t n0_ = 0, n1_ = 0;
};

// Running coupling/field magnitudes of the penalty encoding; a clause swap
// touches one pair and two fields.
class CoefficientTracker {
 public:
  explicit CoefficientTracker(int n)
      : n_(n), j_(static_cast<std::size_t>(n) * n, 0), h_(static_cast<std::size_t>(n), 0) {}

  void add(const Clause& cl, int sign) {
    const int sa = cl.a.negated ? -1 : 1;
    const int sb = cl.b.negated ? -1 : 1;
    int lo = std::min(cl.a.var, cl.b.var), hi = std::max(cl.a.var, cl.b.var);
    j_[static_cast<std::size_t>(lo) * n_ + hi] += sign * sa * sb;
    h_[static_cast<std::size_t>(cl.a.var)] += sign * sa;
    h_[static_cast<std::size_t>(cl.b.var)] += sign * sb;
  }

  bool within_bounds(const Clause& cl) const {
    int lo = std::min(cl.a.var, cl.b.var), hi = std::max(cl.a.var, cl.b.var);
    return std::abs(j_[static_cast<std::size_t>(lo) * n_ + hi]) <= 2 &&
           std::abs(h_[static_cast<std::size_t>(cl.a.var)]) <= 2 &&
           std::abs(h_[static_cast<std::size_t>(cl.b.var)]) <= 2;
  }

 private:
  int n_;
  std::vector<int> j_;
  std::vector<int> h_;
};

inline Clause random_clause(SplitMix64& rng, int n) {
  int a = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
  int b = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n - 1)));
  if (b >= a) ++b;
  bool na = rng.coin();
  bool nb = rng.coin();
  return Clause{Literal{a, na}, Literal{b, nb}};
}

}  // namespace detail

/// Searches for an instance with (a) exactly one satisfying assignment,
/// (b) at least min_degeneracy assignments violating exactly one clause, and
/// (c) all induced couplings and fields in [-2, 2]. Uniform clause sets are
/// far too unlikely to satisfy (a) beyond n ~ 12, so the generator runs a
/// Metropolis walk over clause sets (single-clause replacement moves; score
/// drives the satisfying count to one, then rewards first-excited
/// degeneracy) and verifies every condition exhaustively before returning.
/// One move is one attempt; the walk is a pure function of the seed, and a
/// larger attempt budget only lengthens the search, never changes its path.
inline TwoSatInstance gen_2sat(int n, int m, GeneratorSeed seed, std::uint64_t min_degeneracy = 1,
                               std::uint64_t max_attempts = 1000000,
                               TwoSatGenStats* stats = nullptr) {
  if (n < 3) throw SizeError("gen_2sat requires n >= 3");
  if (n > 24) throw SizeError("gen_2sat requires n <= 24 (exhaustive uniqueness filter)");
  if (m < 1) throw SizeError("gen_2sat requires m >= 1");
  if (m > 0xFFFF) throw SizeError("gen_2sat requires m <= 65535");

  SplitMix64 rng(seed);

  TwoSatInstance inst;
  inst.n = n;
  detail::CoefficientTracker coeff(n);
  // Initial state: redraw whole clause sets until the coefficient bound holds.
  for (bool ok = false; !ok;) {
    inst.clauses.clear();
    detail::CoefficientTracker fresh(n);
    ok = true;
    for (int c = 0; c < m; ++c) {
      Clause cl = detail::random_clause(rng, n);
      fresh.add(cl, +1);
      if (!fresh.within_bounds(cl)) ok = false;
      inst.clauses.push_back(cl);
    }
    if (ok) coeff = fresh;
  }

  detail::ViolationCounts table(n);
  for (const auto& cl : inst.clauses) table.add(cl);

  const double big = 3.0 * static_cast<double>(std::uint64_t{1} << n);
  auto score = [&]() {
    double s_term =
        table.satisfying() == 0 ? 3.0 : static_cast<double>(table.satisfying() - 1);
    double d_term = table.satisfying() == 1 ? static_cast<double>(table.one_violation()) : 0.0;
    return s_term * big - d_term;
  };

  // Cooling completes after a fixed number of moves so that the trajectory
  // does not depend on max_attempts.
  constexpr double kBetaStart = 2e-6, kBetaEnd = 0.05;
  constexpr double kRampMoves = 300000.0;

  double current = score();
  for (std::uint64_t move = 0; move <= max_attempts; ++move) {
    if (table.satisfying() == 1 && table.one_violation() >= min_degeneracy) {
      if (stats) {
        stats->attempts = move;
        stats->first_excited = table.one_violation();
      }
      return inst;
    }
    if (move == max_attempts) break;

    const double beta =
        kBetaStart + (kBetaEnd - kBetaStart) * std::min(1.0, static_cast<double>(move) / kRampMoves);
    const int idx = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(m)));
    const Clause old_cl = inst.clauses[static_cast<std::size_t>(idx)];
    const Clause new_cl = detail::random_clause(rng, n);

    coeff.add(old_cl, -1);
    coeff.add(new_cl, +1);
    if (!coeff.within_bounds(new_cl)) {
      coeff.add(new_cl, -1);
      coeff.add(old_cl, +1);
      continue;
    }
    inst.clauses[static_cast<std::size_t>(idx)] = new_cl;
    table.remove(old_cl);
    table.add(new_cl);

    const double candidate = score();
    const bool accept =
        candidate <= current || rng.uniform01() < std::exp(-beta * (candidate - current));
    if (accept) {
      current = candidate;
    } else {
      table.remove(new_cl);
      table.add(old_cl);
      inst.clauses[static_cast<std::size_t>(idx)] = old_cl;
      coeff.add(new_cl, -1);
      coeff.add(old_cl, +1);
    }
  }
  throw GenerationError("gen_2sat exhausted " + std::to_string(max_attempts) + " attempts",
                        max_attempts);
}

}  // namespace qubo
