// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "qubo/errors.hpp"
#include "qubo/model.hpp"
#include "qubo/rng.hpp"

namespace qubo {

/// Regular fully-connected model: J_ij = 1 - (i+j)/(n-1) and
/// h_i = 1 - 2i/(n-1) in 0-based indices. Couplings that evaluate to zero
/// (pairs with i + j = n - 1, 0-based) are structural zeros and not stored.
inline IsingModel gen_reg(int n) {
  if (n < 2) throw SizeError("gen_reg requires n >= 2");
  IsingModel m(n);
  const double d = static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    m.set_field(i, 1.0 - 2.0 * i / d);
    for (int j = i + 1; j < n; ++j) {
      double v = 1.0 - static_cast<double>(i + j) / d;
      if (i + j != n - 1) m.set_coupling(i, j, v);
    }
  }
  return m;
}

/// Fully-connected random model: every J_ij (i<j, row-major order) then every
/// h_i drawn uniformly from [-1, 1]. Exact zero draws are kept as entries.
inline IsingModel gen_ran(int n, GeneratorSeed seed) {
  if (n < 2) throw SizeError("gen_ran requires n >= 2");
  IsingModel m(n);
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m.set_coupling(i, j, rng.uniform_pm1());
  for (int i = 0; i < n; ++i) m.set_field(i, rng.uniform_pm1());
  return m;
}

/// Prefix assignment x_0..x_{k-1} = 1 conjectured to be the REG ground state.
struct RegSolution {
  int k = 0;
  Configuration configuration;
  double cost = 0.0;        // QUBO cost of the prefix configuration
  double closed_form = 0.0; // k(n-k)(n-2k+2)/(n-1); empirically cost == -closed_form
};

/// Evaluates the QUBO cost of all n+1 prefix configurations of gen_reg(n) and
/// returns the cheapest (ties to the smallest k). The closed-form value is
/// reported as metadata only; its sign is checked in tests, not assumed.
inline RegSolution reg_conjectured_solution(int n) {
  IsingModel reg = gen_reg(n);
  QuboProblem p = ising_to_qubo(reg);
  RegSolution best;
  bool first = true;
  for (int k = 0; k <= n; ++k) {
    std::uint64_t bits = k == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << k) - 1);
    double cost = qubo_cost(p, bits);
    if (first || cost < best.cost) {
      first = false;
      best.k = k;
      best.configuration = Configuration(bits, n);
      best.cost = cost;
    }
  }
  best.closed_form = static_cast<double>(best.k) * (n - best.k) * (n - 2 * best.k + 2) /
                     static_cast<double>(n - 1);
  return best;
}

/// Spin-reversal transform: flips h_i for i in `flips` and J_ij when exactly
/// one endpoint is flipped. Energies are preserved under the matching spin
/// flips, so the spectrum is unchanged.
inline IsingModel gauge_transform(const IsingModel& m, const std::set<int>& flips) {
  for (int i : flips)
    if (i < 0 || i >= m.n()) throw IndexError("flip index out of range");
  IsingModel out(m.n());
  for (const auto& [ij, v] : m.couplings()) {
    bool fi = flips.count(ij.first) > 0;
    bool fj = flips.count(ij.second) > 0;
    out.set_coupling(ij.first, ij.second, fi != fj ? -v : v);
  }
  for (int i = 0; i < m.n(); ++i)
    out.set_field(i, flips.count(i) ? -m.field(i) : m.field(i));
  out.set_offset(m.offset());
  return out;
}

struct GaugeMember {
  IsingModel model;
  std::set<int> flips;
};

/// `count` independent gauge transforms of m with uniformly random flip sets.
/// Member t draws from the stream seed.derived(t).
inline std::vector<GaugeMember> random_gauge_family(const IsingModel& m, int count,
                                                    GeneratorSeed seed) {
  if (count < 1) throw SizeError("random_gauge_family requires count >= 1");
  std::vector<GaugeMember> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) {
    SplitMix64 rng(seed.derived(static_cast<std::uint64_t>(t)));
    std::set<int> flips;
    for (int i = 0; i < m.n(); ++i)
      if (rng.coin()) flips.insert(i);
    out.push_back(GaugeMember{gauge_transform(m, flips), std::move(flips)});
  }
  return out;
}

}  // namespace qubo
