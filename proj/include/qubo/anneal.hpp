// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qubo/errors.hpp"
#include "qubo/model.hpp"
#include "qubo/rng.hpp"

namespace qubo {

struct AnnealParams {
  int sweeps = 1000;
  double beta_start = 0.1;
  double beta_end = 10.0;
  int restarts = 1000;

  void validate() const {
    if (sweeps < 1) throw SizeError("sweeps must be >= 1");
    if (!(beta_start > 0.0) || beta_end < beta_start)
      throw SizeError("need 0 < beta_start <= beta_end");
    if (restarts < 1) throw SizeError("restarts must be >= 1");
  }
};

enum class ProblemClass { REG, RAN, TWOSAT, OTHER };

inline std::string to_string(ProblemClass c) {
  switch (c) {
    case ProblemClass::REG: return "REG";
    case ProblemClass::RAN: return "RAN";
    case ProblemClass::TWOSAT: return "2SAT";
    default: return "OTHER";
  }
}

inline ProblemClass problem_class_from_string(const std::string& s) {
  if (s == "REG" || s == "reg") return ProblemClass::REG;
  if (s == "RAN" || s == "ran") return ProblemClass::RAN;
  if (s == "2SAT" || s == "2sat" || s == "TWOSAT") return ProblemClass::TWOSAT;
  return ProblemClass::OTHER;
}

/// Outcome of repeated anneals against a known target energy.
struct SuccessRecord {
  ProblemClass class_label = ProblemClass::OTHER;
  int n = 0;
  std::string instance_id;
  std::uint64_t samples = 0;
  std::uint64_t successes = 0;

  double success_probability() const {
    return samples ? static_cast<double>(successes) / static_cast<double>(samples) : 0.0;
  }
};

struct AnnealResult {
  Configuration best_config;
  double best_energy = 0.0;  // ising energy (offset not included)
};

namespace detail {

struct DenseIsing {
  int n;
  std::vector<double> j;  // n*n symmetric, zero diagonal
  std::vector<double> h;

  explicit DenseIsing(const IsingModel& m) : n(m.n()), h(m.fields()) {
    j.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (const auto& [ij, v] : m.couplings()) {
      j[static_cast<std::size_t>(ij.first) * n + ij.second] = v;
      j[static_cast<std::size_t>(ij.second) * n + ij.first] = v;
    }
  }

  double flip_delta(const std::vector<double>& s, int i) const {
    const double* row = j.data() + static_cast<std::size_t>(i) * n;
    double acc = h[static_cast<std::size_t>(i)];
    for (int k = 0; k < n; ++k) acc += row[k] * s[static_cast<std::size_t>(k)];
    return -2.0 * s[static_cast<std::size_t>(i)] * acc;
  }
};

// Metropolis single-spin-flip annealing from an explicit start state. One
// sweep proposes flips of spins 0..n-1 in order; beta is interpolated
// linearly in the sweep index. The observer sees the running energy after
// every proposal.
template <class Observer>
AnnealResult anneal_core(const DenseIsing& dense, const IsingModel& m, const AnnealParams& params,
                         std::vector<double> spins, SplitMix64& rng, Observer&& observe) {
  const int n = dense.n;
  double energy = 0.0;
  for (const auto& [ij, v] : m.couplings())
    energy += v * spins[static_cast<std::size_t>(ij.first)] * spins[static_cast<std::size_t>(ij.second)];
  for (int i = 0; i < n; ++i) energy += dense.h[static_cast<std::size_t>(i)] * spins[static_cast<std::size_t>(i)];

  auto to_bits = [&](const std::vector<double>& s) {
    std::uint64_t bits = 0;
    for (int i = 0; i < n; ++i)
      if (s[static_cast<std::size_t>(i)] < 0.0) bits |= std::uint64_t{1} << i;
    return bits;
  };

  double best_energy = energy;
  std::uint64_t best_bits = to_bits(spins);

  for (int sweep = 0; sweep < params.sweeps; ++sweep) {
    const double beta =
        params.sweeps == 1
            ? params.beta_start
            : params.beta_start + (params.beta_end - params.beta_start) *
                                      (static_cast<double>(sweep) / (params.sweeps - 1));
    for (int i = 0; i < n; ++i) {
      const double d = dense.flip_delta(spins, i);
      bool accept = d <= 0.0 || rng.uniform01() < std::exp(-beta * d);
      if (accept) {
        spins[static_cast<std::size_t>(i)] = -spins[static_cast<std::size_t>(i)];
        energy += d;
        if (energy < best_energy) {
          best_energy = energy;
          best_bits = to_bits(spins);
        }
      }
      observe(energy);
    }
  }

  Configuration best(best_bits, n);
  // Report the canonical energy of the best state, not the drifting accumulator.
  return AnnealResult{best, ising_energy(m, best)};
}

}  // namespace detail

/// One annealing run from the given start state, consuming acceptance draws
/// from `seed`'s stream. Returns the best state ever visited.
inline AnnealResult anneal_once_from(const IsingModel& m, const AnnealParams& params,
                                     const Configuration& start, GeneratorSeed seed) {
  params.validate();
  if (start.n != m.n()) throw DimensionError("start configuration does not match model size");
  detail::DenseIsing dense(m);
  SplitMix64 rng(seed);
  std::vector<double> spins(static_cast<std::size_t>(m.n()));
  for (int i = 0; i < m.n(); ++i)
    spins[static_cast<std::size_t>(i)] = start.bit(i) ? -1.0 : 1.0;
  return detail::anneal_core(dense, m, params, std::move(spins), rng, [](double) {});
}

/// One annealing run from a uniformly random start state drawn from `seed`.
inline AnnealResult anneal_once(const IsingModel& m, const AnnealParams& params,
                                GeneratorSeed seed) {
  params.validate();
  detail::DenseIsing dense(m);
  SplitMix64 rng(seed);
  std::vector<double> spins(static_cast<std::size_t>(m.n()));
  for (int i = 0; i < m.n(); ++i) spins[static_cast<std::size_t>(i)] = rng.coin() ? -1.0 : 1.0;
  return detail::anneal_core(dense, m, params, std::move(spins), rng, [](double) {});
}

/// Runs params.restarts independent anneals (restart r uses seed.derived(r))
/// and counts how many reach target_energy within tolerance.
inline SuccessRecord estimate_success(const IsingModel& m, double target_energy,
                                      const AnnealParams& params, GeneratorSeed seed,
                                      ProblemClass class_label = ProblemClass::OTHER,
                                      const std::string& instance_id = "", double tol = kDefaultTol) {
  params.validate();
  SuccessRecord rec;
  rec.class_label = class_label;
  rec.n = m.n();
  rec.instance_id = instance_id;
  rec.samples = static_cast<std::uint64_t>(params.restarts);
  for (int r = 0; r < params.restarts; ++r) {
    auto res = anneal_once(m, params, seed.derived(static_cast<std::uint64_t>(r)));
    if (res.best_energy <= target_energy + tol) ++rec.successes;
  }
  return rec;
}

}  // namespace qubo
