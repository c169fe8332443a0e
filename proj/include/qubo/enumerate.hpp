// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <mutex>
#include <queue>
#include <string>
#include <thread>
#include <vector>

#include "qubo/errors.hpp"
#include "qubo/model.hpp"

namespace qubo {

/// Half-open block [start, end) of configuration encodings.
struct EnumRange {
  std::uint64_t start = 0;
  std::uint64_t end = 0;
};

struct SpectrumState {
  double energy = 0.0;
  std::uint64_t config = 0;

  friend bool operator<(const SpectrumState& a, const SpectrumState& b) {
    return a.energy != b.energy ? a.energy < b.energy : a.config < b.config;
  }
  friend bool operator==(const SpectrumState& a, const SpectrumState& b) {
    return a.energy == b.energy && a.config == b.config;
  }
};

/// The k lowest-energy states of a (partial) enumeration plus global extremes.
/// States are sorted by (energy, encoding); degeneracy counts every
/// configuration within tolerance of min_cost.
struct LowEnergySpectrum {
  int n = 0;
  std::size_t k_requested = 0;
  std::vector<SpectrumState> states;

  double min_cost = std::numeric_limits<double>::infinity();
  double next_lowest_cost = std::numeric_limits<double>::infinity();
  double max_cost = -std::numeric_limits<double>::infinity();
  std::uint64_t min_config = 0;
  std::uint64_t max_config = 0;
  std::uint64_t ground_degeneracy = 0;
  std::uint64_t total_enumerated = 0;

  Configuration ground() const { return Configuration(min_config, n); }
};

struct SolveOptions {
  std::size_t k = 6037;
  unsigned workers = 0;    // 0 = hardware concurrency
  int guard_n = 40;        // refuse full solves beyond this size unless forced
  bool force = false;
  double tol = kDefaultTol;

  /// Called roughly every progress_interval visits with (visited, best-so-far).
  /// Must be thread-safe; 0 disables reporting.
  std::function<void(std::uint64_t visited, double current_min)> progress;
  std::uint64_t progress_interval = 0;

  /// Cooperative cancellation, polled at least every 2^16 visits.
  const std::atomic<bool>* stop = nullptr;
};

/// n(n-1) 2^n, the enumeration cost model.
inline unsigned __int128 predicted_ops(int n) {
  if (n < 2) throw SizeError("predicted_ops requires n >= 2");
  unsigned __int128 ops = static_cast<unsigned __int128>(n) * (n - 1);
  return ops << n;
}

inline std::string u128_to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

struct ElapsedPrediction {
  double seconds = 0.0;
  double s_ref = 0.0;  // op-count ratio scaled by the unit-count ratio
};

/// Scaling predictor: s_ref = [n(n-1)2^n / (ref_n(ref_n-1)2^ref_n)] * (ref_units/units),
/// seconds = ref_time_s * s_ref.
inline ElapsedPrediction predict_elapsed(int n, std::uint64_t units, double ref_time_s = 1562.0,
                                         int ref_n = 44, std::uint64_t ref_units = 4) {
  if (n < 2 || ref_n < 2 || units < 1 || ref_units < 1)
    throw SizeError("predict_elapsed requires n, ref_n >= 2 and unit counts >= 1");
  double op_ratio = (static_cast<double>(n) * (n - 1)) /
                    (static_cast<double>(ref_n) * (ref_n - 1)) * std::exp2(n - ref_n);
  double s_ref = op_ratio * (static_cast<double>(ref_units) / static_cast<double>(units));
  return ElapsedPrediction{ref_time_s * s_ref, s_ref};
}

/// Splits [0, 2^n) into `workers` disjoint ranges whose sizes differ by at
/// most one. More workers than configurations collapses to 2^n ranges.
inline std::vector<EnumRange> partition_range(int n, std::uint64_t workers) {
  if (n < 1 || n > 63) throw SizeError("partition_range requires 1 <= n <= 63");
  if (workers < 1) throw SizeError("workers must be >= 1");
  const std::uint64_t total = std::uint64_t{1} << n;
  workers = std::min(workers, total);
  std::vector<EnumRange> ranges;
  ranges.reserve(workers);
  const std::uint64_t base = total / workers;
  const std::uint64_t rem = total % workers;
  std::uint64_t cursor = 0;
  for (std::uint64_t w = 0; w < workers; ++w) {
    std::uint64_t len = base + (w < rem ? 1 : 0);
    ranges.push_back(EnumRange{cursor, cursor + len});
    cursor += len;
  }
  return ranges;
}

namespace detail {

// Dense mirror of a QuboProblem for the scan loop: symmetric off-diagonal
// matrix with a zeroed diagonal, plus the diagonal as a separate vector.
struct DenseQubo {
  int n;
  std::vector<double> offdiag;  // n*n row-major, diag entries 0
  std::vector<double> diag;

  explicit DenseQubo(const QuboProblem& p) : n(p.n()) {
    offdiag.assign(static_cast<std::size_t>(n) * n, 0.0);
    diag.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      diag[static_cast<std::size_t>(i)] = p.q(i, i);
      for (int j = 0; j < n; ++j)
        if (j != i) offdiag[static_cast<std::size_t>(i) * n + j] = p.q(i, j);
    }
  }

  // Identical accumulation order to qubo_cost(p, bits): bit-identical result.
  double exact_cost(std::uint64_t bits) const {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!((bits >> i) & 1u)) continue;
      acc += diag[static_cast<std::size_t>(i)];
      const double* row = offdiag.data() + static_cast<std::size_t>(i) * n;
      for (int j = i + 1; j < n; ++j)
        if ((bits >> j) & 1u) acc += row[j];
    }
    return acc;
  }

  // Cost change of flipping bit b of x (sign chosen by the new bit value).
  double flip_delta(std::uint64_t bits, int b) const {
    const double* row = offdiag.data() + static_cast<std::size_t>(b) * n;
    double s = diag[static_cast<std::size_t>(b)];
    for (int j = 0; j < n; ++j) s += row[j] * static_cast<double>((bits >> j) & 1u);
    return ((bits >> b) & 1u) ? s : -s;  // bit already flipped in `bits`
  }
};

inline std::uint64_t gray(std::uint64_t t) { return t ^ (t >> 1); }

// Bounded selection of the k smallest (energy, config) pairs. The heap keeps
// the current worst on top; all stored energies are exact re-evaluations.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) {}

  bool maybe_needs(double approx_energy, double margin) const {
    return k_ > 0 && (heap_.size() < k_ || approx_energy <= heap_.top().energy + margin);
  }

  void offer(SpectrumState s) {
    if (k_ == 0) return;
    if (heap_.size() < k_) {
      heap_.push(s);
    } else if (s < heap_.top()) {
      heap_.pop();
      heap_.push(s);
    }
  }

  std::vector<SpectrumState> sorted() && {
    std::vector<SpectrumState> out;
    out.reserve(heap_.size());
    while (!heap_.empty()) {
      out.push_back(heap_.top());
      heap_.pop();
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  std::size_t k_;
  std::priority_queue<SpectrumState> heap_;  // max-heap via operator<
};

// Exact bookkeeping of min/next/max/degeneracy. Fed only exact energies.
// The ground band is every energy within tol of the smallest one; the
// reported ground state is the smallest encoding inside the band.
struct Extremes {
  double tol;
  double min = std::numeric_limits<double>::infinity();
  double next = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  std::uint64_t min_config = 0;
  std::uint64_t max_config = 0;
  std::uint64_t degeneracy = 0;

  explicit Extremes(double tol) : tol(tol) {}

  void offer_low(double e, std::uint64_t c) {
    if (e < min - tol) {
      if (degeneracy > 0) next = std::min(next, min);
      min = e;
      min_config = c;
      degeneracy = 1;
    } else if (e <= min + tol) {
      ++degeneracy;
      if (e < min) min = e;
      if (c < min_config) min_config = c;
    } else {
      next = std::min(next, e);
    }
  }

  void offer_high(double e, std::uint64_t c) {
    if (e > max || (e == max && c < max_config)) {
      max = e;
      max_config = c;
    }
  }
};

}  // namespace detail

/// Visits every encoding in [r.start, r.end) once, walking the Gray-code
/// order of the range and updating the cost incrementally (one bit flip per
/// step, O(n) per delta). States that may enter the result are re-evaluated
/// with the canonical fixed-order sum, so the outcome is independent of the
/// walk and of range boundaries.
inline LowEnergySpectrum scan_range(const QuboProblem& p, const EnumRange& r, std::size_t k,
                                    const SolveOptions& opts = {}) {
  const int n = p.n();
  if (n > 63) throw SizeError("enumeration supports n <= 63");
  const std::uint64_t total = std::uint64_t{1} << n;
  if (r.start >= r.end || r.end > total) throw SizeError("invalid enumeration range");

  const detail::DenseQubo dense(p);
  detail::TopK topk(k);
  detail::Extremes ext(opts.tol);

  std::uint64_t x = detail::gray(r.start);
  double e_inc = dense.exact_cost(x);

  constexpr std::uint64_t kCheckMask = (1u << 16) - 1;
  std::uint64_t next_progress =
      opts.progress_interval ? opts.progress_interval : std::numeric_limits<std::uint64_t>::max();

  for (std::uint64_t t = r.start;; ++t) {
    const std::uint64_t visited = t - r.start;
    if ((visited & kCheckMask) == 0 && visited != 0) {
      if (opts.stop && opts.stop->load(std::memory_order_relaxed))
        throw CancelledError("enumeration cancelled");
      e_inc = dense.exact_cost(x);  // re-anchor accumulated drift
      if (visited >= next_progress && opts.progress) {
        opts.progress(visited, ext.min);
        next_progress += opts.progress_interval;
      }
    }

    // Guard band: e_inc may drift from the exact cost by rounding only, so a
    // comfortable margin cannot reject a true candidate.
    const double guard = 1e-6 * (1.0 + std::abs(e_inc));
    bool have_exact = false;
    double e_exact = 0.0;

    if (topk.maybe_needs(e_inc, guard)) {
      e_exact = dense.exact_cost(x);
      have_exact = true;
      topk.offer(SpectrumState{e_exact, x});
    }
    if (e_inc <= ext.next + ext.tol + guard) {
      if (!have_exact) {
        e_exact = dense.exact_cost(x);
        have_exact = true;
      }
      ext.offer_low(e_exact, x);
    }
    if (e_inc >= ext.max - guard) {
      if (!have_exact) {
        e_exact = dense.exact_cost(x);
        have_exact = true;
      }
      ext.offer_high(e_exact, x);
    }

    if (t + 1 == r.end) break;
    const int b = std::countr_zero(t + 1);
    x ^= std::uint64_t{1} << b;
    e_inc += dense.flip_delta(x, b);
  }

  LowEnergySpectrum out;
  out.n = n;
  out.k_requested = k;
  out.states = std::move(topk).sorted();
  out.min_cost = ext.min;
  out.next_lowest_cost = ext.next;
  out.max_cost = ext.max;
  out.min_config = ext.min_config;
  out.max_config = ext.max_config;
  out.ground_degeneracy = ext.degeneracy;
  out.total_enumerated = r.end - r.start;
  return out;
}

/// Associative, commutative combination of two partial spectra (same problem,
/// same capacity). Degeneracies add when the minima agree within tolerance.
inline LowEnergySpectrum merge_spectra(const LowEnergySpectrum& a, const LowEnergySpectrum& b,
                                       double tol = kDefaultTol) {
  if (a.k_requested != b.k_requested)
    throw MergeError("cannot merge spectra with different capacities");
  if (a.total_enumerated == 0) return b;
  if (b.total_enumerated == 0) return a;
  if (a.n != b.n) throw MergeError("cannot merge spectra of different sizes");

  LowEnergySpectrum out;
  out.n = a.n;
  out.k_requested = a.k_requested;
  out.total_enumerated = a.total_enumerated + b.total_enumerated;

  out.states.reserve(std::min(a.k_requested, a.states.size() + b.states.size()));
  std::merge(a.states.begin(), a.states.end(), b.states.begin(), b.states.end(),
             std::back_inserter(out.states));
  if (out.states.size() > out.k_requested) out.states.resize(out.k_requested);

  if (std::abs(a.min_cost - b.min_cost) <= tol) {
    out.min_cost = std::min(a.min_cost, b.min_cost);
    out.min_config = std::min(a.min_config, b.min_config);
    out.ground_degeneracy = a.ground_degeneracy + b.ground_degeneracy;
    out.next_lowest_cost = std::min(a.next_lowest_cost, b.next_lowest_cost);
  } else {
    const LowEnergySpectrum* lo = a.min_cost < b.min_cost ? &a : &b;
    const LowEnergySpectrum* hi = a.min_cost < b.min_cost ? &b : &a;
    out.min_cost = lo->min_cost;
    out.min_config = lo->min_config;
    out.ground_degeneracy = lo->ground_degeneracy;
    out.next_lowest_cost =
        std::min({lo->next_lowest_cost, hi->min_cost, hi->next_lowest_cost});
  }

  if (a.max_cost > b.max_cost || (a.max_cost == b.max_cost && a.max_config < b.max_config)) {
    out.max_cost = a.max_cost;
    out.max_config = a.max_config;
  } else {
    out.max_cost = b.max_cost;
    out.max_config = b.max_config;
  }
  return out;
}

/// Full enumeration: partition, scan ranges concurrently, merge in range
/// order. The result is identical for any worker count.
inline LowEnergySpectrum solve_exact(const QuboProblem& p, std::size_t k = 6037,
                                     const SolveOptions& opts = {}) {
  const int n = p.n();
  if (n > 63) throw SizeError("exact enumeration supports n <= 63");
  if (n > opts.guard_n && !opts.force) {
    throw ResourceGuardError(
        "refusing full enumeration of n=" + std::to_string(n) + " (guard at n=" +
        std::to_string(opts.guard_n) + "); predicted op count " +
        u128_to_string(predicted_ops(n)) + " - pass force/QUBO_MAX_N to override");
  }

  unsigned workers = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  auto ranges = partition_range(n, workers);

  SolveOptions scan_opts = opts;
  scan_opts.k = k;
  scan_opts.progress = nullptr;

  // Progress is aggregated across workers and reported under a lock.
  std::mutex progress_mutex;
  std::atomic<std::uint64_t> visited_total{0};

  std::vector<std::future<LowEnergySpectrum>> futures;
  futures.reserve(ranges.size());
  for (const auto& r : ranges) {
    futures.push_back(std::async(std::launch::async, [&, r]() {
      SolveOptions local = scan_opts;
      auto last_seen = std::make_shared<std::uint64_t>(0);
      if (opts.progress && opts.progress_interval) {
        local.progress = [&, last_seen](std::uint64_t visited, double current_min) {
          visited_total.fetch_add(visited - *last_seen, std::memory_order_relaxed);
          *last_seen = visited;
          std::lock_guard<std::mutex> lock(progress_mutex);
          opts.progress(visited_total.load(std::memory_order_relaxed), current_min);
        };
      }
      auto part = scan_range(p, r, k, local);
      visited_total.fetch_add(part.total_enumerated - *last_seen, std::memory_order_relaxed);
      return part;
    }));
  }

  LowEnergySpectrum result;
  result.k_requested = k;
  std::exception_ptr first_error;
  for (auto& f : futures) {
    try {
      auto part = f.get();
      if (!first_error) result = merge_spectra(result, part, opts.tol);
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return result;
}

}  // namespace qubo
