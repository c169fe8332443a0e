// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qubo/anneal.hpp"
#include "qubo/enumerate.hpp"
#include "qubo/errors.hpp"
#include "qubo/model.hpp"

namespace qubo {

/// Sorted (value, count) pairs; values differing by at most the collapse
/// tolerance share an entry keyed by the smallest member.
struct Histogram {
  std::vector<std::pair<double, std::uint64_t>> entries;
  std::string source;
  std::size_t k_used = 0;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& e : entries) t += e.second;
    return t;
  }

  /// Value with the largest count (smallest value on ties).
  double mode() const {
    if (entries.empty()) throw InsufficientDataError("histogram is empty");
    std::uint64_t best = 0;
    double value = 0.0;
    for (const auto& [v, c] : entries) {
      if (c > best) {
        best = c;
        value = v;
      }
    }
    return value;
  }
};

namespace detail {

inline Histogram make_histogram(std::vector<double> values, double collapse_tol) {
  std::sort(values.begin(), values.end());
  Histogram h;
  for (double v : values) {
    if (!h.entries.empty() && v - h.entries.back().first <= collapse_tol)
      ++h.entries.back().second;
    else
      h.entries.push_back({v, 1});
  }
  return h;
}

}  // namespace detail

inline int hamming_distance(const Configuration& a, const Configuration& b) {
  if (a.n != b.n) throw DimensionError("configurations have different lengths");
  return std::popcount(a.bits ^ b.bits);
}

/// Hamming distances from the ground state (states[0]) to every other listed
/// state; total count is len(states) - 1.
inline Histogram hamming_histogram(const LowEnergySpectrum& s, const std::string& source = "") {
  if (s.states.size() < 2)
    throw InsufficientDataError("hamming_histogram needs at least two states");
  std::vector<double> d;
  d.reserve(s.states.size() - 1);
  const std::uint64_t ground = s.states.front().config;
  for (std::size_t i = 1; i < s.states.size(); ++i)
    d.push_back(static_cast<double>(std::popcount(ground ^ s.states[i].config)));
  Histogram h = detail::make_histogram(std::move(d), 0.0);
  h.source = source;
  h.k_used = s.states.size();
  return h;
}

enum class SpacingMode { distinct, consecutive };

/// Energy differences between successive levels. `distinct` collapses
/// energies equal within tol into one level first (the default; degenerate
/// levels then contribute a single spacing); `consecutive` differences all
/// successive states, including zeros inside degenerate runs.
inline Histogram level_spacings(const LowEnergySpectrum& s,
                                SpacingMode mode = SpacingMode::distinct,
                                double tol = kDefaultTol, const std::string& source = "") {
  if (s.states.size() < 2) throw InsufficientDataError("level_spacings needs at least two states");
  std::vector<double> gaps;
  if (mode == SpacingMode::distinct) {
    std::vector<double> levels;
    for (const auto& st : s.states) {
      if (levels.empty() || st.energy - levels.back() > tol) levels.push_back(st.energy);
    }
    if (levels.size() < 2)
      throw InsufficientDataError("level_spacings(distinct) needs at least two distinct levels");
    for (std::size_t i = 1; i < levels.size(); ++i) gaps.push_back(levels[i] - levels[i - 1]);
  } else {
    for (std::size_t i = 1; i < s.states.size(); ++i)
      gaps.push_back(s.states[i].energy - s.states[i - 1].energy);
  }
  Histogram h = detail::make_histogram(std::move(gaps), tol);
  // Degenerate gaps are zero up to rounding; snap the first bin.
  if (mode == SpacingMode::consecutive && !h.entries.empty() &&
      std::abs(h.entries.front().first) <= tol)
    h.entries.front().first = 0.0;
  h.source = source;
  h.k_used = s.states.size();
  return h;
}

/// Energy span of the listed states: states[last] - states[0].
inline double spectrum_spread(const LowEnergySpectrum& s) {
  if (s.states.size() < 2) throw InsufficientDataError("spectrum_spread needs at least two states");
  return s.states.back().energy - s.states.front().energy;
}

struct SuccessSummary {
  ProblemClass class_label = ProblemClass::OTHER;
  int n = 0;
  double mean = 0.0;
  double variance = 0.0;  // population variance
  std::size_t instances = 0;
};

/// Mean and population variance of per-instance success probabilities,
/// grouped by (class, n). Zero-success records count toward the mean.
inline std::vector<SuccessSummary> mean_success_by_n(const std::vector<SuccessRecord>& records) {
  if (records.empty()) return {};
  std::vector<SuccessRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(), [](const SuccessRecord& a, const SuccessRecord& b) {
    if (a.class_label != b.class_label) return a.class_label < b.class_label;
    return a.n < b.n;
  });
  std::vector<SuccessSummary> out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    double sum = 0.0, sumsq = 0.0;
    while (j < sorted.size() && sorted[j].class_label == sorted[i].class_label &&
           sorted[j].n == sorted[i].n) {
      double p = sorted[j].success_probability();
      sum += p;
      sumsq += p * p;
      ++j;
    }
    const double count = static_cast<double>(j - i);
    SuccessSummary s;
    s.class_label = sorted[i].class_label;
    s.n = sorted[i].n;
    s.mean = sum / count;
    s.variance = sumsq / count - s.mean * s.mean;
    if (s.variance < 0.0) s.variance = 0.0;
    s.instances = j - i;
    out.push_back(s);
    i = j;
  }
  return out;
}

struct FitSegment {
  double n_min = 0.0;
  double n_max = 0.0;
  double intercept = 0.0;  // a in ln p = a + b n
  double exponent = 0.0;   // b
  double sse = 0.0;        // residual sum of squares in ln space
};

struct ScalingFit {
  std::vector<FitSegment> segments;
  std::optional<double> crossover_n;
};

struct CrossoverSpec {
  enum class Mode { none, fixed, automatic } mode = Mode::none;
  double n_star = 0.0;

  static CrossoverSpec none() { return {}; }
  static CrossoverSpec fixed(double n_star) { return {Mode::fixed, n_star}; }
  static CrossoverSpec automatic() { return {Mode::automatic, 0.0}; }
};

namespace detail {

struct LnPoint {
  double n, lnp;
};

inline FitSegment ols_segment(const std::vector<LnPoint>& pts, std::size_t lo, std::size_t hi) {
  const std::size_t count = hi - lo;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    sx += pts[i].n;
    sy += pts[i].lnp;
  }
  const double mx = sx / static_cast<double>(count);
  const double my = sy / static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    sxx += (pts[i].n - mx) * (pts[i].n - mx);
    sxy += (pts[i].n - mx) * (pts[i].lnp - my);
  }
  if (sxx == 0.0) throw FitError("all points share the same n; slope is undefined", count);
  FitSegment seg;
  seg.exponent = sxy / sxx;
  seg.intercept = my - seg.exponent * mx;
  seg.n_min = pts[lo].n;
  seg.n_max = pts[hi - 1].n;
  for (std::size_t i = lo; i < hi; ++i) {
    const double r = pts[i].lnp - (seg.intercept + seg.exponent * pts[i].n);
    seg.sse += r * r;
  }
  return seg;
}

}  // namespace detail

/// Least-squares fit of ln p against n, optionally in two segments. Points
/// with p <= 0 are excluded before fitting. Automatic crossover scans all
/// interior splits with at least three points per side and minimizes the
/// total SSE; the crossover is reported as the first n of the right segment.
inline ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points,
                              CrossoverSpec crossover = CrossoverSpec::none()) {
  std::vector<detail::LnPoint> pts;
  for (const auto& [n, p] : points)
    if (p > 0.0) pts.push_back({n, std::log(p)});
  std::sort(pts.begin(), pts.end(),
            [](const detail::LnPoint& a, const detail::LnPoint& b) { return a.n < b.n; });

  using Mode = CrossoverSpec::Mode;
  ScalingFit fit;
  if (crossover.mode == Mode::none) {
    if (pts.size() < 2)
      throw FitError("need at least 2 points with positive probability, have " +
                         std::to_string(pts.size()),
                     pts.size());
    fit.segments.push_back(detail::ols_segment(pts, 0, pts.size()));
    return fit;
  }

  if (crossover.mode == Mode::fixed) {
    std::size_t split = 0;
    while (split < pts.size() && pts[split].n <= crossover.n_star) ++split;
    if (split < 2 || pts.size() - split < 2)
      throw FitError("fixed crossover leaves a segment with fewer than 2 points", pts.size());
    fit.segments.push_back(detail::ols_segment(pts, 0, split));
    fit.segments.push_back(detail::ols_segment(pts, split, pts.size()));
    fit.crossover_n = pts[split].n;
    return fit;
  }

  constexpr std::size_t kMinSide = 3;
  if (pts.size() < 2 * kMinSide)
    throw FitError("automatic crossover needs at least " + std::to_string(2 * kMinSide) +
                       " positive points, have " + std::to_string(pts.size()),
                   pts.size());
  double best_sse = std::numeric_limits<double>::infinity();
  std::size_t best_split = 0;
  for (std::size_t split = kMinSide; split + kMinSide <= pts.size(); ++split) {
    auto left = detail::ols_segment(pts, 0, split);
    auto right = detail::ols_segment(pts, split, pts.size());
    const double sse = left.sse + right.sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_split = split;
    }
  }
  fit.segments.push_back(detail::ols_segment(pts, 0, best_split));
  fit.segments.push_back(detail::ols_segment(pts, best_split, pts.size()));
  fit.crossover_n = pts[best_split].n;
  return fit;
}

}  // namespace qubo
