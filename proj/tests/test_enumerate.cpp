// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <catch2/catch_amalgamated.hpp>

#include "qubo/enumerate.hpp"
#include "qubo/generators.hpp"
#include "qubo/rng.hpp"

using namespace qubo;

namespace {

QuboProblem random_problem(int n, SplitMix64& rng) {
  QuboProblem p(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) p.set(i, j, 5.0 * rng.uniform_pm1());
  return p;
}

// Independent oracle: evaluates every configuration with a j-major loop (a
// different accumulation path than the library's) and sorts by (energy, enc).
std::vector<SpectrumState> naive_spectrum(const QuboProblem& p) {
  const int n = p.n();
  std::vector<SpectrumState> all;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    double e = 0.0;
    for (int j = n - 1; j >= 0; --j) {
      if (!((bits >> j) & 1u)) continue;
      for (int i = j; i >= 0; --i)
        if ((bits >> i) & 1u) e += p.q(i, j);
    }
    all.push_back({e, bits});
  }
  std::stable_sort(all.begin(), all.end(), [](const SpectrumState& a, const SpectrumState& b) {
    return a.energy < b.energy;
  });
  return all;
}

// Compares two full spectra: same lengths, energies within tol, and the same
// configurations in the same tie groups.
void require_equivalent(const std::vector<SpectrumState>& got,
                        const std::vector<SpectrumState>& expected, double tol) {
  REQUIRE(got.size() == expected.size());
  std::size_t i = 0;
  while (i < got.size()) {
    std::size_t j = i;
    while (j < got.size() && std::abs(expected[j].energy - expected[i].energy) <= tol) ++j;
    std::vector<std::uint64_t> a, b;
    for (std::size_t t = i; t < j; ++t) {
      REQUIRE(std::abs(got[t].energy - expected[t].energy) <= tol);
      a.push_back(got[t].config);
      b.push_back(expected[t].config);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    REQUIRE(a == b);
    i = j;
  }
}

bool identical(const LowEnergySpectrum& a, const LowEnergySpectrum& b) {
  return a.n == b.n && a.k_requested == b.k_requested && a.states == b.states &&
         a.min_cost == b.min_cost && a.next_lowest_cost == b.next_lowest_cost &&
         a.max_cost == b.max_cost && a.min_config == b.min_config &&
         a.max_config == b.max_config && a.ground_degeneracy == b.ground_degeneracy &&
         a.total_enumerated == b.total_enumerated;
}

}  // namespace

TEST_CASE("partition_range splits evenly") {
  auto r = partition_range(3, 2);
  REQUIRE(r.size() == 2);
  CHECK(r[0].start == 0);
  CHECK(r[0].end == 4);
  CHECK(r[1].start == 4);
  CHECK(r[1].end == 8);

  auto r3 = partition_range(3, 3);
  REQUIRE(r3.size() == 3);
  CHECK(r3[0].end - r3[0].start == 3);
  CHECK(r3[1].end - r3[1].start == 3);
  CHECK(r3[2].end - r3[2].start == 2);
}

TEST_CASE("partition_range covers exactly and caps the worker count") {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + static_cast<int>(rng.bounded(20));
    std::uint64_t workers = 1 + rng.bounded(64);
    auto ranges = partition_range(n, workers);
    REQUIRE(ranges.size() == std::min<std::uint64_t>(workers, std::uint64_t{1} << n));
    std::uint64_t cursor = 0, total = 0;
    std::uint64_t lo = ~std::uint64_t{0}, hi = 0;
    for (const auto& r : ranges) {
      REQUIRE(r.start == cursor);  // contiguous and disjoint
      REQUIRE(r.end > r.start);
      cursor = r.end;
      total += r.end - r.start;
      lo = std::min(lo, r.end - r.start);
      hi = std::max(hi, r.end - r.start);
    }
    REQUIRE(total == std::uint64_t{1} << n);
    REQUIRE(hi - lo <= 1);
  }
  CHECK(partition_range(2, 100).size() == 4);
  CHECK_THROWS_AS(partition_range(0, 2), SizeError);
}

TEST_CASE("scan_range orders a tiny diagonal problem correctly") {
  QuboProblem p(2);
  p.set(0, 0, 1.0);
  p.set(1, 1, -1.0);
  auto s = scan_range(p, {0, 4}, 4);
  REQUIRE(s.states.size() == 4);
  CHECK(s.states[0].energy == -1.0);
  CHECK(s.states[0].config == 0b10);
  CHECK(s.states[1].energy == 0.0);
  CHECK(s.states[1].config == 0b00);  // tie with 0b11 broken by encoding
  CHECK(s.states[2].energy == 0.0);
  CHECK(s.states[2].config == 0b11);
  CHECK(s.states[3].energy == 1.0);
  CHECK(s.states[3].config == 0b01);
  CHECK(s.min_cost == -1.0);
  CHECK(s.next_lowest_cost == 0.0);
  CHECK(s.max_cost == 1.0);
  CHECK(s.total_enumerated == 4);
}

TEST_CASE("scan_range k=1 returns the range minimizer; k=0 extremes only") {
  SplitMix64 rng(8);
  QuboProblem p = random_problem(10, rng);
  auto full = naive_spectrum(p);
  auto s1 = scan_range(p, {0, 1024}, 1);
  REQUIRE(s1.states.size() == 1);
  CHECK(s1.states[0].energy == Catch::Approx(full[0].energy).margin(1e-9));
  auto s0 = scan_range(p, {0, 1024}, 0);
  CHECK(s0.states.empty());
  CHECK(s0.min_cost == Catch::Approx(full[0].energy).margin(1e-9));
  CHECK(s0.max_cost == Catch::Approx(full.back().energy).margin(1e-9));
}

TEST_CASE("splitting a range and merging equals scanning it whole") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 4 + static_cast<int>(rng.bounded(9));
    QuboProblem p = random_problem(n, rng);
    const std::uint64_t total = std::uint64_t{1} << n;
    const std::uint64_t cut = 1 + rng.bounded(total - 1);
    std::size_t k = 1 + rng.bounded(32);
    auto whole = scan_range(p, {0, total}, k);
    auto left = scan_range(p, {0, cut}, k);
    auto right = scan_range(p, {cut, total}, k);
    CHECK(identical(merge_spectra(left, right), whole));
    CHECK(identical(merge_spectra(right, left), whole));  // commutative
  }
}

TEST_CASE("merge_spectra identity element and capacity checks") {
  SplitMix64 rng(3);
  QuboProblem p = random_problem(6, rng);
  auto s = scan_range(p, {0, 64}, 8);
  LowEnergySpectrum empty;
  empty.k_requested = 8;
  CHECK(identical(merge_spectra(s, empty), s));
  CHECK(identical(merge_spectra(empty, s), s));
  LowEnergySpectrum wrong;
  wrong.k_requested = 4;
  CHECK_THROWS_AS(merge_spectra(s, wrong), MergeError);
}

TEST_CASE("merge of a partition equals the full scan for several worker counts") {
  SplitMix64 rng(14);
  for (int workers : {2, 3, 8}) {
    int n = 10;
    QuboProblem p = random_problem(n, rng);
    auto whole = scan_range(p, {0, 1024}, 20);
    LowEnergySpectrum acc;
    acc.k_requested = 20;
    for (const auto& r : partition_range(n, workers)) acc = merge_spectra(acc, scan_range(p, r, 20));
    CHECK(identical(acc, whole));
  }
}

TEST_CASE("solve_exact is bit-identical across worker counts and repeat runs") {
  SplitMix64 rng(31);
  QuboProblem p = random_problem(12, rng);
  SolveOptions o1;
  o1.workers = 1;
  auto base = solve_exact(p, 100, o1);
  for (unsigned w : {2u, 4u, 8u}) {
    SolveOptions ow;
    ow.workers = w;
    CHECK(identical(solve_exact(p, 100, ow), base));
  }
  CHECK(identical(solve_exact(p, 100, o1), base));
}

TEST_CASE("solve_exact matches the naive oracle on full spectra") {
  SplitMix64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + static_cast<int>(rng.bounded(10));
    QuboProblem p = random_problem(n, rng);
    SolveOptions o;
    o.workers = 1 + static_cast<unsigned>(rng.bounded(4));
    auto s = solve_exact(p, std::size_t{1} << n, o);
    auto expected = naive_spectrum(p);
    require_equivalent(s.states, expected, 1e-9);
    CHECK(s.total_enumerated == std::uint64_t{1} << n);
    CHECK(s.min_cost == s.states.front().energy);
    CHECK(s.max_cost >= s.states.back().energy);
    // next-lowest is the smallest energy beyond tolerance of the minimum
    double expect_next = std::numeric_limits<double>::infinity();
    std::uint64_t expect_deg = 0;
    for (const auto& st : expected) {
      if (st.energy <= s.min_cost + 1e-9)
        ++expect_deg;
      else
        expect_next = std::min(expect_next, st.energy);
    }
    CHECK(s.ground_degeneracy == expect_deg);
    if (std::isfinite(expect_next))
      CHECK(s.next_lowest_cost == Catch::Approx(expect_next).margin(1e-9));
  }
}

TEST_CASE("solve_exact handles degenerate problems") {
  QuboProblem p(6);  // all zero: every configuration at energy 0
  auto s = solve_exact(p, 4);
  CHECK(s.min_cost == 0.0);
  CHECK(s.max_cost == 0.0);
  CHECK(s.ground_degeneracy == 64);
  CHECK(!std::isfinite(s.next_lowest_cost));
  CHECK(s.states.size() == 4);
  CHECK(s.states[0].config == 0);  // ties resolved by encoding
  CHECK(s.states[1].config == 1);
}

TEST_CASE("resource guard refuses oversized solves unless forced") {
  QuboProblem p(12);
  SolveOptions opts;
  opts.guard_n = 10;
  CHECK_THROWS_AS(solve_exact(p, 1, opts), ResourceGuardError);
  try {
    solve_exact(p, 1, opts);
  } catch (const ResourceGuardError& e) {
    CHECK(std::string(e.what()).find(u128_to_string(predicted_ops(12))) != std::string::npos);
  }
  opts.force = true;
  CHECK_NOTHROW(solve_exact(p, 1, opts));
}

TEST_CASE("predicted_ops equals n(n-1) 2^n") {
  CHECK(u128_to_string(predicted_ops(2)) == "8");
  CHECK(u128_to_string(predicted_ops(3)) == "48");
  CHECK(predicted_ops(44) == static_cast<unsigned __int128>(1892) << 44);
  CHECK_THROWS_AS(predicted_ops(1), SizeError);

  const double ratio = static_cast<double>(predicted_ops(50)) / static_cast<double>(predicted_ops(44));
  CHECK(ratio == Catch::Approx(82.87).margin(0.01));
}

TEST_CASE("predict_elapsed reproduces the reference scaling table") {
  auto at = [](int n, std::uint64_t units) { return predict_elapsed(n, units); };
  CHECK(at(44, 4).s_ref == Catch::Approx(1.0));
  CHECK(at(44, 4).seconds == Catch::Approx(1562.0));
  CHECK(at(50, 256).s_ref == Catch::Approx(1.29).margin(0.005));
  CHECK(at(50, 256).seconds == Catch::Approx(2015.0).epsilon(0.05));
  CHECK(at(50, 512).s_ref == Catch::Approx(0.65).margin(0.005));
  CHECK(at(50, 1024).s_ref == Catch::Approx(0.32).margin(0.005));
  CHECK(at(54, 1024).s_ref == Catch::Approx(6.05).margin(0.005));
  CHECK(at(54, 1024).seconds == Catch::Approx(9451.0).epsilon(0.05));
  CHECK(at(56, 512).s_ref == Catch::Approx(52.0).margin(0.5));
}

TEST_CASE("incremental Gray-code deltas track the direct evaluation") {
  SplitMix64 rng(64);
  QuboProblem p = random_problem(12, rng);
  detail::DenseQubo dense(p);
  std::uint64_t x = 0;
  double e = dense.exact_cost(0);
  double worst = 0.0;
  for (std::uint64_t t = 0; t + 1 < (std::uint64_t{1} << 12); ++t) {
    int b = std::countr_zero(t + 1);
    x ^= std::uint64_t{1} << b;
    e += dense.flip_delta(x, b);
    worst = std::max(worst, std::abs(e - dense.exact_cost(x)));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("cancellation and progress reporting") {
  SplitMix64 rng(70);
  QuboProblem p = random_problem(18, rng);
  SECTION("pre-raised stop flag aborts the solve") {
    std::atomic<bool> stop{true};
    SolveOptions opts;
    opts.stop = &stop;
    opts.workers = 2;
    CHECK_THROWS_AS(solve_exact(p, 4, opts), CancelledError);
  }
  SECTION("progress hook fires with growing counts") {
    std::atomic<std::uint64_t> calls{0};
    std::atomic<std::uint64_t> last{0};
    SolveOptions opts;
    opts.workers = 2;
    opts.progress_interval = 1 << 16;
    opts.progress = [&](std::uint64_t visited, double) {
      ++calls;
      last = visited;
    };
    solve_exact(p, 4, opts);
    CHECK(calls.load() > 0);
    CHECK(last.load() <= (std::uint64_t{1} << 18));
  }
}
