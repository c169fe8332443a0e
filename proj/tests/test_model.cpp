// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "qubo/model.hpp"
#include "qubo/rng.hpp"

using namespace qubo;

namespace {

QuboProblem random_problem(int n, SplitMix64& rng) {
  QuboProblem p(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) p.set(i, j, 10.0 * rng.uniform_pm1());
  return p;
}

}  // namespace

TEST_CASE("bits_to_spins substitutes S = 1 - 2x") {
  CHECK(bits_to_spins(Configuration::from_bits({0, 1})) == std::vector<int>{1, -1});
  CHECK(bits_to_spins(Configuration::from_bits({0, 0, 0})) == std::vector<int>{1, 1, 1});
}

TEST_CASE("spins_to_bits inverts the substitution") {
  CHECK(spins_to_bits({1, -1}) == Configuration::from_bits({0, 1}));
  CHECK(spins_to_bits({-1, -1}) == Configuration::from_bits({1, 1}));
  CHECK_THROWS_AS(spins_to_bits({1, 0}), InvalidSpinError);
  CHECK_THROWS_AS(spins_to_bits({2, -1}), InvalidSpinError);
}

TEST_CASE("spin round-trip is the identity for every configuration up to n=10") {
  for (int n = 1; n <= 10; ++n) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      Configuration c(bits, n);
      CHECK(spins_to_bits(bits_to_spins(c)) == c);
    }
  }
}

TEST_CASE("qubo_cost on small fixed problems") {
  QuboProblem p1(1);
  p1.set(0, 0, 5.0);
  CHECK(qubo_cost(p1, Configuration::from_bits({1})) == 5.0);
  CHECK(qubo_cost(p1, Configuration::from_bits({0})) == 0.0);

  QuboProblem p2(2);
  p2.set(0, 0, 1.0);
  p2.set(0, 1, 2.0);
  p2.set(1, 1, 3.0);
  CHECK(qubo_cost(p2, Configuration::from_bits({1, 1})) == 6.0);

  CHECK_THROWS_AS(qubo_cost(p2, Configuration::from_bits({1})), DimensionError);
}

TEST_CASE("qubo_cost of the all-zeros configuration is always zero") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + static_cast<int>(rng.bounded(12));
    QuboProblem p = random_problem(n, rng);
    CHECK(qubo_cost(p, Configuration(0, n)) == 0.0);
  }
}

TEST_CASE("ising_energy on small fixed models") {
  IsingModel m(2);
  m.set_coupling(0, 1, 1.0);
  CHECK(ising_energy(m, {1, 1}) == 1.0);
  CHECK(ising_energy(m, {1, -1}) == -1.0);

  IsingModel m1(1);
  m1.set_field(0, 2.0);
  CHECK(ising_energy(m1, {-1}) == -2.0);

  CHECK_THROWS_AS(ising_energy(m, {1}), DimensionError);
  CHECK_THROWS_AS(ising_energy(m, {1, 0}), InvalidSpinError);
}

TEST_CASE("qubo_to_ising single-variable example") {
  const double q = 3.5;
  QuboProblem p(1);
  p.set(0, 0, q);
  IsingModel m = qubo_to_ising(p);
  CHECK(m.field(0) == -q / 2.0);
  CHECK(m.offset() == q / 2.0);
  for (std::uint64_t bits = 0; bits < 2; ++bits) {
    Configuration c(bits, 1);
    CHECK(qubo_cost(p, c) == Catch::Approx(ising_energy(m, c) + m.offset()));
  }
}

TEST_CASE("qubo_to_ising all-zero problem") {
  QuboProblem p(4);
  IsingModel m = qubo_to_ising(p);
  CHECK(m.couplings().empty());
  for (int i = 0; i < 4; ++i) CHECK(m.field(i) == 0.0);
  CHECK(m.offset() == 0.0);
}

TEST_CASE("qubo_to_ising two-variable example from the conversion relations") {
  QuboProblem p(2);
  p.set(0, 1, 4.0);
  IsingModel m = qubo_to_ising(p);
  CHECK(m.coupling(0, 1) == 1.0);
  CHECK(m.field(0) == -1.0);
  CHECK(m.field(1) == -1.0);
  CHECK(m.offset() == 1.0);
  for (std::uint64_t bits = 0; bits < 4; ++bits) {
    Configuration c(bits, 2);
    CHECK(qubo_cost(p, c) == Catch::Approx(ising_energy(m, c) + m.offset()).margin(1e-12));
  }
}

TEST_CASE("ising_to_qubo inverts the two-variable example") {
  IsingModel m(2);
  m.set_coupling(0, 1, 1.0);
  m.set_field(0, -1.0);
  m.set_field(1, -1.0);
  QuboProblem p = ising_to_qubo(m);
  CHECK(p.q(0, 1) == 4.0);
  CHECK(p.q(0, 0) == 0.0);
  CHECK(p.q(1, 1) == 0.0);

  IsingModel zero(3);
  QuboProblem pz = ising_to_qubo(zero);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) CHECK(pz.q(i, j) == 0.0);
}

TEST_CASE("energy identity holds for every configuration of random problems") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 1 + static_cast<int>(rng.bounded(10));
    QuboProblem p = random_problem(n, rng);
    IsingModel m = qubo_to_ising(p);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      Configuration c(bits, n);
      double cost = qubo_cost(p, c);
      double h = ising_energy(m, c) + m.offset();
      REQUIRE(std::abs(cost - h) <= 1e-9 * (1.0 + std::abs(cost)));
    }
  }
}

TEST_CASE("conversion round-trips") {
  SplitMix64 rng(91);
  SECTION("Q -> (J,h) -> Q within 1e-12 per coefficient") {
    for (int trial = 0; trial < 25; ++trial) {
      int n = 1 + static_cast<int>(rng.bounded(12));
      QuboProblem p = random_problem(n, rng);
      QuboProblem back = ising_to_qubo(qubo_to_ising(p));
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) REQUIRE(std::abs(back.q(i, j) - p.q(i, j)) <= 1e-12);
    }
  }
  SECTION("(J,h) -> Q -> (J,h) reproduces couplings and fields exactly") {
    for (int trial = 0; trial < 25; ++trial) {
      int n = 2 + static_cast<int>(rng.bounded(7));
      IsingModel m(n);
      for (int i = 0; i < n; ++i) {
        m.set_field(i, rng.uniform_pm1());
        for (int j = i + 1; j < n; ++j) m.set_coupling(i, j, rng.uniform_pm1());
      }
      IsingModel back = qubo_to_ising(ising_to_qubo(m));
      for (int i = 0; i < n; ++i) {
        REQUIRE(back.field(i) == Catch::Approx(m.field(i)).margin(1e-12));
        for (int j = i + 1; j < n; ++j)
          REQUIRE(back.coupling(i, j) == Catch::Approx(m.coupling(i, j)).margin(1e-12));
      }
    }
  }
}

TEST_CASE("conversion preserves the minimizer set") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(rng.bounded(8));
    QuboProblem p = random_problem(n, rng);
    IsingModel m = qubo_to_ising(p);
    double best_q = 1e300, best_h = 1e300;
    std::vector<std::uint64_t> argmin_q, argmin_h;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      Configuration c(bits, n);
      double cq = qubo_cost(p, c);
      double ch = ising_energy(m, c);
      if (cq < best_q - 1e-9) {
        best_q = cq;
        argmin_q.assign(1, bits);
      } else if (std::abs(cq - best_q) <= 1e-9) {
        argmin_q.push_back(bits);
      }
      if (ch < best_h - 1e-9) {
        best_h = ch;
        argmin_h.assign(1, bits);
      } else if (std::abs(ch - best_h) <= 1e-9) {
        argmin_h.push_back(bits);
      }
    }
    REQUIRE(argmin_q == argmin_h);
  }
}

TEST_CASE("configuration text form uses variable 1 leftmost") {
  Configuration c = Configuration::from_bits({1, 0, 1, 1});
  CHECK(c.to_string() == "1011");
  CHECK(Configuration::from_string("1011") == c);
  CHECK_THROWS_AS(Configuration::from_string("10x1"), ParseError);
}

TEST_CASE("model validation rejects bad input") {
  CHECK_THROWS_AS(QuboProblem(0), SizeError);
  CHECK_THROWS_AS(QuboProblem(65), SizeError);
  QuboProblem p(3);
  CHECK_THROWS_AS(p.set(0, 3, 1.0), IndexError);
  CHECK_THROWS_AS(p.set(0, 0, std::numeric_limits<double>::quiet_NaN()), Error);
  IsingModel m(3);
  CHECK_THROWS_AS(m.set_coupling(1, 1, 0.5), IndexError);
  CHECK_THROWS_AS(m.set_coupling(0, 3, 0.5), IndexError);
  CHECK_THROWS_AS(m.set_field(0, std::numeric_limits<double>::infinity()), Error);
}
