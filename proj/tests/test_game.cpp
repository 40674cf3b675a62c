#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "gyni/error.hpp"
#include "gyni/game.hpp"
#include "gyni/scenario.hpp"

using namespace gyni;

namespace {

PriorDistribution random_distribution(int parties, std::mt19937& rng) {
  const Scenario sc(parties, 2, 2);
  std::uniform_int_distribution<int> weight(0, 100);
  std::vector<long> raw(sc.input_count());
  long total = 0;
  while (total == 0) {
    for (auto& w : raw) {
      w = weight(rng);
      total += w;
    }
  }
  std::vector<Rational> weights(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) weights[i] = Rational(raw[i], total);
  return PriorDistribution(sc, std::move(weights));
}

Rational win_probability(const GyniInstance& g, const Behavior& b) {
  return evaluate(build_inequality(g), b);
}

}  // namespace

TEST_CASE("promise distribution support and weights") {
  SUBCASE("three parties") {
    PriorDistribution q = promise_distribution(3);
    for (const char* s : {"000", "011", "101", "110"})
      CHECK(q.weight(q.scenario.input_index(s)) == Rational(1, 4));
    for (const char* s : {"100", "010", "001", "111"})
      CHECK(q.weight(q.scenario.input_index(s)) == Rational(0));
  }
  SUBCASE("four parties: first three digits carry the parity promise") {
    PriorDistribution q = promise_distribution(4);
    for (const char* s : {"0000", "0001", "1100", "1101", "0110", "1010"})
      CHECK(q.weight(q.scenario.input_index(s)) == Rational(1, 8));
    for (const char* s : {"1000", "1001", "0100", "1110"})
      CHECK(q.weight(q.scenario.input_index(s)) == Rational(0));
  }
  SUBCASE("two parties") {
    PriorDistribution q = promise_distribution(2);
    CHECK(q.weight(q.scenario.input_index("00")) == Rational(1, 2));
    CHECK(q.weight(q.scenario.input_index("01")) == Rational(1, 2));
    CHECK(q.weight(q.scenario.input_index("10")) == Rational(0));
  }
  SUBCASE("weights always sum to one") {
    for (int n = 2; n <= 7; ++n) {
      PriorDistribution q = promise_distribution(n);
      Rational total = 0;
      for (const auto& w : q.weights) total += w;
      CHECK(total == Rational(1));
    }
  }
  CHECK_THROWS_AS(promise_distribution(1), DimensionError);
}

TEST_CASE("winning output rotates the input one party down the ring") {
  const Scenario sc(3, 2, 2);
  CHECK(winning_output(sc, sc.input_index("000")) == sc.output_index("000"));
  CHECK(winning_output(sc, sc.input_index("011")) == sc.output_index("110"));
  CHECK(winning_output(sc, sc.input_index("101")) == sc.output_index("011"));
  CHECK(winning_output(sc, sc.input_index("110")) == sc.output_index("101"));
}

TEST_CASE("classical bound values") {
  SUBCASE("promise prior") {
    for (int n = 2; n <= 7; ++n) {
      GyniInstance g(n, promise_distribution(n));
      CHECK(classical_bound(g) == Rational(1, 1L << (n - 1)));
    }
  }
  SUBCASE("uniform prior") {
    for (int n = 2; n <= 7; ++n) {
      GyniInstance g(n, PriorDistribution::uniform(Scenario(n, 2, 2)));
      CHECK(classical_bound(g) == Rational(1, 1L << (n - 1)));
    }
  }
  SUBCASE("prior concentrated on one input") {
    const Scenario sc(3, 2, 2);
    std::vector<Rational> weights(8);
    weights[sc.input_index("010")] = 1;
    GyniInstance g(3, PriorDistribution(sc, std::move(weights)));
    CHECK(classical_bound(g) == Rational(1));
    CHECK(classical_best_input(g) == sc.input_index("010"));
  }
}

TEST_CASE("best classical input breaks ties toward the smallest string") {
  SUBCASE("promise prior picks the all-zero string") {
    GyniInstance g(3, promise_distribution(3));
    CHECK(g.scenario().input_string(classical_best_input(g)) == "000");
  }
  SUBCASE("uniform prior picks the all-zero string") {
    GyniInstance g(2, PriorDistribution::uniform(Scenario(2, 2, 2)));
    CHECK(g.scenario().input_string(classical_best_input(g)) == "00");
  }
  SUBCASE("complementary pair ties resolve lexicographically") {
    const Scenario sc(2, 2, 2);
    std::vector<Rational> weights(4);
    weights[sc.input_index("10")] = Rational(1, 2);
    weights[sc.input_index("01")] = Rational(1, 2);
    GyniInstance g(2, PriorDistribution(sc, std::move(weights)));
    CHECK(classical_bound(g) == Rational(1));
    CHECK(g.scenario().input_string(classical_best_input(g)) == "01");
  }
}

TEST_CASE("the game's inequality has one weighted cell per supported input") {
  SUBCASE("three parties with the promise prior") {
    GyniInstance g(3, promise_distribution(3));
    BellInequality ineq = build_inequality(g);
    const Scenario& sc = g.scenario();
    CHECK(ineq.coeff(sc.output_index("000"), sc.input_index("000")) == Rational(1, 4));
    CHECK(ineq.coeff(sc.output_index("110"), sc.input_index("011")) == Rational(1, 4));
    CHECK(ineq.coeff(sc.output_index("011"), sc.input_index("101")) == Rational(1, 4));
    CHECK(ineq.coeff(sc.output_index("101"), sc.input_index("110")) == Rational(1, 4));
    int nonzero = 0;
    for (const auto& c : ineq.coefficients)
      if (!c.is_zero()) ++nonzero;
    CHECK(nonzero == 4);
    CHECK(ineq.bound == Rational(1, 4));
    CHECK(ineq.bound_kind == BoundKind::kClassical);
  }
  SUBCASE("two parties with the uniform prior") {
    GyniInstance g(2, PriorDistribution::uniform(Scenario(2, 2, 2)));
    BellInequality ineq = build_inequality(g);
    int nonzero = 0;
    for (const auto& c : ineq.coefficients) {
      if (!c.is_zero()) {
        CHECK(c == Rational(1, 4));
        ++nonzero;
      }
    }
    CHECK(nonzero == 4);
    CHECK(ineq.bound == Rational(1, 2));
  }
  SUBCASE("nonzero coefficient count matches the prior's support") {
    GyniInstance g(4, promise_distribution(4));
    BellInequality ineq = build_inequality(g);
    int support = 0;
    for (const auto& w : g.prior.weights)
      if (!w.is_zero()) ++support;
    int nonzero = 0;
    for (const auto& c : ineq.coefficients)
      if (!c.is_zero()) ++nonzero;
    CHECK(nonzero == support);
  }
}

TEST_CASE("brute force over deterministic strategies matches the closed form") {
  SUBCASE("pinned values") {
    CHECK(classical_bound_bruteforce(GyniInstance(3, promise_distribution(3))).value ==
          Rational(1, 4));
    CHECK(classical_bound_bruteforce(GyniInstance(5, promise_distribution(5))).value ==
          Rational(1, 16));
    CHECK(classical_bound_bruteforce(
              GyniInstance(2, PriorDistribution::uniform(Scenario(2, 2, 2))))
              .value == Rational(1, 2));
  }
  SUBCASE("promise and uniform priors for small party counts") {
    for (int n = 2; n <= 5; ++n) {
      GyniInstance promise(n, promise_distribution(n));
      CHECK(classical_bound_bruteforce(promise).value == classical_bound(promise));
      GyniInstance uniform(n, PriorDistribution::uniform(Scenario(n, 2, 2)));
      CHECK(classical_bound_bruteforce(uniform).value == classical_bound(uniform));
    }
  }
  SUBCASE("random priors") {
    std::mt19937 rng(20260301);
    for (int trial = 0; trial < 100; ++trial) {
      GyniInstance g3(3, random_distribution(3, rng));
      CHECK(classical_bound_bruteforce(g3).value == classical_bound(g3));
      GyniInstance g4(4, random_distribution(4, rng));
      CHECK(classical_bound_bruteforce(g4).value == classical_bound(g4));
    }
  }
}

TEST_CASE("the string strategy wins exactly on the string and its complement") {
  const Scenario sc(3, 2, 2);
  SUBCASE("attains the classical bound on the promise prior") {
    GyniInstance g(3, promise_distribution(3));
    Behavior b = behavior_from_strategy(strategy_from_string("000"));
    CHECK(win_probability(g, b) == Rational(1, 4));
  }
  SUBCASE("wins with certainty on y and its complement, never elsewhere") {
    const std::string y = "010";
    Behavior b = behavior_from_strategy(strategy_from_string(y));
    const long yi = sc.input_index(y);
    const long yc = yi ^ (sc.input_count() - 1);
    for (long x = 0; x < sc.input_count(); ++x) {
      const Rational expected = (x == yi || x == yc) ? 1 : 0;
      CHECK(b.at(winning_output(sc, x), x) == expected);
    }
  }
  SUBCASE("a string and its complement give the same strategy") {
    // The party functions depend only on y_i xor y_(i+1), which the global
    // complement leaves unchanged, so both strings name one behavior and in
    // particular one winning probability.
    GyniInstance g(3, promise_distribution(3));
    Behavior b1 = behavior_from_strategy(strategy_from_string("010"));
    Behavior b2 = behavior_from_strategy(strategy_from_string("101"));
    CHECK(b1.table == b2.table);
    CHECK(win_probability(g, b1) == win_probability(g, b2));
    CHECK(win_probability(g, b1) == Rational(1, 4));
  }
  SUBCASE("the argmax string's strategy attains the classical bound") {
    std::mt19937 rng(555);
    for (int trial = 0; trial < 25; ++trial) {
      GyniInstance g(3, random_distribution(3, rng));
      const std::string y = g.scenario().input_string(classical_best_input(g));
      Behavior b = behavior_from_strategy(strategy_from_string(y));
      CHECK(win_probability(g, b) == classical_bound(g));
    }
  }
}

TEST_CASE("classical bound symmetries") {
  std::mt19937 rng(808);
  for (int trial = 0; trial < 20; ++trial) {
    PriorDistribution q = random_distribution(3, rng);
    const Scenario& sc = q.scenario;
    const long all = sc.input_count() - 1;
    GyniInstance g(3, q);
    const Rational base = classical_bound(g);

    std::vector<Rational> complemented(q.weights.size());
    for (long x = 0; x <= all; ++x) complemented[x] = q.weight(x ^ all);
    CHECK(classical_bound(GyniInstance(3, PriorDistribution(sc, complemented))) == base);

    // Rotate party labels one step along the ring.
    std::vector<Rational> rotated(q.weights.size());
    for (long x = 0; x <= all; ++x) rotated[winning_output(sc, x)] = q.weight(x);
    CHECK(classical_bound(GyniInstance(3, PriorDistribution(sc, rotated))) == base);
  }
}

TEST_CASE("every distinct non-complementary pair has a fixed-then-changed party") {
  CHECK(check_observation4(3));
  CHECK(check_observation4(4));
  CHECK(check_observation4(7));
  CHECK_THROWS_AS(check_observation4(13), Error);
  CHECK_THROWS_AS(check_observation4(1), Error);
}

TEST_CASE("game instances validate their prior") {
  CHECK_THROWS_AS(GyniInstance(1, PriorDistribution::uniform(Scenario(1, 2, 2))),
                  DimensionError);
  CHECK_THROWS_AS(GyniInstance(3, PriorDistribution::uniform(Scenario(2, 2, 2))),
                  ScenarioMismatchError);
}
