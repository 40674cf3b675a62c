#include "gyni/game.hpp"

#include <string>

#include "gyni/error.hpp"

namespace gyni {

GyniInstance::GyniInstance(int parties_in, PriorDistribution prior_in)
    : parties(parties_in), prior(std::move(prior_in)) {
  if (parties < 2) throw DimensionError("the game needs at least two parties");
  if (prior.scenario != Scenario(parties, 2, 2))
    throw ScenarioMismatchError("prior is not over the game's binary-input scenario");
}

long winning_output(const Scenario& scenario, long x) {
  const int n = scenario.parties;
  // Digit i of the winning output is digit i+1 of the input (cyclically), a
  // one-step rotation of the index's bits.
  return (x >> 1) | ((x & 1) << (n - 1));
}

PriorDistribution promise_distribution(int parties) {
  if (parties < 2) throw DimensionError("the game needs at least two parties");
  const Scenario sc(parties, 2, 2);
  const int block = (parties % 2 == 1) ? parties : parties - 1;
  const Rational weight(1, 1L << (parties - 1));
  std::vector<Rational> weights(sc.input_count());
  for (long x = 0; x < sc.input_count(); ++x) {
    const long masked = x & ((1L << block) - 1);
    if (__builtin_popcountl(masked) % 2 == 0) weights[x] = weight;
  }
  return PriorDistribution(sc, std::move(weights));
}

BellInequality build_inequality(const GyniInstance& g) {
  BellInequality ineq(g.scenario());
  for (long x = 0; x < g.scenario().input_count(); ++x)
    ineq.coeff(winning_output(g.scenario(), x), x) = g.prior.weight(x);
  ineq.bound = classical_bound(g);
  ineq.bound_kind = BoundKind::kClassical;
  return ineq;
}

Rational classical_bound(const GyniInstance& g) {
  const long all = g.scenario().input_count() - 1;
  Rational best = 0;
  for (long x = 0; x <= all; ++x) {
    Rational v = g.prior.weight(x) + g.prior.weight(x ^ all);
    if (v > best) best = v;
  }
  return best;
}

long classical_best_input(const GyniInstance& g) {
  const long all = g.scenario().input_count() - 1;
  long best = 0;
  Rational best_value = g.prior.weight(0) + g.prior.weight(all);
  std::string best_string = g.scenario().input_string(0);
  for (long x = 1; x <= all; ++x) {
    Rational v = g.prior.weight(x) + g.prior.weight(x ^ all);
    std::string s = g.scenario().input_string(x);
    if (v > best_value || (v == best_value && s < best_string)) {
      best = x;
      best_value = std::move(v);
      best_string = std::move(s);
    }
  }
  return best;
}

BruteforceBound classical_bound_bruteforce(const GyniInstance& g, long per_party_cap) {
  const BellInequality ineq = build_inequality(g);
  std::vector<DeterministicStrategy> all =
      enumerate_deterministic(g.scenario(), per_party_cap);
  const DeterministicStrategy* best = nullptr;
  Rational best_value;
  for (const auto& s : all) {
    Rational v = evaluate_strategy(ineq, s);
    if (best == nullptr || v > best_value) {
      best = &s;
      best_value = std::move(v);
    }
  }
  return BruteforceBound{best_value, *best};
}

DeterministicStrategy strategy_from_string(std::string_view y) {
  const int n = static_cast<int>(y.size());
  const Scenario sc(n, 2, 2);
  const long yi = sc.input_index(y);
  std::vector<std::vector<int>> funcs(n, std::vector<int>(2));
  for (int i = 0; i < n; ++i) {
    const int bit_i = static_cast<int>((yi >> i) & 1);
    const int bit_next = static_cast<int>((yi >> ((i + 1) % n)) & 1);
    for (int v = 0; v < 2; ++v) funcs[i][v] = v ^ bit_i ^ bit_next;
  }
  return DeterministicStrategy(sc, std::move(funcs));
}

bool check_observation4(int parties) {
  if (parties < 2 || parties > 12)
    throw Error("exhaustive pair check supports 2 to 12 parties");
  const long count = 1L << parties;
  const long all = count - 1;
  for (long x = 0; x < count; ++x) {
    for (long y = 0; y < count; ++y) {
      const long d = x ^ y;
      if (d == 0 || d == all) continue;
      // Need a party i with equal digits whose successor's digits differ:
      // a zero bit of d followed cyclically by a one bit.
      const long succ = (d >> 1) | ((d & 1) << (parties - 1));
      if ((~d & succ & all) == 0) return false;
    }
  }
  return true;
}

}  // namespace gyni
