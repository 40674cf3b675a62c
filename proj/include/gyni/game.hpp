#pragma once

#include <string_view>

#include "gyni/scenario.hpp"

namespace gyni {

/// The neighbour-guessing game on a ring of binary-input, binary-output
/// parties: party i wins when its output equals party i+1's input (party N's
/// target is party 1's input), and the instance fixes the prior over joint
/// inputs.
struct GyniInstance {
  int parties;
  PriorDistribution prior;

  GyniInstance(int parties, PriorDistribution prior);

  const Scenario& scenario() const { return prior.scenario; }
};

/// The single all-correct output word for joint input x: the input word with
/// every digit shifted one party down the ring.
long winning_output(const Scenario& scenario, long x);

/// The prior supported on inputs whose first-block parity is even: the block
/// is all N parties when N is odd and the first N-1 when N is even, and each
/// supported input has weight 1/2^(N-1).
PriorDistribution promise_distribution(int parties);

/// The game as a Bell functional: weight q(x) on the one winning cell of
/// each input, bounded by the classical optimum.
BellInequality build_inequality(const GyniInstance& g);

/// Exact classical optimum: the largest q(x) + q(complement of x).
Rational classical_bound(const GyniInstance& g);

/// The input attaining classical_bound, ties broken by lexicographically
/// smallest printed string.
long classical_best_input(const GyniInstance& g);

struct BruteforceBound {
  Rational value;
  DeterministicStrategy best;
};

/// Independent oracle for classical_bound: scans every deterministic
/// strategy and keeps the first maximizer in enumeration order.
BruteforceBound classical_bound_bruteforce(const GyniInstance& g, long per_party_cap = 256);

/// The strategy in which each party answers with its own digit of y shifted
/// one party down the ring: on input v, party i outputs v xor y_i xor y_(i+1).
/// It wins exactly on inputs y and the complement of y.
DeterministicStrategy strategy_from_string(std::string_view y);

/// Exhaustively confirms that for every pair of inputs x, y that are neither
/// equal nor complementary, some party i has x_i = y_i while party i+1's
/// digits differ (cyclically). This is the combinatorial fact behind the
/// classical optimum.
bool check_observation4(int parties);

}  // namespace gyni
