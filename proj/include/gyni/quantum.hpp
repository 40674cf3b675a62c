#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gyni/game.hpp"

namespace gyni {

/// One basis word of the projector algebra attached to an N-party
/// binary-input game: the empty word (unit), a single generator indexed by a
/// joint input, or the ordered two-letter word formed by a generator followed
/// by the generator of the complementary input.  Longer words never appear:
/// idempotence collapses repeated letters and orthogonality kills every
/// non-complementary adjacency, and products that would still need three
/// letters are rejected.
struct AlgebraWord {
  enum class Kind { kUnit = 0, kSingle = 1, kPair = 2 };

  Kind kind = Kind::kUnit;
  long input = 0;  // meaningful for kSingle (M_x) and kPair (M_x then M_xbar)

  auto operator<=>(const AlgebraWord&) const = default;
};

/// Printed form of a word, e.g. "1", "M[011]", "M[011]M[100]"; inputs are
/// printed with party 1 leftmost like every other input string.
std::string to_string(const AlgebraWord& word, const Scenario& scenario);

/// An exact linear combination of admissible words for a fixed number of
/// parties.  Zero coefficients are pruned, so equality of the maps is
/// equality of the elements.
struct AlgebraElement {
  int parties = 0;
  std::map<AlgebraWord, Rational> coefficients;

  static AlgebraElement zero(int parties);
  static AlgebraElement unit(int parties, const Rational& coefficient = Rational(1));
  static AlgebraElement single(int parties, long input,
                               const Rational& coefficient = Rational(1));

  /// Adds coefficient * word, pruning the entry if it cancels to zero.
  AlgebraElement& add(const AlgebraWord& word, const Rational& coefficient);
  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(const Rational& scale);

  bool operator==(const AlgebraElement&) const = default;
};

/// Product in the quotient algebra: distributes over both coefficient maps
/// and normalizes each concatenated generator string with the rewrite rules
/// M_x M_x = M_x and M_x M_y = 0 whenever y is neither x nor its complement.
/// Throws AlgebraWordError if any term normalizes to an irreducible word of
/// three or more generators, and ScenarioMismatchError if the party counts
/// differ.
AlgebraElement algebra_multiply(const AlgebraElement& u, const AlgebraElement& v);

/// Raised weights q'(x) = q(x) + (w - q(x) - q(xbar))/2 with w the classical
/// optimum of q: each complementary pair is topped up symmetrically until it
/// sums to w exactly.  The result dominates q pointwise and is a weight
/// table, not a normalized distribution.  Requires binary inputs.
std::vector<Rational> tighten_distribution(const PriorDistribution& q);

struct SosReport {
  Rational omega_c;
  bool identity_holds = false;
  /// Printed word of the first coefficient that differs, empty when the
  /// identity holds.
  std::string first_mismatch;
};

/// Core of verify_sos_identity, exposed for direct driving: checks the
/// sum-of-squares identity for an explicit weight table (indexed by joint
/// input) without tightening it first.  The identity can genuinely fail here
/// when some complementary pair does not sum to the table's largest pair sum.
SosReport check_sos_for_weights(const Scenario& scenario,
                                const std::vector<Rational>& weights);

/// Exact symbolic proof that quantum strategies cannot beat the classical
/// bound w for the given prior: after tightening q to q', expands
///   w * (1 - sum_x q'(x)/w M_x)^2  +  sum_x (q'(x)q'(xbar)/(2w)) (M_x - M_xbar)^2
/// in the quotient algebra and checks coefficient-wise equality with
///   w - sum_x q'(x) M_x.
/// Both sides are exact rationals throughout; the square roots that appear in
/// the textbook form of the squares only ever occur in pairs, so they are
/// factored out before anything is computed.
SosReport verify_sos_identity(const PriorDistribution& q);

/// A concrete quantum strategy: a shared pure state on the tensor product of
/// equal-dimensional local spaces and, for each party and input, the
/// projector onto the outcome-0 subspace (outcome 1 is its complement).
struct QuantumStrategy {
  int parties = 0;
  int local_dim = 0;
  Eigen::VectorXcd state;  // dimension local_dim^parties
  std::vector<std::array<Eigen::MatrixXcd, 2>> projectors;  // [party][input]

  /// Throws Error unless the state is normalized to within 1e-12 and every
  /// projector is Hermitian and idempotent to within 1e-10.
  void validate() const;
};

/// Average winning probability of the strategy on the game, evaluated in
/// double precision.
double quantum_value(const GyniInstance& g, const QuantumStrategy& s);

/// A deterministic strategy embedded as a quantum one: computational basis
/// product state and 0-or-identity projectors reproducing the given outputs.
QuantumStrategy embed_deterministic(const DeterministicStrategy& strategy, int local_dim);

/// One alternating-optimization pass to convergence from the given strategy:
/// repeatedly re-optimizes each party's two measurements by eigendecomposition
/// of its conditional operator, then the shared state by power iteration on
/// the game operator, until the value improves by less than 1e-10 relative.
/// The value never decreases across iterations; if a trace vector is given,
/// the value after every full sweep is appended to it.  Returns the final
/// value and leaves the improved strategy in place.
double seesaw_refine(const GyniInstance& g, QuantumStrategy& s,
                     std::vector<double>* trace = nullptr);

/// Heuristic search for the best quantum value: `restarts` independent
/// see-saw runs from random strategies, each seeded deterministically from
/// the master seed, returning the largest value found.  Restarts run in
/// parallel (capped by the GYNI_THREADS environment variable when set);
/// the result does not depend on the thread count.  Requires local_dim 2 or
/// 3 and at most 4 parties.
double seesaw_search(const GyniInstance& g, int local_dim, int restarts,
                     std::uint64_t seed);

}  // namespace gyni
