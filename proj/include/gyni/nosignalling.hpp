#pragma once

#include <vector>

#include "gyni/game.hpp"
#include "gyni/matrix.hpp"
#include "gyni/rational.hpp"
#include "gyni/scenario.hpp"

namespace gyni {

// Equality description of the no-signalling affine space for a scenario.
//
// Variables are behavior cells indexed by Scenario::cell_index(a, x).  Rows
// come in a fixed, deterministic order: first one normalization row per input
// context x (ascending x), then the marginal-independence rows, generated per
// party (ascending), per joint input of the other parties (ascending), per
// joint output of the other parties (ascending), per adjacent pair of the
// party's own input values (ascending).  Adjacent-pair equalities chain into
// equality of all values, so the system stays near-minimal.
struct NsPolytope {
  Scenario scenario;
  ExactMatrix eq_lhs;
  std::vector<Rational> eq_rhs;
  int rank = 0;  // rank of eq_lhs (the system is consistent)

  // Affine dimension of the solution space of the equality system alone
  // (before nonnegativity): cell count minus rank.
  long solution_dimension() const { return scenario.cell_count() - rank; }
};

NsPolytope build_ns_polytope(const Scenario& scenario);

// How to formulate the optimization over the no-signalling set.
//  - kFullTable: one LP variable per behavior cell, equality rows from
//    build_ns_polytope.
//  - kReducedCoordinates: eliminate the equalities by rewriting cells in the
//    marginal coordinates of the no-signalling affine space (binary outputs
//    only) and solve the liberated problem through its LP dual.  Produces the
//    identical optimal value; much smaller tableaus for many parties.
//  - kAuto picks kFullTable for small scenarios and kReducedCoordinates once
//    the cell count grows past a threshold.
enum class NsMode { kAuto, kFullTable, kReducedCoordinates };

struct NsOptimum {
  Rational value;
  Behavior witness;
  long pivots = 0;
  bool used_reduced_coordinates = false;
};

// Exact maximum of a linear functional over the no-signalling set.  The
// witness satisfies every equality and nonnegativity constraint exactly and
// re-evaluates to the returned value.
NsOptimum ns_maximize(const BellInequality& objective, NsMode mode = NsMode::kAuto);

// Exact no-signalling optimum of a guessing game's objective.
NsOptimum ns_bound(const GyniInstance& game, NsMode mode = NsMode::kAuto);

// Report for the two general bounds on the no-signalling optimum: it never
// exceeds twice the classical bound, and it collapses to the classical bound
// whenever some complementary input pair jointly dominates the prior
// (q(x) <= q(y) = q(ybar) for all x).
struct AppendixAReport {
  Rational omega_c;
  Rational omega_ns;
  bool double_bound_holds = false;             // omega_ns <= 2 * omega_c
  bool has_dominant_complementary_pair = false;
  bool ns_equals_classical = false;            // omega_ns == omega_c
};

AppendixAReport check_appendix_a(const GyniInstance& game, NsMode mode = NsMode::kAuto);

// Sum over all input contexts of the probability of the winning output word.
// For every no-signalling behavior this sum is at most 2.  Throws Error when
// the behavior is not no-signalling (the bound's derivation needs it).
Rational sum_over_inputs_bound(const Behavior& behavior);

// The two inequivalent extremal three-party boxes that win the neighbour
// guessing game with probability 1/3 under the promise prior.
Behavior box_p1();
Behavior box_p2();

// Vertex test for a no-signalling behavior: collect every polytope equality
// plus one pinning row per zero cell of the behavior and measure the affine
// dimension of the resulting solution space.  Dimension zero means the
// behavior is an extreme point.
struct ExtremalityReport {
  Behavior behavior;
  bool is_vertex = false;
  long tight_nonnegativity_count = 0;  // number of zero cells
  long tight_solution_dimension = 0;
};

ExtremalityReport extremality_check(const Behavior& behavior);

// Orbit census of the two extremal boxes under the full relabeling group of
// the three-party binary scenario: how many distinct images of each box still
// win with probability 1/3, and how many distinct boxes the two maximal sets
// contain together.
struct OrbitReport {
  long p1_orbit_size = 0;      // distinct images of box_p1 overall
  long p2_orbit_size = 0;      // distinct images of box_p2 overall
  long p1_maximal_count = 0;   // distinct images of box_p1 at value 1/3
  long p2_maximal_count = 0;   // distinct images of box_p2 at value 1/3
  long union_maximal_count = 0;
};

OrbitReport orbit_max_violators();

// Odd-to-even audit for the promise prior: the ratio of the no-signalling
// optimum to the classical bound is the same for odd_parties and for
// odd_parties + 1, and the even-party optimum is reached constructively by
// giving the odd-party optimizer an extra party that copies its own input to
// its output.  The extension's value is computed directly from the odd-party
// witness, independent of the even-party LP.
struct AppendixCReport {
  int odd_parties = 0;
  Rational omega_c_odd;
  Rational omega_c_even;
  Rational omega_ns_odd;
  Rational omega_ns_even;
  Rational ratio_odd;   // omega_ns_odd / omega_c_odd
  Rational ratio_even;  // omega_ns_even / omega_c_even
  bool ratios_equal = false;
  Rational extension_value;  // extended witness on the even-party objective
  bool extension_is_no_signalling = false;
  bool extension_matches_even_optimum = false;
};

AppendixCReport check_appendix_c(int odd_parties, NsMode mode = NsMode::kAuto);

// Four-party prior supported uniformly on the inputs with
// x1 + x2 + x3 + x1*x2*x3 = 0 (mod 2), the fourth input free: ten strings of
// weight 1/10 each.
PriorDistribution cubic4_distribution();

}  // namespace gyni
