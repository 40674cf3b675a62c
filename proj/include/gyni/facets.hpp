#pragma once

#include "gyni/game.hpp"
#include "gyni/rational.hpp"
#include "gyni/scenario.hpp"

namespace gyni {

// The polytope of deterministic behaviors of a scenario, summarized by its
// vertex count and its affine dimension.  The dimension is measured from the
// vertex tables themselves (full probability-table embedding), not assumed
// from a formula, so the summary stays valid for any scenario shape.
struct LocalPolytope {
  Scenario scenario;
  long vertex_count = 0;
  int affine_dimension = 0;
};

LocalPolytope build_local_polytope(const Scenario& scenario, long per_party_cap = 256);

// Verdict of the facet test for one inequality: the inequality is valid when
// no deterministic behavior exceeds its bound, and facet-defining when the
// behaviors that meet the bound exactly span an affine space of dimension one
// below the polytope's.
struct FacetReport {
  BellInequality inequality;
  int polytope_dimension = 0;
  long saturating_count = 0;
  int saturating_dimension = -1;  // affine dimension; -1 when nothing saturates
  bool is_facet = false;
  bool is_valid = false;
  Rational max_vertex_value;
};

// Runs the facet test, enumerating the scenario's deterministic behaviors.
// The inequality must carry a classical bound.
FacetReport facet_check(const BellInequality& ineq);

// Same test against a pre-measured polytope (the scenario must match); lets
// callers checking many inequalities of one scenario pay for the polytope
// dimension once.
FacetReport facet_check(const BellInequality& ineq, const LocalPolytope& polytope);

// Facet test for the neighbour-guessing inequality with the promise prior on
// the given number of parties.
FacetReport generalized_promise_check(int parties);

}  // namespace gyni
