#include "gyni/facets.hpp"

#include <utility>
#include <vector>

#include "gyni/error.hpp"
#include "gyni/matrix.hpp"

namespace gyni {

namespace {

// Output word of a deterministic strategy under joint input x.
long output_word(const DeterministicStrategy& st, long x) {
  const Scenario& s = st.scenario;
  long a = 0;
  long place = 1;
  for (int i = 0; i < s.parties; ++i) {
    a += place * st.outputs[static_cast<size_t>(i)]
                           [static_cast<size_t>(s.input_digit(x, i))];
    place *= s.outputs;
  }
  return a;
}

// Cells carrying probability one for a strategy, one per input context.
std::vector<long> support_cells(const DeterministicStrategy& st) {
  const Scenario& s = st.scenario;
  std::vector<long> cells;
  cells.reserve(static_cast<size_t>(s.input_count()));
  for (long x = 0; x < s.input_count(); ++x)
    cells.push_back(s.cell_index(output_word(st, x), x));
  return cells;
}

// Affine dimension of a family of deterministic behaviors, streamed as
// difference vectors against the first member so only the growing row basis
// is ever held densely.
int affine_dimension_of(const Scenario& s, const std::vector<const DeterministicStrategy*>& family) {
  if (family.empty()) return -1;
  const long cells = s.cell_count();
  RowBasis basis(static_cast<int>(cells));
  const std::vector<long> base = support_cells(*family.front());
  std::vector<Rational> diff(static_cast<size_t>(cells));
  for (size_t i = 1; i < family.size(); ++i) {
    for (auto& v : diff) v = 0;
    for (long cell : support_cells(*family[i])) diff[static_cast<size_t>(cell)] += 1;
    for (long cell : base) diff[static_cast<size_t>(cell)] -= 1;
    basis.insert(diff);
  }
  return basis.rank();
}

}  // namespace

LocalPolytope build_local_polytope(const Scenario& scenario, long per_party_cap) {
  const std::vector<DeterministicStrategy> vertices =
      enumerate_deterministic(scenario, per_party_cap);
  std::vector<const DeterministicStrategy*> all;
  all.reserve(vertices.size());
  for (const DeterministicStrategy& st : vertices) all.push_back(&st);
  LocalPolytope polytope{scenario, static_cast<long>(vertices.size()),
                         affine_dimension_of(scenario, all)};
  return polytope;
}

FacetReport facet_check(const BellInequality& ineq, const LocalPolytope& polytope) {
  if (ineq.bound_kind != BoundKind::kClassical)
    throw Error("facet test needs an inequality with a classical bound");
  if (ineq.scenario != polytope.scenario)
    throw ScenarioMismatchError("inequality and polytope scenarios differ");

  const Scenario& s = ineq.scenario;
  const std::vector<DeterministicStrategy> vertices = enumerate_deterministic(s);

  std::vector<const DeterministicStrategy*> saturating;
  bool first = true;
  Rational best;
  for (const DeterministicStrategy& st : vertices) {
    Rational value = evaluate_strategy(ineq, st);
    if (first || value > best) {
      best = value;
      first = false;
    }
    if (value == ineq.bound) saturating.push_back(&st);
  }

  FacetReport report{ineq,
                     polytope.affine_dimension,
                     static_cast<long>(saturating.size()),
                     affine_dimension_of(s, saturating),
                     false,
                     best <= ineq.bound,
                     best};
  report.is_facet = report.is_valid && !saturating.empty() &&
                    report.saturating_dimension == report.polytope_dimension - 1;
  return report;
}

FacetReport facet_check(const BellInequality& ineq) {
  return facet_check(ineq, build_local_polytope(ineq.scenario));
}

FacetReport generalized_promise_check(int parties) {
  GyniInstance game(parties, promise_distribution(parties));
  return facet_check(build_inequality(game));
}

}  // namespace gyni
