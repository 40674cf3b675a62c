#include "gyni/nosignalling.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "gyni/error.hpp"
#include "gyni/lp.hpp"

namespace gyni {

namespace {

constexpr long kNsCellCap = 1L << 17;

// Joint index whose digit for party `skip` is `own` and whose remaining
// digits, in ascending party order, are the digits of `rest` (same
// little-endian convention as joint indices themselves).
long compose_index(int parties, int radix, int skip, int own, long rest) {
  long value = 0;
  long place = 1;
  for (int j = 0; j < parties; ++j) {
    int digit;
    if (j == skip) {
      digit = own;
    } else {
      digit = static_cast<int>(rest % radix);
      rest /= radix;
    }
    value += place * digit;
    place *= radix;
  }
  return value;
}

// Marginal coordinates of the no-signalling affine space for binary outputs.
//
// A coordinate is a per-party digit u_i in {0, .., inputs}: u_i = 0 leaves
// party i marginalized away, u_i = v + 1 conditions party i on input v and
// output 0.  Coordinate 0 (all parties marginalized) is the constant 1.  Any
// table cell expands as an integer combination of coordinates by writing each
// output-1 factor as (marginal minus output-0): the expansion of P(a|x) sums
// (-1)^|K| over the subsets K of the output-1 parties, where the coordinate
// keeps party i at input x_i exactly when a_i = 0 or i is in K.
struct MarginalExpansion {
  long coordinate_count = 0;               // (inputs + 1)^parties
  std::vector<std::vector<std::pair<long, int>>> cell_terms;  // coord, sign
  std::vector<int> constant;               // coefficient of coordinate 0

  explicit MarginalExpansion(const Scenario& s) {
    if (s.outputs != 2)
      throw Error("marginal coordinates require binary outputs");
    const int n = s.parties;
    const int m = s.inputs;
    coordinate_count = 1;
    for (int i = 0; i < n; ++i) coordinate_count *= (m + 1);

    const long cells = s.cell_count();
    cell_terms.resize(static_cast<size_t>(cells));
    constant.assign(static_cast<size_t>(cells), 0);
    std::vector<long> place(static_cast<size_t>(n), 1);
    for (int i = 1; i < n; ++i) place[i] = place[i - 1] * (m + 1);

    for (long x = 0; x < s.input_count(); ++x) {
      // Base coordinate with every party conditioned on its input.
      long base = 0;
      for (int i = 0; i < n; ++i) base += place[i] * (s.input_digit(x, i) + 1);
      for (long a = 0; a < s.output_count(); ++a) {
        auto& terms = cell_terms[static_cast<size_t>(s.cell_index(a, x))];
        // Parties with output 1 in this cell.
        std::vector<int> ones;
        for (int i = 0; i < n; ++i)
          if (s.output_digit(a, i) == 1) ones.push_back(i);
        const long subsets = 1L << ones.size();
        for (long k = 0; k < subsets; ++k) {
          long coord = base;
          int removed = 0;
          for (size_t b = 0; b < ones.size(); ++b) {
            if (!(k >> b & 1)) {
              // Output-1 party outside K: marginalized away.
              coord -= place[ones[b]] * (s.input_digit(x, ones[b]) + 1);
              ++removed;
            }
          }
          const int sign = (ones.size() - removed) % 2 == 0 ? 1 : -1;
          if (coord == 0)
            constant[static_cast<size_t>(s.cell_index(a, x))] += sign;
          else
            terms.emplace_back(coord, sign);
        }
      }
    }
  }
};

NsOptimum ns_maximize_full(const BellInequality& objective) {
  const Scenario& s = objective.scenario;
  NsPolytope poly = build_ns_polytope(s);
  LinearProgram lp;
  lp.objective = objective.coefficients;
  lp.eq_lhs = poly.eq_lhs;
  lp.eq_rhs = poly.eq_rhs;
  SimplexOptions options;
  options.want_dual = false;
  LpSolution sol = lp_maximize(lp, options);
  NsOptimum result{sol.value, Behavior(s, std::move(sol.primal)), sol.pivots, false};
  return result;
}

// Reduced-coordinate formulation: over the free marginal coordinates t the
// problem reads  maximize c0 + c.t  subject to  alpha + M t >= 0  (one row
// per cell).  We solve its LP dual --  maximize -alpha.y  subject to
// (-M)^T y = c, y >= 0  -- whose tableau has only coordinate_count - 1 rows,
// and read the optimal t off the dual certificate of that program.
NsOptimum ns_maximize_reduced(const BellInequality& objective) {
  const Scenario& s = objective.scenario;
  const long cells = s.cell_count();
  MarginalExpansion expansion(s);
  const long coords = expansion.coordinate_count - 1;  // drop the constant

  Rational c0 = 0;
  std::vector<Rational> c(static_cast<size_t>(coords));
  for (long cell = 0; cell < cells; ++cell) {
    const Rational& w = objective.coefficients[static_cast<size_t>(cell)];
    if (w.is_zero()) continue;
    if (expansion.constant[static_cast<size_t>(cell)] != 0)
      c0 += w * expansion.constant[static_cast<size_t>(cell)];
    for (const auto& [coord, sign] : expansion.cell_terms[static_cast<size_t>(cell)]) {
      if (sign > 0)
        c[static_cast<size_t>(coord - 1)] += w;
      else
        c[static_cast<size_t>(coord - 1)] -= w;
    }
  }

  LinearProgram dual_lp;
  dual_lp.objective.resize(static_cast<size_t>(cells));
  dual_lp.eq_lhs = ExactMatrix(coords, cells);
  dual_lp.eq_rhs = std::move(c);
  for (long cell = 0; cell < cells; ++cell) {
    dual_lp.objective[static_cast<size_t>(cell)] =
        -Rational(expansion.constant[static_cast<size_t>(cell)]);
    for (const auto& [coord, sign] : expansion.cell_terms[static_cast<size_t>(cell)])
      dual_lp.eq_lhs.at(coord - 1, cell) = -sign;
  }

  SimplexOptions options;
  options.want_dual = true;
  LpSolution sol = lp_maximize(dual_lp, options);

  const Rational value = c0 - sol.value;
  std::vector<Rational> t(sol.dual.size());
  for (size_t k = 0; k < t.size(); ++k) t[k] = -sol.dual[k];

  std::vector<Rational> table(static_cast<size_t>(cells));
  Rational check = 0;
  for (long cell = 0; cell < cells; ++cell) {
    Rational p(expansion.constant[static_cast<size_t>(cell)]);
    for (const auto& [coord, sign] : expansion.cell_terms[static_cast<size_t>(cell)]) {
      if (sign > 0)
        p += t[static_cast<size_t>(coord - 1)];
      else
        p -= t[static_cast<size_t>(coord - 1)];
    }
    if (p.sign() < 0)
      throw Error("reduced-coordinate certificate produced a negative cell");
    check += objective.coefficients[static_cast<size_t>(cell)] * p;
    table[static_cast<size_t>(cell)] = std::move(p);
  }
  if (check != value)
    throw Error("reduced-coordinate certificate does not reproduce the optimum");

  NsOptimum result{value, Behavior(s, std::move(table)), sol.pivots, true};
  return result;
}

}  // namespace

NsPolytope build_ns_polytope(const Scenario& scenario) {
  const long cells = scenario.cell_count();
  if (cells > kNsCellCap)
    throw EnumerationCapError("no-signalling system too large", cells);

  const int n = scenario.parties;
  const int m = scenario.inputs;
  const int d = scenario.outputs;
  const long inputs = scenario.input_count();
  const long others_in = inputs / m;
  const long others_out = scenario.output_count() / d;

  const long rows = inputs + static_cast<long>(n) * others_in * others_out * (m - 1);
  ExactMatrix lhs(rows, cells);
  std::vector<Rational> rhs(static_cast<size_t>(rows));

  long row = 0;
  for (long x = 0; x < inputs; ++x, ++row) {
    for (long a = 0; a < scenario.output_count(); ++a)
      lhs.at(row, scenario.cell_index(a, x)) = 1;
    rhs[static_cast<size_t>(row)] = 1;
  }
  for (int party = 0; party < n; ++party) {
    for (long rest_x = 0; rest_x < others_in; ++rest_x) {
      for (long rest_a = 0; rest_a < others_out; ++rest_a) {
        for (int v = 1; v < m; ++v, ++row) {
          const long x_lo = compose_index(n, m, party, v - 1, rest_x);
          const long x_hi = compose_index(n, m, party, v, rest_x);
          for (int own = 0; own < d; ++own) {
            const long a = compose_index(n, d, party, own, rest_a);
            lhs.at(row, scenario.cell_index(a, x_lo)) += 1;
            lhs.at(row, scenario.cell_index(a, x_hi)) -= 1;
          }
        }
      }
    }
  }

  ReducedSystem red = reduce_system(lhs, rhs);
  NsPolytope poly{scenario, std::move(lhs), std::move(rhs), red.rank()};
  return poly;
}

NsOptimum ns_maximize(const BellInequality& objective, NsMode mode) {
  bool reduced = false;
  switch (mode) {
    case NsMode::kAuto:
      reduced = objective.scenario.cell_count() > 256 && objective.scenario.outputs == 2;
      break;
    case NsMode::kFullTable:
      reduced = false;
      break;
    case NsMode::kReducedCoordinates:
      reduced = true;
      break;
  }
  return reduced ? ns_maximize_reduced(objective) : ns_maximize_full(objective);
}

NsOptimum ns_bound(const GyniInstance& game, NsMode mode) {
  return ns_maximize(build_inequality(game), mode);
}

AppendixAReport check_appendix_a(const GyniInstance& game, NsMode mode) {
  AppendixAReport report;
  report.omega_c = classical_bound(game);
  report.omega_ns = ns_bound(game, mode).value;
  report.double_bound_holds = report.omega_ns <= report.omega_c * 2;
  report.ns_equals_classical = report.omega_ns == report.omega_c;

  const PriorDistribution& q = game.prior;
  const long inputs = game.scenario().input_count();
  const long all = inputs - 1;  // binary inputs: complement mask
  Rational best = 0;
  for (long x = 0; x < inputs; ++x)
    if (q.weight(x) > best) best = q.weight(x);
  for (long x = 0; x < inputs; ++x) {
    const long xbar = all ^ x;
    if (q.weight(x) == best && q.weight(xbar) == best) {
      report.has_dominant_complementary_pair = true;
      break;
    }
  }
  return report;
}

Rational sum_over_inputs_bound(const Behavior& behavior) {
  NoSignallingReport ns = is_no_signalling(behavior);
  if (!ns.ok)
    throw Error("sum-over-inputs bound requires a no-signalling behavior");
  Rational total = 0;
  for (long x = 0; x < behavior.scenario.input_count(); ++x)
    total += behavior.at(winning_output(behavior.scenario, x), x);
  return total;
}

Behavior box_p1() {
  Scenario s(3, 2, 2);
  Behavior box(s);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
              const int f = ((1 ^ b ^ x ^ y ^ (x & y)) & (1 ^ c ^ z)) ^
                            (a & (1 ^ y ^ (c & y) ^ (b & (c ^ z))));
              if (f)
                box.at(a + 2 * b + 4 * c, x + 2 * y + 4 * z) = Rational(1, 3);
            }
  box.validate();
  return box;
}

Behavior box_p2() {
  Scenario s(3, 2, 2);
  Behavior box(s);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
              const int g = a & b & c & (1 ^ x) & (1 ^ y) & (1 ^ z);
              const int gp = ((1 ^ a) & (1 ^ b) & (1 ^ c)) ^ (x & b & c) ^
                             (a & y & c) ^ (a & b & z) ^ (x & y & z);
              const Rational p = Rational(2 * g + gp, 3);
              if (!p.is_zero())
                box.at(a + 2 * b + 4 * c, x + 2 * y + 4 * z) = p;
            }
  box.validate();
  return box;
}

ExtremalityReport extremality_check(const Behavior& behavior) {
  const Scenario& s = behavior.scenario;
  NsPolytope poly = build_ns_polytope(s);
  const long cells = s.cell_count();

  long zeros = 0;
  for (const Rational& entry : behavior.table)
    if (entry.is_zero()) ++zeros;

  ExactMatrix lhs(poly.eq_lhs.rows + zeros, cells);
  std::vector<Rational> rhs(static_cast<size_t>(lhs.rows));
  for (long r = 0; r < poly.eq_lhs.rows; ++r) {
    for (long j = 0; j < cells; ++j) lhs.at(r, j) = poly.eq_lhs.at(r, j);
    rhs[static_cast<size_t>(r)] = poly.eq_rhs[static_cast<size_t>(r)];
  }
  long row = poly.eq_lhs.rows;
  for (long cell = 0; cell < cells; ++cell)
    if (behavior.table[static_cast<size_t>(cell)].is_zero())
      lhs.at(row++, cell) = 1;

  ReducedSystem red = reduce_system(lhs, rhs);
  ExtremalityReport report{behavior, false, zeros, 0};
  report.tight_solution_dimension = red.solution_dim();
  report.is_vertex = red.consistent && report.tight_solution_dimension == 0;
  return report;
}

OrbitReport orbit_max_violators() {
  Scenario s(3, 2, 2);
  GyniInstance game(3, promise_distribution(3));
  BellInequality ineq = build_inequality(game);
  const Rational target(1, 3);

  const std::vector<Relabeling> group = relabeling_group(s);
  const Behavior p1 = box_p1();
  const Behavior p2 = box_p2();

  std::set<std::vector<Rational>> orbit1, orbit2, max1, max2, max_union;
  for (const Relabeling& r : group) {
    Behavior image1 = apply_relabeling(r, p1);
    Behavior image2 = apply_relabeling(r, p2);
    if (evaluate(ineq, image1) == target) {
      max1.insert(image1.table);
      max_union.insert(image1.table);
    }
    if (evaluate(ineq, image2) == target) {
      max2.insert(image2.table);
      max_union.insert(image2.table);
    }
    orbit1.insert(std::move(image1.table));
    orbit2.insert(std::move(image2.table));
  }

  OrbitReport report;
  report.p1_orbit_size = static_cast<long>(orbit1.size());
  report.p2_orbit_size = static_cast<long>(orbit2.size());
  report.p1_maximal_count = static_cast<long>(max1.size());
  report.p2_maximal_count = static_cast<long>(max2.size());
  report.union_maximal_count = static_cast<long>(max_union.size());
  return report;
}

AppendixCReport check_appendix_c(int odd_parties, NsMode mode) {
  if (odd_parties < 3 || odd_parties % 2 == 0)
    throw Error("odd-to-even audit needs an odd party count of at least 3");

  AppendixCReport report;
  report.odd_parties = odd_parties;

  GyniInstance odd_game(odd_parties, promise_distribution(odd_parties));
  report.omega_c_odd = classical_bound(odd_game);
  NsOptimum odd_opt = ns_bound(odd_game, mode);
  report.omega_ns_odd = odd_opt.value;
  report.ratio_odd = report.omega_ns_odd / report.omega_c_odd;

  // Constructive extension: one extra party whose output copies its own
  // input, evaluated on the even-party objective before that LP runs.
  const int even_parties = odd_parties + 1;
  GyniInstance even_game(even_parties, promise_distribution(even_parties));
  report.omega_c_even = classical_bound(even_game);
  BellInequality even_ineq = build_inequality(even_game);

  Scenario even_scenario = even_game.scenario();
  Behavior extended(even_scenario);
  const long odd_mask = (1L << odd_parties) - 1;
  for (long x = 0; x < even_scenario.input_count(); ++x) {
    const long extra_input = x >> odd_parties;
    for (long a = 0; a < even_scenario.output_count(); ++a) {
      const long extra_output = a >> odd_parties;
      if (extra_output != extra_input) continue;
      extended.at(a, x) = odd_opt.witness.at(a & odd_mask, x & odd_mask);
    }
  }
  report.extension_value = evaluate(even_ineq, extended);
  report.extension_is_no_signalling = is_no_signalling(extended).ok;

  NsOptimum even_opt = ns_maximize(even_ineq, mode);
  report.omega_ns_even = even_opt.value;
  report.ratio_even = report.omega_ns_even / report.omega_c_even;
  report.ratios_equal = report.ratio_odd == report.ratio_even;
  report.extension_matches_even_optimum = report.extension_value == report.omega_ns_even;
  return report;
}

PriorDistribution cubic4_distribution() {
  Scenario s(4, 2, 2);
  std::vector<Rational> weights(static_cast<size_t>(s.input_count()));
  for (long x = 0; x < s.input_count(); ++x) {
    const int x1 = static_cast<int>(x & 1);
    const int x2 = static_cast<int>(x >> 1 & 1);
    const int x3 = static_cast<int>(x >> 2 & 1);
    if ((x1 ^ x2 ^ x3 ^ (x1 & x2 & x3)) == 0) weights[static_cast<size_t>(x)] = Rational(1, 10);
  }
  return PriorDistribution(s, std::move(weights));
}

}  // namespace gyni
