#pragma once

#include <optional>
#include <vector>

#include "gyni/matrix.hpp"
#include "gyni/rational.hpp"

namespace gyni {

/// Linear program in equality form:
///   maximize objective . x
///   subject to eq_lhs x = eq_rhs,
///              x_j >= 0 where nonneg[j] (x_j free otherwise),
///              x_j <= upper[j] where an upper bound is present.
///
/// An empty `nonneg` means every variable is nonnegative; an empty `upper`
/// means no variable has an upper bound.
struct LinearProgram {
  std::vector<Rational> objective;
  ExactMatrix eq_lhs;
  std::vector<Rational> eq_rhs;
  std::vector<bool> nonneg;
  std::vector<std::optional<Rational>> upper;

  int variables() const { return static_cast<int>(objective.size()); }
};

/// Entering-variable selection. Both choices are exact and terminating:
/// Bland's rule guarantees termination outright; the most-improving rule
/// switches permanently to Bland's rule once a long run of degenerate pivots
/// signals possible cycling, which preserves the guarantee.
enum class PivotRule {
  kBland,
  kMostImprovingThenBland,
};

struct SimplexOptions {
  PivotRule rule = PivotRule::kMostImprovingThenBland;
  /// Compute the dual certificate (costs one extra exact solve plus row
  /// bookkeeping during preprocessing).
  bool want_dual = true;
  /// Consecutive degenerate pivots tolerated before the most-improving rule
  /// hands over to Bland's rule for good.
  int stall_limit = 300;
};

/// Optimum of a linear program, with certificates.
///
/// `primal` attains `value` and satisfies every constraint exactly.
/// When requested, `dual` (one multiplier per equality row) and `bound_dual`
/// (one multiplier per variable, nonzero only where an upper bound exists)
/// certify optimality:
///   (eq_lhs^T dual)_j + bound_dual_j >= objective_j   (equality for free x_j),
///   bound_dual >= 0, and
///   eq_rhs . dual + sum_j upper_j * bound_dual_j = value.
struct LpSolution {
  Rational value;
  std::vector<Rational> primal;
  std::vector<Rational> dual;
  std::vector<Rational> bound_dual;
  long pivots = 0;
};

/// Exact two-phase primal simplex.
///
/// The equality system is first row-reduced; an inconsistent system reports
/// infeasible immediately, and the reduced rows' pivot columns seed the
/// starting basis so that artificial variables are introduced only for rows
/// whose reduced right-hand side is negative. Throws LpInfeasibleError /
/// LpUnboundedError.
LpSolution lp_maximize(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace gyni
