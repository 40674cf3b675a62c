#include "gyni/lp.hpp"

#include <algorithm>
#include <utility>

#include "gyni/error.hpp"

namespace gyni {

namespace {

/// Dense simplex tableau. Each row holds the constraint coefficients followed
/// by the right-hand side; `drow` holds the reduced improvement rate of each
/// column for the current objective (positive = entering the column improves).
class Tableau {
 public:
  Tableau(int ncols) : ncols_(ncols), basis_pos_(ncols, -1) {}

  void add_row(std::vector<Rational> coeffs_and_rhs, int basic_col) {
    const int r = static_cast<int>(rows_.size());
    rows_.push_back(std::move(coeffs_and_rhs));
    basis_.push_back(basic_col);
    basis_pos_[basic_col] = r;
  }

  int row_count() const { return static_cast<int>(rows_.size()); }
  int col_count() const { return ncols_; }
  int basic_col(int r) const { return basis_[r]; }
  int basis_row(int c) const { return basis_pos_[c]; }
  const Rational& rhs(int r) const { return rows_[r][ncols_]; }
  const Rational& entry(int r, int c) const { return rows_[r][c]; }
  long pivots() const { return pivots_; }

  /// Recomputes `drow` for the objective `c` (length = col_count()) under the
  /// current basis. Basic columns end up with rate exactly zero.
  void set_objective(const std::vector<Rational>& c) {
    drow_ = c;
    Rational scratch;
    for (int r = 0; r < row_count(); ++r) {
      const Rational& coef = c[basis_[r]];
      if (coef.is_zero()) continue;
      const auto& row = rows_[r];
      for (int j = 0; j < ncols_; ++j) {
        if (row[j].is_zero()) continue;
        Rational::submul(drow_[j], coef, row[j], scratch);
      }
    }
  }

  /// Objective value of the current basic solution for objective `c`.
  Rational objective_value(const std::vector<Rational>& c) const {
    Rational v = 0;
    for (int r = 0; r < row_count(); ++r) v += c[basis_[r]] * rhs(r);
    return v;
  }

  void pivot(int leave_row, int enter_col) {
    auto& prow = rows_[leave_row];
    const Rational p = prow[enter_col];
    if (p != Rational(1)) {
      for (auto& e : prow) {
        if (!e.is_zero()) e /= p;
      }
    }
    Rational scratch;
    for (int r = 0; r < row_count(); ++r) {
      if (r == leave_row) continue;
      eliminate(rows_[r], prow, enter_col, scratch);
    }
    eliminate(drow_, prow, enter_col, scratch);
    basis_pos_[basis_[leave_row]] = -1;
    basis_[leave_row] = enter_col;
    basis_pos_[enter_col] = leave_row;
    ++pivots_;
  }

  /// Runs simplex iterations until no eligible column improves the objective.
  /// Returns false if an improving column has no blocking row (unbounded ray).
  bool optimize(const std::vector<char>& eligible, PivotRule rule, int stall_limit) {
    int stalled = 0;
    bool bland = (rule == PivotRule::kBland);
    for (;;) {
      const int e = pick_entering(eligible, bland);
      if (e < 0) return true;
      const int l = pick_leaving(e);
      if (l < 0) return false;
      if (!bland) {
        if (rhs(l).is_zero()) {
          if (++stalled > stall_limit) bland = true;
        } else {
          stalled = 0;
        }
      }
      pivot(l, e);
    }
  }

 private:
  // `row` may be a full tableau row or the shorter objective row; only its
  // own length is touched.
  static void eliminate(std::vector<Rational>& row, const std::vector<Rational>& prow,
                        int col, Rational& scratch) {
    const Rational f = row[col];
    if (f.is_zero()) return;
    const int n = static_cast<int>(row.size());
    for (int j = 0; j < n; ++j) {
      if (prow[j].is_zero()) continue;
      Rational::submul(row[j], f, prow[j], scratch);
    }
  }

  int pick_entering(const std::vector<char>& eligible, bool bland) const {
    int best = -1;
    for (int j = 0; j < ncols_; ++j) {
      if (!eligible[j] || basis_pos_[j] >= 0) continue;
      if (drow_[j].sign() <= 0) continue;
      if (bland) return j;
      if (best < 0 || drow_[j] > drow_[best]) best = j;
    }
    return best;
  }

  /// Minimum-ratio test; ties broken toward the smallest basic column index,
  /// which is the tie-break Bland's rule needs for termination.
  int pick_leaving(int enter_col) const {
    int best = -1;
    Rational best_ratio;
    for (int r = 0; r < row_count(); ++r) {
      const Rational& a = rows_[r][enter_col];
      if (a.sign() <= 0) continue;
      Rational ratio = rhs(r) / a;
      if (best < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis_[r] < basis_[best])) {
        best = r;
        best_ratio = std::move(ratio);
      }
    }
    return best;
  }

  int ncols_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> drow_;
  std::vector<int> basis_;
  std::vector<int> basis_pos_;
  long pivots_ = 0;
};

void validate(const LinearProgram& lp) {
  const int n = lp.variables();
  if (n == 0) throw DimensionError("linear program with no variables");
  if (lp.eq_lhs.cols != n)
    throw DimensionError("constraint matrix column count does not match variable count");
  if (static_cast<int>(lp.eq_rhs.size()) != lp.eq_lhs.rows)
    throw DimensionError("right-hand side length does not match constraint row count");
  if (!lp.nonneg.empty() && static_cast<int>(lp.nonneg.size()) != n)
    throw DimensionError("nonnegativity flag count does not match variable count");
  if (!lp.upper.empty() && static_cast<int>(lp.upper.size()) != n)
    throw DimensionError("upper bound count does not match variable count");
}

}  // namespace

LpSolution lp_maximize(const LinearProgram& lp, const SimplexOptions& options) {
  validate(lp);
  const int n0 = lp.variables();
  const int m0 = lp.eq_lhs.rows;

  std::vector<int> bounded;  // original indices of variables with an upper bound
  for (int j = 0; j < n0 && !lp.upper.empty(); ++j) {
    if (lp.upper[j].has_value()) bounded.push_back(j);
  }
  std::vector<int> free_vars;  // original indices of sign-unrestricted variables
  for (int j = 0; j < n0 && !lp.nonneg.empty(); ++j) {
    if (!lp.nonneg[j]) free_vars.push_back(j);
  }
  const int nb = static_cast<int>(bounded.size());
  const int nf = static_cast<int>(free_vars.size());
  const int n_aug = n0 + nb + nf;
  const int m_aug = m0 + nb;

  // Augmented standard form: bound x_j <= u becomes the row x_j + s_k = u with
  // a fresh slack, and each free variable gains a negated companion column so
  // that every column is nonnegative.
  ExactMatrix a(m_aug, n_aug);
  std::vector<Rational> b(m_aug);
  std::vector<Rational> c(n_aug);
  for (int r = 0; r < m0; ++r)
    for (int j = 0; j < n0; ++j) a.at(r, j) = lp.eq_lhs.at(r, j);
  for (int j = 0; j < n0; ++j) c[j] = lp.objective[j];
  for (int r = 0; r < m0; ++r) b[r] = lp.eq_rhs[r];
  for (int k = 0; k < nb; ++k) {
    a.at(m0 + k, bounded[k]) = 1;
    a.at(m0 + k, n0 + k) = 1;
    b[m0 + k] = *lp.upper[bounded[k]];
  }
  for (int f = 0; f < nf; ++f) {
    const int j = free_vars[f];
    const int col = n0 + nb + f;
    for (int r = 0; r < m_aug; ++r) {
      if (!a.at(r, j).is_zero()) a.at(r, col) = -a.at(r, j);
    }
    c[col] = -c[j];
  }

  ReducedSystem red = reduce_system(a, b, options.want_dual);
  if (!red.consistent) throw LpInfeasibleError();
  const int nrows = red.rank();

  // Rows with a negative reduced right-hand side are negated so every basic
  // value starts nonnegative; only those rows need an artificial variable.
  std::vector<char> negated(nrows, 0);
  std::vector<int> art_rows;
  for (int r = 0; r < nrows; ++r) {
    if (red.rhs[r].sign() < 0) {
      negated[r] = 1;
      for (int j = 0; j < n_aug; ++j) {
        if (!red.mat.at(r, j).is_zero()) red.mat.at(r, j) = -red.mat.at(r, j);
      }
      red.rhs[r] = -red.rhs[r];
      if (options.want_dual) {
        for (auto& e : red.combination[r]) {
          if (!e.is_zero()) e = -e;
        }
      }
      art_rows.push_back(r);
    }
  }
  const int n_art = static_cast<int>(art_rows.size());
  const int ncols = n_aug + n_art;

  Tableau tab(ncols);
  {
    std::vector<int> art_col_of_row(nrows, -1);
    for (int t = 0; t < n_art; ++t) art_col_of_row[art_rows[t]] = n_aug + t;
    for (int r = 0; r < nrows; ++r) {
      std::vector<Rational> row(ncols + 1);
      for (int j = 0; j < n_aug; ++j) row[j] = red.mat.at(r, j);
      if (art_col_of_row[r] >= 0) row[art_col_of_row[r]] = 1;
      row[ncols] = red.rhs[r];
      tab.add_row(std::move(row), negated[r] ? art_col_of_row[r] : red.pivot_cols[r]);
    }
  }

  std::vector<Rational> c_ext(ncols);
  for (int j = 0; j < n_aug; ++j) c_ext[j] = c[j];

  if (n_art > 0) {
    std::vector<Rational> c_art(ncols);
    for (int t = 0; t < n_art; ++t) c_art[n_aug + t] = -1;
    std::vector<char> all_eligible(ncols, 1);
    tab.set_objective(c_art);
    if (!tab.optimize(all_eligible, options.rule, options.stall_limit))
      throw Error("artificial objective reported unbounded");
    if (!tab.objective_value(c_art).is_zero()) throw LpInfeasibleError();
    // Pivot any artificial still basic (at value zero) out of the basis; the
    // reduced rows are independent, so a real pivot entry always exists.
    for (int r = 0; r < nrows; ++r) {
      if (tab.basic_col(r) < n_aug) continue;
      int enter = -1;
      for (int j = 0; j < n_aug; ++j) {
        if (tab.basis_row(j) < 0 && !tab.entry(r, j).is_zero()) {
          enter = j;
          break;
        }
      }
      if (enter < 0) throw Error("artificial variable stuck in basis");
      tab.pivot(r, enter);
    }
  }

  std::vector<char> eligible(ncols, 1);
  for (int t = 0; t < n_art; ++t) eligible[n_aug + t] = 0;
  tab.set_objective(c_ext);
  if (!tab.optimize(eligible, options.rule, options.stall_limit)) throw LpUnboundedError();

  LpSolution sol;
  sol.pivots = tab.pivots();
  sol.value = tab.objective_value(c_ext);
  std::vector<Rational> y(n_aug);
  for (int r = 0; r < nrows; ++r) {
    if (tab.basic_col(r) < n_aug) y[tab.basic_col(r)] = tab.rhs(r);
  }
  sol.primal.assign(y.begin(), y.begin() + n0);
  for (int f = 0; f < nf; ++f) sol.primal[free_vars[f]] -= y[n0 + nb + f];

  if (options.want_dual) {
    // The dual over the reduced rows solves transpose(B) y = c_B, where B's
    // columns are the reduced-matrix columns of the final basis; mapping that
    // through each reduced row's combination over the input rows gives the
    // multipliers for the equality rows and the upper bounds.
    ExactMatrix bt(nrows, nrows);
    std::vector<Rational> cb(nrows);
    for (int i = 0; i < nrows; ++i) {
      const int col = tab.basic_col(i);
      if (col >= n_aug) throw Error("artificial variable in final basis");
      for (int j = 0; j < nrows; ++j) bt.at(i, j) = red.mat.at(j, col);
      cb[i] = c_ext[col];
    }
    ReducedSystem dual_sys = reduce_system(bt, cb);
    if (dual_sys.rank() != nrows) throw Error("singular basis while extracting dual");
    std::vector<Rational> mapped(m_aug);
    Rational scratch;
    for (int r = 0; r < nrows; ++r) {
      const Rational& yr = dual_sys.rhs[r];
      if (yr.is_zero()) continue;
      for (int i = 0; i < m_aug; ++i) {
        const Rational& comb = red.combination[r][i];
        if (comb.is_zero()) continue;
        Rational::addmul(mapped[i], yr, comb, scratch);
      }
    }
    sol.dual.assign(mapped.begin(), mapped.begin() + m0);
    sol.bound_dual.assign(n0, Rational(0));
    for (int k = 0; k < nb; ++k) sol.bound_dual[bounded[k]] = mapped[m0 + k];
  }
  return sol;
}

}  // namespace gyni
