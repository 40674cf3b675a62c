#pragma once

#include <vector>

#include "gyni/rational.hpp"

namespace gyni {

/// Dense matrix of exact rationals, row-major.
struct ExactMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Rational> entries;  // rows * cols, row-major

  ExactMatrix() = default;
  ExactMatrix(int r, int c) : rows(r), cols(c), entries(static_cast<size_t>(r) * c) {}

  Rational& at(int r, int c) { return entries[static_cast<size_t>(r) * cols + c]; }
  const Rational& at(int r, int c) const { return entries[static_cast<size_t>(r) * cols + c]; }

  static ExactMatrix identity(int n);
  ExactMatrix transposed() const;
};

struct RankResult {
  int rank = 0;
  std::vector<int> pivot_cols;
};

/// Rank and pivot columns by exact Gauss-Jordan elimination. Pivot columns are
/// scanned left to right, the first row with a nonzero entry is used, so the
/// result is deterministic.
RankResult solve_rank_and_basis(ExactMatrix m);

/// Dimension of the affine hull of the given points: the rank of the matrix of
/// differences p_i - p_0. All points must share one dimension and the list
/// must be non-empty; otherwise DimensionError.
int affine_rank(const std::vector<std::vector<Rational>>& points);

/// Incrementally maintained basis of a row space, kept in echelon form with
/// unit pivots. insert() reduces the candidate against the basis and reports
/// whether it added a new direction. Rows are held sorted by pivot column.
class RowBasis {
 public:
  explicit RowBasis(int dim) : dim_(dim) {}

  /// Reduces v in place against the basis; grows the basis iff a nonzero
  /// remainder is left. Returns true when the rank increased.
  bool insert(std::vector<Rational> v);

  int rank() const { return static_cast<int>(rows_.size()); }
  int dim() const { return dim_; }

 private:
  int dim_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<int> pivots_;  // ascending, parallel to rows_
};

/// Row-reduced form of an equality system A x = b.
///
/// `mat`/`rhs` hold only the independent rows (RREF with unit pivots);
/// `pivot_cols[r]` is the pivot column of row r. `consistent` is false when
/// elimination exposed a row 0 = nonzero. When `track_combination` was
/// requested, `combination` holds, per reduced row, its coefficients over the
/// original rows (reduced_row = sum_i combination[r][i] * original_row_i).
struct ReducedSystem {
  ExactMatrix mat;
  std::vector<Rational> rhs;
  std::vector<int> pivot_cols;
  bool consistent = true;
  std::vector<std::vector<Rational>> combination;

  int rank() const { return mat.rows; }
  /// Affine dimension of the solution set (cols - rank); only meaningful when
  /// consistent.
  int solution_dim() const { return mat.cols - mat.rows; }
};

ReducedSystem reduce_system(const ExactMatrix& a, const std::vector<Rational>& b,
                            bool track_combination = false);

}  // namespace gyni
