#include "gyni/matrix.hpp"

#include <algorithm>

#include "gyni/error.hpp"

namespace gyni {

ExactMatrix ExactMatrix::identity(int n) {
  ExactMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

ExactMatrix ExactMatrix::transposed() const {
  ExactMatrix t(cols, rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
  return t;
}

namespace {

// Divides row r of m by its entry in column c (assumed nonzero).
void normalize_row(ExactMatrix& m, int r, int c) {
  Rational pivot = m.at(r, c);
  if (pivot == Rational(1)) return;
  for (int j = 0; j < m.cols; ++j) {
    if (!m.at(r, j).is_zero()) m.at(r, j) /= pivot;
  }
}

}  // namespace

RankResult solve_rank_and_basis(ExactMatrix m) {
  RankResult res;
  int next_row = 0;
  Rational scratch;
  for (int c = 0; c < m.cols && next_row < m.rows; ++c) {
    int pr = -1;
    for (int r = next_row; r < m.rows; ++r) {
      if (!m.at(r, c).is_zero()) {
        pr = r;
        break;
      }
    }
    if (pr < 0) continue;
    if (pr != next_row) {
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(next_row, j));
    }
    normalize_row(m, next_row, c);
    for (int r = 0; r < m.rows; ++r) {
      if (r == next_row) continue;
      const Rational f = m.at(r, c);
      if (f.is_zero()) continue;
      for (int j = c; j < m.cols; ++j) {
        if (m.at(next_row, j).is_zero()) continue;
        Rational::submul(m.at(r, j), f, m.at(next_row, j), scratch);
      }
    }
    res.pivot_cols.push_back(c);
    ++next_row;
  }
  res.rank = next_row;
  return res;
}

int affine_rank(const std::vector<std::vector<Rational>>& points) {
  if (points.empty()) throw DimensionError("affine_rank of an empty point list");
  const size_t dim = points[0].size();
  for (const auto& p : points) {
    if (p.size() != dim)
      throw DimensionError("affine_rank: points of unequal dimension");
  }
  RowBasis basis(static_cast<int>(dim));
  const auto& origin = points[0];
  for (size_t i = 1; i < points.size(); ++i) {
    std::vector<Rational> diff(dim);
    for (size_t j = 0; j < dim; ++j) diff[j] = points[i][j] - origin[j];
    basis.insert(std::move(diff));
  }
  return basis.rank();
}

bool RowBasis::insert(std::vector<Rational> v) {
  if (static_cast<int>(v.size()) != dim_)
    throw DimensionError("RowBasis: vector of wrong dimension");
  Rational scratch;
  for (size_t k = 0; k < rows_.size(); ++k) {
    const int p = pivots_[k];
    const Rational f = v[p];
    if (f.is_zero()) continue;
    const auto& row = rows_[k];
    for (int j = p; j < dim_; ++j) {
      if (row[j].is_zero()) continue;
      Rational::submul(v[j], f, row[j], scratch);
    }
  }
  int pivot = -1;
  for (int j = 0; j < dim_; ++j) {
    if (!v[j].is_zero()) {
      pivot = j;
      break;
    }
  }
  if (pivot < 0) return false;
  const Rational lead = v[pivot];
  if (lead != Rational(1)) {
    for (int j = pivot; j < dim_; ++j) {
      if (!v[j].is_zero()) v[j] /= lead;
    }
  }
  auto pos = std::upper_bound(pivots_.begin(), pivots_.end(), pivot);
  const size_t idx = static_cast<size_t>(pos - pivots_.begin());
  pivots_.insert(pos, pivot);
  rows_.insert(rows_.begin() + idx, std::move(v));
  return true;
}

ReducedSystem reduce_system(const ExactMatrix& a, const std::vector<Rational>& b,
                            bool track_combination) {
  if (static_cast<int>(b.size()) != a.rows)
    throw DimensionError("reduce_system: rhs size does not match row count");
  const int n = a.cols;
  const int m = a.rows;
  // Work rows carry [coefficients | rhs | (combination over original rows)].
  ExactMatrix work(m, n + 1 + (track_combination ? m : 0));
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) work.at(r, c) = a.at(r, c);
    work.at(r, n) = b[r];
    if (track_combination) work.at(r, n + 1 + r) = 1;
  }
  Rational scratch;
  int next_row = 0;
  std::vector<int> pivot_cols;
  for (int c = 0; c < n && next_row < m; ++c) {
    int pr = -1;
    for (int r = next_row; r < m; ++r) {
      if (!work.at(r, c).is_zero()) {
        pr = r;
        break;
      }
    }
    if (pr < 0) continue;
    if (pr != next_row) {
      for (int j = 0; j < work.cols; ++j) std::swap(work.at(pr, j), work.at(next_row, j));
    }
    Rational pivot = work.at(next_row, c);
    if (pivot != Rational(1)) {
      for (int j = 0; j < work.cols; ++j) {
        if (!work.at(next_row, j).is_zero()) work.at(next_row, j) /= pivot;
      }
    }
    for (int r = 0; r < m; ++r) {
      if (r == next_row) continue;
      const Rational f = work.at(r, c);
      if (f.is_zero()) continue;
      for (int j = 0; j < work.cols; ++j) {
        if (work.at(next_row, j).is_zero()) continue;
        Rational::submul(work.at(r, j), f, work.at(next_row, j), scratch);
      }
    }
    pivot_cols.push_back(c);
    ++next_row;
  }

  ReducedSystem res;
  res.pivot_cols = pivot_cols;
  res.mat = ExactMatrix(next_row, n);
  res.rhs.resize(next_row);
  for (int r = 0; r < next_row; ++r) {
    for (int c = 0; c < n; ++c) res.mat.at(r, c) = work.at(r, c);
    res.rhs[r] = work.at(r, n);
  }
  if (track_combination) {
    res.combination.resize(next_row, std::vector<Rational>(m));
    for (int r = 0; r < next_row; ++r)
      for (int i = 0; i < m; ++i) res.combination[r][i] = work.at(r, n + 1 + i);
  }
  // A dropped row with nonzero rhs makes the system inconsistent.
  for (int r = next_row; r < m; ++r) {
    if (!work.at(r, n).is_zero()) {
      res.consistent = false;
      break;
    }
  }
  return res;
}

}  // namespace gyni
