#include <gmpxx.h>

#include <random>
#include <vector>

#include "doctest.h"
#include "gyni/error.hpp"
#include "gyni/lp.hpp"
#include "gyni/matrix.hpp"
#include "gyni/rational.hpp"

using namespace gyni;

namespace {

// Independent rank oracle: fraction-free (Bareiss) elimination over integers
// after clearing each row's denominators. Shares no code with the library's
// rational Gauss-Jordan path; the divisibility assertion would catch any
// misuse of the one-step condensation formula.
int bareiss_rank(const ExactMatrix& m) {
  std::vector<std::vector<mpz_class>> z(m.rows, std::vector<mpz_class>(m.cols));
  for (int r = 0; r < m.rows; ++r) {
    mpz_class lcm_den = 1;
    for (int c = 0; c < m.cols; ++c) {
      mpz_class den = m.at(r, c).denominator();
      mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), den.get_mpz_t());
    }
    for (int c = 0; c < m.cols; ++c) {
      const Rational& v = m.at(r, c);
      z[r][c] = v.numerator() * (lcm_den / v.denominator());
    }
  }
  mpz_class prev = 1;
  int rank = 0;
  for (int c = 0; c < m.cols && rank < m.rows; ++c) {
    int pr = -1;
    for (int r = rank; r < m.rows; ++r) {
      if (z[r][c] != 0) {
        pr = r;
        break;
      }
    }
    if (pr < 0) continue;
    std::swap(z[pr], z[rank]);
    for (int r = rank + 1; r < m.rows; ++r) {
      for (int j = c + 1; j < m.cols; ++j) {
        mpz_class t = z[rank][c] * z[r][j] - z[r][c] * z[rank][j];
        REQUIRE(t % prev == 0);
        z[r][j] = t / prev;
      }
      z[r][c] = 0;
    }
    prev = z[rank][c];
    ++rank;
  }
  return rank;
}

ExactMatrix matrix_from(const std::vector<std::vector<int>>& rows) {
  ExactMatrix m(static_cast<int>(rows.size()),
                rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c];
  return m;
}

ExactMatrix random_matrix(std::mt19937& rng, int rows, int cols) {
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  ExactMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m.at(r, c) = Rational(num(rng), den(rng));
  return m;
}

// Full optimality audit: the primal attains the value and satisfies every
// constraint; the dual multipliers are feasible for the dual program and
// reproduce the same value, so the optimum is certified from both sides.
void check_lp_certificate(const LinearProgram& lp, const LpSolution& sol) {
  const int n = lp.variables();
  const int m = lp.eq_lhs.rows;
  REQUIRE(static_cast<int>(sol.primal.size()) == n);
  Rational obj = 0;
  for (int j = 0; j < n; ++j) obj += lp.objective[j] * sol.primal[j];
  CHECK(obj == sol.value);
  for (int r = 0; r < m; ++r) {
    Rational lhs = 0;
    for (int j = 0; j < n; ++j) lhs += lp.eq_lhs.at(r, j) * sol.primal[j];
    CHECK(lhs == lp.eq_rhs[r]);
  }
  for (int j = 0; j < n; ++j) {
    if (lp.nonneg.empty() || lp.nonneg[j]) CHECK(sol.primal[j].sign() >= 0);
    if (!lp.upper.empty() && lp.upper[j].has_value()) CHECK(sol.primal[j] <= *lp.upper[j]);
  }

  REQUIRE(static_cast<int>(sol.dual.size()) == m);
  REQUIRE(static_cast<int>(sol.bound_dual.size()) == n);
  Rational dual_value = 0;
  for (int r = 0; r < m; ++r) dual_value += lp.eq_rhs[r] * sol.dual[r];
  for (int j = 0; j < n; ++j) {
    const bool has_upper = !lp.upper.empty() && lp.upper[j].has_value();
    if (has_upper)
      dual_value += *lp.upper[j] * sol.bound_dual[j];
    else
      CHECK(sol.bound_dual[j].is_zero());
    CHECK(sol.bound_dual[j].sign() >= 0);
    Rational slack = sol.bound_dual[j] - lp.objective[j];
    for (int r = 0; r < m; ++r) slack += lp.eq_lhs.at(r, j) * sol.dual[r];
    if (lp.nonneg.empty() || lp.nonneg[j])
      CHECK(slack.sign() >= 0);
    else
      CHECK(slack.is_zero());
  }
  CHECK(dual_value == sol.value);
}

}  // namespace

TEST_CASE("rational canonical form and serialization") {
  CHECK(Rational(2, 4).str() == "1/2");
  CHECK(Rational(-2, 4).str() == "-1/2");
  CHECK(Rational(2, -4).str() == "-1/2");
  CHECK(Rational(0).str() == "0/1");
  CHECK(Rational(7).str() == "7/1");
  CHECK(Rational(0, 5).str() == "0/1");
  CHECK(Rational(mpz_class(10), mpz_class(15)).str() == "2/3");
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("3/9") == Rational(1, 3));
  CHECK(Rational::parse("-6/4") == Rational(-3, 2));
  CHECK(Rational::parse("5") == Rational(5));
  CHECK(Rational::parse("-0") == Rational(0));
  CHECK(Rational::parse("0/1").str() == "0/1");
  CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Rational::parse(""), ParseError);
  CHECK_THROWS_AS(Rational::parse("a/b"), ParseError);
  CHECK_THROWS_AS(Rational::parse("1/2/3"), ParseError);
  CHECK_THROWS_AS(Rational::parse("1.5"), ParseError);
  CHECK_THROWS_AS(Rational::parse("--1"), ParseError);
  CHECK_THROWS_AS(Rational::parse("1/-2"), ParseError);
  CHECK_THROWS_AS(Rational::parse(" 1"), ParseError);
  CHECK_THROWS_AS(Rational(1, 0), ParseError);
}

TEST_CASE("rational arithmetic is exact") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) * Rational(3, 7) == Rational(1, 7));
  CHECK(Rational(1, 3) - Rational(1, 3) == Rational(0));
  CHECK(Rational(5, 7) / Rational(10, 21) == Rational(3, 2));
  CHECK(-Rational(2, 5) == Rational(-2, 5));
  CHECK(Rational(-2, 5).abs() == Rational(2, 5));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(1, 3).sign() == 1);
  CHECK(Rational(-1, 3).sign() == -1);
  CHECK(Rational(0).is_zero());
  CHECK_THROWS_AS(Rational(1) / Rational(0), Error);

  Rational acc(1, 2), scratch;
  Rational::submul(acc, Rational(1, 3), Rational(3, 4), scratch);
  CHECK(acc == Rational(1, 4));
}

TEST_CASE("rational decimal rendering rounds half away from zero") {
  CHECK(Rational(1, 3).decimal(6) == "0.333333");
  CHECK(Rational(2, 3).decimal(6) == "0.666667");
  CHECK(Rational(1, 8).decimal(2) == "0.13");
  CHECK(Rational(-1, 8).decimal(2) == "-0.13");
  CHECK(Rational(1, 2).decimal(0) == "1");
  CHECK(Rational(5).decimal(2) == "5.00");
  CHECK(Rational(1, 11).decimal(12) == "0.090909090909");
  CHECK(Rational(-7, 2).decimal(1) == "-3.5");
}

TEST_CASE("rank and pivot columns of simple matrices") {
  SUBCASE("identity") {
    RankResult r = solve_rank_and_basis(ExactMatrix::identity(3));
    CHECK(r.rank == 3);
    CHECK(r.pivot_cols == std::vector<int>{0, 1, 2});
  }
  SUBCASE("zero matrix") {
    RankResult r = solve_rank_and_basis(ExactMatrix(2, 5));
    CHECK(r.rank == 0);
    CHECK(r.pivot_cols.empty());
  }
  SUBCASE("dependent rows") {
    ExactMatrix m = matrix_from({{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
    RankResult r = solve_rank_and_basis(m);
    CHECK(r.rank == 2);
    CHECK(r.pivot_cols == std::vector<int>{0, 1});
    CHECK(bareiss_rank(m) == 2);
  }
  SUBCASE("leading zero column") {
    ExactMatrix m = matrix_from({{0, 1}, {0, 2}});
    RankResult r = solve_rank_and_basis(m);
    CHECK(r.rank == 1);
    CHECK(r.pivot_cols == std::vector<int>{1});
  }
}

TEST_CASE("rank agrees with the fraction-free oracle and with the transpose") {
  std::mt19937 rng(20260822);
  std::uniform_int_distribution<int> size(1, 7);
  for (int trial = 0; trial < 40; ++trial) {
    ExactMatrix m = random_matrix(rng, size(rng), size(rng));
    const int r1 = solve_rank_and_basis(m).rank;
    CHECK(r1 == bareiss_rank(m));
    CHECK(r1 == solve_rank_and_basis(m.transposed()).rank);
  }
}

TEST_CASE("affine rank of point sets") {
  auto pts = [](std::vector<std::vector<int>> raw) {
    std::vector<std::vector<Rational>> out;
    for (auto& p : raw) out.emplace_back(p.begin(), p.end());
    return out;
  };
  CHECK(affine_rank(pts({{0, 0}, {1, 0}, {0, 1}})) == 2);
  CHECK(affine_rank(pts({{1, 1, 1}})) == 0);
  CHECK(affine_rank(pts({{2, 3}, {2, 3}, {2, 3}})) == 0);
  CHECK(affine_rank(pts({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}})) == 1);
  CHECK_THROWS_AS(affine_rank({}), DimensionError);
  CHECK_THROWS_AS(affine_rank(pts({{1, 2}, {1, 2, 3}})), DimensionError);
}

TEST_CASE("affine rank of the two-party deterministic correlation vectors") {
  // Two parties, two inputs, two outputs: each deterministic strategy is a
  // pair of functions a(x), b(y), and its correlation vector lists
  // (-1)^(a(x)+b(y)) over the four input pairs. The sixteen vectors span the
  // full four-dimensional correlation space.
  std::vector<std::vector<Rational>> points;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      std::vector<Rational> v;
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
          const int ax = (a >> x) & 1;
          const int by = (b >> y) & 1;
          v.push_back(((ax + by) % 2 == 0) ? 1 : -1);
        }
      }
      points.push_back(std::move(v));
    }
  }
  REQUIRE(points.size() == 16);
  CHECK(affine_rank(points) == 4);

  ExactMatrix diffs(15, 4);
  for (int i = 1; i < 16; ++i)
    for (int c = 0; c < 4; ++c) diffs.at(i - 1, c) = points[i][c] - points[0][c];
  CHECK(bareiss_rank(diffs) == 4);
}

TEST_CASE("affine rank is invariant under translation and permutation") {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> coord(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 4;
    const int count = 6;
    std::vector<std::vector<Rational>> points(count, std::vector<Rational>(dim));
    for (auto& p : points)
      for (auto& v : p) v = coord(rng);
    const int base = affine_rank(points);

    std::vector<Rational> shift(dim);
    for (auto& v : shift) v = Rational(coord(rng), 2);
    auto shifted = points;
    for (auto& p : shifted)
      for (int j = 0; j < dim; ++j) p[j] += shift[j];
    CHECK(affine_rank(shifted) == base);

    auto shuffled = points;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(affine_rank(shuffled) == base);
  }
}

TEST_CASE("row basis accumulates independent directions") {
  RowBasis basis(3);
  CHECK(basis.rank() == 0);
  CHECK(basis.insert({Rational(1), Rational(2), Rational(3)}));
  CHECK_FALSE(basis.insert({Rational(2), Rational(4), Rational(6)}));
  CHECK(basis.insert({Rational(0), Rational(1), Rational(1)}));
  CHECK(basis.rank() == 2);
  CHECK_FALSE(basis.insert({Rational(1), Rational(3), Rational(4)}));
  CHECK(basis.insert({Rational(0), Rational(0), Rational(5)}));
  CHECK(basis.rank() == 3);
  CHECK_FALSE(basis.insert({Rational(7), Rational(-2), Rational(9)}));
  CHECK_THROWS_AS(basis.insert({Rational(1)}), DimensionError);
}

TEST_CASE("system reduction tracks consistency and row combinations") {
  SUBCASE("inconsistent system") {
    ExactMatrix a = matrix_from({{1, 1}, {2, 2}});
    ReducedSystem red = reduce_system(a, {Rational(1), Rational(3)});
    CHECK_FALSE(red.consistent);
  }
  SUBCASE("redundant but consistent") {
    ExactMatrix a = matrix_from({{1, 1}, {2, 2}});
    ReducedSystem red = reduce_system(a, {Rational(1), Rational(2)});
    CHECK(red.consistent);
    CHECK(red.rank() == 1);
    CHECK(red.solution_dim() == 1);
  }
  SUBCASE("combination reconstructs the reduced rows") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      ExactMatrix a = random_matrix(rng, 5, 4);
      std::vector<Rational> b(5);
      std::uniform_int_distribution<int> coord(-3, 3);
      for (auto& v : b) v = coord(rng);
      ReducedSystem red = reduce_system(a, b, true);
      REQUIRE(static_cast<int>(red.combination.size()) == red.rank());
      for (int r = 0; r < red.rank(); ++r) {
        for (int c = 0; c < a.cols; ++c) {
          Rational acc = 0;
          for (int i = 0; i < a.rows; ++i) acc += red.combination[r][i] * a.at(i, c);
          CHECK(acc == red.mat.at(r, c));
        }
        Rational acc = 0;
        for (int i = 0; i < a.rows; ++i) acc += red.combination[r][i] * b[i];
        CHECK(acc == red.rhs[r]);
      }
    }
  }
}

TEST_CASE("linear program: simple maximization on the unit simplex") {
  LinearProgram lp;
  lp.objective = {Rational(1), Rational(0)};
  lp.eq_lhs = matrix_from({{1, 1}});
  lp.eq_rhs = {Rational(1)};
  LpSolution sol = lp_maximize(lp);
  CHECK(sol.value == Rational(1));
  CHECK(sol.primal == std::vector<Rational>{Rational(1), Rational(0)});
  check_lp_certificate(lp, sol);
}

TEST_CASE("linear program: degenerate objectives and both pivot rules") {
  LinearProgram lp;
  lp.objective = {Rational(1), Rational(2), Rational(-1)};
  lp.eq_lhs = matrix_from({{1, 1, 1}, {1, -1, 0}});
  lp.eq_rhs = {Rational(1), Rational(0)};
  SimplexOptions bland;
  bland.rule = PivotRule::kBland;
  LpSolution s1 = lp_maximize(lp, bland);
  LpSolution s2 = lp_maximize(lp);
  CHECK(s1.value == s2.value);
  CHECK(s1.value == Rational(3, 2));
  check_lp_certificate(lp, s1);
  check_lp_certificate(lp, s2);
}

TEST_CASE("linear program: free variables and negative right-hand sides") {
  LinearProgram lp;
  lp.objective = {Rational(-1)};
  lp.eq_lhs = matrix_from({{1}});
  lp.eq_rhs = {Rational(-5)};
  lp.nonneg = {false};
  LpSolution sol = lp_maximize(lp);
  CHECK(sol.value == Rational(5));
  CHECK(sol.primal == std::vector<Rational>{Rational(-5)});
  check_lp_certificate(lp, sol);
}

TEST_CASE("linear program: upper bounds without equality rows") {
  LinearProgram lp;
  lp.objective = {Rational(1), Rational(1)};
  lp.eq_lhs = ExactMatrix(0, 2);
  lp.eq_rhs = {};
  lp.upper = {Rational(3, 4), Rational(1, 4)};
  LpSolution sol = lp_maximize(lp);
  CHECK(sol.value == Rational(1));
  check_lp_certificate(lp, sol);
}

TEST_CASE("linear program: infeasible and unbounded inputs are reported") {
  SUBCASE("infeasible equalities") {
    LinearProgram lp;
    lp.objective = {Rational(1), Rational(1)};
    lp.eq_lhs = matrix_from({{1, 1}});
    lp.eq_rhs = {Rational(-1)};
    CHECK_THROWS_AS(lp_maximize(lp), LpInfeasibleError);
  }
  SUBCASE("inconsistent rows") {
    LinearProgram lp;
    lp.objective = {Rational(0), Rational(0)};
    lp.eq_lhs = matrix_from({{1, 1}, {1, 1}});
    lp.eq_rhs = {Rational(1), Rational(2)};
    CHECK_THROWS_AS(lp_maximize(lp), LpInfeasibleError);
  }
  SUBCASE("unbounded ray") {
    LinearProgram lp;
    lp.objective = {Rational(1), Rational(0)};
    lp.eq_lhs = matrix_from({{0, 1}});
    lp.eq_rhs = {Rational(1)};
    CHECK_THROWS_AS(lp_maximize(lp), LpUnboundedError);
  }
  SUBCASE("dimension mismatches") {
    LinearProgram lp;
    CHECK_THROWS_AS(lp_maximize(lp), DimensionError);
    lp.objective = {Rational(1)};
    lp.eq_lhs = matrix_from({{1, 1}});
    lp.eq_rhs = {Rational(1)};
    CHECK_THROWS_AS(lp_maximize(lp), DimensionError);
  }
}

TEST_CASE("linear program: random feasible bounded instances are certified") {
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> nvars(2, 6);
  std::uniform_int_distribution<int> nrows(1, 4);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> value(0, 3);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = nvars(rng);
    const int m = nrows(rng);
    // Build around a known feasible point and close the feasible set with a
    // total-mass row so the maximum always exists.
    std::vector<Rational> x0(n);
    for (auto& v : x0) v = value(rng);
    LinearProgram lp;
    lp.eq_lhs = ExactMatrix(m + 1, n);
    lp.eq_rhs.resize(m + 1);
    for (int r = 0; r < m; ++r) {
      Rational rhs = 0;
      for (int j = 0; j < n; ++j) {
        lp.eq_lhs.at(r, j) = coeff(rng);
        rhs += lp.eq_lhs.at(r, j) * x0[j];
      }
      lp.eq_rhs[r] = rhs;
    }
    Rational total = 0;
    for (int j = 0; j < n; ++j) {
      lp.eq_lhs.at(m, j) = 1;
      total += x0[j];
    }
    lp.eq_rhs[m] = total;
    lp.objective.resize(n);
    for (auto& v : lp.objective) v = coeff(rng);

    LpSolution sol = lp_maximize(lp);
    check_lp_certificate(lp, sol);
    Rational at_x0 = 0;
    for (int j = 0; j < n; ++j) at_x0 += lp.objective[j] * x0[j];
    CHECK(sol.value >= at_x0);

    SimplexOptions bland;
    bland.rule = PivotRule::kBland;
    CHECK(lp_maximize(lp, bland).value == sol.value);
  }
}
