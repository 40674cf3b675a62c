#pragma once

#include <vector>

#include "gyni/facets.hpp"
#include "gyni/rational.hpp"
#include "gyni/scenario.hpp"

namespace gyni {

/// Full-correlation inequality for n parties with two settings each:
///   sum_z c(z) <C_{z_1} ... C_{z_n}>  <=  bound,
/// one coefficient per joint setting word z in {0,1}^n. Bit i of the index z
/// is party i+1's setting, least significant bit first, matching the digit
/// convention used everywhere else in the library.
struct CorrelationInequality {
  int n = 0;
  std::vector<Rational> coefficients;  // 2^n entries, indexed by z
  Rational bound;
};

/// Two-party guessing game on n-bit strings. A referee draws z with
/// probability p_tilde(z), splits it as x XOR y = z, hands x to party A and
/// y to party B, and the parties win when their output bits satisfy
/// a XOR b = f(z). The payoff functional scored here is
///   sum_z (-1)^{f(z)} p_tilde(z) sum_{x XOR y = z} <A_x B_y>
/// with A_x, B_y the parties' +-1-valued answers.
struct NlcInstance {
  int n = 0;
  std::vector<int> f;             // 0/1 per z, 2^n entries
  std::vector<Rational> p_tilde;  // nonnegative, sums to one; 2^n entries

  /// Validates the sizes, the 0/1 range of f, nonnegativity, and exact
  /// normalization of p_tilde; throws Error or DimensionError.
  NlcInstance(int bits, std::vector<int> truth_table, std::vector<Rational> weights);
};

/// Shared linear answer rule for the guessing game: party A outputs u.x and
/// party B outputs u.y XOR delta, dot products taken mod 2.
struct LinearStrategy {
  long u = 0;     // n-bit mask
  int delta = 0;  // 0 or 1
};

/// The complete sign-function family of full-correlation inequalities for n
/// parties with two settings each: for every F: {0,1}^n -> {+1,-1} one member
/// with coefficients c(z) = 2^{-n} sum_r F(r) (-1)^{r.z} and bound 1. The
/// transform is involutive (sum_z c(z) (-1)^{u.z} = F(u)), every member is
/// valid and tight over deterministic +-1 assignments, and together they are
/// exactly the facets of the full-correlation polytope. All 2^(2^n) members
/// are emitted, ordered by the sign mask whose bit r is set when F(r) = -1;
/// the two members of each global-sign pair both appear (see
/// dedup_up_to_global_sign for the halved view). Requires n <= 4.
std::vector<CorrelationInequality> werner_wolf_inequalities(int n);

/// One representative per global-sign orbit: each inequality whose first
/// nonzero coefficient is negative is replaced by its negation (bound kept),
/// then exact duplicates are dropped, keeping first appearances in order.
std::vector<CorrelationInequality> dedup_up_to_global_sign(
    const std::vector<CorrelationInequality>& list);

/// Reads a correlation inequality back into a game: f(z) records the sign of
/// c(z), p_tilde(z) = |c(z)| / sum_w |c(w)|. Zero coefficients get f(z) = 0
/// and weight 0. Throws Error when every coefficient is zero.
NlcInstance nlc_from_correlation(const CorrelationInequality& ci);

/// Inverse direction: coefficients c(z) = (-1)^{f(z)} p_tilde(z) and bound
/// 2^{-n} times the linear-strategy optimum of the game. Composing with
/// nlc_from_correlation reproduces the original inequality scaled by the
/// positive factor 1 / sum_z |c(z)|.
CorrelationInequality correlation_from_nlc(const NlcInstance& inst);

/// Game value of one linear rule and the best rule overall.
struct NlcBound {
  Rational value;
  LinearStrategy best;
};

/// Optimum of the game value over the 2^(n+1) linear strategies, using
///   value(u, delta) = 2^n sum_z (-1)^{f(z)} p_tilde(z) (-1)^{u.z XOR delta}.
/// Ties resolve to the smallest (u, delta) in lexicographic order.
NlcBound nlc_classical_bound(const NlcInstance& inst);

/// Unrestricted classical optimum of the same value: maximizes over all
/// 2^(2^n) output tables of party A, scoring party B's best response per
/// input as sum_y |sum_x (-1)^{a_x} (-1)^{f(x XOR y)} p_tilde(x XOR y)|.
/// Requires n <= 3. Agreement with nlc_classical_bound witnesses that the
/// linear rules are optimal for the instance.
Rational nlc_bruteforce_bound(const NlcInstance& inst);

/// The game as an explicit two-party inequality with 2^n settings and binary
/// outputs per party: the coefficient of outcome (a, b) under settings
/// (x, y) is (-1)^{a XOR b} (-1)^{f(x XOR y)} p_tilde(x XOR y); the bound is
/// the linear-strategy optimum. Party 1 holds x, party 2 holds y. Requires
/// n <= 3.
BellInequality build_nlc_bell_inequality(const NlcInstance& inst);

/// Exhaustive verdict connecting the two deterministic pictures for n-bit
/// strings (n <= 3):
///  - identity_holds: for every linear rule (u, delta) and every z,
///      sum_{x XOR y = z} A_x B_y = 2^n (-1)^{u.z XOR delta};
///  - extremal_points_match: the distinct full-correlation vectors of all
///    per-party sign assignments in the n-party two-setting scenario are
///    exactly the 2^(n+1) vectors z -> (-1)^{u.z XOR delta}, one per linear
///    rule, so the rules enumerate that polytope's vertices.
struct Lemma1Report {
  int n = 0;
  bool identity_holds = false;
  bool extremal_points_match = false;
  long extremal_point_count = 0;  // distinct correlation vectors found

  bool ok() const { return identity_holds && extremal_points_match; }
};

Lemma1Report check_lemma1_correspondence(int n);

/// Verdicts for one sign-function inequality: the correlation form tested
/// against the deterministic +-1 points of its own n-party space, and the
/// expanded two-party game tested against the full local polytope.
struct NlcFacetAudit {
  CorrelationInequality correlation;  // sign-canonical representative
  NlcInstance instance;
  bool trivial = false;               // single nonzero coefficient
  bool correlation_is_facet = false;  // in the n-party full-correlation space
  FacetReport bell;                   // verdict in the two-party scenario
};

/// Sweep over the whole sign-function family at a given n: one candidate per
/// global-sign pair (both members expand to the same game), each mapped to
/// its two-party form and facet-tested against the local polytope measured
/// once up front. Single-correlator members are swept too but flagged
/// trivial. The correlation-space facet test on every candidate certifies
/// that the suite of candidates is complete: any facet-defining game of this
/// family must sit over a correlation facet, so a clean sweep covers them
/// all.
struct NlcAuditReport {
  int n = 0;
  LocalPolytope polytope;  // the two-party scenario's local polytope
  Lemma1Report lemma1;
  std::vector<NlcFacetAudit> candidates;
  long facet_count = 0;  // candidates whose two-party form is facet-defining
  bool candidates_all_correlation_facets = false;
  /// Whether the non-facet candidates were also decomposed into sums of
  /// two-setting (CHSH) inequalities. Never attempted here; always false.
  bool chsh_decomposition_verified = false;
};

/// Runs the sweep for n = 2 or 3.
NlcAuditReport audit_nlc_facets(int n);

}  // namespace gyni
