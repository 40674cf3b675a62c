#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "gyni/game.hpp"
#include "gyni/report.hpp"
#include "gyni/scenario.hpp"

namespace gyni {

/// One RunReport producer per front-end command.  Each attaches expected
/// values (and so verdicts) to every quantity with a known target for the
/// distribution at hand — the promise prior's bound and ratio table, the
/// uniform prior's bound collapse, the named boxes' values and orbit counts,
/// the zero-facet census of the nonlocal-computation candidates — and
/// reports everything else informationally.  All functions are deterministic
/// for fixed arguments (including seeds).

/// Classical bound and maximizing input; for up to five parties also the
/// exhaustive-strategy cross-check.  `with_ns` appends the no-signalling
/// optimum and its ratio to the classical bound.
RunReport run_bounds(const GyniInstance& game, const std::string& dist_label,
                     bool with_ns);

/// No-signalling optimum, ratio, and witness validation; when `witness_path`
/// is nonempty the witness behavior is written there as JSON.
RunReport run_ns_bound(const GyniInstance& game, const std::string& dist_label,
                       const std::string& witness_path);

/// Facet test of the game's inequality at its classical bound.
RunReport run_facet(const GyniInstance& game, const std::string& dist_label);

/// Facet test of an externally supplied inequality (no target values).
RunReport run_facet_inequality(const BellInequality& inequality,
                               const std::string& source_label);

/// The two extremal three-party boxes: normalization, no-signalling,
/// game value 1/3, vertex property, and orbit census 24 / 8 / 32.
RunReport run_boxes_verify();

/// Odd-to-even ratio transfer and the identity-output extension witness.
RunReport run_appendix_c(int odd_parties);

/// Sum-of-squares certificate for the prior's classical bound.
RunReport run_sos_check(const GyniInstance& game, const std::string& dist_label);

/// See-saw search; checks the best value stays within 1e-6 of the classical
/// bound.
RunReport run_seesaw(const GyniInstance& game, const std::string& dist_label,
                     int local_dim, int restarts, std::uint64_t seed);

/// Full nonlocal-computation candidate audit for n input bits per party.
RunReport run_nlc_audit(int n);

/// Randomized no-signalling properties at one size: `distribution_count`
/// random rational priors must respect the doubled classical bound (with
/// dominance implying collapse), and `behavior_count` random no-signalling
/// mixtures must keep the summed winning probability at or below 2.
RunReport run_random_distribution_sweep(int parties, int distribution_count,
                                        int behavior_count, std::uint64_t seed);

/// Sum-of-squares certificate over `count` random rational priors.
RunReport run_random_sos_sweep(int parties, int count, std::uint64_t seed);

enum class Profile { kCore, kExtended };

/// The full reproduction runbook.  The core profile covers every target
/// reachable in minutes: promise bounds for 3..7 parties, no-signalling
/// ratios through five parties, the uniform and cubic four-party priors, the
/// randomized sweeps, boxes, odd-to-even transfer, facet tests through five
/// parties, the certificate checks, see-saw at local dimensions 2 and 3, and
/// the full candidate audits for two and three input bits.  The extended
/// profile adds the six- and seven-party optima and facet tests.  Children
/// run sequentially in a fixed order; `on_child` (when given) observes each
/// child right after it finishes, for progress display.
RunReport run_reproduce_all(Profile profile, std::uint64_t seed,
                            const std::function<void(const RunReport&)>& on_child = {});

}  // namespace gyni
