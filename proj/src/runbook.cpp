#include "gyni/runbook.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <random>
#include <vector>

#include "gyni/error.hpp"
#include "gyni/facets.hpp"
#include "gyni/json_io.hpp"
#include "gyni/nlc.hpp"
#include "gyni/nosignalling.hpp"
#include "gyni/quantum.hpp"

namespace gyni {
namespace {

Rational promise_classical(int parties) { return Rational(1, 1L << (parties - 1)); }

// Known no-signalling-to-classical ratios: the promise prior's table and the
// uniform prior's collapse to the classical bound.
std::optional<Rational> expected_ns_ratio(const std::string& label, int parties) {
  if (label == "uniform") return Rational(1);
  if (label != "promise") return std::nullopt;
  switch (parties) {
    case 2:
      return Rational(1);
    case 3:
    case 4:
      return Rational(4, 3);
    case 5:
    case 6:
      return Rational(16, 11);
    case 7:
      return Rational(64, 42);
    default:
      return std::nullopt;
  }
}

long power_of_three(int exponent) {
  long value = 1;
  for (int i = 0; i < exponent; ++i) value *= 3;
  return value;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void add_rational(RunReport& report, std::string name, const Rational& value,
                  const std::optional<Rational>& expected) {
  if (expected)
    report.add(checked_rational(std::move(name), value, *expected));
  else
    report.add(info_rational(std::move(name), value));
}

PriorDistribution random_prior(const Scenario& scenario, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 100);
  std::vector<Rational> weights(static_cast<size_t>(scenario.input_count()));
  long total = 0;
  while (total == 0) {
    total = 0;
    for (Rational& w : weights) {
      int v = pick(rng);
      w = Rational(v);
      total += v;
    }
  }
  for (Rational& w : weights) w = w / Rational(total);
  return PriorDistribution(scenario, std::move(weights));
}

std::string candidate_name(size_t index) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "candidate[%03zu]", index);
  return buffer;
}

std::string join_rationals(const std::vector<Rational>& values) {
  std::string text = "(";
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) text += ",";
    text += values[i].str();
  }
  text += ")";
  return text;
}

}  // namespace

RunReport run_bounds(const GyniInstance& game, const std::string& dist_label,
                     bool with_ns) {
  RunReport report;
  report.command = "bounds";
  report.param("parties", std::to_string(game.parties));
  report.param("dist", dist_label);

  Rational omega_c = classical_bound(game);
  std::optional<Rational> expected_c;
  if (dist_label == "promise") expected_c = promise_classical(game.parties);
  add_rational(report, "omega_c", omega_c, expected_c);
  report.add(info_item("best_input",
                       game.scenario().input_string(classical_best_input(game))));
  if (game.parties <= 5) {
    BruteforceBound brute = classical_bound_bruteforce(game);
    report.add(checked_rational("bruteforce_value", brute.value, omega_c));
  }
  if (with_ns) {
    NsOptimum opt = ns_bound(game);
    Rational ratio = opt.value / omega_c;
    std::optional<Rational> expected_ratio = expected_ns_ratio(dist_label, game.parties);
    std::optional<Rational> expected_ns;
    if (expected_ratio) expected_ns = *expected_ratio * omega_c;
    add_rational(report, "omega_ns", opt.value, expected_ns);
    add_rational(report, "ns_ratio", ratio, expected_ratio);
  }
  return report;
}

RunReport run_ns_bound(const GyniInstance& game, const std::string& dist_label,
                       const std::string& witness_path) {
  RunReport report;
  report.command = "ns-bound";
  report.param("parties", std::to_string(game.parties));
  report.param("dist", dist_label);
  if (!witness_path.empty()) report.param("witness", witness_path);

  Rational omega_c = classical_bound(game);
  std::optional<Rational> expected_c;
  if (dist_label == "promise") expected_c = promise_classical(game.parties);
  add_rational(report, "omega_c", omega_c, expected_c);

  NsOptimum opt = ns_bound(game);
  Rational ratio = opt.value / omega_c;
  std::optional<Rational> expected_ratio = expected_ns_ratio(dist_label, game.parties);
  std::optional<Rational> expected_ns;
  if (expected_ratio) expected_ns = *expected_ratio * omega_c;
  add_rational(report, "omega_ns", opt.value, expected_ns);
  add_rational(report, "ns_ratio", ratio, expected_ratio);

  report.add(checked_flag("witness_no_signalling", is_no_signalling(opt.witness).ok,
                          true));
  Rational replay = evaluate(build_inequality(game), opt.witness);
  report.add(checked_rational("witness_value", replay, opt.value));
  report.add(info_count("simplex_pivots", opt.pivots));
  report.add(info_item("formulation", opt.used_reduced_coordinates
                                          ? "reduced-coordinates"
                                          : "full-table"));
  if (!witness_path.empty()) {
    write_text_file(witness_path, serialize_behavior(opt.witness));
    report.add(info_item("witness_file", witness_path));
  }
  return report;
}

RunReport run_facet(const GyniInstance& game, const std::string& dist_label) {
  RunReport report;
  report.command = "facet";
  report.param("parties", std::to_string(game.parties));
  report.param("dist", dist_label);

  BellInequality ineq = build_inequality(game);
  FacetReport facet = facet_check(ineq);

  report.add(checked_count("polytope_dimension", facet.polytope_dimension,
                           power_of_three(game.parties) - 1));
  report.add(info_count("saturating_count", facet.saturating_count));
  report.add(checked_flag("is_valid", facet.is_valid, true));
  // The bound is the classical optimum, so some vertex must reach it exactly.
  report.add(checked_rational("max_vertex_value", facet.max_vertex_value, ineq.bound));
  if (dist_label == "promise") {
    report.add(checked_count("saturating_dimension", facet.saturating_dimension,
                             facet.polytope_dimension - 1));
    report.add(checked_flag("is_facet", facet.is_facet, true));
  } else if (dist_label == "cubic4") {
    report.add(info_count("saturating_dimension", facet.saturating_dimension));
    report.add(checked_flag("is_facet", facet.is_facet, false));
  } else {
    report.add(info_count("saturating_dimension", facet.saturating_dimension));
    report.add(info_item("is_facet", facet.is_facet ? "true" : "false"));
  }
  return report;
}

RunReport run_facet_inequality(const BellInequality& inequality,
                               const std::string& source_label) {
  RunReport report;
  report.command = "facet";
  report.param("inequality", source_label);

  FacetReport facet = facet_check(inequality);
  report.add(info_rational("bound", inequality.bound));
  report.add(info_count("polytope_dimension", facet.polytope_dimension));
  report.add(info_count("saturating_count", facet.saturating_count));
  report.add(info_count("saturating_dimension", facet.saturating_dimension));
  report.add(info_rational("max_vertex_value", facet.max_vertex_value));
  report.add(info_item("is_valid", facet.is_valid ? "true" : "false"));
  report.add(info_item("is_facet", facet.is_facet ? "true" : "false"));
  return report;
}

RunReport run_boxes_verify() {
  RunReport report;
  report.command = "boxes verify";

  GyniInstance game(3, promise_distribution(3));
  BellInequality ineq = build_inequality(game);
  const Rational third(1, 3);

  struct Named {
    const char* name;
    Behavior box;
  };
  Named boxes[] = {{"p1", box_p1()}, {"p2", box_p2()}};
  for (const Named& entry : boxes) {
    std::string prefix = entry.name;
    bool normalized = true;
    try {
      entry.box.validate();
    } catch (const Error&) {
      normalized = false;
    }
    report.add(checked_flag(prefix + "_normalized", normalized, true));
    report.add(checked_flag(prefix + "_no_signalling", is_no_signalling(entry.box).ok,
                            true));
    report.add(checked_rational(prefix + "_value", evaluate(ineq, entry.box), third));
    ExtremalityReport extremality = extremality_check(entry.box);
    report.add(checked_flag(prefix + "_is_vertex", extremality.is_vertex, true));
    report.add(info_count(prefix + "_tight_nonnegativities",
                          extremality.tight_nonnegativity_count));
  }

  OrbitReport orbits = orbit_max_violators();
  report.add(info_count("p1_orbit_size", orbits.p1_orbit_size));
  report.add(info_count("p2_orbit_size", orbits.p2_orbit_size));
  report.add(checked_count("p1_maximal_count", orbits.p1_maximal_count, 24));
  report.add(checked_count("p2_maximal_count", orbits.p2_maximal_count, 8));
  report.add(checked_count("union_maximal_count", orbits.union_maximal_count, 32));
  return report;
}

RunReport run_appendix_c(int odd_parties) {
  RunReport report;
  report.command = "appendix-c";
  report.param("odd_n", std::to_string(odd_parties));

  AppendixCReport rep = check_appendix_c(odd_parties);
  report.add(checked_rational("omega_c_odd", rep.omega_c_odd,
                              promise_classical(odd_parties)));
  report.add(checked_rational("omega_c_even", rep.omega_c_even,
                              promise_classical(odd_parties + 1)));
  std::optional<Rational> ratio_odd = expected_ns_ratio("promise", odd_parties);
  std::optional<Rational> ratio_even = expected_ns_ratio("promise", odd_parties + 1);
  std::optional<Rational> ns_odd;
  std::optional<Rational> ns_even;
  if (ratio_odd) ns_odd = *ratio_odd * rep.omega_c_odd;
  if (ratio_even) ns_even = *ratio_even * rep.omega_c_even;
  add_rational(report, "omega_ns_odd", rep.omega_ns_odd, ns_odd);
  add_rational(report, "omega_ns_even", rep.omega_ns_even, ns_even);
  add_rational(report, "ratio_odd", rep.ratio_odd, ratio_odd);
  add_rational(report, "ratio_even", rep.ratio_even, ratio_even);
  report.add(checked_flag("ratios_equal", rep.ratios_equal, true));
  report.add(checked_flag("extension_no_signalling", rep.extension_is_no_signalling,
                          true));
  report.add(checked_rational("extension_value", rep.extension_value,
                              rep.omega_ns_even));
  report.add(checked_flag("extension_matches_even_optimum",
                          rep.extension_matches_even_optimum, true));
  return report;
}

RunReport run_sos_check(const GyniInstance& game, const std::string& dist_label) {
  RunReport report;
  report.command = "sos-check";
  report.param("parties", std::to_string(game.parties));
  report.param("dist", dist_label);

  SosReport rep = verify_sos_identity(game.prior);
  std::optional<Rational> expected_c;
  if (dist_label == "promise") expected_c = promise_classical(game.parties);
  add_rational(report, "omega_c", rep.omega_c, expected_c);
  report.add(checked_flag("identity_holds", rep.identity_holds, true));
  if (!rep.first_mismatch.empty())
    report.add(info_item("first_mismatch", rep.first_mismatch));
  return report;
}

RunReport run_seesaw(const GyniInstance& game, const std::string& dist_label,
                     int local_dim, int restarts, std::uint64_t seed) {
  RunReport report;
  report.command = "seesaw";
  report.param("parties", std::to_string(game.parties));
  report.param("dist", dist_label);
  report.param("dim", std::to_string(local_dim));
  report.param("restarts", std::to_string(restarts));
  report.has_seed = true;
  report.seed = seed;

  Rational omega_c = classical_bound(game);
  double best = seesaw_search(game, local_dim, restarts, seed);
  double threshold = omega_c.to_double() + 1e-6;
  report.add(info_rational("omega_c", omega_c));
  report.add(info_item("best_value", format_double(best)));
  report.add(info_item("threshold", format_double(threshold)));
  report.add(checked_flag("within_classical_threshold", best <= threshold, true));
  return report;
}

RunReport run_nlc_audit(int n) {
  RunReport report;
  report.command = "nlc-audit";
  report.param("n", std::to_string(n));

  NlcAuditReport audit = audit_nlc_facets(n);
  long settings = 1L << n;
  report.add(info_count("polytope_vertices", audit.polytope.vertex_count));
  report.add(checked_count("polytope_dimension", audit.polytope.affine_dimension,
                           (settings + 1) * (settings + 1) - 1));
  report.add(checked_flag("lemma1_identity", audit.lemma1.identity_holds, true));
  report.add(checked_flag("lemma1_extremal_points", audit.lemma1.extremal_points_match,
                          true));
  report.add(checked_count("lemma1_point_count", audit.lemma1.extremal_point_count,
                           2 * settings));
  report.add(checked_count("candidate_count",
                           static_cast<long>(audit.candidates.size()),
                           1L << (settings - 1)));
  report.add(checked_count("facet_count", audit.facet_count, 0));
  report.add(checked_flag("correlation_facets",
                          audit.candidates_all_correlation_facets, true));
  report.add(info_item("chsh_decomposition", audit.chsh_decomposition_verified
                                                 ? "verified"
                                                 : "unverified"));

  for (size_t i = 0; i < audit.candidates.size(); ++i) {
    const NlcFacetAudit& candidate = audit.candidates[i];
    const FacetReport& bell = candidate.bell;
    bool tight = bell.max_vertex_value == bell.inequality.bound;
    std::string actual = std::string(bell.is_valid ? "valid" : "invalid") + ", " +
                         (tight ? "tight" : "slack") + ", " +
                         (bell.is_facet ? "facet" : "not facet");
    report.add(checked_text(candidate_name(i), actual, "valid, tight, not facet"));
    std::string detail = "c=" + join_rationals(candidate.correlation.coefficients) +
                         " bound=" + bell.inequality.bound.str() +
                         " saturating=" + std::to_string(bell.saturating_count) +
                         " dimension=" + std::to_string(bell.saturating_dimension) +
                         (candidate.trivial ? " trivial" : "") +
                         (candidate.correlation_is_facet ? " correlation-facet" : "");
    report.add(info_item(candidate_name(i) + ".detail", detail));
  }
  return report;
}

RunReport run_random_distribution_sweep(int parties, int distribution_count,
                                        int behavior_count, std::uint64_t seed) {
  RunReport report;
  report.command = "appendix-a-random";
  report.param("parties", std::to_string(parties));
  report.param("distributions", std::to_string(distribution_count));
  report.param("behaviors", std::to_string(behavior_count));
  report.has_seed = true;
  report.seed = seed;

  std::mt19937_64 rng(seed);
  Scenario scenario(parties, 2, 2);

  long double_bound_violations = 0;
  long dominance_violations = 0;
  long dominant_count = 0;
  long equality_count = 0;
  for (int i = 0; i < distribution_count; ++i) {
    GyniInstance game(parties, random_prior(scenario, rng));
    AppendixAReport rep = check_appendix_a(game);
    if (!rep.double_bound_holds) ++double_bound_violations;
    if (rep.has_dominant_complementary_pair) {
      ++dominant_count;
      if (!rep.ns_equals_classical) ++dominance_violations;
    }
    if (rep.ns_equals_classical) ++equality_count;
  }
  report.add(checked_count("double_bound_violations", double_bound_violations, 0));
  report.add(checked_count("dominance_collapse_violations", dominance_violations, 0));
  report.add(info_count("dominant_pair_priors", dominant_count));
  report.add(info_count("collapsed_priors", equality_count));

  // Random no-signalling points: convex mixtures of deterministic vertices
  // and relabeled images of the two extremal boxes, all of which lie in the
  // no-signalling set, which is convex and relabeling-closed.
  std::vector<Behavior> pool;
  for (const DeterministicStrategy& strategy : enumerate_deterministic(scenario))
    pool.push_back(behavior_from_strategy(strategy));
  std::vector<Relabeling> group;
  Behavior p1 = box_p1();
  Behavior p2 = box_p2();
  bool boxes_fit = parties == 3;
  if (boxes_fit) group = relabeling_group(scenario);

  std::uniform_int_distribution<size_t> pick_vertex(0, pool.size() - 1);
  std::uniform_int_distribution<int> pick_weight(1, 50);
  std::uniform_int_distribution<int> pick_kind(0, 9);

  long sum_violations = 0;
  Rational max_sum;
  for (int trial = 0; trial < behavior_count; ++trial) {
    int components = 2 + static_cast<int>(rng() % 4);
    std::vector<Behavior> parts;
    std::vector<int> weights;
    int total = 0;
    for (int k = 0; k < components; ++k) {
      int kind = pick_kind(rng);
      if (!boxes_fit || kind < 7) {
        parts.push_back(pool[pick_vertex(rng)]);
      } else {
        std::uniform_int_distribution<size_t> pick_rel(0, group.size() - 1);
        parts.push_back(
            apply_relabeling(group[pick_rel(rng)], kind == 7 ? p1 : p2));
      }
      int w = pick_weight(rng);
      weights.push_back(w);
      total += w;
    }
    Behavior mix(scenario);
    for (int k = 0; k < components; ++k) {
      Rational scale(weights[static_cast<size_t>(k)], total);
      for (size_t cell = 0; cell < mix.table.size(); ++cell)
        mix.table[cell] += scale * parts[static_cast<size_t>(k)].table[cell];
    }
    Rational sum = sum_over_inputs_bound(mix);
    if (sum > Rational(2)) ++sum_violations;
    if (sum > max_sum) max_sum = sum;
  }
  report.add(checked_count("input_sum_violations", sum_violations, 0));
  report.add(info_rational("max_input_sum", max_sum));
  return report;
}

RunReport run_random_sos_sweep(int parties, int count, std::uint64_t seed) {
  RunReport report;
  report.command = "sos-random";
  report.param("parties", std::to_string(parties));
  report.param("samples", std::to_string(count));
  report.has_seed = true;
  report.seed = seed;

  std::mt19937_64 rng(seed);
  Scenario scenario(parties, 2, 2);
  long failures = 0;
  for (int i = 0; i < count; ++i) {
    SosReport rep = verify_sos_identity(random_prior(scenario, rng));
    if (!rep.identity_holds) ++failures;
  }
  report.add(checked_count("identity_failures", failures, 0));
  return report;
}

RunReport run_reproduce_all(Profile profile, std::uint64_t seed,
                            const std::function<void(const RunReport&)>& on_child) {
  RunReport report;
  report.command = "reproduce-all";
  report.param("profile", profile == Profile::kCore ? "core" : "extended");
  report.has_seed = true;
  report.seed = seed;

  auto timed = [&](RunReport child, std::chrono::steady_clock::time_point start) {
    child.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (on_child) on_child(child);
    report.children.push_back(std::move(child));
  };
  auto run = [&](auto&& producer) {
    auto start = std::chrono::steady_clock::now();
    timed(producer(), start);
  };

  auto promise_game = [](int parties) {
    return GyniInstance(parties, promise_distribution(parties));
  };
  auto uniform_game = [](int parties) {
    return GyniInstance(parties, PriorDistribution::uniform(Scenario(parties, 2, 2)));
  };
  bool extended = profile == Profile::kExtended;

  for (int parties = 3; parties <= 7; ++parties)
    run([&] { return run_bounds(promise_game(parties), "promise", false); });
  for (int parties = 3; parties <= (extended ? 7 : 5); ++parties)
    run([&] { return run_ns_bound(promise_game(parties), "promise", ""); });
  for (int parties = 3; parties <= 4; ++parties)
    run([&] { return run_ns_bound(uniform_game(parties), "uniform", ""); });
  run([&] {
    return run_ns_bound(GyniInstance(4, cubic4_distribution()), "cubic4", "");
  });
  run([&] { return run_random_distribution_sweep(3, 100, 1000, seed); });
  run([&] { return run_boxes_verify(); });
  run([&] { return run_appendix_c(3); });
  for (int parties = 3; parties <= (extended ? 7 : 5); ++parties)
    run([&] { return run_facet(promise_game(parties), "promise"); });
  run([&] { return run_facet(GyniInstance(4, cubic4_distribution()), "cubic4"); });
  for (int parties = 3; parties <= 5; ++parties)
    run([&] { return run_sos_check(promise_game(parties), "promise"); });
  for (int parties = 2; parties <= 5; ++parties)
    run([&] { return run_sos_check(uniform_game(parties), "uniform"); });
  run([&] { return run_random_sos_sweep(3, 100, seed + 1); });
  run([&] { return run_seesaw(promise_game(3), "promise", 2, 50, seed + 2); });
  run([&] { return run_seesaw(promise_game(3), "promise", 3, 50, seed + 3); });
  run([&] { return run_nlc_audit(2); });
  run([&] { return run_nlc_audit(3); });
  return report;
}

}  // namespace gyni
