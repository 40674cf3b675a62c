#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gyni/rational.hpp"

namespace gyni {

/// Multi-party measurement scenario: `parties` players, each choosing one of
/// `inputs` settings and producing one of `outputs` values.
///
/// Joint inputs and outputs are identified with indices little-endian by
/// party: party 1 is the least significant digit. Printed digit strings put
/// party 1 leftmost, so the leftmost character is the least significant
/// digit.
struct Scenario {
  int parties;
  int inputs;
  int outputs;

  Scenario(int parties, int inputs, int outputs);

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.parties == b.parties && a.inputs == b.inputs && a.outputs == b.outputs;
  }
  friend bool operator!=(const Scenario& a, const Scenario& b) { return !(a == b); }

  long input_count() const { return input_count_; }
  long output_count() const { return output_count_; }
  long cell_count() const { return input_count_ * output_count_; }

  /// Index of the table cell holding P(a|x): cells are grouped by input.
  long cell_index(long a, long x) const { return x * output_count_ + a; }

  int input_digit(long x, int party) const;
  int output_digit(long a, int party) const;
  long set_input_digit(long x, int party, int value) const;
  long set_output_digit(long a, int party, int value) const;

  long input_index(std::string_view s) const;
  long output_index(std::string_view s) const;
  std::string input_string(long x) const;
  std::string output_string(long a) const;

 private:
  long input_count_;
  long output_count_;
};

/// Probability distribution over the joint inputs of a scenario.
struct PriorDistribution {
  Scenario scenario;
  std::vector<Rational> weights;  // indexed by joint input

  /// Validates nonnegativity and exact normalization.
  PriorDistribution(Scenario scenario, std::vector<Rational> weights);

  static PriorDistribution uniform(const Scenario& scenario);

  const Rational& weight(long x) const { return weights[x]; }
};

/// Full conditional probability table P(a|x) of a scenario.
struct Behavior {
  Scenario scenario;
  std::vector<Rational> table;  // indexed by scenario.cell_index(a, x)

  explicit Behavior(const Scenario& s)
      : scenario(s), table(static_cast<size_t>(s.cell_count())) {}
  Behavior(Scenario s, std::vector<Rational> t);

  Rational& at(long a, long x) { return table[scenario.cell_index(a, x)]; }
  const Rational& at(long a, long x) const { return table[scenario.cell_index(a, x)]; }

  /// Checks nonnegativity and per-input normalization; throws Error.
  void validate() const;
};

/// One output function per party: outputs[party][input] is the output value.
struct DeterministicStrategy {
  Scenario scenario;
  std::vector<std::vector<int>> outputs;

  DeterministicStrategy(Scenario s, std::vector<std::vector<int>> outs);
};

enum class BoundKind { kClassical, kNoSignalling };

/// Linear functional on behaviors together with a bound on one resource class.
struct BellInequality {
  Scenario scenario;
  std::vector<Rational> coefficients;  // indexed by scenario.cell_index(a, x)
  Rational bound;
  BoundKind bound_kind = BoundKind::kClassical;

  explicit BellInequality(const Scenario& s)
      : scenario(s), coefficients(static_cast<size_t>(s.cell_count())) {}

  Rational& coeff(long a, long x) { return coefficients[scenario.cell_index(a, x)]; }
  const Rational& coeff(long a, long x) const {
    return coefficients[scenario.cell_index(a, x)];
  }
};

/// Relabeling of parties, inputs, and outputs.
///
/// Party i becomes party party_map[i]; its input v becomes input_maps[i][v];
/// its output o under original input v becomes output_maps[i][v][o]. The
/// relabeled behavior takes at the new cell the value of the original cell.
struct Relabeling {
  std::vector<int> party_map;
  std::vector<std::vector<int>> input_maps;
  std::vector<std::vector<std::vector<int>>> output_maps;

  static Relabeling identity(const Scenario& scenario);
  Relabeling inverse() const;
};

/// One marginal-independence identity broken by a behavior: the marginal of
/// `parties` (1-based labels) on outputs `outputs` takes different values
/// under the two full input strings, which agree on `parties`.
struct MarginalViolation {
  std::vector<int> parties;
  std::string outputs;
  std::string input_a;
  std::string input_b;
  Rational value_a;
  Rational value_b;
};

struct NoSignallingReport {
  bool ok = true;
  std::vector<MarginalViolation> violations;
};

/// The deterministic behavior of a strategy: P(a|x) = 1 exactly when every
/// party's output matches its function.
Behavior behavior_from_strategy(const DeterministicStrategy& s);

/// All deterministic strategies of the scenario, ordered so that the
/// concatenated output tables (party 1 first, inputs in order) read as words
/// are lexicographically increasing. Throws EnumerationCapError when a single
/// party has more than `per_party_cap` output functions.
std::vector<DeterministicStrategy> enumerate_deterministic(const Scenario& scenario,
                                                           long per_party_cap = 256);

/// Exact check that every proper-subset marginal is independent of the
/// complementary parties' inputs; collects each violated identity.
NoSignallingReport is_no_signalling(const Behavior& b);

/// Exact value of the inequality's functional on a behavior.
Rational evaluate(const BellInequality& ineq, const Behavior& b);

/// evaluate() specialized to a deterministic strategy: walks the inputs and
/// picks each one's single winning cell instead of scanning the full table.
Rational evaluate_strategy(const BellInequality& ineq, const DeterministicStrategy& s);

Behavior apply_relabeling(const Relabeling& r, const Behavior& b);
BellInequality apply_relabeling(const Relabeling& r, const BellInequality& ineq);

/// Checks that every component of `r` is a bijection of the right size for
/// the scenario; throws Error if not.
void validate_relabeling(const Relabeling& r, const Scenario& scenario);

/// The full relabeling group of the scenario, in a fixed deterministic order.
/// Size N! · (m!)^N · (d!)^(N·m); throws EnumerationCapError when that
/// exceeds `cap`.
std::vector<Relabeling> relabeling_group(const Scenario& scenario, long cap = 4000);

}  // namespace gyni
