#pragma once

#include <string>

#include "gyni/rational.hpp"
#include "gyni/scenario.hpp"

namespace gyni {

/// JSON text formats for the core value types.
///
/// Every file is a single JSON object.  Rationals are strings "num/den" in
/// lowest terms with the denominator always written ("0/1", "3/2", "-1/3").
/// Joint inputs and outputs appear as digit strings with party 1 leftmost
/// (the leftmost character is the least significant digit); each emitted file
/// repeats this in a "convention" field.  Table-like maps list only nonzero
/// entries; absent keys mean zero.  Parsers ignore unknown fields, validate
/// everything else, and throw ParseError (or the value type's own validation
/// error) with the offending key in the message.
///
/// Shapes:
///   scenario      {"parties": 3, "inputs": 2, "outputs": 2}
///   distribution  {"scenario": ..., "weights": {"x-string": "num/den"}}
///   behavior      {"scenario": ..., "table": {"a-string|x-string": "num/den"}}
///   inequality    {"scenario": ..., "coefficients": {"a|x": "num/den"},
///                  "bound": "num/den", "bound_kind": "classical" | "no-signalling"}

std::string serialize_scenario(const Scenario& scenario);
std::string serialize_distribution(const PriorDistribution& distribution);
std::string serialize_behavior(const Behavior& behavior);
std::string serialize_inequality(const BellInequality& inequality);

Scenario parse_scenario_json(const std::string& text);
PriorDistribution parse_distribution_json(const std::string& text);
Behavior parse_behavior_json(const std::string& text);
BellInequality parse_inequality_json(const std::string& text);

/// Whole-file helpers; read failures and write failures raise ParseError
/// naming the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gyni
