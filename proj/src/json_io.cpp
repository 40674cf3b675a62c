#include "gyni/json_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gyni/error.hpp"

namespace gyni {
namespace {

using OrderedJson = nlohmann::ordered_json;

constexpr const char* kConventionNote =
    "digit strings put party 1 leftmost; the leftmost character is the least "
    "significant digit of the joint index";

OrderedJson parse_object(const std::string& text) {
  OrderedJson j = OrderedJson::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON");
  if (!j.is_object()) throw ParseError("top-level JSON value is not an object");
  return j;
}

const OrderedJson& require_field(const OrderedJson& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

int require_int(const OrderedJson& j, const char* key) {
  const OrderedJson& v = require_field(j, key);
  if (!v.is_number_integer())
    throw ParseError(std::string("field '") + key + "' is not an integer");
  return v.get<int>();
}

Rational require_rational(const OrderedJson& v, const std::string& where) {
  if (!v.is_string())
    throw ParseError("value of '" + where + "' is not a rational string");
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const Error& e) {
    throw ParseError("value of '" + where + "': " + e.what());
  }
}

OrderedJson scenario_fields(const Scenario& s) {
  OrderedJson j;
  j["parties"] = s.parties;
  j["inputs"] = s.inputs;
  j["outputs"] = s.outputs;
  return j;
}

Scenario scenario_from(const OrderedJson& j) {
  return Scenario(require_int(j, "parties"), require_int(j, "inputs"),
                  require_int(j, "outputs"));
}

Scenario scenario_member(const OrderedJson& j) {
  const OrderedJson& v = require_field(j, "scenario");
  if (!v.is_object()) throw ParseError("field 'scenario' is not an object");
  return scenario_from(v);
}

// Splits "a|x" into output and input indices of the scenario.
long cell_from_key(const Scenario& s, const std::string& key) {
  auto bar = key.find('|');
  if (bar == std::string::npos)
    throw ParseError("table key '" + key + "' lacks the 'outputs|inputs' separator");
  long a = s.output_index(key.substr(0, bar));
  long x = s.input_index(key.substr(bar + 1));
  return s.cell_index(a, x);
}

std::string cell_key(const Scenario& s, long a, long x) {
  return s.output_string(a) + "|" + s.input_string(x);
}

// Reads a {"key": "num/den"} map into a dense cell vector; absent keys are
// zero, and the key parser decides how keys map to indices.
template <typename KeyToIndex>
std::vector<Rational> dense_from_map(const OrderedJson& j, const char* field,
                                     size_t size, KeyToIndex&& key_to_index) {
  const OrderedJson& m = require_field(j, field);
  if (!m.is_object())
    throw ParseError(std::string("field '") + field + "' is not an object");
  std::vector<Rational> dense(size);
  for (const auto& [key, value] : m.items()) {
    long index = key_to_index(key);
    dense[static_cast<size_t>(index)] = require_rational(value, key);
  }
  return dense;
}

std::string dump(const OrderedJson& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string serialize_scenario(const Scenario& scenario) {
  OrderedJson j = scenario_fields(scenario);
  j["convention"] = kConventionNote;
  return dump(j);
}

std::string serialize_distribution(const PriorDistribution& distribution) {
  const Scenario& s = distribution.scenario;
  OrderedJson j;
  j["scenario"] = scenario_fields(s);
  OrderedJson weights = OrderedJson::object();
  for (long x = 0; x < s.input_count(); ++x)
    if (!distribution.weight(x).is_zero())
      weights[s.input_string(x)] = distribution.weight(x).str();
  j["weights"] = std::move(weights);
  j["convention"] = kConventionNote;
  return dump(j);
}

std::string serialize_behavior(const Behavior& behavior) {
  const Scenario& s = behavior.scenario;
  OrderedJson j;
  j["scenario"] = scenario_fields(s);
  OrderedJson table = OrderedJson::object();
  for (long x = 0; x < s.input_count(); ++x)
    for (long a = 0; a < s.output_count(); ++a)
      if (!behavior.at(a, x).is_zero()) table[cell_key(s, a, x)] = behavior.at(a, x).str();
  j["table"] = std::move(table);
  j["convention"] = kConventionNote;
  return dump(j);
}

std::string serialize_inequality(const BellInequality& inequality) {
  const Scenario& s = inequality.scenario;
  OrderedJson j;
  j["scenario"] = scenario_fields(s);
  OrderedJson coeffs = OrderedJson::object();
  for (long x = 0; x < s.input_count(); ++x)
    for (long a = 0; a < s.output_count(); ++a)
      if (!inequality.coeff(a, x).is_zero())
        coeffs[cell_key(s, a, x)] = inequality.coeff(a, x).str();
  j["coefficients"] = std::move(coeffs);
  j["bound"] = inequality.bound.str();
  j["bound_kind"] =
      inequality.bound_kind == BoundKind::kClassical ? "classical" : "no-signalling";
  j["convention"] = kConventionNote;
  return dump(j);
}

Scenario parse_scenario_json(const std::string& text) {
  return scenario_from(parse_object(text));
}

PriorDistribution parse_distribution_json(const std::string& text) {
  OrderedJson j = parse_object(text);
  Scenario s = scenario_member(j);
  std::vector<Rational> weights =
      dense_from_map(j, "weights", static_cast<size_t>(s.input_count()),
                     [&](const std::string& key) { return s.input_index(key); });
  return PriorDistribution(s, std::move(weights));
}

Behavior parse_behavior_json(const std::string& text) {
  OrderedJson j = parse_object(text);
  Scenario s = scenario_member(j);
  std::vector<Rational> table =
      dense_from_map(j, "table", static_cast<size_t>(s.cell_count()),
                     [&](const std::string& key) { return cell_from_key(s, key); });
  Behavior b(s, std::move(table));
  b.validate();
  return b;
}

BellInequality parse_inequality_json(const std::string& text) {
  OrderedJson j = parse_object(text);
  Scenario s = scenario_member(j);
  std::vector<Rational> coeffs =
      dense_from_map(j, "coefficients", static_cast<size_t>(s.cell_count()),
                     [&](const std::string& key) { return cell_from_key(s, key); });
  const OrderedJson& kind = require_field(j, "bound_kind");
  if (!kind.is_string()) throw ParseError("field 'bound_kind' is not a string");
  std::string kind_text = kind.get<std::string>();
  BellInequality ineq(s);
  ineq.coefficients = std::move(coeffs);
  ineq.bound = require_rational(require_field(j, "bound"), "bound");
  if (kind_text == "classical")
    ineq.bound_kind = BoundKind::kClassical;
  else if (kind_text == "no-signalling")
    ineq.bound_kind = BoundKind::kNoSignalling;
  else
    throw ParseError("unknown bound_kind '" + kind_text + "'");
  return ineq;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw ParseError("read error on '" + path + "'");
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw ParseError("write error on '" + path + "'");
}

}  // namespace gyni
