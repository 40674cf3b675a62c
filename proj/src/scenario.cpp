#include "gyni/scenario.hpp"

#include <algorithm>
#include <numeric>

#include "gyni/error.hpp"

namespace gyni {

namespace {

long checked_pow(long base, int exp, const char* what) {
  long v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > (1L << 46) / base) throw Error(std::string(what) + ": index space too large");
    v *= base;
  }
  return v;
}

int digit_value(char c, int radix, std::string_view s) {
  if (c < '0' || c >= '0' + radix)
    throw ParseError("invalid digit '" + std::string(1, c) + "' in string '" + std::string(s) +
                     "'");
  return c - '0';
}

std::string index_to_string(long v, int radix, int length) {
  std::string s(length, '0');
  for (int i = 0; i < length; ++i) {
    s[i] = static_cast<char>('0' + v % radix);
    v /= radix;
  }
  return s;
}

long string_to_index(std::string_view s, int radix, int length) {
  if (static_cast<int>(s.size()) != length)
    throw ParseError("digit string '" + std::string(s) + "' does not have length " +
                     std::to_string(length));
  long v = 0;
  for (int i = length - 1; i >= 0; --i) v = v * radix + digit_value(s[i], radix, s);
  return v;
}

std::vector<std::vector<int>> permutations_of(int k) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> all;
  do {
    all.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return all;
}

}  // namespace

Scenario::Scenario(int parties_in, int inputs_in, int outputs_in)
    : parties(parties_in), inputs(inputs_in), outputs(outputs_in) {
  if (parties < 1) throw DimensionError("scenario needs at least one party");
  if (inputs < 2 || outputs < 2)
    throw DimensionError("scenario needs at least two inputs and two outputs per party");
  input_count_ = checked_pow(inputs, parties, "scenario inputs");
  output_count_ = checked_pow(outputs, parties, "scenario outputs");
}

int Scenario::input_digit(long x, int party) const {
  for (int i = 0; i < party; ++i) x /= inputs;
  return static_cast<int>(x % inputs);
}

int Scenario::output_digit(long a, int party) const {
  for (int i = 0; i < party; ++i) a /= outputs;
  return static_cast<int>(a % outputs);
}

long Scenario::set_input_digit(long x, int party, int value) const {
  long scale = 1;
  for (int i = 0; i < party; ++i) scale *= inputs;
  return x + (value - input_digit(x, party)) * scale;
}

long Scenario::set_output_digit(long a, int party, int value) const {
  long scale = 1;
  for (int i = 0; i < party; ++i) scale *= outputs;
  return a + (value - output_digit(a, party)) * scale;
}

long Scenario::input_index(std::string_view s) const {
  return string_to_index(s, inputs, parties);
}

long Scenario::output_index(std::string_view s) const {
  return string_to_index(s, outputs, parties);
}

std::string Scenario::input_string(long x) const {
  return index_to_string(x, inputs, parties);
}

std::string Scenario::output_string(long a) const {
  return index_to_string(a, outputs, parties);
}

PriorDistribution::PriorDistribution(Scenario scenario_in, std::vector<Rational> weights_in)
    : scenario(scenario_in), weights(std::move(weights_in)) {
  if (static_cast<long>(weights.size()) != scenario.input_count())
    throw DimensionError("distribution weight count does not match the scenario's inputs");
  Rational total = 0;
  for (long x = 0; x < scenario.input_count(); ++x) {
    if (weights[x].sign() < 0)
      throw Error("negative weight on input " + scenario.input_string(x));
    total += weights[x];
  }
  if (total != Rational(1)) throw Error("distribution weights sum to " + total.str());
}

PriorDistribution PriorDistribution::uniform(const Scenario& scenario) {
  const long n = scenario.input_count();
  return PriorDistribution(scenario, std::vector<Rational>(n, Rational(1, n)));
}

Behavior::Behavior(Scenario s, std::vector<Rational> t)
    : scenario(s), table(std::move(t)) {
  if (static_cast<long>(table.size()) != scenario.cell_count())
    throw DimensionError("behavior table size does not match the scenario");
}

void Behavior::validate() const {
  for (long x = 0; x < scenario.input_count(); ++x) {
    Rational total = 0;
    for (long a = 0; a < scenario.output_count(); ++a) {
      const Rational& p = at(a, x);
      if (p.sign() < 0)
        throw Error("negative probability at outputs " + scenario.output_string(a) +
                    " inputs " + scenario.input_string(x));
      total += p;
    }
    if (total != Rational(1))
      throw Error("outputs for inputs " + scenario.input_string(x) + " sum to " + total.str());
  }
}

DeterministicStrategy::DeterministicStrategy(Scenario s, std::vector<std::vector<int>> outs)
    : scenario(s), outputs(std::move(outs)) {
  if (static_cast<int>(outputs.size()) != scenario.parties)
    throw DimensionError("strategy needs one output function per party");
  for (const auto& f : outputs) {
    if (static_cast<int>(f.size()) != scenario.inputs)
      throw DimensionError("output function not total on the input alphabet");
    for (int v : f) {
      if (v < 0 || v >= scenario.outputs) throw Error("output value out of range");
    }
  }
}

Behavior behavior_from_strategy(const DeterministicStrategy& s) {
  const Scenario& sc = s.scenario;
  Behavior b(sc);
  for (long x = 0; x < sc.input_count(); ++x) {
    long a = 0;
    long scale = 1;
    for (int i = 0; i < sc.parties; ++i) {
      a += scale * s.outputs[i][sc.input_digit(x, i)];
      scale *= sc.outputs;
    }
    b.at(a, x) = 1;
  }
  return b;
}

std::vector<DeterministicStrategy> enumerate_deterministic(const Scenario& scenario,
                                                           long per_party_cap) {
  long per_party = 1;
  for (int v = 0; v < scenario.inputs; ++v) {
    per_party *= scenario.outputs;
    if (per_party > per_party_cap)
      throw EnumerationCapError("per-party output function count exceeds the enumeration cap",
                                checked_pow(scenario.outputs, scenario.inputs, "enumeration"));
  }
  long total = 1;
  for (int i = 0; i < scenario.parties; ++i) total *= per_party;

  // Strategy t's concatenated output table is t written base-d with one digit
  // per (party, input), party 1's input 0 most significant; counting t up
  // therefore lists the tables in lexicographic order.
  const int word_len = scenario.parties * scenario.inputs;
  std::vector<DeterministicStrategy> out;
  out.reserve(total);
  for (long t = 0; t < total; ++t) {
    std::vector<std::vector<int>> funcs(scenario.parties,
                                        std::vector<int>(scenario.inputs));
    long rem = t;
    for (int pos = word_len - 1; pos >= 0; --pos) {
      funcs[pos / scenario.inputs][pos % scenario.inputs] =
          static_cast<int>(rem % scenario.outputs);
      rem /= scenario.outputs;
    }
    out.emplace_back(scenario, std::move(funcs));
  }
  return out;
}

NoSignallingReport is_no_signalling(const Behavior& b) {
  const Scenario& sc = b.scenario;
  const int n = sc.parties;
  NoSignallingReport report;
  for (int size = 1; size < n; ++size) {
    for (long mask = 1; mask < (1L << n); ++mask) {
      if (__builtin_popcountl(mask) != size) continue;
      std::vector<int> inside, outside;
      for (int i = 0; i < n; ++i) ((mask >> i) & 1 ? inside : outside).push_back(i);
      const long in_inputs = checked_pow(sc.inputs, size, "marginal");
      const long in_outputs = checked_pow(sc.outputs, size, "marginal");
      const long out_inputs = checked_pow(sc.inputs, n - size, "marginal");
      const long out_outputs = checked_pow(sc.outputs, n - size, "marginal");
      for (long xs = 0; xs < in_inputs; ++xs) {
        long x_base = 0;
        {
          long rem = xs;
          for (int i : inside) {
            x_base = sc.set_input_digit(x_base, i, static_cast<int>(rem % sc.inputs));
            rem /= sc.inputs;
          }
        }
        for (long as = 0; as < in_outputs; ++as) {
          long a_base = 0;
          {
            long rem = as;
            for (int i : inside) {
              a_base = sc.set_output_digit(a_base, i, static_cast<int>(rem % sc.outputs));
              rem /= sc.outputs;
            }
          }
          Rational reference;
          long reference_x = -1;
          for (long xc = 0; xc < out_inputs; ++xc) {
            long x = x_base;
            {
              long rem = xc;
              for (int i : outside) {
                x = sc.set_input_digit(x, i, static_cast<int>(rem % sc.inputs));
                rem /= sc.inputs;
              }
            }
            Rational marginal = 0;
            for (long ac = 0; ac < out_outputs; ++ac) {
              long a = a_base;
              long rem = ac;
              for (int i : outside) {
                a = sc.set_output_digit(a, i, static_cast<int>(rem % sc.outputs));
                rem /= sc.outputs;
              }
              marginal += b.at(a, x);
            }
            if (reference_x < 0) {
              reference = marginal;
              reference_x = x;
            } else if (marginal != reference) {
              MarginalViolation v;
              for (int i : inside) v.parties.push_back(i + 1);
              std::string outs(size, '0');
              for (int k = 0; k < size; ++k)
                outs[k] = static_cast<char>('0' + sc.output_digit(a_base, inside[k]));
              v.outputs = std::move(outs);
              v.input_a = sc.input_string(reference_x);
              v.input_b = sc.input_string(x);
              v.value_a = reference;
              v.value_b = marginal;
              report.violations.push_back(std::move(v));
            }
          }
        }
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

Rational evaluate(const BellInequality& ineq, const Behavior& b) {
  if (ineq.scenario != b.scenario)
    throw ScenarioMismatchError("inequality and behavior built for different scenarios");
  Rational total = 0;
  Rational scratch;
  for (size_t i = 0; i < ineq.coefficients.size(); ++i) {
    if (ineq.coefficients[i].is_zero() || b.table[i].is_zero()) continue;
    Rational::addmul(total, ineq.coefficients[i], b.table[i], scratch);
  }
  return total;
}

Rational evaluate_strategy(const BellInequality& ineq, const DeterministicStrategy& s) {
  if (ineq.scenario != s.scenario)
    throw ScenarioMismatchError("inequality and strategy built for different scenarios");
  const Scenario& sc = ineq.scenario;
  Rational total = 0;
  for (long x = 0; x < sc.input_count(); ++x) {
    long a = 0;
    long scale = 1;
    for (int i = 0; i < sc.parties; ++i) {
      a += scale * s.outputs[i][sc.input_digit(x, i)];
      scale *= sc.outputs;
    }
    total += ineq.coeff(a, x);
  }
  return total;
}

Relabeling Relabeling::identity(const Scenario& scenario) {
  Relabeling r;
  r.party_map.resize(scenario.parties);
  std::iota(r.party_map.begin(), r.party_map.end(), 0);
  std::vector<int> input_id(scenario.inputs);
  std::iota(input_id.begin(), input_id.end(), 0);
  std::vector<int> output_id(scenario.outputs);
  std::iota(output_id.begin(), output_id.end(), 0);
  r.input_maps.assign(scenario.parties, input_id);
  r.output_maps.assign(scenario.parties,
                       std::vector<std::vector<int>>(scenario.inputs, output_id));
  return r;
}

Relabeling Relabeling::inverse() const {
  const int n = static_cast<int>(party_map.size());
  Relabeling inv;
  inv.party_map.resize(n);
  inv.input_maps.resize(n);
  inv.output_maps.resize(n);
  for (int i = 0; i < n; ++i) {
    const int j = party_map[i];
    inv.party_map[j] = i;
    const int m = static_cast<int>(input_maps[i].size());
    std::vector<int> input_inv(m);
    for (int v = 0; v < m; ++v) input_inv[input_maps[i][v]] = v;
    inv.input_maps[j] = input_inv;
    inv.output_maps[j].resize(m);
    for (int v_new = 0; v_new < m; ++v_new) {
      const int v_old = input_inv[v_new];
      const auto& out = output_maps[i][v_old];
      std::vector<int> out_inv(out.size());
      for (size_t o = 0; o < out.size(); ++o) out_inv[out[o]] = static_cast<int>(o);
      inv.output_maps[j][v_new] = std::move(out_inv);
    }
  }
  return inv;
}

void validate_relabeling(const Relabeling& r, const Scenario& scenario) {
  auto check_bijection = [](const std::vector<int>& p, int size, const char* what) {
    if (static_cast<int>(p.size()) != size)
      throw Error(std::string(what) + " permutation has the wrong size");
    std::vector<char> seen(size, 0);
    for (int v : p) {
      if (v < 0 || v >= size || seen[v])
        throw Error(std::string(what) + " permutation is not a bijection");
      seen[v] = 1;
    }
  };
  check_bijection(r.party_map, scenario.parties, "party");
  if (static_cast<int>(r.input_maps.size()) != scenario.parties ||
      static_cast<int>(r.output_maps.size()) != scenario.parties)
    throw Error("relabeling needs one input map and one output map family per party");
  for (int i = 0; i < scenario.parties; ++i) {
    check_bijection(r.input_maps[i], scenario.inputs, "input");
    if (static_cast<int>(r.output_maps[i].size()) != scenario.inputs)
      throw Error("relabeling needs one output map per input");
    for (int v = 0; v < scenario.inputs; ++v)
      check_bijection(r.output_maps[i][v], scenario.outputs, "output");
  }
}

namespace {

// Cell image under a relabeling: party i's digits move to party party_map[i]
// with its input and (input-dependent) output maps applied.
void relabel_cell(const Relabeling& r, const Scenario& sc, long a, long x, long* a_out,
                  long* x_out) {
  long an = 0, xn = 0;
  for (int i = 0; i < sc.parties; ++i) {
    const int j = r.party_map[i];
    const int xi = sc.input_digit(x, i);
    const int ai = sc.output_digit(a, i);
    xn = sc.set_input_digit(xn, j, r.input_maps[i][xi]);
    an = sc.set_output_digit(an, j, r.output_maps[i][xi][ai]);
  }
  *a_out = an;
  *x_out = xn;
}

}  // namespace

Behavior apply_relabeling(const Relabeling& r, const Behavior& b) {
  validate_relabeling(r, b.scenario);
  const Scenario& sc = b.scenario;
  Behavior out(sc);
  for (long x = 0; x < sc.input_count(); ++x) {
    for (long a = 0; a < sc.output_count(); ++a) {
      long an, xn;
      relabel_cell(r, sc, a, x, &an, &xn);
      out.at(an, xn) = b.at(a, x);
    }
  }
  return out;
}

BellInequality apply_relabeling(const Relabeling& r, const BellInequality& ineq) {
  validate_relabeling(r, ineq.scenario);
  const Scenario& sc = ineq.scenario;
  BellInequality out(sc);
  out.bound = ineq.bound;
  out.bound_kind = ineq.bound_kind;
  for (long x = 0; x < sc.input_count(); ++x) {
    for (long a = 0; a < sc.output_count(); ++a) {
      long an, xn;
      relabel_cell(r, sc, a, x, &an, &xn);
      out.coeff(an, xn) = ineq.coeff(a, x);
    }
  }
  return out;
}

std::vector<Relabeling> relabeling_group(const Scenario& scenario, long cap) {
  const auto party_perms = permutations_of(scenario.parties);
  const auto input_perms = permutations_of(scenario.inputs);
  const auto output_perms = permutations_of(scenario.outputs);
  long order = static_cast<long>(party_perms.size());
  auto mul_clamped = [&order](long f) {
    if (order > (1L << 60) / f)
      order = 1L << 60;
    else
      order *= f;
  };
  for (int i = 0; i < scenario.parties; ++i) {
    mul_clamped(static_cast<long>(input_perms.size()));
    for (int v = 0; v < scenario.inputs; ++v)
      mul_clamped(static_cast<long>(output_perms.size()));
  }
  if (order > cap)
    throw EnumerationCapError("relabeling group exceeds the enumeration cap", order);

  std::vector<Relabeling> group;
  group.reserve(order);
  const int slots = scenario.parties * scenario.inputs;  // output-map choices
  std::vector<int> input_choice(scenario.parties, 0);
  std::vector<int> output_choice(slots, 0);
  for (const auto& pp : party_perms) {
    std::fill(input_choice.begin(), input_choice.end(), 0);
    for (;;) {
      std::fill(output_choice.begin(), output_choice.end(), 0);
      for (;;) {
        Relabeling r;
        r.party_map = pp;
        r.input_maps.resize(scenario.parties);
        r.output_maps.resize(scenario.parties);
        for (int i = 0; i < scenario.parties; ++i) {
          r.input_maps[i] = input_perms[input_choice[i]];
          r.output_maps[i].resize(scenario.inputs);
          for (int v = 0; v < scenario.inputs; ++v)
            r.output_maps[i][v] = output_perms[output_choice[i * scenario.inputs + v]];
        }
        group.push_back(std::move(r));
        int k = slots - 1;
        while (k >= 0 && ++output_choice[k] == static_cast<int>(output_perms.size())) {
          output_choice[k] = 0;
          --k;
        }
        if (k < 0) break;
      }
      int k = scenario.parties - 1;
      while (k >= 0 && ++input_choice[k] == static_cast<int>(input_perms.size())) {
        input_choice[k] = 0;
        --k;
      }
      if (k < 0) break;
    }
  }
  return group;
}

}  // namespace gyni
