#include "gyni/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <thread>

#include "gyni/error.hpp"

namespace gyni {

namespace {

long input_mask(int parties) { return (1L << parties) - 1; }

/// Normal form of a generator string under idempotence (drop a letter equal
/// to its predecessor) and orthogonality (a letter next to anything other
/// than itself or its complement kills the product).  Returns nothing for a
/// vanishing product; throws when the normal form needs three letters.
std::optional<std::vector<long>> reduce_word(const std::vector<long>& letters,
                                             long mask) {
  std::vector<long> stack;
  for (long letter : letters) {
    if (!stack.empty() && stack.back() == letter) continue;
    if (!stack.empty() && stack.back() != (mask ^ letter)) return std::nullopt;
    stack.push_back(letter);
  }
  if (stack.size() > 2) {
    throw AlgebraWordError(
        "product needs an irreducible word of three or more generators");
  }
  return stack;
}

std::vector<long> word_letters(const AlgebraWord& word, long mask) {
  switch (word.kind) {
    case AlgebraWord::Kind::kUnit:
      return {};
    case AlgebraWord::Kind::kSingle:
      return {word.input};
    case AlgebraWord::Kind::kPair:
      return {word.input, mask ^ word.input};
  }
  throw Error("corrupt algebra word");
}

AlgebraWord word_from_letters(const std::vector<long>& letters) {
  if (letters.empty()) return AlgebraWord{AlgebraWord::Kind::kUnit, 0};
  if (letters.size() == 1) {
    return AlgebraWord{AlgebraWord::Kind::kSingle, letters[0]};
  }
  return AlgebraWord{AlgebraWord::Kind::kPair, letters[0]};
}

void check_input_range(int parties, long input) {
  if (input < 0 || input > input_mask(parties)) {
    throw Error("generator index out of range for the party count");
  }
}

}  // namespace

std::string to_string(const AlgebraWord& word, const Scenario& scenario) {
  switch (word.kind) {
    case AlgebraWord::Kind::kUnit:
      return "1";
    case AlgebraWord::Kind::kSingle:
      return "M[" + scenario.input_string(word.input) + "]";
    case AlgebraWord::Kind::kPair: {
      long bar = input_mask(scenario.parties) ^ word.input;
      return "M[" + scenario.input_string(word.input) + "]M[" +
             scenario.input_string(bar) + "]";
    }
  }
  throw Error("corrupt algebra word");
}

AlgebraElement AlgebraElement::zero(int parties) {
  if (parties < 1) throw Error("algebra needs at least one party");
  return AlgebraElement{parties, {}};
}

AlgebraElement AlgebraElement::unit(int parties, const Rational& coefficient) {
  AlgebraElement e = zero(parties);
  e.add(AlgebraWord{AlgebraWord::Kind::kUnit, 0}, coefficient);
  return e;
}

AlgebraElement AlgebraElement::single(int parties, long input,
                                      const Rational& coefficient) {
  AlgebraElement e = zero(parties);
  check_input_range(parties, input);
  e.add(AlgebraWord{AlgebraWord::Kind::kSingle, input}, coefficient);
  return e;
}

AlgebraElement& AlgebraElement::add(const AlgebraWord& word,
                                    const Rational& coefficient) {
  if (coefficient == Rational(0)) return *this;
  auto [it, inserted] = coefficients.emplace(word, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == Rational(0)) coefficients.erase(it);
  }
  return *this;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  if (parties != other.parties) {
    throw ScenarioMismatchError("algebra elements have different party counts");
  }
  for (const auto& [word, coeff] : other.coefficients) add(word, coeff);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  if (parties != other.parties) {
    throw ScenarioMismatchError("algebra elements have different party counts");
  }
  for (const auto& [word, coeff] : other.coefficients) add(word, -coeff);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(const Rational& scale) {
  if (scale == Rational(0)) {
    coefficients.clear();
    return *this;
  }
  for (auto& [word, coeff] : coefficients) coeff *= scale;
  return *this;
}

AlgebraElement algebra_multiply(const AlgebraElement& u, const AlgebraElement& v) {
  if (u.parties != v.parties) {
    throw ScenarioMismatchError("algebra elements have different party counts");
  }
  long mask = input_mask(u.parties);
  AlgebraElement out = AlgebraElement::zero(u.parties);
  for (const auto& [left, left_coeff] : u.coefficients) {
    std::vector<long> prefix = word_letters(left, mask);
    for (const auto& [right, right_coeff] : v.coefficients) {
      std::vector<long> letters = prefix;
      for (long letter : word_letters(right, mask)) letters.push_back(letter);
      std::optional<std::vector<long>> reduced = reduce_word(letters, mask);
      if (!reduced) continue;
      out.add(word_from_letters(*reduced), left_coeff * right_coeff);
    }
  }
  return out;
}

std::vector<Rational> tighten_distribution(const PriorDistribution& q) {
  const Scenario& sc = q.scenario;
  if (sc.inputs != 2) {
    throw Error("tightening needs binary inputs");
  }
  long mask = input_mask(sc.parties);
  Rational omega_c(0);
  for (long x = 0; x <= mask; ++x) {
    Rational pair = q.weight(x) + q.weight(mask ^ x);
    if (pair > omega_c) omega_c = pair;
  }
  std::vector<Rational> raised(static_cast<size_t>(mask) + 1);
  for (long x = 0; x <= mask; ++x) {
    Rational gap = omega_c - q.weight(x) - q.weight(mask ^ x);
    raised[x] = q.weight(x) + gap / Rational(2);
  }
  return raised;
}

SosReport check_sos_for_weights(const Scenario& scenario,
                                const std::vector<Rational>& weights) {
  if (scenario.inputs != 2) {
    throw Error("the projector algebra needs binary inputs");
  }
  int parties = scenario.parties;
  long mask = input_mask(parties);
  if (static_cast<long>(weights.size()) != mask + 1) {
    throw DimensionError("weight table size does not match the input count");
  }
  Rational omega_c(0);
  for (long x = 0; x <= mask; ++x) {
    if (weights[x] < Rational(0)) throw Error("weights must be nonnegative");
    Rational pair = weights[x] + weights[mask ^ x];
    if (pair > omega_c) omega_c = pair;
  }
  if (omega_c == Rational(0)) throw Error("weights must not all be zero");

  // Left side: omega_c - sum_x w(x) M_x.
  AlgebraElement lhs = AlgebraElement::unit(parties, omega_c);
  for (long x = 0; x <= mask; ++x) {
    lhs.add(AlgebraWord{AlgebraWord::Kind::kSingle, x}, -weights[x]);
  }

  // First square, with the overall factor omega_c pulled out of the bracket
  // so every coefficient inside is rational.
  AlgebraElement bracket = AlgebraElement::unit(parties, Rational(1));
  for (long x = 0; x <= mask; ++x) {
    Rational c = (omega_c - weights[mask ^ x]) / omega_c;
    bracket.add(AlgebraWord{AlgebraWord::Kind::kSingle, x}, -c);
  }
  AlgebraElement rhs = algebra_multiply(bracket, bracket);
  rhs *= omega_c;

  // Second family of squares: the two coefficients inside each bracket are
  // equal, so the square of the common factor is rational and pulled out.
  for (long x = 0; x <= mask; ++x) {
    AlgebraElement diff = AlgebraElement::single(parties, x);
    diff.add(AlgebraWord{AlgebraWord::Kind::kSingle, mask ^ x}, Rational(-1));
    AlgebraElement square = algebra_multiply(diff, diff);
    square *= weights[x] * weights[mask ^ x] / (Rational(2) * omega_c);
    rhs += square;
  }

  AlgebraElement gap = lhs;
  gap -= rhs;
  SosReport report;
  report.omega_c = omega_c;
  report.identity_holds = gap.coefficients.empty();
  if (!report.identity_holds) {
    report.first_mismatch = to_string(gap.coefficients.begin()->first, scenario);
  }
  return report;
}

SosReport verify_sos_identity(const PriorDistribution& q) {
  return check_sos_for_weights(q.scenario, tighten_distribution(q));
}

namespace {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

long power_of(int base, int exponent) {
  long out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

/// Full-space matrix of a tensor product of per-party operators, with party
/// 0's index varying fastest, matching the library's little-endian input and
/// output indexing.
Matrix tensor_all(const std::vector<Matrix>& locals, int local_dim) {
  int parties = static_cast<int>(locals.size());
  long dim = power_of(local_dim, parties);
  Matrix out(dim, dim);
  std::vector<int> row_digits(parties), col_digits(parties);
  for (long r = 0; r < dim; ++r) {
    long rr = r;
    for (int p = 0; p < parties; ++p) {
      row_digits[p] = static_cast<int>(rr % local_dim);
      rr /= local_dim;
    }
    for (long c = 0; c < dim; ++c) {
      long cc = c;
      for (int p = 0; p < parties; ++p) {
        col_digits[p] = static_cast<int>(cc % local_dim);
        cc /= local_dim;
      }
      std::complex<double> value(1.0, 0.0);
      for (int p = 0; p < parties && value != std::complex<double>(0.0, 0.0);
           ++p) {
        value *= locals[p](row_digits[p], col_digits[p]);
      }
      out(r, c) = value;
    }
  }
  return out;
}

/// The projector party `p` applies on joint input x when aiming for the
/// all-correct output word.
Matrix winning_projector(const GyniInstance& g, const QuantumStrategy& s,
                         int party, long x) {
  const Scenario& sc = g.scenario();
  int v = sc.input_digit(x, party);
  int want = sc.output_digit(winning_output(sc, x), party);
  const Matrix& zero_proj = s.projectors[party][v];
  if (want == 0) return zero_proj;
  return Matrix::Identity(s.local_dim, s.local_dim) - zero_proj;
}

Matrix game_operator(const GyniInstance& g, const QuantumStrategy& s) {
  const Scenario& sc = g.scenario();
  long dim = power_of(s.local_dim, s.parties);
  Matrix bell = Matrix::Zero(dim, dim);
  std::vector<Matrix> locals(static_cast<size_t>(s.parties));
  for (long x = 0; x < sc.input_count(); ++x) {
    double weight = g.prior.weight(x).to_double();
    if (weight == 0.0) continue;
    for (int p = 0; p < s.parties; ++p) locals[p] = winning_projector(g, s, p, x);
    bell += weight * tensor_all(locals, s.local_dim);
  }
  return bell;
}

/// Joint index with `digit` spliced in at party `p` and the remaining parties
/// taken from `rest` in order.
long splice_digit(long rest, int p, int digit, int local_dim) {
  long stride = power_of(local_dim, p);
  long low = rest % stride;
  long high = rest / stride;
  return low + digit * stride + high * stride * local_dim;
}

/// Partial trace of a full-space matrix onto party `p`.
Matrix trace_down_to(const Matrix& full, int parties, int local_dim, int p) {
  Matrix out = Matrix::Zero(local_dim, local_dim);
  long rest_count = power_of(local_dim, parties - 1);
  for (int r = 0; r < local_dim; ++r) {
    for (int c = 0; c < local_dim; ++c) {
      std::complex<double> sum(0.0, 0.0);
      for (long rest = 0; rest < rest_count; ++rest) {
        sum += full(splice_digit(rest, p, r, local_dim),
                    splice_digit(rest, p, c, local_dim));
      }
      out(r, c) = sum;
    }
  }
  return out;
}

/// Replaces party `p`'s measurement for input `v` by the exact maximizer of
/// the game value with everything else held fixed: the projector onto the
/// positive eigenspace of the conditional operator.
void improve_measurement(const GyniInstance& g, QuantumStrategy& s, int p, int v) {
  const Scenario& sc = g.scenario();
  long dim = power_of(s.local_dim, s.parties);
  Matrix rho = s.state * s.state.adjoint();
  // Weighted sum, over inputs where party p sees v, of the other parties'
  // projectors applied to the state, split by the output party p needs.
  std::array<Matrix, 2> condition = {Matrix::Zero(dim, dim), Matrix::Zero(dim, dim)};
  std::vector<Matrix> locals(static_cast<size_t>(s.parties));
  for (long x = 0; x < sc.input_count(); ++x) {
    if (sc.input_digit(x, p) != v) continue;
    double weight = g.prior.weight(x).to_double();
    if (weight == 0.0) continue;
    for (int j = 0; j < s.parties; ++j) {
      locals[j] = j == p ? Matrix::Identity(s.local_dim, s.local_dim)
                         : winning_projector(g, s, j, x);
    }
    int want = sc.output_digit(winning_output(sc, x), p);
    condition[want] += weight * (tensor_all(locals, s.local_dim) * rho);
  }
  Matrix gain = trace_down_to(condition[0] - condition[1], s.parties,
                              s.local_dim, p);
  gain = ((gain + gain.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eigen(gain);
  Matrix projector = Matrix::Zero(s.local_dim, s.local_dim);
  for (int k = 0; k < s.local_dim; ++k) {
    if (eigen.eigenvalues()(k) > 0.0) {
      projector += eigen.eigenvectors().col(k) * eigen.eigenvectors().col(k).adjoint();
    }
  }
  s.projectors[p][v] = projector;
}

/// Moves the state toward the top eigenvector of the game operator by power
/// iteration on the operator plus the identity (the shift keeps the iteration
/// well-defined and the ordering of eigenvalues unchanged).
double improve_state(const Matrix& bell, QuantumStrategy& s) {
  long dim = bell.rows();
  Matrix shifted = bell + Matrix::Identity(dim, dim);
  Vector v = s.state;
  double rayleigh = std::real(v.dot(bell * v));
  for (int iter = 0; iter < 20000; ++iter) {
    Vector w = shifted * v;
    v = w / w.norm();
    double next = std::real(v.dot(bell * v));
    if (std::abs(next - rayleigh) <= 1e-14 * std::max(1.0, std::abs(next))) {
      rayleigh = next;
      break;
    }
    rayleigh = next;
  }
  s.state = v;
  return rayleigh;
}

QuantumStrategy random_strategy(int parties, int local_dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  QuantumStrategy s;
  s.parties = parties;
  s.local_dim = local_dim;
  long dim = power_of(local_dim, parties);
  s.state = Vector(dim);
  for (long i = 0; i < dim; ++i) {
    s.state(i) = std::complex<double>(gauss(rng), gauss(rng));
  }
  s.state /= s.state.norm();
  s.projectors.resize(static_cast<size_t>(parties));
  for (int p = 0; p < parties; ++p) {
    for (int v = 0; v < 2; ++v) {
      Matrix g(local_dim, local_dim);
      for (int r = 0; r < local_dim; ++r) {
        for (int c = 0; c < local_dim; ++c) {
          g(r, c) = std::complex<double>(gauss(rng), gauss(rng));
        }
      }
      Matrix h = (g + g.adjoint()) / 2.0;
      Eigen::SelfAdjointEigenSolver<Matrix> eigen(h);
      Matrix projector = Matrix::Zero(local_dim, local_dim);
      for (int k = 0; k < local_dim; ++k) {
        if (eigen.eigenvalues()(k) > 0.0) {
          projector +=
              eigen.eigenvectors().col(k) * eigen.eigenvectors().col(k).adjoint();
        }
      }
      s.projectors[p][v] = projector;
    }
  }
  return s;
}

int thread_budget(int restarts) {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (const char* env = std::getenv("GYNI_THREADS")) {
    char* end = nullptr;
    long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed >= 1) threads = static_cast<int>(parsed);
  }
  return std::min(threads, restarts);
}

}  // namespace

void QuantumStrategy::validate() const {
  if (parties < 2) throw Error("quantum strategy needs at least two parties");
  if (local_dim < 2) throw Error("quantum strategy needs local dimension >= 2");
  long dim = power_of(local_dim, parties);
  if (state.size() != dim) {
    throw DimensionError("state dimension does not match the party count");
  }
  if (std::abs(state.norm() - 1.0) > 1e-12) {
    throw Error("state is not normalized");
  }
  if (static_cast<int>(projectors.size()) != parties) {
    throw DimensionError("one measurement pair per party is required");
  }
  for (int p = 0; p < parties; ++p) {
    for (int v = 0; v < 2; ++v) {
      const Matrix& proj = projectors[p][v];
      if (proj.rows() != local_dim || proj.cols() != local_dim) {
        throw DimensionError("projector shape does not match the local dimension");
      }
      if ((proj - proj.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw Error("projector is not Hermitian");
      }
      if ((proj * proj - proj).cwiseAbs().maxCoeff() > 1e-10) {
        throw Error("projector is not idempotent");
      }
    }
  }
}

double quantum_value(const GyniInstance& g, const QuantumStrategy& s) {
  if (s.parties != g.parties) {
    throw ScenarioMismatchError("strategy and game have different party counts");
  }
  Matrix bell = game_operator(g, s);
  return std::real(s.state.dot(bell * s.state));
}

QuantumStrategy embed_deterministic(const DeterministicStrategy& strategy,
                                    int local_dim) {
  const Scenario& sc = strategy.scenario;
  if (sc.inputs != 2 || sc.outputs != 2) {
    throw Error("only binary-input, binary-output strategies embed as measurement pairs");
  }
  QuantumStrategy s;
  s.parties = sc.parties;
  s.local_dim = local_dim;
  long dim = power_of(local_dim, s.parties);
  s.state = Vector::Zero(dim);
  s.state(0) = 1.0;
  s.projectors.resize(static_cast<size_t>(s.parties));
  for (int p = 0; p < s.parties; ++p) {
    for (int v = 0; v < static_cast<int>(strategy.outputs[p].size()); ++v) {
      s.projectors[p][v] = strategy.outputs[p][v] == 0
                               ? Matrix(Matrix::Identity(local_dim, local_dim))
                               : Matrix(Matrix::Zero(local_dim, local_dim));
    }
  }
  return s;
}

double seesaw_refine(const GyniInstance& g, QuantumStrategy& s,
                     std::vector<double>* trace) {
  if (s.parties != g.parties) {
    throw ScenarioMismatchError("strategy and game have different party counts");
  }
  double value = quantum_value(g, s);
  for (int sweep = 0; sweep < 10000; ++sweep) {
    for (int p = 0; p < s.parties; ++p) {
      for (int v = 0; v < 2; ++v) improve_measurement(g, s, p, v);
    }
    double next = improve_state(game_operator(g, s), s);
    if (trace != nullptr) trace->push_back(next);
    if (next - value <= 1e-10 * std::max(1.0, std::abs(next))) {
      value = std::max(value, next);
      break;
    }
    value = next;
  }
  return value;
}

double seesaw_search(const GyniInstance& g, int local_dim, int restarts,
                     std::uint64_t seed) {
  if (local_dim != 2 && local_dim != 3) {
    throw Error("see-saw supports local dimension 2 or 3");
  }
  if (g.parties > 4) {
    throw Error("see-saw supports at most four parties");
  }
  if (restarts < 1) throw Error("at least one restart is required");

  int threads = thread_budget(restarts);
  std::vector<double> best_per_thread(static_cast<size_t>(threads),
                                      -std::numeric_limits<double>::infinity());
  auto run_slice = [&](int slot) {
    double best = -std::numeric_limits<double>::infinity();
    for (int r = slot; r < restarts; r += threads) {
      std::seed_seq derive{static_cast<std::uint32_t>(seed),
                           static_cast<std::uint32_t>(seed >> 32),
                           static_cast<std::uint32_t>(r)};
      std::mt19937_64 rng(derive);
      QuantumStrategy s = random_strategy(g.parties, local_dim, rng);
      best = std::max(best, seesaw_refine(g, s));
    }
    best_per_thread[static_cast<size_t>(slot)] = best;
  };
  if (threads == 1) {
    run_slice(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(run_slice, t);
    for (std::thread& worker : pool) worker.join();
  }
  return *std::max_element(best_per_thread.begin(), best_per_thread.end());
}

}  // namespace gyni
