#include "gyni/nlc.hpp"

#include <atomic>
#include <bit>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <utility>
#include <vector>

#include "gyni/error.hpp"
#include "gyni/matrix.hpp"

namespace gyni {

namespace {

int parity(long bits) { return std::popcount(static_cast<unsigned long>(bits)) & 1; }

long pow2(int n) { return 1L << n; }

// Flips the sign of every coefficient when the first nonzero one is negative,
// so the two members of a global-sign pair land on the same representative.
CorrelationInequality canonical_sign(CorrelationInequality ci) {
  for (const Rational& c : ci.coefficients) {
    if (c.is_zero()) continue;
    if (c.sign() < 0)
      for (Rational& v : ci.coefficients) v = -v;
    break;
  }
  return ci;
}

struct CorrelationOrder {
  bool operator()(const CorrelationInequality& a, const CorrelationInequality& b) const {
    if (a.n != b.n) return a.n < b.n;
    const size_t common = std::min(a.coefficients.size(), b.coefficients.size());
    for (size_t i = 0; i < common; ++i)
      if (a.coefficients[i] != b.coefficients[i]) return a.coefficients[i] < b.coefficients[i];
    if (a.coefficients.size() != b.coefficients.size())
      return a.coefficients.size() < b.coefficients.size();
    return a.bound < b.bound;
  }
};

// The deterministic +-1 correlation vector of the linear rule (u, delta):
// entry z is (-1)^{u.z XOR delta}. These are exactly the vertices of the
// full-correlation polytope (check_lemma1_correspondence verifies the census).
std::vector<Rational> linear_rule_vector(int n, long u, int delta) {
  const long points = pow2(n);
  std::vector<Rational> v(static_cast<size_t>(points));
  for (long z = 0; z < points; ++z)
    v[static_cast<size_t>(z)] = (parity(u & z) ^ delta) ? -1 : 1;
  return v;
}

// Facet test of a correlation inequality against the deterministic vertices
// of its own n-party two-setting correlation space.
bool correlation_facet_status(const CorrelationInequality& ci) {
  const long points = pow2(ci.n);
  std::vector<std::vector<Rational>> vertices;
  std::vector<std::vector<Rational>> saturating;
  vertices.reserve(static_cast<size_t>(2 * points));
  bool valid = true;
  for (long u = 0; u < points; ++u)
    for (int delta = 0; delta < 2; ++delta) {
      std::vector<Rational> v = linear_rule_vector(ci.n, u, delta);
      Rational value = 0;
      for (long z = 0; z < points; ++z)
        value += ci.coefficients[static_cast<size_t>(z)] * v[static_cast<size_t>(z)];
      if (value > ci.bound) valid = false;
      if (value == ci.bound) saturating.push_back(v);
      vertices.push_back(std::move(v));
    }
  if (!valid || saturating.empty()) return false;
  return affine_rank(saturating) == affine_rank(vertices) - 1;
}

// Worker count for the candidate sweep: GYNI_THREADS when set to a positive
// number, hardware concurrency otherwise, never more than the job count.
int thread_budget(size_t jobs) {
  long configured = 0;
  if (const char* env = std::getenv("GYNI_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed > 0) configured = parsed;
  }
  if (configured < 1) configured = static_cast<long>(std::thread::hardware_concurrency());
  if (configured < 1) configured = 1;
  if (configured > static_cast<long>(jobs)) configured = static_cast<long>(jobs);
  return static_cast<int>(configured);
}

}  // namespace

NlcInstance::NlcInstance(int bits, std::vector<int> truth_table, std::vector<Rational> weights)
    : n(bits), f(std::move(truth_table)), p_tilde(std::move(weights)) {
  if (n < 1) throw Error("the guessing game needs at least one input bit");
  if (n > 30) throw Error("the guessing game is limited to 30 input bits");
  const size_t size = static_cast<size_t>(pow2(n));
  if (f.size() != size || p_tilde.size() != size)
    throw DimensionError("truth table and weights need one entry per n-bit string");
  Rational total = 0;
  for (size_t z = 0; z < size; ++z) {
    if (f[z] != 0 && f[z] != 1) throw Error("truth table entries must be bits");
    if (p_tilde[z].sign() < 0) throw Error("weights must be nonnegative");
    total += p_tilde[z];
  }
  if (total != Rational(1)) throw Error("weights must sum to one");
}

std::vector<CorrelationInequality> werner_wolf_inequalities(int n) {
  if (n < 1) throw Error("the sign-function family needs at least one bit");
  if (n > 4) throw Error("the sign-function family is only enumerated up to four bits");
  const long points = pow2(n);
  const long members = 1L << points;
  std::vector<CorrelationInequality> list;
  list.reserve(static_cast<size_t>(members));
  for (long mask = 0; mask < members; ++mask) {
    CorrelationInequality ci{n, std::vector<Rational>(static_cast<size_t>(points)), 1};
    for (long z = 0; z < points; ++z) {
      long num = 0;
      for (long r = 0; r < points; ++r) {
        const int sign_f = ((mask >> r) & 1) ? -1 : 1;
        num += parity(r & z) ? -sign_f : sign_f;
      }
      ci.coefficients[static_cast<size_t>(z)] = Rational(num, points);
    }
    list.push_back(std::move(ci));
  }
  return list;
}

std::vector<CorrelationInequality> dedup_up_to_global_sign(
    const std::vector<CorrelationInequality>& list) {
  std::vector<CorrelationInequality> out;
  std::set<CorrelationInequality, CorrelationOrder> seen;
  for (const CorrelationInequality& ci : list) {
    CorrelationInequality canon = canonical_sign(ci);
    if (seen.insert(canon).second) out.push_back(std::move(canon));
  }
  return out;
}

NlcInstance nlc_from_correlation(const CorrelationInequality& ci) {
  if (ci.n < 1) throw Error("the inequality needs at least one bit");
  if (ci.coefficients.size() != static_cast<size_t>(pow2(ci.n)))
    throw DimensionError("the inequality needs one coefficient per n-bit string");
  Rational scale = 0;
  for (const Rational& c : ci.coefficients) scale += c.abs();
  if (scale.is_zero()) throw Error("cannot read a game out of an all-zero inequality");
  const size_t size = ci.coefficients.size();
  std::vector<int> f(size, 0);
  std::vector<Rational> weights(size);
  for (size_t z = 0; z < size; ++z) {
    f[z] = ci.coefficients[z].sign() < 0 ? 1 : 0;
    weights[z] = ci.coefficients[z].abs() / scale;
  }
  return NlcInstance(ci.n, std::move(f), std::move(weights));
}

CorrelationInequality correlation_from_nlc(const NlcInstance& inst) {
  const long points = pow2(inst.n);
  CorrelationInequality ci{inst.n, std::vector<Rational>(static_cast<size_t>(points)), 0};
  for (size_t z = 0; z < static_cast<size_t>(points); ++z)
    ci.coefficients[z] = inst.f[z] ? -inst.p_tilde[z] : inst.p_tilde[z];
  ci.bound = nlc_classical_bound(inst).value / Rational(points);
  return ci;
}

NlcBound nlc_classical_bound(const NlcInstance& inst) {
  const long points = pow2(inst.n);
  NlcBound best{0, LinearStrategy{}};
  bool first = true;
  for (long u = 0; u < points; ++u) {
    // 2^{-n} of the rule's value at delta = 0; the sign flip covers delta = 1.
    Rational hat = 0;
    for (long z = 0; z < points; ++z) {
      const size_t iz = static_cast<size_t>(z);
      if ((inst.f[iz] != 0) != (parity(u & z) != 0))
        hat -= inst.p_tilde[iz];
      else
        hat += inst.p_tilde[iz];
    }
    for (int delta = 0; delta < 2; ++delta) {
      Rational value = Rational(points) * (delta ? -hat : hat);
      if (first || value > best.value) {
        best = NlcBound{std::move(value), LinearStrategy{u, delta}};
        first = false;
      }
    }
  }
  return best;
}

Rational nlc_bruteforce_bound(const NlcInstance& inst) {
  if (inst.n > 3) throw Error("the unrestricted search is only run up to three bits");
  const long points = pow2(inst.n);
  const long tables = 1L << points;
  std::vector<Rational> signed_weight(static_cast<size_t>(points));
  for (size_t z = 0; z < static_cast<size_t>(points); ++z)
    signed_weight[z] = inst.f[z] ? -inst.p_tilde[z] : inst.p_tilde[z];
  Rational best = 0;
  bool first = true;
  for (long a = 0; a < tables; ++a) {
    Rational total = 0;
    for (long y = 0; y < points; ++y) {
      // Party B's best answer for input y contributes the absolute value of
      // the coefficient mass left after party A's signs are fixed.
      Rational t = 0;
      for (long x = 0; x < points; ++x) {
        const Rational& w = signed_weight[static_cast<size_t>(x ^ y)];
        if ((a >> x) & 1)
          t -= w;
        else
          t += w;
      }
      total += t.abs();
    }
    if (first || total > best) {
      best = std::move(total);
      first = false;
    }
  }
  return best;
}

BellInequality build_nlc_bell_inequality(const NlcInstance& inst) {
  if (inst.n > 3) throw Error("the two-party expansion is only built up to three bits");
  const long points = pow2(inst.n);
  const Scenario sc(2, static_cast<int>(points), 2);
  BellInequality ineq(sc);
  for (long x = 0; x < points; ++x)
    for (long y = 0; y < points; ++y) {
      const size_t z = static_cast<size_t>(x ^ y);
      const Rational t = inst.f[z] ? -inst.p_tilde[z] : inst.p_tilde[z];
      const long joint_input = x + points * y;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) ineq.coeff(a + 2 * b, joint_input) = ((a ^ b) != 0) ? -t : t;
    }
  ineq.bound = nlc_classical_bound(inst).value;
  ineq.bound_kind = BoundKind::kClassical;
  return ineq;
}

Lemma1Report check_lemma1_correspondence(int n) {
  if (n < 1) throw Error("the correspondence check needs at least one bit");
  if (n > 3) throw Error("the correspondence check is only run up to three bits");
  const long points = pow2(n);
  Lemma1Report report{n, true, false, 0};

  // For each linear rule, the correlators of the input pairs composing one z
  // must sum to 2^n times the rule's correlation vector entry at z.
  for (long u = 0; u < points; ++u)
    for (int delta = 0; delta < 2; ++delta)
      for (long z = 0; z < points; ++z) {
        long lhs = 0;
        for (long x = 0; x < points; ++x) {
          const long y = x ^ z;
          const int a = parity(u & x);
          const int b = parity(u & y) ^ delta;
          lhs += (a ^ b) ? -1 : 1;
        }
        const long rhs = (parity(u & z) ^ delta) ? -points : points;
        if (lhs != rhs) report.identity_holds = false;
      }

  // Vertex census: every joint sign assignment (two sign bits per party)
  // collapses onto some linear rule's vector, and every rule's vector occurs.
  std::set<std::vector<int>> seen;
  const long assignments = 1L << (2 * n);
  for (long code = 0; code < assignments; ++code) {
    std::vector<int> vec(static_cast<size_t>(points));
    for (long z = 0; z < points; ++z) {
      int sign = 1;
      for (int i = 0; i < n; ++i)
        if ((code >> (2 * i + ((z >> i) & 1))) & 1) sign = -sign;
      vec[static_cast<size_t>(z)] = sign;
    }
    seen.insert(std::move(vec));
  }
  std::set<std::vector<int>> expected;
  for (long u = 0; u < points; ++u)
    for (int delta = 0; delta < 2; ++delta) {
      const std::vector<Rational> v = linear_rule_vector(n, u, delta);
      std::vector<int> vec(static_cast<size_t>(points));
      for (size_t z = 0; z < vec.size(); ++z) vec[z] = v[z] == Rational(1) ? 1 : -1;
      expected.insert(std::move(vec));
    }
  report.extremal_point_count = static_cast<long>(seen.size());
  report.extremal_points_match = seen == expected;
  return report;
}

NlcAuditReport audit_nlc_facets(int n) {
  if (n != 2 && n != 3) throw Error("the facet sweep is only run for two or three bits");
  const long points = pow2(n);
  const Scenario sc(2, static_cast<int>(points), 2);

  std::vector<CorrelationInequality> candidates =
      dedup_up_to_global_sign(werner_wolf_inequalities(n));
  std::vector<NlcInstance> instances;
  std::vector<BellInequality> bells;
  instances.reserve(candidates.size());
  bells.reserve(candidates.size());
  for (const CorrelationInequality& ci : candidates) {
    instances.push_back(nlc_from_correlation(ci));
    bells.push_back(build_nlc_bell_inequality(instances.back()));
  }

  const LocalPolytope polytope = build_local_polytope(sc);

  // The candidate tests are independent; sweep them over a small pool and
  // keep the results slotted by index so the report order is fixed.
  std::vector<std::optional<FacetReport>> verdicts(bells.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto worker = [&]() {
    try {
      for (size_t i = next.fetch_add(1); i < bells.size(); i = next.fetch_add(1))
        verdicts[i] = facet_check(bells[i], polytope);
    } catch (...) {
      const std::lock_guard<std::mutex> hold(failure_lock);
      if (!failure) failure = std::current_exception();
    }
  };
  const int threads = thread_budget(bells.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  NlcAuditReport report{n, polytope, check_lemma1_correspondence(n), {}, 0, true, false};
  report.candidates.reserve(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    long nonzero = 0;
    for (const Rational& c : candidates[i].coefficients)
      if (!c.is_zero()) ++nonzero;
    const bool corr_facet = correlation_facet_status(candidates[i]);
    NlcFacetAudit audit{std::move(candidates[i]), std::move(instances[i]), nonzero == 1,
                        corr_facet, std::move(*verdicts[i])};
    if (audit.bell.is_facet) ++report.facet_count;
    if (!audit.correlation_is_facet) report.candidates_all_correlation_facets = false;
    report.candidates.push_back(std::move(audit));
  }
  return report;
}

}  // namespace gyni
