#include "almostuniv/engine.hpp"

#include <algorithm>
#include <limits>

#include "almostuniv/ellipsoid.hpp"

namespace almostuniv {

std::string_view decision_name(Decision d) {
  switch (d) {
    case Decision::AlmostUniversal: return "AlmostUniversal";
    case Decision::NotAlmostUniversal: return "NotAlmostUniversal";
    case Decision::HypothesisRejected: return "HypothesisRejected";
  }
  return "unknown";
}

std::string_view branch_name(Branch b) {
  switch (b) {
    case Branch::LocalFailure: return "local_failure";
    case Branch::NotSevenModEight: return "1";
    case Branch::EvenOrder: return "2a";
    case Branch::InertPrime: return "2b";
    case Branch::NonResidueShift: return "2c";
    case Branch::RadicalHolds: return "2d-holds";
    case Branch::RadicalFails: return "2d-fails";
    case Branch::ShortCircuit: return "short_circuit";
    case Branch::Rejected: return "rejected";
  }
  return "unknown";
}

std::vector<LocalReport> local_scan(const GramMatrix3& gram, std::uint64_t p) {
  std::vector<std::uint64_t> primes{2};
  for (auto [q, e] : factor(to_uint64(gram.determinant())))
    if (q != 2) primes.push_back(q);
  std::vector<LocalReport> out;
  for (std::uint64_t q : primes)
    if (q != p) out.push_back(local_universal(gram, q));
  return out;
}

std::optional<IntVec3> represents_coset(const Instance& instance, std::uint64_t t) {
  const Coset& coset = instance.coset;
  CosetEllipsoid ellipsoid(coset);
  const i128 target = ellipsoid.scaled_bound(static_cast<i128>(t));
  std::optional<IntVec3> witness;
  ellipsoid.for_each(target, [&](const std::array<i128, 3>& y, i128 q) {
    if (q != target) return true;
    witness = ellipsoid.lattice_offset(y, coset);
    return false;
  });
  return witness;
}

std::uint64_t radical_prime_part(const Instance& instance) {
  return radical_nonp(to_uint64(instance.gram().determinant()), instance.p);
}

namespace {

std::string join_primes(const std::vector<std::uint64_t>& qs) {
  std::string s;
  for (std::size_t i = 0; i < qs.size(); ++i) s += (i ? "," : "") + std::to_string(qs[i]);
  return s;
}

}  // namespace

Verdict decide(const Instance& instance) {
  Verdict v{Decision::AlmostUniversal, Branch::NotSevenModEight, {}, {}, {}, {}, {}};
  const std::uint64_t p = instance.p;
  const BigInt& dN = instance.gram().determinant();

  v.locals = local_scan(instance.gram(), p);
  for (const auto& r : v.locals) {
    if (!r.universal) {
      v.trace.push_back({"local", false, "N_q misses a class at q = " + std::to_string(r.prime)});
      v.decision = Decision::NotAlmostUniversal;
      v.branch = Branch::LocalFailure;
      v.failed_prime = r.prime;
      return v;
    }
  }
  v.trace.push_back({"local", true, "N_q universal for every q != p"});

  const bool cond1 = p % 8 != 7;
  v.trace.push_back({"1", cond1, "p mod 8 = " + std::to_string(p % 8)});
  if (cond1) return v;

  const int ord = valuation(dN, p);
  v.trace.push_back({"2a", ord % 2 == 0, "ord_p(dN) = " + std::to_string(ord)});
  if (ord % 2 == 0) {
    v.branch = Branch::EvenOrder;
    return v;
  }

  const std::uint64_t rad = radical_prime_part(instance);
  std::vector<std::uint64_t> inert;
  for (auto [q, e] : factor(rad))
    if (q != 2 && legendre(-static_cast<std::int64_t>(p), q) == -1) inert.push_back(q);
  v.trace.push_back({"2b", !inert.empty(), inert.empty() ? "no inert prime divides rad(dN)'" : "inert: " + join_primes(inert)});
  if (!inert.empty()) {
    v.branch = Branch::InertPrime;
    return v;
  }

  const int leg = legendre(instance.epsilon, p);
  v.trace.push_back({"2c", leg == -1, "(eps/p) = " + std::to_string(leg)});
  if (leg == -1) {
    v.branch = Branch::NonResidueShift;
    return v;
  }

  v.witness = represents_coset(instance, rad);
  v.trace.push_back({"2d", v.witness.has_value(), "rad(dN)' = " + std::to_string(rad)});
  if (v.witness) {
    v.branch = Branch::RadicalHolds;
    return v;
  }
  v.decision = Decision::NotAlmostUniversal;
  v.branch = Branch::RadicalFails;
  v.exceptional_family = exception_family(instance);
  return v;
}

ExceptionFamily exception_family(const Instance& instance) {
  const std::uint64_t p = instance.p;
  const std::uint64_t m = instance.modulus();
  const std::uint64_t t = radical_prime_part(instance);
  const std::uint64_t mu = invmod(t % m, m);
  const std::uint64_t target = mulmod(mod_reduce(instance.epsilon, m), mu, m);
  if (legendre(static_cast<std::int64_t>(target % p), p) != 1)
    throw Error(ErrorCode::InternalAssertion, "eps * mu is not a square mod p");
  std::uint64_t rho = sqrt_mod_prime_power(target, p, instance.alpha);
  if (rho > m / 2) rho = m - rho;
  if (mulmod(rho, rho, m) != target) throw Error(ErrorCode::InternalAssertion, "rho^2 != eps * mu mod p^alpha");
  return {t, mu, rho, m, p, instance.epsilon};
}

std::vector<std::uint64_t> exception_primes(const ExceptionFamily& family, std::size_t k) {
  std::vector<std::uint64_t> out;
  const std::uint64_t m = family.modulus;
  const std::uint64_t r1 = std::min(family.rho % m, (m - family.rho % m) % m);
  const std::uint64_t r2 = (m - r1) % m;
  for (std::uint64_t base = 0; out.size() < k; base += m) {
    if (base > std::numeric_limits<std::uint64_t>::max() / 2) throw Error(ErrorCode::Overflow, "prime search overflow");
    for (std::uint64_t q : {base + r1, base + r2}) {
      if (out.size() == k) break;
      if (q < 3 || q == family.p || !is_prime(q)) continue;
      if (legendre(-static_cast<std::int64_t>(family.p), q) != 1) continue;
      if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
    }
  }
  return out;
}

std::vector<std::uint64_t> predict_exceptions(const ExceptionFamily& family, std::size_t k) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q : exception_primes(family, k)) {
    BigInt v = BigInt(q) * q * family.t;
    if (mod_reduce(v, family.modulus) != mod_reduce(family.epsilon, family.modulus))
      throw Error(ErrorCode::InternalAssertion, "predicted value " + v.str() + " is not = eps mod p^alpha");
    out.push_back(to_uint64(v));
  }
  return out;
}

Analysis analyze(const Coset& coset) {
  Validation validation = validate_instance(coset.gram, coset.shift);
  if (auto* inst = std::get_if<Instance>(&validation)) {
    // Verdicts are invariant under nu -> nu + x0, so decide on the reduced
    // shift and report the witness against the shift as supplied.
    Instance canonical = canonicalize(*inst);
    Verdict verdict = decide(canonical);
    if (verdict.witness) {
      const auto& from = canonical.shift().numerators();
      const auto& to = inst->shift().numerators();
      const std::int64_t d = inst->shift().denominator();
      for (int i = 0; i < 3; ++i) (*verdict.witness)[i] += (from[i] - to[i]) / d;
    }
    return {std::move(validation), std::move(verdict), std::nullopt};
  }
  const auto& rejection = std::get<Rejection>(validation);
  Verdict v{Decision::HypothesisRejected, Branch::Rejected, {}, {}, {}, {}, {}};
  if (rejection.kind == RejectionKind::ShortCircuitNotAU) {
    v.decision = Decision::NotAlmostUniversal;
    v.branch = Branch::ShortCircuit;
    v.trace.push_back({"gate", false, rejection.message});
    return {std::move(validation), std::move(v), std::nullopt};
  }
  v.trace.push_back({"gate", false, rejection.message});
  std::optional<bool> service;
  if (rejection.kind != RejectionKind::NonIntegralValues) {
    // Away from g * conductor the coset is locally the whole lattice and the
    // progression imposes no condition, so a local failure there is fatal.
    const BigInt g = rejection.norm_ideal.value_or(BigInt(1));
    const std::int64_t d = coset.shift.denominator();
    service = false;
    for (const auto& r : local_scan(coset.gram, 0)) {
      if (g % r.prime == 0 || d % static_cast<std::int64_t>(r.prime) == 0) continue;
      v.locals.push_back(r);
      if (!r.universal) {
        service = true;
        if (!v.failed_prime) v.failed_prime = r.prime;
      }
    }
    v.trace.push_back({"local", !*service,
                       *service ? "local failure at q = " + std::to_string(*v.failed_prime) : "no local failure found"});
  }
  return {std::move(validation), std::move(v), service};
}

}  // namespace almostuniv
