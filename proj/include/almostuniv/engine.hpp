#pragma once

// The decision tree for almost universality of an instance, the
// representation test for rad(dN)', and the infinite family of missed values
// produced when that test fails.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "almostuniv/core_lattice.hpp"
#include "almostuniv/localization.hpp"

namespace almostuniv {

enum class Decision { AlmostUniversal, NotAlmostUniversal, HypothesisRejected };

std::string_view decision_name(Decision d);

enum class Branch {
  LocalFailure,
  NotSevenModEight,  // (1)
  EvenOrder,         // (2a)
  InertPrime,        // (2b)
  NonResidueShift,   // (2c)
  RadicalHolds,      // (2d-holds)
  RadicalFails,      // (2d-fails)
  ShortCircuit,
  Rejected,
};

/// "local_failure", "1", "2a", "2b", "2c", "2d-holds", "2d-fails",
/// "short_circuit", "rejected".
std::string_view branch_name(Branch b);

struct TraceEntry {
  std::string condition;  // "local", "1", "2a", "2b", "2c", "2d"
  bool holds;
  std::string detail;
};

struct ExceptionFamily {
  std::uint64_t t;
  std::uint64_t mu;
  std::uint64_t rho;
  std::uint64_t modulus;
  std::uint64_t p;
  BigInt epsilon;
};

struct Verdict {
  Decision decision;
  Branch branch;
  std::vector<TraceEntry> trace;
  std::vector<LocalReport> locals;
  std::optional<ExceptionFamily> exceptional_family;
  /// x with Q(nu + x) = rad(dN)' for the 2d-holds branch.
  std::optional<IntVec3> witness;
  /// Failing prime for the local_failure branch.
  std::optional<std::uint64_t> failed_prime;
};

/// local_universal at 2 and at every odd prime dividing dN, except p.
/// Pass p = 0 to scan every prime.
std::vector<LocalReport> local_scan(const GramMatrix3& gram, std::uint64_t p);

/// Exact: some x in N with Q(nu + x) = t, or none.
std::optional<IntVec3> represents_coset(const Instance& instance, std::uint64_t t);

/// rad(dN) with p removed.
std::uint64_t radical_prime_part(const Instance& instance);

Verdict decide(const Instance& instance);

/// Throws InternalAssertion when eps * mu is not a square mod p.
ExceptionFamily exception_family(const Instance& instance);

/// q^2 t for the first k primes q with q = +-rho mod p^alpha that split in
/// Q(sqrt(-p)). Throws InternalAssertion if some value is not = eps mod p^alpha.
std::vector<std::uint64_t> predict_exceptions(const ExceptionFamily& family, std::size_t k);
/// The primes q behind predict_exceptions.
std::vector<std::uint64_t> exception_primes(const ExceptionFamily& family, std::size_t k);

/// Full pipeline on an arbitrary coset: the gate, then decide for instances,
/// or the service-mode local scan for rejected input.
struct Analysis {
  Validation validation;
  Verdict verdict;
  /// For rejected input: whether the local scan already shows the polynomial
  /// misses infinitely many values of its progression.
  std::optional<bool> service_not_almost_universal;
};

Analysis analyze(const Coset& coset);

}  // namespace almostuniv
