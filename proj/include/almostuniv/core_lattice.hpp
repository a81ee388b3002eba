#pragma once

// Exact Gram-level algebra for a coset nu + N of a positive definite ternary
// lattice N: discriminant, conductor, norm ideal n(nu, N), the hypothesis
// gate producing an Instance, and the superlattice M = Z nu + N.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "almostuniv/arith.hpp"

namespace almostuniv {

using IntVec3 = std::array<std::int64_t, 3>;

/// Integral symmetric positive definite 3x3 Gram matrix. Diagonal entries
/// are Q(e_i), off-diagonal entries B(e_i, e_j).
class GramMatrix3 {
 public:
  using Entries = std::array<std::array<std::int64_t, 3>, 3>;

  /// Throws InvalidArgument for an asymmetric matrix and NotPositiveDefinite
  /// when a leading principal minor is <= 0.
  explicit GramMatrix3(const Entries& entries);

  /// Upper-triangle order (g11, g12, g13, g22, g23, g33).
  static GramMatrix3 from_upper(const std::array<std::int64_t, 6>& upper);
  static GramMatrix3 diagonal(std::int64_t a, std::int64_t b, std::int64_t c);

  std::int64_t operator()(int i, int j) const { return entries_[i][j]; }
  const Entries& entries() const { return entries_; }
  std::array<std::int64_t, 6> upper() const;

  const BigInt& determinant() const { return det_; }

  /// Q(y) for an integral vector, exactly.
  BigInt evaluate(const IntVec3& y) const;
  /// B(x, y) for integral vectors, exactly.
  BigInt bilinear(const IntVec3& x, const IntVec3& y) const;

  /// Gram matrix with every entry divided by `divisor`; throws
  /// NonIntegralValues when some entry is not divisible.
  GramMatrix3 divided_by(std::int64_t divisor) const;

  bool operator==(const GramMatrix3& other) const { return entries_ == other.entries_; }

 private:
  Entries entries_;
  BigInt det_;
};

/// nu = (a e1 + b e2 + c e3) / d in reduced form gcd(a, b, c, d) = 1, d > 0.
/// The denominator d is the conductor of nu.
class ShiftVector {
 public:
  /// Reduces the fraction; throws InvalidArgument for d == 0.
  ShiftVector(const IntVec3& numerators, std::int64_t denominator);

  const IntVec3& numerators() const { return numerators_; }
  std::int64_t denominator() const { return denominator_; }

  ShiftVector translated(const IntVec3& x0) const;
  /// Coordinates reduced into [0, d).
  ShiftVector reduced() const;

  bool operator==(const ShiftVector& other) const = default;

 private:
  IntVec3 numerators_;
  std::int64_t denominator_;
};

/// A lattice together with a rational shift; the oracle and enumeration work
/// at this level so that gate-rejected inputs can still be serviced.
struct Coset {
  GramMatrix3 gram;
  ShiftVector shift;

  /// Q(nu) as an exact rational.
  BigRational shift_value() const;
  /// Q(nu + x) for x in N.
  BigRational value_at(const IntVec3& x) const;
};

BigInt discriminant(const GramMatrix3& gram);

/// Product of primes dividing d to an odd power.
std::uint64_t radical(std::uint64_t d);
/// radical(d) with the prime p removed.
std::uint64_t radical_nonp(std::uint64_t d, std::uint64_t p);

struct RationalTriple {
  std::array<std::int64_t, 3> num;
  std::array<std::int64_t, 3> den;
};

struct ConductorResult {
  std::int64_t conductor;
  ShiftVector shift;
};

/// Least m >= 1 with m nu in N together with the canonical shift.
ConductorResult conductor(const RationalTriple& nu);

/// Generator g of n(nu, N) = gZ. Throws NonIntegralValues when Q(nu + x) is
/// not integer valued on N.
BigInt norm_ideal(const Coset& coset);

enum class RejectionKind {
  EvenPrime,
  CompositeNormIdeal,
  ConductorMismatch,
  NonIntegralValues,
  ShortCircuitNotAU,
};

std::string_view rejection_name(RejectionKind kind);

struct Rejection {
  RejectionKind kind;
  std::string message;
  /// Norm ideal generator when it was computed.
  std::optional<BigInt> norm_ideal;
  /// The prime when the norm ideal is a power of a single prime.
  std::optional<std::uint64_t> prime;
};

/// A coset that satisfies n(nu, N) = p^alpha Z, conductor p^alpha and
/// ord_p(Q(nu)) = 0. `coset` holds the normalized Gram matrix (divided by
/// p^scale_applied) and `input` the coset as supplied.
struct Instance {
  Coset coset;
  Coset input;
  std::uint64_t p;
  int alpha;
  BigInt epsilon;
  int scale_applied;

  std::uint64_t modulus() const { return ipow(p, alpha); }
  const GramMatrix3& gram() const { return coset.gram; }
  const ShiftVector& shift() const { return coset.shift; }
};

using Validation = std::variant<Instance, Rejection>;

/// Hypothesis gate. Never throws for well-formed input; failures come back
/// as a Rejection.
Validation validate_instance(const GramMatrix3& gram, const ShiftVector& shift);

/// Instance with nu replaced by nu + x0. The norm ideal is unchanged.
Instance shift_translate(const Instance& instance, const IntVec3& x0);

/// Instance with shift coordinates reduced into [0, p^alpha).
Instance canonicalize(const Instance& instance);

/// Gram matrix of M = Z nu + N in a basis {nu0, f1, f2} where nu0 = u/d for
/// the primitive direction u of nu (nu0 = nu when the numerators are
/// coprime).
struct SuperlatticeM {
  GramMatrix3 gram_M;
  std::int64_t index;
  BigInt dM;
  /// Basis of M written as rational columns (numerators over `index`).
  std::array<IntVec3, 3> basis_numerators;
};

SuperlatticeM superlattice(const Instance& instance);

/// Unimodular integer matrix (columns) whose first column is the primitive
/// vector u. Throws InvalidArgument if u is not primitive.
std::array<IntVec3, 3> complete_to_basis(const IntVec3& u);

}  // namespace almostuniv
