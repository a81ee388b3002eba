#pragma once

// Local (q-adic) invariants of integral ternary forms: Hilbert symbols,
// square classes, Jordan splittings, isotropy and local universality.
//
// Local routines accept any nondegenerate integral symmetric matrix, not
// only positive definite ones, so that forms such as <1, -1, -2> can be
// studied over Z_2 directly.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "almostuniv/arith.hpp"
#include "almostuniv/core_lattice.hpp"

namespace almostuniv {

using SymMatrix3 = std::array<std::array<std::int64_t, 3>, 3>;

SymMatrix3 diagonal_form(std::int64_t a, std::int64_t b, std::int64_t c);

/// The real place in hilbert().
inline constexpr std::uint64_t kInfinitePlace = 0;

struct SquareClass {
  std::uint64_t prime;
  /// Odd q: one of 1, u, q, qu with u the least nonresidue mod q.
  /// q = 2: one of 1, 3, 5, 7, 2, 6, 10, 14.
  std::int64_t representative;

  bool operator==(const SquareClass&) const = default;
};

SquareClass square_class(const BigRational& value, std::uint64_t q);

/// The representatives in the order they are tested by local_universal.
std::vector<std::int64_t> square_class_representatives(std::uint64_t q);

/// Local Hilbert symbol (a, b)_q; q = kInfinitePlace for the real place.
int hilbert(const BigRational& a, const BigRational& b, std::uint64_t q);

/// Whether [a, b, c] is anisotropic over Q_q. Throws DegenerateForm for a
/// zero coefficient.
bool is_anisotropic(const std::array<BigRational, 3>& coefficients, std::uint64_t q);

enum class BlockKind { Unary, ImproperA22, ImproperA00 };

struct JordanBlock {
  BlockKind kind;
  /// Unary: the unit coefficient mod q^K. Improper: the unit part of the
  /// block determinant mod q^K.
  BigInt unit;

  int rank() const { return kind == BlockKind::Unary ? 1 : 2; }
};

struct JordanComponent {
  int exponent;
  std::vector<JordanBlock> blocks;

  int rank() const;
  /// Product of the block units mod q^K.
  BigInt determinant_unit(std::uint64_t modulus) const;
};

struct JordanSplitting {
  std::uint64_t prime;
  int precision;
  std::vector<JordanComponent> components;  // strictly increasing exponents

  /// Exponent of each one-dimensional slot, ascending, with multiplicity.
  std::vector<int> exponents() const;
  /// (exponent, unit) pairs for a fully diagonal splitting, in component
  /// order. Throws ShapeViolation if an improper block is present.
  std::vector<std::pair<int, BigInt>> diagonal() const;
  const JordanComponent* component(int exponent) const;
  int rank() const;
};

/// Jordan splitting at q computed by exact valuation-guided pivoting; the
/// change of basis lies in GL_3(Z_(q)). Throws PrecisionTooLow when
/// precision <= ord_q(det).
JordanSplitting jordan_split(const SymMatrix3& form, std::uint64_t q, int precision);
JordanSplitting jordan_split(const GramMatrix3& gram, std::uint64_t q, int precision);

/// Result of searching for x in Z_q^3 with Q(x) = c.
struct LocalSearch {
  bool represented;
  /// Level e at which the search concluded (solutions were tracked mod q^e).
  int precision;
  /// A solution mod q^precision whose gradient certifies a q-adic lift.
  std::optional<IntVec3> witness;
};

/// Exhaustive residue search: tracks all solutions of Q(x) = c mod q^e,
/// lifting one digit at a time, until some solution satisfies the Hensel
/// condition (represented) or none remain (not represented). `primitive`
/// restricts to x not divisible by q.
LocalSearch search_representation(const SymMatrix3& form, std::uint64_t q, std::int64_t c, bool primitive);

enum class LocalMethod { ResidueSearch, JordanInvariants, Unimodular };

std::string_view local_method_name(LocalMethod method);

struct LocalReport {
  std::uint64_t prime;
  bool universal;
  std::optional<SquareClass> missed_class;
  int precision_used;
  LocalMethod method;
};

/// Largest odd prime decided by residue search inside local_universal;
/// larger odd primes use the Jordan invariants.
inline constexpr std::uint64_t kResidueSearchOddLimit = 13;

/// Whether the q-adic completion represents every q-adic integer.
LocalReport local_universal(const SymMatrix3& form, std::uint64_t q);
LocalReport local_universal(const GramMatrix3& gram, std::uint64_t q);

/// The residue-search decision, for any q.
LocalReport local_universal_search(const SymMatrix3& form, std::uint64_t q);
/// The Jordan-invariant decision, odd q only.
LocalReport local_universal_jordan(const SymMatrix3& form, std::uint64_t q);

enum class PrimitiveClass { Always, Except4Units, Fails };

std::string_view primitive_class_name(PrimitiveClass c);

struct PrimitiveRep {
  PrimitiveClass lattice_class;
  /// Whether the requested value class is primitively represented.
  bool primitive;
};

/// Primitive representation over Z_2 of a Z_2-universal ternary form.
/// Throws NotUniversalAt2 when the form is not universal at 2.
PrimitiveRep primitive_rep_z2(const SymMatrix3& form, std::int64_t value_class);

BigInt determinant(const SymMatrix3& form);

}  // namespace almostuniv
