#pragma once

// Spinor-norm containment checks for E = Q(sqrt(-p)), p = 7 mod 8: local
// norm groups N_q(E), the spinor norm group theta(O+(M_p)) of
// M_p = <eps, p^i beta, p^j gamma>, and the obstructions that rule out
// rad(dN)' as a primitive spinor exception.

#include <cstdint>
#include <string_view>
#include <vector>

#include "almostuniv/core_lattice.hpp"
#include "almostuniv/localization.hpp"

namespace almostuniv {

class SpinorField {
 public:
  /// Throws InvalidArgument unless p is a prime with p = 7 mod 8.
  explicit SpinorField(std::uint64_t p);

  std::uint64_t p() const { return p_; }
  /// -p, the discriminant of E.
  std::int64_t discriminant() const { return -static_cast<std::int64_t>(p_); }

 private:
  std::uint64_t p_;
};

enum class Splitting { Split, Inert, Ramified };

std::string_view splitting_name(Splitting s);

Splitting splits(std::uint64_t q, const SpinorField& field);

/// Membership of s in the local norm group N_q(E).
bool norm_group_contains(std::uint64_t q, const SpinorField& field, const BigRational& s);

/// theta(O+(M_p)) modulo squares, as square classes at p.
struct ThetaGroup {
  std::uint64_t p;
  std::vector<SquareClass> classes;  // sorted, distinct; always contains 1

  bool contains(const SquareClass& c) const;
  /// Whether every class lies in N_p(E) = {1, p} Q_p^x2.
  bool contained_in_norms(const SpinorField& field) const;
};

/// {1, eps beta p^i, eps gamma p^j, beta gamma p^(i+j)} reduced modulo
/// squares. Requires 1 <= i <= j and p-adic units eps, beta, gamma; throws
/// ShapeViolation otherwise.
ThetaGroup theta_Mp(const BigInt& epsilon, const BigInt& beta, int i, const BigInt& gamma, int j, std::uint64_t p);

/// Shape <eps, p^i beta, p^j gamma> of M_p read off the Jordan splitting of
/// the superlattice M.
struct MpShape {
  BigInt epsilon;
  BigInt beta;
  int i;
  BigInt gamma;
  int j;
};

MpShape mp_shape(const Instance& instance);

enum class Obstruction { ExcludedA, ExcludedB, ExcludedC, Possible };

std::string_view obstruction_name(Obstruction o);

/// Which condition certifies that t cannot be a primitive spinor exception
/// of gen(M). Requires p = 7 mod 8 and t coprime to p (InvalidArgument
/// otherwise).
Obstruction spinor_exception_obstruction(const Instance& instance, std::uint64_t t);

}  // namespace almostuniv
