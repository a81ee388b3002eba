#pragma once

// Exact integer helpers shared by every module: checked 128-bit arithmetic,
// modular arithmetic on 64-bit moduli, primality and factorization.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "almostuniv/error.hpp"

namespace almostuniv {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using i128 = __int128;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// checked 128-bit arithmetic; overflow is a hard error

inline i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "128-bit addition overflow");
  return r;
}

inline i128 checked_sub(i128 a, i128 b) {
  i128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "128-bit subtraction overflow");
  return r;
}

inline i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "128-bit multiplication overflow");
  return r;
}

/// floor(sqrt(n)) for n >= 0.
u128 isqrt(u128 n);

/// Floor and ceiling division for a signed numerator and positive denominator.
inline i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

/// Least nonnegative residue.
inline i128 mod_floor(i128 a, i128 m) {
  i128 r = a % m;
  return r < 0 ? r + m : r;
}

std::string to_string(i128 v);

// ---------------------------------------------------------------------------
// big integer conversions

std::int64_t to_int64(const BigInt& v);  // throws Overflow
std::uint64_t to_uint64(const BigInt& v);
i128 to_i128(const BigInt& v);
BigInt from_i128(i128 v);

// ---------------------------------------------------------------------------
// modular arithmetic, moduli below 2^63

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
std::uint64_t mod_reduce(std::int64_t a, std::uint64_t m);
std::uint64_t mod_reduce(const BigInt& a, std::uint64_t m);
/// Inverse of a modulo m; throws InvalidArgument when gcd(a, m) != 1.
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);

bool is_prime(std::uint64_t n);

/// Prime factorization as ascending (prime, exponent) pairs. n >= 1.
std::vector<std::pair<std::uint64_t, int>> factor(std::uint64_t n);

/// Largest e with q^e | n; throws ZeroInput for n == 0.
int valuation(std::int64_t n, std::uint64_t q);
int valuation(const BigInt& n, std::uint64_t q);

/// Legendre symbol (a/p) for an odd prime p.
int legendre(std::int64_t a, std::uint64_t p);
int legendre(const BigInt& a, std::uint64_t p);

/// Least positive quadratic nonresidue modulo the odd prime q.
std::uint64_t least_nonresidue(std::uint64_t q);

/// A square root of a modulo the odd prime p (Tonelli-Shanks). a must be a
/// nonzero quadratic residue.
std::uint64_t sqrt_mod_prime(std::uint64_t a, std::uint64_t p);

/// A square root of the unit a modulo p^k, lifted from sqrt_mod_prime.
std::uint64_t sqrt_mod_prime_power(std::uint64_t a, std::uint64_t p, int k);

/// p^k, throwing Overflow past 2^63.
std::uint64_t ipow(std::uint64_t p, int k);

/// Product of the primes that divide d to an odd power.
std::uint64_t squarefree_kernel(std::uint64_t d);

}  // namespace almostuniv
