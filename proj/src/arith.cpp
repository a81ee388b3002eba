#include "almostuniv/arith.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace almostuniv {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonIntegralValues: return "NonIntegralValues";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::DegenerateForm: return "DegenerateForm";
    case ErrorCode::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorCode::ShapeViolation: return "ShapeViolation";
    case ErrorCode::NotUniversalAt2: return "NotUniversalAt2";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::InternalAssertion: return "InternalAssertion";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

u128 isqrt(u128 n) {
  if (n < 2) return n;
  // Newton iteration from an overestimate.
  u128 x = n;
  int bits = 0;
  for (u128 t = n; t != 0; t >>= 1) ++bits;
  x = u128(1) << ((bits + 1) / 2);
  while (true) {
    u128 y = (x + n / x) / 2;
    if (y >= x) break;
    x = y;
  }
  while (x * x > n) --x;
  while ((x + 1) * (x + 1) <= n) ++x;
  return x;
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  u128 u = neg ? u128(-(v + 1)) + 1 : u128(v);
  std::string s;
  while (u != 0) {
    s.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw Error(ErrorCode::Overflow, "value " + v.str() + " does not fit in 64 bits");
  return v.convert_to<std::int64_t>();
}

std::uint64_t to_uint64(const BigInt& v) {
  if (v < 0 || v > std::numeric_limits<std::uint64_t>::max())
    throw Error(ErrorCode::Overflow, "value " + v.str() + " does not fit in unsigned 64 bits");
  return v.convert_to<std::uint64_t>();
}

i128 to_i128(const BigInt& v) {
  static const BigInt kMax = (BigInt(1) << 126);
  if (abs(v) >= kMax) throw Error(ErrorCode::Overflow, "value " + v.str() + " exceeds the 127-bit kernel range");
  bool neg = v < 0;
  BigInt a = abs(v);
  std::uint64_t lo = static_cast<std::uint64_t>(a & BigInt(std::numeric_limits<std::uint64_t>::max()));
  std::uint64_t hi = static_cast<std::uint64_t>(a >> 64);
  i128 r = (i128(hi) << 64) | i128(lo);
  return neg ? -r : r;
}

BigInt from_i128(i128 v) {
  bool neg = v < 0;
  u128 u = neg ? u128(-(v + 1)) + 1 : u128(v);
  BigInt r = BigInt(static_cast<std::uint64_t>(u >> 64));
  r <<= 64;
  r += BigInt(static_cast<std::uint64_t>(u));
  return neg ? BigInt(-r) : r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(u128(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t mod_reduce(std::int64_t a, std::uint64_t m) {
  i128 r = i128(a) % i128(m);
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t mod_reduce(const BigInt& a, std::uint64_t m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r.convert_to<std::uint64_t>();
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  i128 old_r = a % m, r = m, old_s = 1, s = 0;
  while (r != 0) {
    i128 q = old_r / r;
    i128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw Error(ErrorCode::InvalidArgument, "no inverse modulo " + std::to_string(m));
  return static_cast<std::uint64_t>(mod_floor(old_s, m));
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for all 64-bit n.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

std::uint64_t pollard_rho(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t x = 2, y = 2, d = 1;
    auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<std::uint64_t, int>> factor(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::ZeroInput, "cannot factor 0");
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<std::uint64_t, int>> result;
  for (std::uint64_t p : primes) {
    if (!result.empty() && result.back().first == p)
      ++result.back().second;
    else
      result.emplace_back(p, 1);
  }
  return result;
}

int valuation(std::int64_t n, std::uint64_t q) {
  if (n == 0) throw Error(ErrorCode::ZeroInput, "valuation of 0");
  u128 m = n < 0 ? u128(-(i128(n))) : u128(n);
  int e = 0;
  while (m % q == 0) {
    m /= q;
    ++e;
  }
  return e;
}

int valuation(const BigInt& n, std::uint64_t q) {
  if (n == 0) throw Error(ErrorCode::ZeroInput, "valuation of 0");
  BigInt m = abs(n);
  int e = 0;
  while (m % q == 0) {
    m /= q;
    ++e;
  }
  return e;
}

int legendre(std::int64_t a, std::uint64_t p) {
  std::uint64_t r = mod_reduce(a, p);
  if (r == 0) return 0;
  return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

int legendre(const BigInt& a, std::uint64_t p) {
  std::uint64_t r = mod_reduce(a, p);
  if (r == 0) return 0;
  return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::uint64_t least_nonresidue(std::uint64_t q) {
  for (std::uint64_t u = 2;; ++u) {
    if (legendre(static_cast<std::int64_t>(u), q) == -1) return u;
  }
}

std::uint64_t sqrt_mod_prime(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0 || legendre(static_cast<std::int64_t>(a), p) != 1)
    throw Error(ErrorCode::InvalidArgument, std::to_string(a) + " is not a nonzero square mod " + std::to_string(p));
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  std::uint64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  std::uint64_t z = least_nonresidue(p);
  std::uint64_t m = s;
  std::uint64_t c = powmod(z, q, p);
  std::uint64_t t = powmod(a, q, p);
  std::uint64_t r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    std::uint64_t b = c;
    for (std::uint64_t k = 0; k + 1 < m - i; ++k) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

std::uint64_t ipow(std::uint64_t p, int k) {
  u128 r = 1;
  for (int i = 0; i < k; ++i) {
    r *= p;
    if (r > (u128(1) << 63)) throw Error(ErrorCode::Overflow, "prime power exceeds 2^63");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t sqrt_mod_prime_power(std::uint64_t a, std::uint64_t p, int k) {
  std::uint64_t r = sqrt_mod_prime(a % p, p);
  std::uint64_t modulus = p;
  // Newton step r <- r - (r^2 - a) / (2r), one p-adic digit per round.
  for (int level = 1; level < k; ++level) {
    modulus *= p;
    std::uint64_t am = a % modulus;
    std::uint64_t r2 = mulmod(r, r, modulus);
    std::uint64_t diff = (r2 + modulus - am) % modulus;
    std::uint64_t inv = invmod(mulmod(2, r, modulus), modulus);
    r = (r + modulus - mulmod(diff, inv, modulus)) % modulus;
  }
  return r;
}

std::uint64_t squarefree_kernel(std::uint64_t d) {
  std::uint64_t result = 1;
  for (auto [q, e] : factor(d)) {
    if (e % 2 == 1) result *= q;
  }
  return result;
}

}  // namespace almostuniv
