#include "almostuniv/core_lattice.hpp"

#include <cstdlib>
#include <numeric>

#include <boost/integer/common_factor.hpp>

namespace almostuniv {

namespace {

BigInt det3(const GramMatrix3::Entries& g) {
  auto e = [&](int i, int j) { return BigInt(g[i][j]); };
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(std::abs(a), std::abs(b)); }

}  // namespace

GramMatrix3::GramMatrix3(const Entries& entries) : entries_(entries) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (entries_[i][j] != entries_[j][i]) throw Error(ErrorCode::InvalidArgument, "Gram matrix is not symmetric");
  BigInt m1 = entries_[0][0];
  BigInt m2 = BigInt(entries_[0][0]) * entries_[1][1] - BigInt(entries_[0][1]) * entries_[0][1];
  det_ = det3(entries_);
  if (m1 <= 0 || m2 <= 0 || det_ <= 0)
    throw Error(ErrorCode::NotPositiveDefinite, "Gram matrix is not positive definite (leading minors " + m1.str() +
                                                    ", " + m2.str() + ", " + det_.str() + ")");
}

GramMatrix3 GramMatrix3::from_upper(const std::array<std::int64_t, 6>& u) {
  return GramMatrix3(Entries{{{u[0], u[1], u[2]}, {u[1], u[3], u[4]}, {u[2], u[4], u[5]}}});
}

GramMatrix3 GramMatrix3::diagonal(std::int64_t a, std::int64_t b, std::int64_t c) {
  return from_upper({a, 0, 0, b, 0, c});
}

std::array<std::int64_t, 6> GramMatrix3::upper() const {
  return {entries_[0][0], entries_[0][1], entries_[0][2], entries_[1][1], entries_[1][2], entries_[2][2]};
}

BigInt GramMatrix3::evaluate(const IntVec3& y) const { return bilinear(y, y); }

BigInt GramMatrix3::bilinear(const IntVec3& x, const IntVec3& y) const {
  BigInt total = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) total += BigInt(entries_[i][j]) * x[i] * y[j];
  return total;
}

GramMatrix3 GramMatrix3::divided_by(std::int64_t divisor) const {
  Entries scaled{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (entries_[i][j] % divisor != 0)
        throw Error(ErrorCode::NonIntegralValues, "Gram entry not divisible by " + std::to_string(divisor));
      scaled[i][j] = entries_[i][j] / divisor;
    }
  return GramMatrix3(scaled);
}

ShiftVector::ShiftVector(const IntVec3& numerators, std::int64_t denominator)
    : numerators_(numerators), denominator_(denominator) {
  if (denominator_ == 0) throw Error(ErrorCode::InvalidArgument, "shift denominator is zero");
  if (denominator_ < 0) {
    denominator_ = -denominator_;
    for (auto& n : numerators_) n = -n;
  }
  std::int64_t g = denominator_;
  for (auto n : numerators_) g = gcd64(g, n);
  denominator_ /= g;
  for (auto& n : numerators_) n /= g;
}

ShiftVector ShiftVector::translated(const IntVec3& x0) const {
  IntVec3 n = numerators_;
  for (int i = 0; i < 3; ++i) n[i] = to_int64(BigInt(n[i]) + BigInt(x0[i]) * denominator_);
  return ShiftVector(n, denominator_);
}

ShiftVector ShiftVector::reduced() const {
  IntVec3 n = numerators_;
  for (auto& v : n) v = static_cast<std::int64_t>(mod_floor(v, denominator_));
  return ShiftVector(n, denominator_);
}

BigRational Coset::shift_value() const {
  return BigRational(gram.evaluate(shift.numerators()),
                     BigInt(shift.denominator()) * shift.denominator());
}

BigRational Coset::value_at(const IntVec3& x) const {
  return BigRational(gram.evaluate(shift.translated(x).numerators()),
                     BigInt(shift.denominator()) * shift.denominator());
}

BigInt discriminant(const GramMatrix3& gram) { return gram.determinant(); }

std::uint64_t radical(std::uint64_t d) { return squarefree_kernel(d); }

std::uint64_t radical_nonp(std::uint64_t d, std::uint64_t p) {
  std::uint64_t r = radical(d);
  return r % p == 0 ? r / p : r;
}

ConductorResult conductor(const RationalTriple& nu) {
  std::int64_t lcm = 1;
  for (int i = 0; i < 3; ++i) {
    if (nu.den[i] == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator in shift coordinate");
    std::int64_t g = gcd64(nu.num[i], nu.den[i]);
    std::int64_t reduced_den = std::abs(nu.den[i]) / g;
    lcm = to_int64(BigInt(lcm / std::gcd(lcm, reduced_den)) * reduced_den);
  }
  IntVec3 numerators{};
  for (int i = 0; i < 3; ++i) {
    BigInt scaled = BigInt(nu.num[i]) * lcm;
    if (scaled % nu.den[i] != 0) throw Error(ErrorCode::InternalAssertion, "conductor scaling not exact");
    numerators[i] = to_int64(scaled / nu.den[i]);
  }
  ShiftVector shift(numerators, lcm);
  return {shift.denominator(), shift};
}

BigInt norm_ideal(const Coset& coset) {
  const auto& g = coset.gram;
  const auto& y = coset.shift.numerators();
  const std::int64_t d = coset.shift.denominator();

  BigRational eps = coset.shift_value();
  if (denominator(eps) != 1)
    throw Error(ErrorCode::NonIntegralValues, "Q(nu) = " + eps.str() + " is not an integer");

  BigInt result = 0;
  auto absorb = [&](const BigInt& v) { result = boost::integer::gcd(result, BigInt(abs(v))); };
  for (int i = 0; i < 3; ++i) {
    BigInt gy = 0;
    for (int j = 0; j < 3; ++j) gy += BigInt(g(i, j)) * y[j];
    // Q(e_i) + 2 B(nu, e_i) must be an integer.
    BigInt num = BigInt(g(i, i)) * d + 2 * gy;
    if (num % d != 0)
      throw Error(ErrorCode::NonIntegralValues,
                  "Q(e" + std::to_string(i + 1) + ") + 2B(nu, e" + std::to_string(i + 1) + ") is not an integer");
    absorb(num / d);
    absorb(BigInt(2) * g(i, i));
    for (int j = i + 1; j < 3; ++j) absorb(BigInt(2) * g(i, j));
  }
  return result;
}

std::string_view rejection_name(RejectionKind kind) {
  switch (kind) {
    case RejectionKind::EvenPrime: return "EvenPrime";
    case RejectionKind::CompositeNormIdeal: return "CompositeNormIdeal";
    case RejectionKind::ConductorMismatch: return "ConductorMismatch";
    case RejectionKind::NonIntegralValues: return "NonIntegralValues";
    case RejectionKind::ShortCircuitNotAU: return "ShortCircuitNotAU";
  }
  return "Unknown";
}

Validation validate_instance(const GramMatrix3& gram, const ShiftVector& shift) {
  Coset coset{gram, shift};
  BigInt g;
  try {
    g = norm_ideal(coset);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonIntegralValues) throw;
    return Rejection{RejectionKind::NonIntegralValues, e.what(), std::nullopt, std::nullopt};
  }

  if (g == 1)
    return Rejection{RejectionKind::CompositeNormIdeal, "norm ideal is Z (alpha = 0)", g, std::nullopt};
  auto factors = factor(to_uint64(g));
  if (factors.size() != 1)
    return Rejection{RejectionKind::CompositeNormIdeal, "norm ideal generator " + g.str() + " is not a prime power", g,
                     std::nullopt};
  const std::uint64_t p = factors[0].first;
  int alpha = factors[0].second;
  if (p == 2)
    return Rejection{RejectionKind::EvenPrime, "norm ideal is a power of 2", g, p};

  const std::int64_t m = shift.denominator();
  auto mfactors = factor(static_cast<std::uint64_t>(m));
  if (m == 1 || mfactors.size() != 1 || mfactors[0].first != p)
    return Rejection{RejectionKind::ConductorMismatch,
                     "conductor " + std::to_string(m) + " is not a positive power of " + std::to_string(p), g, p};
  const int gamma = mfactors[0].second;

  // Q(N) and B(nu, N) lie in p^alpha Z for odd p; a failure here means the
  // data is inconsistent with the norm ideal just computed.
  const BigInt palpha = g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (BigInt(gram(i, j)) % palpha != 0)
        return Rejection{RejectionKind::NonIntegralValues, "Q(N) is not contained in the norm ideal", g, p};

  BigInt eps = numerator(coset.shift_value());
  int k = valuation(eps, p);
  if (k >= alpha)
    return Rejection{RejectionKind::ShortCircuitNotAU,
                     "ord_p(Q(nu)) = " + std::to_string(k) + " >= alpha = " + std::to_string(alpha), g, p};

  Coset normalized = coset;
  if (k > 0) {
    std::int64_t pk = static_cast<std::int64_t>(ipow(p, k));
    normalized.gram = gram.divided_by(pk);
    alpha -= k;
    eps /= pk;
  }
  if (gamma != alpha)
    return Rejection{RejectionKind::ConductorMismatch,
                     "conductor exponent " + std::to_string(gamma) + " differs from alpha = " + std::to_string(alpha),
                     g, p};

  return Instance{normalized, coset, p, alpha, eps, k};
}

Instance shift_translate(const Instance& instance, const IntVec3& x0) {
  Instance out = instance;
  out.coset.shift = instance.coset.shift.translated(x0);
  out.input.shift = instance.input.shift.translated(x0);
  BigRational eps = out.coset.shift_value();
  if (denominator(eps) != 1) throw Error(ErrorCode::InternalAssertion, "translated Q(nu) is not integral");
  out.epsilon = numerator(eps);
  return out;
}

Instance canonicalize(const Instance& instance) {
  const auto& y = instance.coset.shift.numerators();
  const std::int64_t d = instance.coset.shift.denominator();
  IntVec3 x0{};
  for (int i = 0; i < 3; ++i) x0[i] = -static_cast<std::int64_t>(floor_div(y[i], d));
  return shift_translate(instance, x0);
}

std::array<IntVec3, 3> complete_to_basis(const IntVec3& u_in) {
  std::array<i128, 3> u{u_in[0], u_in[1], u_in[2]};
  // W tracks the inverse of the accumulated row operations; W e1 = u at the end.
  std::array<std::array<i128, 3>, 3> w{};
  for (int i = 0; i < 3; ++i) w[i][i] = 1;
  auto nonzero_count = [&] { return int(u[0] != 0) + int(u[1] != 0) + int(u[2] != 0); };
  if (nonzero_count() == 0) throw Error(ErrorCode::InvalidArgument, "zero vector is not primitive");

  while (nonzero_count() > 1) {
    int pivot = -1;
    for (int i = 0; i < 3; ++i)
      if (u[i] != 0 && (pivot < 0 || (u[i] < 0 ? -u[i] : u[i]) < (u[pivot] < 0 ? -u[pivot] : u[pivot]))) pivot = i;
    for (int j = 0; j < 3; ++j) {
      if (j == pivot || u[j] == 0) continue;
      i128 q = u[j] / u[pivot];
      u[j] -= q * u[pivot];
      for (int r = 0; r < 3; ++r) w[r][pivot] = checked_add(w[r][pivot], checked_mul(q, w[r][j]));
    }
  }
  int idx = u[0] != 0 ? 0 : (u[1] != 0 ? 1 : 2);
  if (u[idx] != 1 && u[idx] != -1) throw Error(ErrorCode::InvalidArgument, "vector is not primitive");
  if (idx != 0)
    for (int r = 0; r < 3; ++r) std::swap(w[r][0], w[r][idx]);
  if (u[idx] == -1)
    for (int r = 0; r < 3; ++r) w[r][0] = -w[r][0];

  std::array<IntVec3, 3> columns{};
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 3; ++r) columns[c][r] = to_int64(from_i128(w[r][c]));
  return columns;
}

SuperlatticeM superlattice(const Instance& instance) {
  const auto& gram = instance.coset.gram;
  const auto& y = instance.coset.shift.numerators();
  const std::int64_t d = instance.coset.shift.denominator();
  std::int64_t content = gcd64(gcd64(y[0], y[1]), y[2]);
  if (content == 0) throw Error(ErrorCode::InternalAssertion, "zero shift has no superlattice direction");
  IntVec3 u{y[0] / content, y[1] / content, y[2] / content};
  auto basis = complete_to_basis(u);

  // Scale factors: the first basis vector is u/d.
  const std::array<std::int64_t, 3> den{d, 1, 1};
  GramMatrix3::Entries entries{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      BigInt num = gram.bilinear(basis[i], basis[j]);
      BigInt div = BigInt(den[i]) * den[j];
      if (num % div != 0) throw Error(ErrorCode::NonIntegralValues, "superlattice M is not integral");
      entries[i][j] = to_int64(num / div);
    }
  GramMatrix3 gram_M(entries);
  BigInt dM = gram_M.determinant();
  if (dM * d * d != gram.determinant())
    throw Error(ErrorCode::InternalAssertion, "dM * index^2 != dN in superlattice construction");
  std::array<IntVec3, 3> numerators = basis;
  for (int c = 1; c < 3; ++c)
    for (auto& v : numerators[c]) v *= d;
  return SuperlatticeM{gram_M, d, dM, numerators};
}

}  // namespace almostuniv
