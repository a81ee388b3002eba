#include "almostuniv/spinor.hpp"

#include <algorithm>

namespace almostuniv {

SpinorField::SpinorField(std::uint64_t p) : p_(p) {
  if (!is_prime(p) || p % 8 != 7)
    throw Error(ErrorCode::InvalidArgument, "E = Q(sqrt(-p)) needs a prime p = 7 mod 8, got " + std::to_string(p));
}

std::string_view splitting_name(Splitting s) {
  switch (s) {
    case Splitting::Split: return "split";
    case Splitting::Inert: return "inert";
    case Splitting::Ramified: return "ramified";
  }
  return "unknown";
}

Splitting splits(std::uint64_t q, const SpinorField& field) {
  if (q == field.p()) return Splitting::Ramified;
  // -p = 1 mod 8, so 2 splits.
  if (q == 2) return Splitting::Split;
  return legendre(field.discriminant(), q) == 1 ? Splitting::Split : Splitting::Inert;
}

bool norm_group_contains(std::uint64_t q, const SpinorField& field, const BigRational& s) {
  if (s == 0) throw Error(ErrorCode::ZeroInput, "0 is not in a norm group");
  switch (splits(q, field)) {
    case Splitting::Split:
      return true;
    case Splitting::Inert:
      return (valuation(numerator(s), q) - valuation(denominator(s), q)) % 2 == 0;
    case Splitting::Ramified: {
      // N_p(E) = {1, p} Q_p^x2: the unit part must be a square.
      SquareClass c = square_class(s, q);
      return c.representative == 1 || c.representative == static_cast<std::int64_t>(q);
    }
  }
  return false;
}

bool ThetaGroup::contains(const SquareClass& c) const {
  return std::find(classes.begin(), classes.end(), c) != classes.end();
}

bool ThetaGroup::contained_in_norms(const SpinorField& field) const {
  for (const auto& c : classes)
    if (!norm_group_contains(p, field, BigRational(c.representative))) return false;
  return true;
}

ThetaGroup theta_Mp(const BigInt& epsilon, const BigInt& beta, int i, const BigInt& gamma, int j, std::uint64_t p) {
  if (i < 1 || j < i) throw Error(ErrorCode::ShapeViolation, "theta(O+(M_p)) needs 1 <= i <= j");
  for (const BigInt* u : {&epsilon, &beta, &gamma})
    if (*u == 0 || *u % p == 0) throw Error(ErrorCode::ShapeViolation, "eps, beta, gamma must be p-adic units");
  BigInt pi = pow(BigInt(p), i), pj = pow(BigInt(p), j);
  std::vector<BigInt> generators{1, epsilon * beta * pi, epsilon * gamma * pj, beta * gamma * pi * pj};
  ThetaGroup out{p, {}};
  for (const auto& g : generators) {
    SquareClass c = square_class(BigRational(g), p);
    if (!out.contains(c)) out.classes.push_back(c);
  }
  std::sort(out.classes.begin(), out.classes.end(),
            [](const SquareClass& a, const SquareClass& b) { return a.representative < b.representative; });
  return out;
}

MpShape mp_shape(const Instance& instance) {
  SuperlatticeM m = superlattice(instance);
  const std::uint64_t p = instance.p;
  JordanSplitting js = jordan_split(m.gram_M, p, valuation(m.dM, p) + 3);
  auto diag = js.diagonal();
  if (diag.size() != 3 || diag[0].first != 0 || diag[1].first < 1)
    throw Error(ErrorCode::ShapeViolation, "M_p is not of the form <eps, p^i beta, p^j gamma> with i >= 1");
  return MpShape{diag[0].second, diag[1].second, diag[1].first, diag[2].second, diag[2].first};
}

std::string_view obstruction_name(Obstruction o) {
  switch (o) {
    case Obstruction::ExcludedA: return "a";
    case Obstruction::ExcludedB: return "b";
    case Obstruction::ExcludedC: return "c";
    case Obstruction::Possible: return "possible";
  }
  return "unknown";
}

Obstruction spinor_exception_obstruction(const Instance& instance, std::uint64_t t) {
  SpinorField field(instance.p);
  const std::uint64_t p = instance.p;
  if (t == 0 || t % p == 0) throw Error(ErrorCode::InvalidArgument, "t must be a positive integer prime to p");

  // ord_p(dN) and ord_p(dM) share parity; E = Q(sqrt(-p)) needs it odd.
  const BigInt& dN = instance.gram().determinant();
  if (valuation(dN, p) % 2 == 0) return Obstruction::ExcludedA;

  // At an inert q, theta(O+(M_q)) lies in N_q(E) iff ord_q(dN) is even.
  for (auto [q, e] : factor(to_uint64(dN))) {
    if (q == p || q == 2 || e % 2 == 0) continue;
    if (splits(q, field) == Splitting::Inert) return Obstruction::ExcludedB;
  }

  MpShape shape = mp_shape(instance);
  ThetaGroup theta = theta_Mp(shape.epsilon, shape.beta, shape.i, shape.gamma, shape.j, p);
  if (!theta.contained_in_norms(field)) return Obstruction::ExcludedC;
  return Obstruction::Possible;
}

}  // namespace almostuniv
