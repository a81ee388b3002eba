#include "almostuniv/localization.hpp"

#include <algorithm>
#include <set>

namespace almostuniv {

namespace {

/// ord_q of a nonzero rational.
int rational_valuation(const BigRational& r, std::uint64_t q) {
  return valuation(numerator(r), q) - valuation(denominator(r), q);
}

/// r / q^ord_q(r) reduced to an integer mod `modulus` (a power of q).
BigInt unit_part_mod(const BigRational& r, std::uint64_t q, const BigInt& modulus) {
  BigInt num = numerator(r), den = denominator(r);
  while (num % q == 0) num /= q;
  while (den % q == 0) den /= q;
  BigInt nm = num % modulus;
  if (nm < 0) nm += modulus;
  BigInt dm = den % modulus;
  if (dm < 0) dm += modulus;
  // Inverse by extended Euclid on big integers.
  BigInt old_r = dm, r0 = modulus, old_s = 1, s = 0;
  while (r0 != 0) {
    BigInt qt = old_r / r0;
    BigInt t = old_r - qt * r0;
    old_r = r0;
    r0 = t;
    t = old_s - qt * s;
    old_s = s;
    s = t;
  }
  BigInt inv = old_s % modulus;
  if (inv < 0) inv += modulus;
  return (nm * inv) % modulus;
}

/// Hilbert symbol of two nonzero integers.
int hilbert_int(BigInt a, BigInt b, std::uint64_t q) {
  if (q == kInfinitePlace) return (a < 0 && b < 0) ? -1 : 1;
  int alpha = 0, beta = 0;
  while (a % q == 0) {
    a /= q;
    ++alpha;
  }
  while (b % q == 0) {
    b /= q;
    ++beta;
  }
  if (q == 2) {
    auto mod8 = [](const BigInt& v) {
      BigInt r = v % 8;
      if (r < 0) r += 8;
      return r.convert_to<int>();
    };
    int u = mod8(a), v = mod8(b);
    auto eps = [](int x) { return ((x - 1) / 2) & 1; };
    auto omega = [](int x) { return ((x * x - 1) / 8) & 1; };
    int e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
    return (e & 1) ? -1 : 1;
  }
  int sign = 1;
  if ((alpha * beta) % 2 == 1 && q % 4 == 3) sign = -sign;
  if (beta % 2 == 1) sign *= legendre(a, q);
  if (alpha % 2 == 1) sign *= legendre(b, q);
  return sign;
}

using RatMatrix = std::array<std::array<BigRational, 3>, 3>;

}  // namespace

SymMatrix3 diagonal_form(std::int64_t a, std::int64_t b, std::int64_t c) {
  return SymMatrix3{{{a, 0, 0}, {0, b, 0}, {0, 0, c}}};
}

BigInt determinant(const SymMatrix3& g) {
  auto e = [&](int i, int j) { return BigInt(g[i][j]); };
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

SquareClass square_class(const BigRational& value, std::uint64_t q) {
  if (value == 0) throw Error(ErrorCode::ZeroInput, "square class of 0");
  // num/den and num*den share a square class.
  BigInt n = numerator(value) * denominator(value);
  int v = 0;
  while (n % q == 0) {
    n /= q;
    ++v;
  }
  if (q == 2) {
    BigInt r = n % 8;
    if (r < 0) r += 8;
    std::int64_t unit = r.convert_to<std::int64_t>();
    return {q, (v % 2 == 1 ? 2 : 1) * unit};
  }
  std::int64_t unit = legendre(n, q) == 1 ? 1 : static_cast<std::int64_t>(least_nonresidue(q));
  return {q, (v % 2 == 1 ? static_cast<std::int64_t>(q) : 1) * unit};
}

std::vector<std::int64_t> square_class_representatives(std::uint64_t q) {
  if (q == 2) return {1, 3, 5, 7, 2, 6, 10, 14};
  auto u = static_cast<std::int64_t>(least_nonresidue(q));
  auto qq = static_cast<std::int64_t>(q);
  return {1, u, qq, qq * u};
}

int hilbert(const BigRational& a, const BigRational& b, std::uint64_t q) {
  if (a == 0 || b == 0) throw Error(ErrorCode::ZeroInput, "Hilbert symbol of 0");
  return hilbert_int(numerator(a) * denominator(a), numerator(b) * denominator(b), q);
}

bool is_anisotropic(const std::array<BigRational, 3>& c, std::uint64_t q) {
  for (const auto& x : c)
    if (x == 0) throw Error(ErrorCode::DegenerateForm, "zero coefficient in ternary form");
  // a x^2 + b y^2 + c z^2 = 0 has a nontrivial zero iff (-a/c, -b/c)_q = 1.
  return hilbert(-c[0] * c[2], -c[1] * c[2], q) == -1;
}

int JordanComponent::rank() const {
  int r = 0;
  for (const auto& b : blocks) r += b.rank();
  return r;
}

BigInt JordanComponent::determinant_unit(std::uint64_t modulus) const {
  BigInt d = 1;
  for (const auto& b : blocks) d = (d * b.unit) % modulus;
  return d;
}

std::vector<int> JordanSplitting::exponents() const {
  std::vector<int> out;
  for (const auto& c : components)
    for (int i = 0; i < c.rank(); ++i) out.push_back(c.exponent);
  return out;
}

std::vector<std::pair<int, BigInt>> JordanSplitting::diagonal() const {
  std::vector<std::pair<int, BigInt>> out;
  for (const auto& c : components)
    for (const auto& b : c.blocks) {
      if (b.kind != BlockKind::Unary) throw Error(ErrorCode::ShapeViolation, "splitting has an improper block");
      out.emplace_back(c.exponent, b.unit);
    }
  return out;
}

const JordanComponent* JordanSplitting::component(int exponent) const {
  for (const auto& c : components)
    if (c.exponent == exponent) return &c;
  return nullptr;
}

int JordanSplitting::rank() const {
  int r = 0;
  for (const auto& c : components) r += c.rank();
  return r;
}

JordanSplitting jordan_split(const GramMatrix3& gram, std::uint64_t q, int precision) {
  return jordan_split(gram.entries(), q, precision);
}

JordanSplitting jordan_split(const SymMatrix3& form, std::uint64_t q, int precision) {
  BigInt det = determinant(form);
  if (det == 0) throw Error(ErrorCode::DegenerateForm, "singular form has no Jordan splitting");
  if (precision <= valuation(det, q))
    throw Error(ErrorCode::PrecisionTooLow, "precision " + std::to_string(precision) +
                                                " cannot certify unit pivots when ord_q(det) = " +
                                                std::to_string(valuation(det, q)));
  const BigInt modulus = pow(BigInt(q), precision);

  RatMatrix a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = form[i][j];

  std::vector<int> active{0, 1, 2};
  std::vector<std::pair<int, JordanBlock>> blocks;

  auto eliminate = [&](const std::vector<int>& pivots) {
    std::vector<int> rest;
    for (int k : active)
      if (std::find(pivots.begin(), pivots.end(), k) == pivots.end()) rest.push_back(k);
    if (pivots.size() == 1) {
      int i = pivots[0];
      for (int k : rest)
        for (int l : rest) a[k][l] -= a[k][i] * a[i][l] / a[i][i];
    } else {
      int i = pivots[0], j = pivots[1];
      BigRational d = a[i][i] * a[j][j] - a[i][j] * a[i][j];
      // H^{-1} = adj(H) / det(H)
      BigRational hi_ii = a[j][j] / d, hi_jj = a[i][i] / d, hi_ij = -a[i][j] / d;
      RatMatrix updated = a;
      for (int k : rest)
        for (int l : rest)
          updated[k][l] = a[k][l] - (a[k][i] * (hi_ii * a[i][l] + hi_ij * a[j][l]) +
                                     a[k][j] * (hi_ij * a[i][l] + hi_jj * a[j][l]));
      a = updated;
    }
    active = rest;
  };

  while (!active.empty()) {
    int vmin = std::numeric_limits<int>::max();
    for (int i : active)
      for (int j : active)
        if (a[i][j] != 0) vmin = std::min(vmin, rational_valuation(a[i][j], q));
    if (vmin == std::numeric_limits<int>::max())
      throw Error(ErrorCode::InternalAssertion, "degenerate remainder during Jordan splitting");

    int diag = -1;
    for (int i : active)
      if (a[i][i] != 0 && rational_valuation(a[i][i], q) == vmin) {
        diag = i;
        break;
      }

    if (diag < 0) {
      int pi = -1, pj = -1;
      for (std::size_t x = 0; x < active.size() && pi < 0; ++x)
        for (std::size_t y = x + 1; y < active.size(); ++y) {
          int i = active[x], j = active[y];
          if (a[i][j] != 0 && rational_valuation(a[i][j], q) == vmin) {
            pi = i;
            pj = j;
            break;
          }
        }
      if (q != 2) {
        // e_i <- e_i + e_j makes the diagonal entry reach the minimal valuation.
        BigRational aii = a[pi][pi] + 2 * a[pi][pj] + a[pj][pj];
        for (int k : active) {
          if (k == pi) continue;
          a[pi][k] += a[pj][k];
          a[k][pi] = a[pi][k];
        }
        a[pi][pi] = aii;
        diag = pi;
      } else {
        BigRational d = a[pi][pi] * a[pj][pj] - a[pi][pj] * a[pi][pj];
        BigInt unit = unit_part_mod(d, q, modulus);
        BlockKind kind = (unit % 8 == 3) ? BlockKind::ImproperA22 : BlockKind::ImproperA00;
        blocks.emplace_back(vmin, JordanBlock{kind, unit});
        eliminate({pi, pj});
        continue;
      }
    }
    blocks.emplace_back(vmin, JordanBlock{BlockKind::Unary, unit_part_mod(a[diag][diag], q, modulus)});
    eliminate({diag});
  }

  std::stable_sort(blocks.begin(), blocks.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  JordanSplitting out{q, precision, {}};
  for (auto& [e, b] : blocks) {
    if (out.components.empty() || out.components.back().exponent != e) out.components.push_back({e, {}});
    out.components.back().blocks.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// residue search

namespace {

struct ResidueForm {
  std::uint64_t modulus;
  std::array<std::array<std::uint64_t, 3>, 3> g;
  std::array<std::array<std::uint64_t, 3>, 3> g2;  // 2g mod modulus

  ResidueForm(const SymMatrix3& form, std::uint64_t m) : modulus(m) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        g[i][j] = mod_reduce(form[i][j], m);
        g2[i][j] = mulmod(2, g[i][j], m);
      }
  }

  std::uint64_t value(const std::array<std::uint64_t, 3>& x) const {
    u128 total = 0;
    for (int i = 0; i < 3; ++i) {
      total += mulmod(mulmod(g[i][i], x[i], modulus), x[i], modulus);
      for (int j = i + 1; j < 3; ++j) total += mulmod(mulmod(g2[i][j], x[i], modulus), x[j], modulus);
    }
    return static_cast<std::uint64_t>(total % modulus);
  }

  /// min_i ord_q((2Gx)_i), capped at `level`.
  int gradient_valuation(const std::array<std::uint64_t, 3>& x, std::uint64_t q, int level) const {
    int best = level;
    for (int i = 0; i < 3; ++i) {
      u128 s = 0;
      for (int j = 0; j < 3; ++j) s += mulmod(g2[i][j], x[j], modulus);
      std::uint64_t v = static_cast<std::uint64_t>(s % modulus);
      int e = 0;
      while (v != 0 && v % q == 0 && e < level) {
        v /= q;
        ++e;
      }
      if (v == 0) e = level;
      best = std::min(best, e);
    }
    return best;
  }
};

constexpr std::size_t kFrontierBudget = 4'000'000;

}  // namespace

LocalSearch search_representation(const SymMatrix3& form, std::uint64_t q, std::int64_t c, bool primitive) {
  BigInt det = determinant(form);
  if (det == 0) throw Error(ErrorCode::DegenerateForm, "singular form");
  const int ord2 = q == 2 ? 1 : 0;
  const int ordc = c == 0 ? 2 : valuation(c, q);
  // Past this level every surviving solution is certified (or none exist).
  const int max_level = ordc + 2 * ord2 + 2 * valuation(det, q) + 1;

  using Vec = std::array<std::uint64_t, 3>;
  std::vector<Vec> frontier;
  std::uint64_t step = 1;  // q^(level-1)
  for (int level = 1; level <= max_level + 1; ++level) {
    const std::uint64_t modulus = ipow(q, level);
    ResidueForm rf(form, modulus);
    const std::uint64_t target = mod_reduce(c, modulus);
    std::vector<Vec> next;

    auto consider = [&](const Vec& x) -> bool {
      if (rf.value(x) != target) return false;
      int k = rf.gradient_valuation(x, q, level);
      if (2 * k + 1 <= level) return true;
      next.push_back(x);
      if (next.size() > kFrontierBudget)
        throw Error(ErrorCode::BudgetExceeded, "residue search frontier exceeded budget");
      return false;
    };
    auto to_witness = [](const Vec& x) {
      return IntVec3{static_cast<std::int64_t>(x[0]), static_cast<std::int64_t>(x[1]), static_cast<std::int64_t>(x[2])};
    };

    if (level == 1) {
      for (std::uint64_t x0 = 0; x0 < q; ++x0)
        for (std::uint64_t x1 = 0; x1 < q; ++x1)
          for (std::uint64_t x2 = 0; x2 < q; ++x2) {
            if (primitive && x0 == 0 && x1 == 0 && x2 == 0) continue;
            Vec x{x0, x1, x2};
            if (consider(x)) return {true, level, to_witness(x)};
          }
    } else {
      for (const auto& base : frontier)
        for (std::uint64_t d0 = 0; d0 < q; ++d0)
          for (std::uint64_t d1 = 0; d1 < q; ++d1)
            for (std::uint64_t d2 = 0; d2 < q; ++d2) {
              Vec x{base[0] + d0 * step, base[1] + d1 * step, base[2] + d2 * step};
              if (consider(x)) return {true, level, to_witness(x)};
            }
    }
    if (next.empty()) return {false, level, std::nullopt};
    if (level > max_level)
      throw Error(ErrorCode::InternalAssertion, "residue search did not settle by level " + std::to_string(level));
    frontier = std::move(next);
    step *= q;
  }
  throw Error(ErrorCode::InternalAssertion, "residue search fell through");
}

std::string_view local_method_name(LocalMethod method) {
  switch (method) {
    case LocalMethod::ResidueSearch: return "residue-search";
    case LocalMethod::JordanInvariants: return "jordan-invariants";
    case LocalMethod::Unimodular: return "unimodular";
  }
  return "unknown";
}

LocalReport local_universal_search(const SymMatrix3& form, std::uint64_t q) {
  LocalReport report{q, true, std::nullopt, 0, LocalMethod::ResidueSearch};
  for (std::int64_t c : square_class_representatives(q)) {
    LocalSearch s = search_representation(form, q, c, false);
    report.precision_used = std::max(report.precision_used, s.precision);
    if (!s.represented) {
      report.universal = false;
      report.missed_class = SquareClass{q, c};
      break;
    }
  }
  return report;
}

LocalReport local_universal_jordan(const SymMatrix3& form, std::uint64_t q) {
  if (q == 2) throw Error(ErrorCode::InvalidArgument, "Jordan-invariant decision is for odd primes");
  BigInt det = determinant(form);
  const int precision = valuation(det, q) + 3;
  JordanSplitting js = jordan_split(form, q, precision);
  const auto u = static_cast<std::int64_t>(least_nonresidue(q));
  const auto qq = static_cast<std::int64_t>(q);
  const std::uint64_t modulus = ipow(q, 1);

  auto rank_at = [&](int e) {
    const JordanComponent* c = js.component(e);
    return c ? c->rank() : 0;
  };
  auto det_class = [&](int e) {
    BigInt d = js.component(e)->determinant_unit(modulus);
    return legendre(d, q) == 1 ? std::int64_t{1} : u;
  };

  std::set<std::int64_t> hit;
  const int n0 = rank_at(0), n1 = rank_at(1);
  if (n0 >= 2) {
    hit.insert({1, u});
  } else if (n0 == 1) {
    hit.insert(det_class(0));
  }
  bool isotropic_unimodular =
      n0 == 3 || (n0 == 2 && legendre(BigInt(-js.component(0)->determinant_unit(modulus)), q) == 1);
  if (isotropic_unimodular || n1 >= 2) {
    hit.insert({qq, qq * u});
  } else if (n1 == 1) {
    hit.insert(qq * det_class(1));
  }

  LocalReport report{q, true, std::nullopt, precision, LocalMethod::JordanInvariants};
  for (std::int64_t c : square_class_representatives(q)) {
    if (!hit.count(c)) {
      report.universal = false;
      report.missed_class = SquareClass{q, c};
      break;
    }
  }
  return report;
}

LocalReport local_universal(const SymMatrix3& form, std::uint64_t q) {
  BigInt det = determinant(form);
  if (det == 0) throw Error(ErrorCode::DegenerateForm, "singular form");
  if (q != 2 && det % q != 0) return LocalReport{q, true, std::nullopt, 0, LocalMethod::Unimodular};
  if (q == 2 || q <= kResidueSearchOddLimit) return local_universal_search(form, q);
  return local_universal_jordan(form, q);
}

LocalReport local_universal(const GramMatrix3& gram, std::uint64_t q) { return local_universal(gram.entries(), q); }

std::string_view primitive_class_name(PrimitiveClass c) {
  switch (c) {
    case PrimitiveClass::Always: return "always";
    case PrimitiveClass::Except4Units: return "except_4units";
    case PrimitiveClass::Fails: return "fails";
  }
  return "unknown";
}

PrimitiveRep primitive_rep_z2(const SymMatrix3& form, std::int64_t value_class) {
  if (value_class == 0) throw Error(ErrorCode::ZeroInput, "value class must be nonzero");
  if (!local_universal_search(form, 2).universal)
    throw Error(ErrorCode::NotUniversalAt2, "form is not universal over Z_2");
  int ord = valuation(determinant(form), 2);
  PrimitiveClass cls = ord == 0 ? PrimitiveClass::Always : (ord == 1 ? PrimitiveClass::Except4Units
                                                                      : PrimitiveClass::Fails);
  bool in_4units = valuation(value_class, 2) == 2;
  bool primitive = cls == PrimitiveClass::Always || (cls == PrimitiveClass::Except4Units && !in_4units);
  return {cls, primitive};
}

}  // namespace almostuniv
