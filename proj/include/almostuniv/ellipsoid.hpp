#pragma once

// Exact enumeration of { y in Z^3 : y = n mod d, y^T G y <= T }, i.e. the
// points of the coset nu + N = (n + dZ^3)/d inside an ellipsoid, scaled by d.
// Coordinate ranges come from integer square roots of exact expressions, so
// no point is missed and no floating point enters the decision.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>

#include "almostuniv/arith.hpp"
#include "almostuniv/core_lattice.hpp"

namespace almostuniv {

class CosetEllipsoid {
 public:
  explicit CosetEllipsoid(const Coset& coset) : d_(coset.shift.denominator()) {
    const auto& g = coset.gram;
    // Outermost coordinate gets the largest diagonal entry (shortest range).
    perm_ = {0, 1, 2};
    std::stable_sort(perm_.begin(), perm_.end(), [&](int a, int b) { return g(a, a) < g(b, b); });
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) h_[a][b] = g(perm_[a], perm_[b]);
      residue_[a] = mod_floor(coset.shift.numerators()[perm_[a]], d_);
    }
    d2_ = checked_sub(checked_mul(h_[0][0], h_[1][1]), checked_mul(h_[0][1], h_[0][1]));
    det_ = to_i128(g.determinant());
    cross_ = checked_sub(checked_mul(h_[0][1], h_[0][2]), checked_mul(h_[0][0], h_[1][2]));
  }

  std::int64_t denominator() const { return d_; }

  /// Scaled bound T for values Q(nu + x) <= bound.
  i128 scaled_bound(i128 bound) const { return checked_mul(bound, checked_mul(d_, d_)); }

  /// Calls visit(y, qy) for every admissible y (original coordinate order),
  /// qy = y^T G y. visit returns false to stop early. Only outer slices with
  /// index = slice mod slices are visited. Returns the number of points seen;
  /// throws BudgetExceeded past `budget` points (0 = unlimited).
  template <class Visit>
  std::uint64_t for_each(i128 t, Visit&& visit, std::uint64_t budget = 0, unsigned slice = 0,
                         unsigned slices = 1) const {
    if (t < 0) return 0;
    const i128 g11 = h_[0][0], g12 = h_[0][1], g13 = h_[0][2], g22 = h_[1][1], g23 = h_[1][2], g33 = h_[2][2];
    const i128 td2 = checked_mul(t, d2_);
    const i128 b3 = static_cast<i128>(isqrt(static_cast<u128>(td2 / det_)));
    std::uint64_t visited = 0;
    std::array<i128, 3> y{};
    unsigned index = 0;
    for (i128 y3 = first_in_class(-b3, residue_[2]); y3 <= b3; y3 += d_, ++index) {
      if (index % slices != slice) continue;
      const i128 rem = checked_sub(td2, checked_mul(checked_mul(y3, y3), det_));
      if (rem < 0) continue;
      const i128 w = checked_mul(g11, rem);
      const i128 s = static_cast<i128>(isqrt(static_cast<u128>(w)));
      const i128 n2 = checked_mul(y3, cross_);
      const i128 lo2 = ceil_div(n2 - s, d2_), hi2 = floor_div(n2 + s, d2_);
      for (i128 y2 = first_in_class(lo2, residue_[1]); y2 <= hi2; y2 += d_) {
        const i128 l = checked_add(checked_mul(g12, y2), checked_mul(g13, y3));
        const i128 c = checked_add(checked_add(checked_mul(checked_mul(g22, y2), y2),
                                               checked_mul(checked_mul(2 * g23, y2), y3)),
                                   checked_mul(checked_mul(g33, y3), y3));
        const i128 w1 = checked_sub(checked_mul(l, l), checked_mul(g11, checked_sub(c, t)));
        if (w1 < 0) continue;
        const i128 s1 = static_cast<i128>(isqrt(static_cast<u128>(w1)));
        const i128 lo1 = ceil_div(-l - s1, g11), hi1 = floor_div(-l + s1, g11);
        for (i128 y1 = first_in_class(lo1, residue_[0]); y1 <= hi1; y1 += d_) {
          const i128 q = g11 * y1 * y1 + 2 * l * y1 + c;
          ++visited;
          if (budget != 0 && visited > budget)
            throw Error(ErrorCode::BudgetExceeded, "enumeration budget of " + std::to_string(budget) + " exceeded");
          y[perm_[0]] = y1;
          y[perm_[1]] = y2;
          y[perm_[2]] = y3;
          if (!visit(y, q)) return visited;
        }
      }
    }
    return visited;
  }

  /// x in N with nu + x = y / d.
  IntVec3 lattice_offset(const std::array<i128, 3>& y, const Coset& coset) const {
    IntVec3 x{};
    for (int i = 0; i < 3; ++i) x[i] = static_cast<std::int64_t>((y[i] - coset.shift.numerators()[i]) / d_);
    return x;
  }

 private:
  i128 first_in_class(i128 lo, i128 residue) const { return lo + mod_floor(residue - lo, d_); }

  std::int64_t d_;
  std::array<int, 3> perm_{};
  std::array<std::array<i128, 3>, 3> h_{};
  std::array<i128, 3> residue_{};
  i128 d2_ = 0;
  i128 det_ = 0;
  i128 cross_ = 0;
};

}  // namespace almostuniv
