#pragma once

// Brute-force ground truth: every value of Q on nu + N up to a bound.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "almostuniv/core_lattice.hpp"

namespace almostuniv {

/// Dense bit array ceiling for a represented set.
inline constexpr std::uint64_t kMaxOracleBound = 100'000'000;

struct EnumerationStats {
  std::uint64_t visited = 0;
  double wall_seconds = 0.0;
};

struct EnumerateOptions {
  /// Maximum number of lattice points to visit; 0 = unlimited.
  std::uint64_t budget = 0;
  unsigned jobs = 1;
};

class RepresentedSet {
 public:
  RepresentedSet(std::uint64_t bound, std::string fingerprint);

  std::uint64_t bound() const { return bound_; }
  const std::string& fingerprint() const { return fingerprint_; }
  bool contains(std::uint64_t v) const { return v <= bound_ && ((words_[v >> 6] >> (v & 63)) & 1u); }
  void insert(std::uint64_t v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void merge(const RepresentedSet& other);
  std::vector<std::uint64_t> values() const;
  std::uint64_t count() const;

  /// False when the enumeration stopped on its budget; such a set is a
  /// subset of the truth and must not be used for gap claims.
  bool authoritative = true;
  EnumerationStats stats;

 private:
  std::uint64_t bound_;
  std::string fingerprint_;
  std::vector<std::uint64_t> words_;
};

/// Values eps + modulus * n, n >= 0, of a coset.
struct Progression {
  BigInt epsilon;
  std::uint64_t modulus;
};

Progression progression(const Instance& instance);
/// For gate-rejected cosets: eps = Q(nu), modulus = the norm ideal generator.
Progression progression(const Coset& coset);

std::string fingerprint(const Coset& coset);

/// Complete represented set of Q on nu + N up to `bound`. Requires Q(nu + x)
/// to be integer valued. Throws InvalidArgument past kMaxOracleBound.
RepresentedSet enumerate(const Coset& coset, std::uint64_t bound, const EnumerateOptions& options = {});
RepresentedSet enumerate(const Instance& instance, std::uint64_t bound, const EnumerateOptions& options = {});

/// Ascending n with eps + modulus * n <= bound missing from the set. Throws
/// InvalidArgument for a non-authoritative set.
std::vector<std::uint64_t> gaps(const RepresentedSet& set, const Progression& prog);

enum class Stability { Stable, Unstable };

std::string_view stability_name(Stability s);

/// Stable iff no progression value in [(1 - window) * B, B] is missing.
Stability stabilization(const RepresentedSet& set, const Progression& prog, double window);

/// x in N with Q(nu + x) = value, found by exact enumeration.
std::optional<IntVec3> find_witness(const Coset& coset, std::uint64_t value, std::uint64_t budget = 0);

}  // namespace almostuniv
