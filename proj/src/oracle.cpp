#include "almostuniv/oracle.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <thread>

#include "almostuniv/ellipsoid.hpp"

namespace almostuniv {

RepresentedSet::RepresentedSet(std::uint64_t bound, std::string fingerprint)
    : bound_(bound), fingerprint_(std::move(fingerprint)), words_(bound / 64 + 1, 0) {}

void RepresentedSet::merge(const RepresentedSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  stats.visited += other.stats.visited;
}

std::vector<std::uint64_t> RepresentedSet::values() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = 0; v <= bound_; ++v)
    if (contains(v)) out.push_back(v);
  return out;
}

std::uint64_t RepresentedSet::count() const {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    if (i + 1 == words_.size() && ((bound_ + 1) & 63) != 0) w &= (std::uint64_t{1} << ((bound_ + 1) & 63)) - 1;
    n += static_cast<std::uint64_t>(std::popcount(w));
  }
  return n;
}

Progression progression(const Instance& instance) { return {instance.epsilon, instance.modulus()}; }

Progression progression(const Coset& coset) {
  BigRational eps = coset.shift_value();
  if (denominator(eps) != 1) throw Error(ErrorCode::NonIntegralValues, "Q(nu) is not an integer");
  return {numerator(eps), to_uint64(norm_ideal(coset))};
}

std::string fingerprint(const Coset& coset) {
  auto u = coset.gram.upper();
  const auto& n = coset.shift.numerators();
  std::string s = "gram=";
  for (int i = 0; i < 6; ++i) s += (i ? "," : "") + std::to_string(u[i]);
  s += ";shift=" + std::to_string(n[0]) + "," + std::to_string(n[1]) + "," + std::to_string(n[2]) + "/" +
       std::to_string(coset.shift.denominator());
  return s;
}

RepresentedSet enumerate(const Coset& coset, std::uint64_t bound, const EnumerateOptions& options) {
  if (bound > kMaxOracleBound)
    throw Error(ErrorCode::InvalidArgument, "oracle bound " + std::to_string(bound) + " exceeds the dense ceiling");
  auto start = std::chrono::steady_clock::now();
  CosetEllipsoid ellipsoid(coset);
  const i128 d2 = i128(coset.shift.denominator()) * coset.shift.denominator();
  const i128 t = ellipsoid.scaled_bound(bound);
  const unsigned jobs = std::max(1u, options.jobs);

  auto run_slice = [&](unsigned slice, RepresentedSet& out) {
    try {
      out.stats.visited = ellipsoid.for_each(
          t,
          [&](const std::array<i128, 3>&, i128 q) {
            if (q % d2 != 0) throw Error(ErrorCode::NonIntegralValues, "coset value is not an integer");
            out.insert(static_cast<std::uint64_t>(q / d2));
            return true;
          },
          options.budget == 0 ? 0 : options.budget / jobs + 1, slice, jobs);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExceeded) throw;
      out.authoritative = false;
      out.stats.visited = options.budget / jobs + 1;
    }
  };

  RepresentedSet result(bound, fingerprint(coset));
  if (jobs == 1) {
    run_slice(0, result);
  } else {
    std::vector<RepresentedSet> parts(jobs, RepresentedSet(bound, result.fingerprint()));
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(jobs);
    for (unsigned s = 0; s < jobs; ++s)
      threads.emplace_back([&, s] {
        try {
          run_slice(s, parts[s]);
        } catch (...) {
          errors[s] = std::current_exception();
        }
      });
    for (auto& th : threads) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (const auto& part : parts) {
      result.merge(part);
      result.authoritative = result.authoritative && part.authoritative;
    }
  }
  result.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RepresentedSet enumerate(const Instance& instance, std::uint64_t bound, const EnumerateOptions& options) {
  return enumerate(instance.coset, bound, options);
}

std::vector<std::uint64_t> gaps(const RepresentedSet& set, const Progression& prog) {
  if (!set.authoritative) throw Error(ErrorCode::InvalidArgument, "gap lists need an authoritative represented set");
  std::vector<std::uint64_t> out;
  if (prog.epsilon < 0 || prog.epsilon > set.bound()) return out;
  const auto eps = prog.epsilon.convert_to<std::uint64_t>();
  for (std::uint64_t n = 0, v = eps; v <= set.bound(); ++n, v += prog.modulus)
    if (!set.contains(v)) out.push_back(n);
  return out;
}

std::string_view stability_name(Stability s) { return s == Stability::Stable ? "stable" : "unstable"; }

Stability stabilization(const RepresentedSet& set, const Progression& prog, double window) {
  if (!(window > 0.0 && window < 1.0)) throw Error(ErrorCode::InvalidArgument, "window fraction must lie in (0, 1)");
  if (!set.authoritative) throw Error(ErrorCode::InvalidArgument, "stabilization needs an authoritative set");
  const auto lower = static_cast<std::uint64_t>(std::ceil((1.0 - window) * static_cast<double>(set.bound())));
  for (std::uint64_t n : gaps(set, prog)) {
    BigInt v = prog.epsilon + BigInt(prog.modulus) * n;
    if (v >= lower) return Stability::Unstable;
  }
  return Stability::Stable;
}

std::optional<IntVec3> find_witness(const Coset& coset, std::uint64_t value, std::uint64_t budget) {
  CosetEllipsoid ellipsoid(coset);
  const i128 t = ellipsoid.scaled_bound(value);
  std::optional<IntVec3> witness;
  ellipsoid.for_each(
      t,
      [&](const std::array<i128, 3>& y, i128 q) {
        if (q != t) return true;
        witness = ellipsoid.lattice_offset(y, coset);
        return false;
      },
      budget);
  return witness;
}

}  // namespace almostuniv
