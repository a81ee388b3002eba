#include <gtest/gtest.h>

#include <random>

#include "almostuniv/engine.hpp"
#include "almostuniv/oracle.hpp"
#include "support/oracles.hpp"

using namespace almostuniv;

namespace {

Instance diag7(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d = 7) {
  return std::get<Instance>(validate_instance(GramMatrix3::diagonal(a, b, c), ShiftVector({1, 0, 0}, d)));
}

bool any_failure(const std::vector<LocalReport>& r) {
  for (const auto& x : r)
    if (!x.universal) return true;
  return false;
}

}  // namespace

TEST(Engine, LocalScan) {
  auto a = local_scan(GramMatrix3::diagonal(25, 1, 1), 5);
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a.front().prime, 2u);
  EXPECT_FALSE(a.front().universal);

  auto b = local_scan(GramMatrix3::diagonal(1, 1, 1), 7);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_FALSE(b[0].universal);

  auto c = local_scan(GramMatrix3::diagonal(2450, 791, 49), 7);
  std::vector<std::uint64_t> primes;
  for (const auto& r : c) {
    primes.push_back(r.prime);
    EXPECT_TRUE(r.universal) << r.prime;
  }
  EXPECT_EQ(primes, (std::vector<std::uint64_t>{2, 5, 113}));
}

TEST(Engine, RepresentsCoset) {
  auto w = represents_coset(diag7(98, 77, 539), 2);
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, (IntVec3{0, 0, 0}));
  EXPECT_FALSE(represents_coset(diag7(2450, 791, 49), 226));
  Instance h = diag7(49, 7, 14);
  EXPECT_EQ(*represents_coset(h, 1), (IntVec3{0, 0, 0}));
}

TEST(Engine, RepresentsCosetMatchesOracle) {
  for (const Instance& inst : {diag7(49, 7, 14), diag7(2450, 791, 49), diag7(98, 21, 49)}) {
    RepresentedSet set = enumerate(inst, 3000);
    for (std::uint64_t t = 1; t <= 3000; ++t) {
      auto w = represents_coset(inst, t);
      ASSERT_EQ(w.has_value(), set.contains(t)) << t;
      if (w) EXPECT_EQ(inst.coset.value_at(*w), BigRational(t));
    }
  }
}

TEST(Engine, Branches) {
  auto v1 = decide(diag7(9, 3, 3, 3));
  EXPECT_EQ(v1.decision, Decision::AlmostUniversal);
  EXPECT_EQ(v1.branch, Branch::NotSevenModEight);

  auto v2 = decide(diag7(49, 7, 14));
  EXPECT_EQ(v2.branch, Branch::EvenOrder);

  auto v3 = decide(diag7(98, 21, 49));
  EXPECT_EQ(v3.branch, Branch::InertPrime);

  auto v4 = decide(diag7(2450, 791, 49));
  EXPECT_EQ(v4.decision, Decision::NotAlmostUniversal);
  EXPECT_EQ(v4.branch, Branch::RadicalFails);
  ASSERT_TRUE(v4.exceptional_family);
  EXPECT_EQ(v4.exceptional_family->t, 226u);
  // Trace records the evaluated prefix in order.
  std::vector<std::string> order;
  for (const auto& t : v4.trace) order.push_back(t.condition);
  EXPECT_EQ(order, (std::vector<std::string>{"local", "1", "2a", "2b", "2c", "2d"}));

  auto v5 = decide(diag7(98, 77, 539));
  EXPECT_EQ(v5.branch, Branch::LocalFailure);
  EXPECT_EQ(v5.failed_prime, 11u);
}

TEST(Engine, ExceptionFamily) {
  auto f = exception_family(diag7(2450, 791, 49));
  EXPECT_EQ(f.t, 226u);
  EXPECT_EQ(f.mu, 4u);
  EXPECT_EQ(f.rho, 2u);
  EXPECT_EQ(f.modulus, 7u);
  EXPECT_EQ(exception_primes(f, 1), (std::vector<std::uint64_t>{23}));
  EXPECT_EQ(predict_exceptions(f, 1), (std::vector<std::uint64_t>{119554}));
  EXPECT_TRUE(predict_exceptions(f, 0).empty());
  for (auto q : exception_primes(f, 10)) {
    EXPECT_TRUE(q % 7 == 2 || q % 7 == 5);
    EXPECT_EQ(legendre(-7, q), 1);
  }
  for (auto v : predict_exceptions(f, 10)) EXPECT_EQ(v % 7, 50 % 7);
}

TEST(Engine, PredictedExceptionUnrepresented) {
  Instance inst = diag7(2450, 791, 49);
  EXPECT_FALSE(represents_coset(inst, 119554));
}

TEST(Engine, AnalyzeServiceMode) {
  Analysis a = analyze({GramMatrix3::diagonal(25, 1, 1), ShiftVector({1, 0, 0}, 5)});
  EXPECT_EQ(a.verdict.decision, Decision::HypothesisRejected);
  ASSERT_TRUE(a.service_not_almost_universal);
  EXPECT_TRUE(*a.service_not_almost_universal);
}

TEST(Engine, AnalyzeWitnessRefersToInputShift) {
  // nu = 50/7 e1 is the canonical e1/7 translated by 7 e1.
  Coset c{GramMatrix3::diagonal(49, 7, 49), ShiftVector({50, 0, 0}, 7)};
  Analysis a = analyze(c);
  ASSERT_EQ(a.verdict.branch, Branch::RadicalHolds);
  ASSERT_TRUE(a.verdict.witness);
  const auto& inst = std::get<Instance>(a.validation);
  EXPECT_EQ(c.value_at(*a.verdict.witness), BigRational(radical_prime_part(inst)));
}

TEST(Engine, VerdictInvariantUnderBasisChangeAndTranslation) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> shift(-3, 3);
  const std::vector<std::array<std::int64_t, 3>> shapes{
      {9, 3, 3}, {49, 7, 14}, {98, 21, 49}, {2450, 791, 49}, {49, 7, 49}, {98, 77, 539}};
  for (const auto& s : shapes) {
    const std::int64_t p = s[0] == 9 ? 3 : 7;
    Instance base = diag7(s[0], s[1], s[2], p);
    Verdict ref = decide(base);
    for (int trial = 0; trial < 4; ++trial) {
      oracle_ref::Mat3 u = oracle_ref::random_unimodular(rng, 5);
      oracle_ref::Mat3 g{};
      for (int i = 0; i < 3; ++i) g[i][i] = s[i];
      oracle_ref::Mat3 h = oracle_ref::congruent(g, u);
      // nu in the new basis: U^-1 nu, translated by a random x0.
      IntVec3 n = oracle_ref::apply(oracle_ref::inverse_unimodular(u), IntVec3{1, 0, 0});
      for (auto& c : n) c += p * shift(rng);
      Coset c{GramMatrix3(h), ShiftVector(n, p)};
      Analysis a = analyze(c);
      EXPECT_EQ(a.verdict.decision, ref.decision);
      EXPECT_EQ(a.verdict.branch, ref.branch);
      if (a.verdict.witness) EXPECT_EQ(c.value_at(*a.verdict.witness), BigRational(radical_prime_part(base)));
    }
  }
}
