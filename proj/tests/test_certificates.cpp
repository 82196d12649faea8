#include "support/test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace matlen;
using testutil::jordan;

namespace {

const PrimeField F7(7);
const PrimeField F101(101);

Spectrum spectrum_of(const Matrix &a) { return split_roots(minimal_polynomial(a)); }

std::vector<std::pair<std::int64_t, int>> plain_roots(const Spectrum &s) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (const auto &r : s.roots) out.emplace_back(r.value, r.multiplicity);
  return out;
}

void expect_matches_oracle(const Matrix &a, std::size_t r_max) {
  const auto spec = spectrum_of(a);
  const auto got = find_rank_reduction(a, spec, r_max);
  const auto want = oracle::best_rank_reduction(testutil::to_plain(a), plain_roots(spec), r_max,
                                                a.field().modulus());
  ASSERT_EQ(got.has_value(), want.has_value());
  if (!got) return;
  EXPECT_EQ(got->degree, want->degree);
  std::map<std::int64_t, int> ex(got->exponents.begin(), got->exponents.end());
  EXPECT_EQ(ex, want->exponents);
  EXPECT_EQ(got->achieved_rank, want->rank);
}

const BoundEntry &entry(const BoundLedger &l, const std::string &name) {
  const auto *e = l.find(name);
  if (!e) throw std::runtime_error("missing ledger entry " + name);
  return *e;
}

} // namespace

TEST(FindRankReduction, UniqueTopBlock) {
  auto a = jordan({{0, 3}, {0, 1}}, F7);
  auto c = find_rank_reduction(a, spectrum_of(a), 1);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->exponents, (std::map<Elem, int>{{0, 2}}));
  EXPECT_EQ(c->degree, 2);
  EXPECT_EQ(c->achieved_rank, 1u);
  EXPECT_EQ(c->witness, Matrix::unit(4, F7, 0, 2));
  EXPECT_TRUE(verify_certificate(*c, a));
}

TEST(FindRankReduction, EqualBlocksHaveEvenRank) {
  auto a = jordan({{0, 2}, {0, 2}}, F7);
  EXPECT_FALSE(find_rank_reduction(a, spectrum_of(a), 1));
  auto c = find_rank_reduction(a, spectrum_of(a), 2);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->exponents, (std::map<Elem, int>{{0, 1}}));
  EXPECT_EQ(c->degree, 1);
  EXPECT_EQ(c->achieved_rank, 2u);
}

TEST(FindRankReduction, TwoEigenvaluesAgainstExhaustiveSearch) {
  auto a = jordan({{1, 3}, {2, 2}}, F7);
  auto want = oracle::best_rank_reduction(testutil::to_plain(a), {{1, 3}, {2, 2}}, 1, 7);
  ASSERT_TRUE(want);
  // rank is (3 - a1) + (2 - a2); (2,2) precedes (3,1)
  EXPECT_EQ(want->degree, 4);
  EXPECT_EQ(want->exponents, (std::map<std::int64_t, int>{{1, 2}, {2, 2}}));
  auto c = find_rank_reduction(a, spectrum_of(a), 1);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->exponents, (std::map<Elem, int>{{1, 2}, {2, 2}}));
  EXPECT_EQ(c->degree, 4);
  EXPECT_EQ(c->achieved_rank, 1u);
  EXPECT_TRUE(verify_certificate(*c, a));
}

TEST(FindRankReduction, RejectsZeroRMax) {
  auto a = jordan({{0, 2}}, F7);
  EXPECT_THROW(find_rank_reduction(a, spectrum_of(a), 0), Error);
}

TEST(FindRankReduction, ScalarHasNoCandidate) {
  // the only nonzero exponent vector is the full minimal polynomial
  auto a = Matrix::scalar(3, F7, 2);
  EXPECT_FALSE(find_rank_reduction(a, spectrum_of(a), 3));
}

TEST(FindRankReduction, MatchesOracleOnRandomSplitMatrices) {
  Xoshiro256 rng(51);
  for (int n = 2; n <= 6; ++n)
    for (int trial = 0; trial < 15; ++trial) {
      auto spec = random_jordan_spec(n, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))),
                                     F101, rng);
      auto a = conjugate(random_invertible(static_cast<std::size_t>(n), F101, rng),
                         jordan_matrix(spec, F101));
      for (std::size_t r = 1; r <= 3; ++r) expect_matches_oracle(a, r);
    }
}

TEST(FindRankReduction, SoundAndMonotoneInRMax) {
  Xoshiro256 rng(52);
  for (int n = 2; n <= 7; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      auto spec = random_jordan_spec(n, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))),
                                     F101, rng);
      auto a = conjugate(random_invertible(static_cast<std::size_t>(n), F101, rng),
                         jordan_matrix(spec, F101));
      const auto sp = spectrum_of(a);
      std::optional<int> prev;
      for (std::size_t r = 1; r <= static_cast<std::size_t>(n); ++r) {
        auto c = find_rank_reduction(a, sp, r);
        if (prev) {
          ASSERT_TRUE(c);
        }
        if (!c) continue;
        EXPECT_TRUE(verify_certificate(*c, a));
        EXPECT_LE(c->achieved_rank, r);
        EXPECT_GE(c->achieved_rank, 1u);
        EXPECT_EQ(rank(c->witness), c->achieved_rank);
        EXPECT_LE(c->degree, sp.degree());
        if (prev) {
          EXPECT_LE(c->degree, *prev);
        }
        prev = c->degree;
      }
    }
}

TEST(FindRankReduction, DegreeAboveHalfAlwaysHasRankOne) {
  Xoshiro256 rng(53);
  for (int n = 4; n <= 7; ++n)
    for (int m = n / 2 + 1; m <= n; ++m)
      for (int trial = 0; trial < 10; ++trial) {
        auto spec = random_jordan_spec(n, m, F101, rng);
        auto a = conjugate(random_invertible(static_cast<std::size_t>(n), F101, rng),
                           jordan_matrix(spec, F101));
        auto c = find_rank_reduction(a, spectrum_of(a), 1);
        ASSERT_TRUE(c) << "n=" << n << " m=" << m;
        EXPECT_EQ(c->achieved_rank, 1u);
        EXPECT_LE(c->degree, m - 1);
      }
}

TEST(FindRankReduction, DoubleEqualBlockNeedsDegreeTMinusOne) {
  Xoshiro256 rng(54);
  for (int t = 2; t <= 5; ++t) {
    const Elem lambda = static_cast<Elem>(rng.below(101));
    auto a = conjugate(random_invertible(static_cast<std::size_t>(2 * t), F101, rng),
                       jordan({{lambda, t}, {lambda, t}}, F101));
    auto c = find_rank_reduction(a, spectrum_of(a), 2);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->degree, t - 1);
    EXPECT_EQ(c->achieved_rank, 2u);
  }
}

TEST(VerifyCertificate, DetectsTampering) {
  auto a = jordan({{0, 3}, {0, 1}}, F7);
  auto c = *find_rank_reduction(a, spectrum_of(a), 1);
  auto bad = c;
  bad.witness.set(0, 0, 1);
  EXPECT_FALSE(verify_certificate(bad, a));
  bad = c;
  bad.achieved_rank = 2;
  EXPECT_FALSE(verify_certificate(bad, a));
  bad = c;
  bad.degree = 1;
  EXPECT_FALSE(verify_certificate(bad, a));
}

TEST(BoundFormulas, KnownValues) {
  EXPECT_EQ(paz_bound(5), 9);
  for (int n = 1; n <= 40; ++n)
    EXPECT_EQ(paz_bound(n), static_cast<std::int64_t>(std::ceil((n * n + 2) / 3.0)));
  EXPECT_EQ(pappacena_bound(1, 2, 4), 8);
  EXPECT_EQ(pappacena_bound(2, 1, 4), 10);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(pappacena_bound(n, 1, n), n * n);
  EXPECT_EQ(shitov_rank1_bound(2, 5), 8);
  EXPECT_EQ(shitov_rank1_bound(2, 4), 6);
  EXPECT_LE(shitov_rank1_bound(2, 4), half_degree_bound(4));
  try {
    shitov_rank1_bound(1, 5);
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("InvalidK"), std::string::npos);
  }
  EXPECT_EQ(markova_bound(6, 4), 13);
  EXPECT_EQ(half_degree_bound(4), 7);
  EXPECT_EQ(third_degree_bound(4), 10);
  EXPECT_EQ(third_degree_bound(7), 20); // floor(24.5) - 4
  EXPECT_EQ(degree_two_bound(8), 6);
  EXPECT_EQ(degree_two_bound(5), 5); // ceil(4.64)
  EXPECT_EQ(shitov_log_bound(4), 28);
  EXPECT_EQ(shitov_log_bound(3), 18); // ceil(17.51)
}

TEST(BoundFormulas, RankTwoRouteStaysBelowThirdDegreeBound) {
  for (int t = 2; t <= 20; ++t)
    for (int n = 2 * t; n <= 3 * t - 1; ++n) {
      EXPECT_EQ(pappacena_bound(2, t - 1, n), 3 * n + t - 4);
      EXPECT_LE(2 * (3 * n + t - 4), 7 * n - 8);
    }
}

TEST(Hypotheses, HalfDegree) {
  EXPECT_EQ(t10_t11_hypothesis(4, 3), (HalfDegreeSplit{2, 1}));
  EXPECT_EQ(t10_t11_hypothesis(5, 3), (HalfDegreeSplit{2, 1}));
  EXPECT_FALSE(t10_t11_hypothesis(6, 3));
  EXPECT_EQ(t10_t11_hypothesis(5, 5), (HalfDegreeSplit{2, 3}));
  for (int n = 2; n <= 30; ++n)
    for (int m = 1; m <= n; ++m) EXPECT_EQ(t10_t11_hypothesis(n, m).has_value(), 2 * m > n);
}

TEST(Hypotheses, ThirdToHalf) {
  EXPECT_TRUE(t12_hypothesis(4, 2));
  EXPECT_FALSE(t12_hypothesis(6, 2));
  EXPECT_TRUE(t12_hypothesis(7, 3));
  EXPECT_TRUE(t12_hypothesis(8, 4));
  EXPECT_FALSE(t12_hypothesis(5, 3));
}

TEST(Hypotheses, BalancedDegree) {
  EXPECT_EQ(thm38_hypothesis(4, {{{0, {3, 1}}}}, 3), 1);
  EXPECT_FALSE(thm38_hypothesis(4, {{{5, {2, 2}}}}, 2));
  EXPECT_EQ(thm38_hypothesis(6, {{{1, {3}}, {2, {2, 1}}}}, 5), 1);
  // the second condition can fail on its own
  EXPECT_FALSE(thm38_hypothesis(7, {{{0, {4}}, {1, {1, 1, 1}}}}, 5));
}

TEST(Hypotheses, DoubleEqualBlock) {
  EXPECT_TRUE(is_double_equal_block(4, {{{0, {2, 2}}}}));
  EXPECT_TRUE(is_double_equal_block(6, {{{9, {3, 3}}}}));
  EXPECT_FALSE(is_double_equal_block(4, {{{0, {3, 1}}}}));
  EXPECT_FALSE(is_double_equal_block(4, {{{0, {2}}, {1, {2}}}}));
}

TEST(BoundLedger, HalfDegreeInstance) {
  auto s = build_instance({4, 101, JordanSpec{{{0, 3}, {0, 1}}}, 1, 42, Family::T10});
  auto led = bound_ledger(s);
  EXPECT_TRUE(entry(led, "degree_above_half").applicable);
  EXPECT_EQ(entry(led, "degree_above_half").bound, 7);
  EXPECT_TRUE(entry(led, "unique_max_block").applicable);
  EXPECT_EQ(entry(led, "unique_max_block").bound, 2 * 4 + 3 - 3);
  EXPECT_TRUE(entry(led, "degree_n_minus_1").applicable);
  EXPECT_EQ(entry(led, "rank_one[g0]").bound, 6);
  EXPECT_EQ(entry(led, "rank_reduction[g0,r<=1]").bound, pappacena_bound(1, 2, 4));
  EXPECT_FALSE(entry(led, "degree_third_to_half").applicable);
  EXPECT_FALSE(entry(led, "degree_two_log").applicable);
  EXPECT_EQ(entry(led, "paz_ceiling").bound, 6);
  EXPECT_TRUE(find_violations(compute_length(s), led).empty());
}

TEST(BoundLedger, DoubleEqualBlockInstance) {
  InstanceSpec spec{4, 101, JordanSpec{{{0, 2}, {0, 2}}}, 2, 42, Family::T12};
  auto s = build_with_escalation(spec).set;
  auto led = bound_ledger(s);
  EXPECT_TRUE(entry(led, "degree_third_to_half").applicable);
  EXPECT_EQ(entry(led, "degree_third_to_half").bound, 10);
  EXPECT_TRUE(entry(led, "double_equal_block").applicable);
  EXPECT_EQ(entry(led, "double_equal_block").bound, 8);
  EXPECT_FALSE(entry(led, "rank_reduction[g0,r<=1]").applicable);
  EXPECT_EQ(entry(led, "rank_reduction[g0,r<=2]").bound, 3 * 4 + 2 - 4);
  EXPECT_FALSE(led.find("rank_one[g0]"));
  EXPECT_TRUE(entry(led, "degree_two_log").applicable);
  EXPECT_EQ(entry(led, "degree_two_log").bound, 4);
}

TEST(BoundLedger, NonSplitGeneratorIsUndecidable) {
  // x^2 + 1 has no root mod 7
  const Matrix rot(F7, {{0, 6}, {1, 0}});
  auto alone = bound_ledger(GeneratingSet(2, F7, {rot}));
  for (const char *name :
       {"unique_max_block", "degree_n_minus_k_balanced", "double_equal_block", "rank_reduction[g0]"}) {
    EXPECT_FALSE(entry(alone, name).applicable) << name;
    EXPECT_FALSE(entry(alone, name).decidable) << name;
    EXPECT_NE(entry(alone, name).note.find("undecidable"), std::string::npos) << name;
  }
  EXPECT_TRUE(entry(alone, "nonderogatory").applicable);
  EXPECT_TRUE(entry(alone, "degree_above_half").decidable);

  // a split companion can still decide an entry on its own
  auto mixed = bound_ledger(GeneratingSet(2, F7, {rot, Matrix::unit(2, F7, 0, 0)}));
  EXPECT_TRUE(entry(mixed, "unique_max_block").applicable);
  EXPECT_EQ(entry(mixed, "unique_max_block").note.rfind("g1", 0), 0u);
  EXPECT_FALSE(entry(mixed, "double_equal_block").decidable);
  EXPECT_FALSE(entry(mixed, "rank_reduction[g0]").decidable);
  EXPECT_TRUE(mixed.find("rank_one[g1]"));
}

TEST(BoundLedger, CertificateEntriesMatchCertificates) {
  Xoshiro256 rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + rng.below(4);
    auto spec = random_jordan_spec(static_cast<int>(n), 1 + static_cast<int>(rng.below(n)), F101, rng);
    auto a = conjugate(random_invertible(n, F101, rng), jordan_matrix(spec, F101));
    GeneratingSet s(n, F101, {a, random_matrix(n, F101, rng)});
    auto an = analyze_set(s);
    auto led = bound_ledger(s, an);
    for (std::size_t g = 0; g < 2; ++g) {
      const auto label = "g" + std::to_string(g);
      const auto &c = an.certificates[g];
      if (c.rank1 && c.rank1->degree >= 2) {
        EXPECT_EQ(entry(led, "rank_one[" + label + "]").bound,
                  2 * static_cast<std::int64_t>(n) + c.rank1->degree - 4);
      }
      for (const auto *cert : {&c.rank1, &c.rank2}) {
        if (!*cert) continue;
        const std::string name =
            "rank_reduction[" + label + ",r<=" + (cert == &c.rank1 ? "1" : "2") + "]";
        const auto r = static_cast<std::int64_t>((*cert)->achieved_rank);
        EXPECT_EQ(entry(led, name).bound, r * static_cast<std::int64_t>(n) + static_cast<std::int64_t>(n) - r +
                                              (*cert)->degree - 1);
      }
    }
  }
}

TEST(BoundLedger, TightestIgnoresInapplicable) {
  BoundLedger led{{{"a", 3, false, true, ""}, {"b", 9, true, true, ""}, {"c", 5, true, true, ""}}};
  EXPECT_EQ(led.tightest(), 5);
  EXPECT_FALSE(BoundLedger{}.tightest());
}

TEST(FindViolations, DegreeTwoClaimFailsOnAPath) {
  // eight-point path of matrix units: m(S) = 2, length 7 > ceil(2 log2 8) = 6
  const std::size_t n = 8;
  std::vector<Matrix> gens;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    gens.push_back(Matrix::unit(n, F101, i, i + 1));
    gens.push_back(Matrix::unit(n, F101, i + 1, i));
  }
  GeneratingSet s(n, F101, gens);
  auto v = find_violations(compute_length(s), bound_ledger(s));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].bound_name, "degree_two_log");
  EXPECT_EQ(v[0].bound, 6);
  EXPECT_EQ(v[0].length, 7u);
}

TEST(FindViolations, NonGeneratingHasNone) {
  GeneratingSet s(3, F7, {Matrix::identity(3, F7)});
  BoundLedger led{{{"zero", 0, true, true, ""}}};
  EXPECT_TRUE(find_violations(compute_length(s), led).empty());
}
