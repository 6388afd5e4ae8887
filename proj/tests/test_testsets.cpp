#include <gtest/gtest.h>

#include <set>

#include "freqcube/pascal.hpp"
#include "freqcube/testsets.hpp"

using namespace freqcube;

TEST(Constructions, BaselineHasSigmaPoints) {
  for (int q = 2; q <= 4; ++q)
    for (int n = 1; n <= 6; ++n)
      for (int k = 1; k <= n; ++k) {
        const auto t = baseline_set(q, n, k);
        EXPECT_EQ(t.size(), sigma(q, n, n - k));
        for (Index i : t.indices()) EXPECT_GT(t.sig().weight(i), n - k);
      }
  EXPECT_THROW(baseline_set(3, 2, 3), InvalidArgument);
}

TEST(Constructions, BaselineIsSupertesting) {
  for (int q = 2; q <= 3; ++q)
    for (int n = 1; n <= 3; ++n)
      for (int k = 1; k <= n; ++k) EXPECT_EQ(certify_supertesting(baseline_set(q, n, k), k).verdict, Verdict::holds);
}

TEST(Constructions, ThreeCubeSet) {
  const auto t = three_cube_set();
  EXPECT_EQ(t.size(), 7u);
  EXPECT_EQ(t.indices(), (std::vector<Index>{0, 4, 8, 11, 13, 15, 19}));
  EXPECT_EQ(render_grid(t),
            "layer 0:\n# . .\n. # .\n. . #\n"
            "layer 1:\n. . #\n. # .\n# . .\n"
            "layer 2:\n. # .\n. . .\n. . .\n");
  EXPECT_EQ(canonical_form(t).indices(), (std::vector<Index>{0, 1, 5, 12, 16, 22, 24}));
  EXPECT_EQ(certify_supertesting(t, 1).verdict, Verdict::holds);
}

TEST(Constructions, MinimalSetIsCanonicalAndSupertesting) {
  const auto m = three_cube_minimal_set();
  EXPECT_EQ(m.size(), 7u);
  EXPECT_EQ(canonical_form(m), m);
  EXPECT_EQ(certify_supertesting(m, 1).verdict, Verdict::holds);
  // Removing any point breaks it.
  for (Index drop : m.indices()) {
    std::vector<Index> idx;
    for (Index i : m.indices())
      if (i != drop) idx.push_back(i);
    EXPECT_EQ(certify_supertesting(PointSet(m.sig(), idx), 1).verdict, Verdict::fails);
  }
}

TEST(Constructions, LiftCardinalityIdentity) {
  for (int q = 4; q <= 5; ++q)
    for (int k = 1; k <= 3; ++k) {
      const auto inner = baseline_set(3, 3, k);
      const auto lifted = lift_set(inner, q, k);
      EXPECT_EQ(lifted.size(), inner.size() + sigma(q, 3, 3 - k) - sigma(3, 3, 3 - k));
      // Lifting the baseline of a smaller alphabet gives the baseline.
      EXPECT_EQ(lifted, baseline_set(q, 3, k));
    }
  const auto four = lift_set(three_cube_set(), 4, 1);
  EXPECT_EQ(four.size(), 26u);
  EXPECT_EQ(certify_supertesting(four, 1).verdict, Verdict::holds);
  EXPECT_THROW(lift_set(three_cube_set(), 3, 1), InvalidArgument);
}

TEST(Constructions, Product) {
  const auto t = product_set(baseline_set(3, 1, 1), three_cube_set());
  EXPECT_EQ(t.sig(), GridSig(3, 4));
  EXPECT_EQ(t.size(), 14u);
  for (const auto& p : t.points()) {
    EXPECT_NE(p[0], 0);
    EXPECT_TRUE(three_cube_set().contains(Point(std::vector<Symbol>(p.coords.begin() + 1, p.coords.end()))));
  }
  EXPECT_EQ(certify_testing_by_enumeration(t, FreqParams(3, 4, 1, {1, 1, 1})).verdict, Verdict::holds);
  EXPECT_EQ(certify_supertesting(t, 1).verdict, Verdict::holds);
  EXPECT_THROW(product_set(baseline_set(2, 1, 1), three_cube_set()), InvalidArgument);
}

TEST(Constructions, StepUp) {
  const auto upper = baseline_set(2, 3, 3);
  const auto lower = hamming_testing_set(3, true);
  const auto t = step_up_set(upper, lower, 3);
  EXPECT_EQ(t.sig(), GridSig(2, 4));
  EXPECT_EQ(t.size(), upper.size() + lower.size());
  for (const auto& p : t.points()) {
    const Point tail(std::vector<Symbol>(p.coords.begin() + 1, p.coords.end()));
    EXPECT_TRUE(p[0] == 0 ? lower.contains(tail) : upper.contains(tail));
  }
  EXPECT_THROW(step_up_set(upper, lower, 1), InvalidArgument);
  EXPECT_THROW(step_up_set(upper, lower, 4), InvalidArgument);
}

TEST(Constructions, RecursiveBinarySetsAreSupertesting) {
  for (int n = 2; n <= 6; ++n)
    for (int k = 2; k <= n; ++k) {
      const auto t = q22_recursive_set(n, k);
      EXPECT_EQ(static_cast<std::int64_t>(t.size()), q22_cardinality_formula(n, k)) << n << " " << k;
      EXPECT_EQ(certify_supertesting(t, k).verdict, Verdict::holds) << n << " " << k;
    }
  // k = 2 uses the affine Hamming set
  EXPECT_EQ(q22_recursive_set(7, 2), hamming_testing_set(7, true));
  EXPECT_EQ(q22_recursive_set(3, 2).size(), 3u);
  EXPECT_THROW(q22_recursive_set(4, 1), InvalidArgument);
}

TEST(Constructions, RecursiveBinarySetIsSmallerThanBaseline) {
  for (int n = 5; n <= 12; ++n)
    for (int k = 2; k < n; ++k) EXPECT_LT(q22_recursive_set(n, k).size(), sigma(2, n, n - k)) << n << " " << k;
  // No gain when k = n: every nonzero point is needed.
  EXPECT_EQ(q22_recursive_set(4, 4).size(), sigma(2, 4, 0));
}

TEST(Constructions, MainTheoremSizes) {
  EXPECT_EQ(main_theorem_set(3, 1).size(), 2u);
  EXPECT_EQ(main_theorem_set(3, 2).size(), 4u);
  EXPECT_EQ(main_theorem_set(3, 3).size(), 7u);
  EXPECT_EQ(main_theorem_set(3, 4).size(), 14u);
  EXPECT_EQ(main_theorem_set(3, 5).size(), 28u);
  EXPECT_EQ(main_theorem_set(3, 6).size(), 49u);
  EXPECT_EQ(main_theorem_set(4, 3).size(), 26u);
  EXPECT_EQ(main_theorem_set(4, 6).size(), 676u);
  EXPECT_EQ(certify_supertesting(main_theorem_set(3, 4), 1).verdict, Verdict::holds);
  EXPECT_THROW(main_theorem_set(2, 3), InvalidArgument);
}

TEST(Certificates, TestingByEnumeration) {
  const FreqParams latin(3, 2, 1, {1, 1, 1});
  const auto ok = certify_testing_by_enumeration(baseline_set(3, 2, 1), latin);
  EXPECT_EQ(ok.kind, "testing-by-enumeration");
  EXPECT_EQ(ok.verdict, Verdict::holds);
  EXPECT_EQ(ok.evidence.at("members"), 12u);

  const auto bad = certify_testing_by_enumeration(PointSet(latin.sig()), latin);
  EXPECT_EQ(bad.verdict, Verdict::fails);
  ASSERT_EQ(bad.counterexample.size(), 2u);
  EXPECT_NE(bad.counterexample[0], bad.counterexample[1]);

  const FreqParams latin3(3, 3, 1, {1, 1, 1});
  EXPECT_EQ(certify_testing_by_enumeration(three_cube_set(), latin3).verdict, Verdict::holds);
  TestingCertOptions capped;
  capped.member_cap = 10;
  EXPECT_THROW(certify_testing_by_enumeration(three_cube_set(), latin3, capped), ResourceLimit);
}

TEST(Certificates, SamplingIsLabelledAndReplayable) {
  const FreqParams p(3, 4, 1, {1, 1, 1});
  const auto t = main_theorem_set(3, 4);
  TestingCertOptions o;
  o.seed = 11;
  o.samples = 30;
  const auto a = certify_testing_by_enumeration(t, p, o);
  const auto b = certify_testing_by_enumeration(t, p, o);
  EXPECT_EQ(a.kind, "testing-by-sampling");
  EXPECT_EQ(a.verdict, Verdict::holds);
  EXPECT_EQ(a.evidence, b.evidence);
  EXPECT_EQ(a.evidence.at("distinct_members"), 30u);
  EXPECT_FALSE(a.evidence.contains("members"));

  o.samples = 1000;  // more than the 48 members
  o.max_draws = 500;
  const auto c = certify_testing_by_enumeration(t, p, o);
  EXPECT_EQ(c.evidence.at("distinct_members"), 48u);
  EXPECT_FALSE(c.warnings.empty());
}

TEST(Certificates, SupertestingFailureCarriesWitness) {
  const GridSig sig(3, 3);
  const auto c = certify_supertesting(PointSet(sig, {0, 1, 2}), 1);
  EXPECT_EQ(c.verdict, Verdict::fails);
  ASSERT_EQ(c.counterexample.size(), 1u);
  EXPECT_TRUE(is_k_bitrade(c.counterexample[0], 1));
  const auto capped = certify_supertesting(three_cube_set(), 1, SearchOptions{2});
  EXPECT_EQ(capped.verdict, Verdict::inconclusive);
}

// Sets with two cells in every 2-face and at most one per line fall into two
// orbits (the two 6-cycle colorings); both miss a bitrade.
TEST(MinimalSearch, SixPointFilteredSetsFormTwoOrbitsThatFail) {
  const GridSig sig(3, 3);
  std::set<std::vector<Index>> orbits;
  detail::for_each_combination(27, 6, [&](const std::vector<int>& pick) {
    const PointSet t(sig, std::vector<Index>(pick.begin(), pick.end()));
    if (detail::passes_small_set_filters(t)) orbits.insert(canonical_form(t).indices());
  });
  ASSERT_EQ(orbits.size(), 2u);
  for (const auto& o : orbits) {
    const auto r = find_bitrade_avoiding(sig, 1, PointSet(sig, o));
    ASSERT_EQ(r.status, SearchStatus::witness);
  }
}

TEST(MinimalSearch, ReproducesSevenAndStoredConstant) {
  const auto six = min_supertesting_search(3, 3, 1, 6);
  EXPECT_FALSE(six.set.has_value());
  const auto seven = min_supertesting_search(3, 3, 1, 7);
  ASSERT_TRUE(seven.set.has_value());
  EXPECT_EQ(seven.set->size(), 7u);
  EXPECT_EQ(*seven.set, three_cube_minimal_set());
  EXPECT_EQ(seven.orbits, (std::vector<std::uint64_t>{1, 1, 3, 10, 34, 105, 321, 846}));
}

TEST(MinimalSearch, UnfilteredSearchAgrees) {
  MinSearchOptions o;
  o.proof_filters = false;
  EXPECT_FALSE(min_supertesting_search(3, 3, 1, 6, o).set.has_value());
}

TEST(MinimalSearch, SmallBinaryCases) {
  // Any single point meets the unique (up to sign) 1-bitrade of [2]^2.
  const auto r = min_supertesting_search(2, 2, 1, 2);
  ASSERT_TRUE(r.set);
  EXPECT_EQ(r.set->size(), 1u);
  // For k = n the answer is sigma(q,n,0) = all nonzero points: 3 over [2]^2.
  const auto full = min_supertesting_search(2, 2, 2, 3);
  ASSERT_TRUE(full.set);
  EXPECT_EQ(full.set->size(), 3u);
  EXPECT_THROW(min_supertesting_search(3, 4, 1, 40), ResourceLimit);
}

TEST(MinimalSearch, JobsDoNotChangeTheAnswer) {
  MinSearchOptions one;
  one.jobs = 1;
  MinSearchOptions many;
  many.jobs = 4;
  EXPECT_EQ(*min_supertesting_search(3, 2, 1, 4, one).set, *min_supertesting_search(3, 2, 1, 4, many).set);
}

// Minimum testing sets for two latin-type families over [3]^3.
TEST(MinimalSearch, TestingSets) {
  const auto latin = min_testing_search(FreqParams(3, 3, 1, {1, 1, 1}), 7);
  EXPECT_EQ(latin.members, 24u);
  ASSERT_TRUE(latin.set);
  EXPECT_EQ(latin.set->size(), 4u);
  EXPECT_EQ(latin.set->indices(), (std::vector<Index>{0, 1, 3, 9}));

  const auto two_one = min_testing_search(FreqParams(3, 3, 1, {2, 1}), 7);
  EXPECT_EQ(two_one.members, 12u);
  ASSERT_TRUE(two_one.set);
  EXPECT_EQ(two_one.set->size(), 6u);
  EXPECT_EQ(two_one.set->indices(), (std::vector<Index>{0, 1, 3, 4, 9, 10}));
  EXPECT_FALSE(min_testing_search(FreqParams(3, 3, 1, {2, 1}), 5).set.has_value());
}
