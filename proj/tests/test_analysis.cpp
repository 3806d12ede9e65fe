#include <bit>
#include <random>

#include <gtest/gtest.h>

#include "linstab/analysis.hpp"
#include "support/oracle.hpp"

namespace linstab {
namespace {

EPSet block_plus_progression(Int r, Int g) {
  std::vector<Int> block;
  for (Int i = 0; i < r; ++i) block.push_back(i);
  return minkowski_sum(EPSet::finite(block), EPSet::up_progression(0, g, 0));
}

TEST(Freiman, Examples) {
  const std::vector<Int> x{0, 1, 3};
  const auto r = freiman_check(x);
  EXPECT_EQ(r.lhs, 6);
  EXPECT_EQ(r.rhs, 6);
  EXPECT_TRUE(r.holds);
  const std::vector<Int> pair{0, 1};
  EXPECT_EQ(freiman_check(pair).lhs, 3);
  for (Int k = 2; k <= 10; ++k) {
    std::vector<Int> ap;
    for (Int i = 0; i < k; ++i) ap.push_back(i);
    const auto c = freiman_check(ap);
    EXPECT_EQ(c.lhs, 2 * k - 1);
    EXPECT_TRUE(c.holds);
  }
  const std::vector<Int> no_zero{1, 2}, even{0, 2, 4};
  EXPECT_THROW(freiman_check(no_zero), PreconditionError);
  EXPECT_THROW(freiman_check(even), PreconditionError);
}

// Exhaustive over X inside [0, 24] with 0 in X and gcd 1, using bitmask sumsets.
TEST(Freiman, ExhaustiveUpTo24) {
  constexpr int kMax = 24;
  for (std::uint32_t rest = 1; rest < (1U << kMax); ++rest) {
    const std::uint64_t mask = (std::uint64_t{rest} << 1) | 1U;
    Int g = 0;
    for (int i = 1; i <= kMax && g != 1; ++i)
      if ((mask >> i) & 1U) g = gcd(g, i);
    if (g != 1) continue;
    std::uint64_t sums = 0;
    for (int i = 0; i <= kMax; ++i)
      if ((mask >> i) & 1U) sums |= mask << i;
    const Int k = std::popcount(mask);
    const Int m = 63 - std::countl_zero(mask);
    ASSERT_GE(std::popcount(sums), std::min(3 * k - 3, k + m)) << mask;
  }
}

TEST(DoublingDensity, HoldsOnFixtures) {
  for (const EPSet& x : {block_plus_progression(2, 5), set_union(EPSet::finite({0, 1}), EPSet::up_progression(0, 7, 0)),
                         EPSet::naturals(), set_union(EPSet::finite({0}), EPSet::up_progression(1, 2, 1))}) {
    const auto r = doubling_density_check(x);
    EXPECT_TRUE(r.holds) << x.to_string();
  }
  EXPECT_THROW(doubling_density_check(EPSet::up_progression(0, 2, 0)), PreconditionError);
}

TEST(GapBound, Examples) {
  RawEPSet raw;
  raw.period = 7;
  raw.lo = 0;
  raw.hi = -1;
  raw.neg_tail.assign(7, false);
  raw.pos_tail = {true, true, true, true, true, false, false};
  const auto r = gap_bound_check(canonicalize(raw), 2, 1);
  EXPECT_TRUE(r.precondition_met);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.forward_gap.value, 2);
  const auto n = gap_bound_check(EPSet::naturals(), 3, 1);
  EXPECT_EQ(n.forward_gap.value, 1);
  EXPECT_TRUE(n.holds);
  EXPECT_THROW(gap_bound_check(EPSet::naturals(), 1, 2), PreconditionError);
  const auto low = gap_bound_check(EPSet::up_progression(0, 4, 0), 2, 1);
  EXPECT_FALSE(low.precondition_met);
  EXPECT_FALSE(low.holds);
}

TEST(GapBound, DenseRandomSetsObeyBound) {
  std::mt19937_64 rng(12);
  int checked = 0;
  while (checked < 40) {
    const EPSet x = restrict_nonnegative(canonicalize(testing::random_raw(rng, 12, 30)));
    const Int a = 1 + static_cast<Int>(rng() % 3), b = 1 + static_cast<Int>(rng() % static_cast<std::uint64_t>(a));
    if (upper_density(x) <= Rational(a, a + 1)) continue;
    EXPECT_TRUE(gap_bound_check(x, a, b).holds) << x.to_string() << " a=" << a << " b=" << b;
    ++checked;
  }
}

TEST(Kneser, Examples) {
  const auto t = kneser_dichotomy(EPSet::up_progression(0, 3, 0), 2);
  EXPECT_EQ(t.branch, 2);
  EXPECT_EQ(t.g, 3);
  EXPECT_EQ(t.closure, EPSet::up_progression(0, 3, 0));
  EXPECT_EQ(t.sumset_density, Rational(1, 3));
  const auto n = kneser_dichotomy(EPSet::naturals(), 3);
  EXPECT_EQ(n.branch, 2);
  EXPECT_EQ(n.g, 1);
  EXPECT_EQ(kneser_dichotomy(EPSet::naturals(), 1).branch, 1);
  const auto f = kneser_dichotomy(block_plus_progression(2, 5), 3);
  EXPECT_NE(f.branch, 0);
  EXPECT_THROW(kneser_dichotomy(EPSet::finite({0, 1}), 2), PreconditionError);
}

TEST(Kneser, AlwaysFindsABranch) {
  std::mt19937_64 rng(21);
  int checked = 0;
  while (checked < 60) {
    const EPSet x = restrict_nonnegative(canonicalize(testing::random_raw(rng, 10, 25)));
    if (x.pos_mask().none()) continue;
    const int k = 2 + static_cast<int>(rng() % 3);
    const auto rep = kneser_dichotomy(x, k);
    EXPECT_NE(rep.branch, 0) << x.to_string() << " k=" << k;
    ++checked;
  }
}

TEST(DPlus, Examples) {
  EXPECT_EQ(dplus(EPSet::up_progression(1, 2, 1)), EPSet::up_progression(0, 2, 0));
  const auto odd = stability_time(EPSet::up_progression(1, 2, 1), 10);
  ASSERT_TRUE(odd.t.has_value());
  EXPECT_EQ(*odd.t, 1);
  const auto even = stability_time(EPSet::up_progression(0, 2, 0), 10);
  EXPECT_EQ(*even.t, 0);
  EXPECT_THROW(dplus(EPSet::progression(0, 2)), PreconditionError);
}

TEST(DPlus, StructuralProperties) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 60; ++i) {
    const EPSet a = restrict_nonnegative(canonicalize(testing::random_raw(rng, 8, 20)));
    const EPSet d = dplus(a);
    EXPECT_TRUE(d.bounded_below());
    if (!a.is_empty()) EXPECT_TRUE(d.contains(0));
    const EPSet bigger = set_union(a, EPSet::finite({static_cast<Int>(rng() % 30)}));
    EXPECT_TRUE(is_subset(d, dplus(bigger)));
  }
}

TEST(DPlus, DenseSetsStabilizeAtOnce) {
  for (auto [r, g] : {std::pair<Int, Int>{2, 3}, {3, 4}, {4, 5}, {5, 7}}) {
    const auto st = stability_time(block_plus_progression(r, g), 10);
    ASSERT_TRUE(st.t.has_value());
    EXPECT_LE(*st.t, 1);
    EXPECT_EQ(st.iterates[1], EPSet::naturals());
  }
}

TEST(StabilityBoundsTest, Examples) {
  const auto half = stability_bounds(Rational(1, 2));
  EXPECT_DOUBLE_EQ(half.stewart_tijdeman.value(), 2.0);
  EXPECT_DOUBLE_EQ(half.ruzsa.value(), 2.0);
  const auto quarter = stability_bounds(Rational(1, 4));
  EXPECT_DOUBLE_EQ(quarter.stewart_tijdeman.value(), 4.0);
  EXPECT_NEAR(quarter.ruzsa.value(), 3.585, 1e-3);
  EXPECT_TRUE(quarter.ruzsa.admits(3));
  EXPECT_FALSE(quarter.ruzsa.admits(4));
  EXPECT_TRUE(quarter.stewart_tijdeman.admits(4));
  EXPECT_FALSE(quarter.stewart_tijdeman.admits(5));
  EXPECT_EQ(quarter.ruzsa.to_string(), "2+log2(3)");
  EXPECT_THROW(stability_bounds(Rational(3, 5)), PreconditionError);
}

TEST(StabilityBoundsTest, EmpiricalTimesRespectBounds) {
  for (auto [r, g] : {std::pair<Int, Int>{1, 2}, {2, 4}, {1, 3}, {2, 6}, {1, 5}, {3, 15}, {1, 10}, {2, 20}}) {
    const EPSet a = block_plus_progression(r, g);
    const auto st = stability_time(a, 20);
    ASSERT_TRUE(st.t.has_value());
    const auto b = stability_bounds(upper_density(a));
    EXPECT_TRUE(b.ruzsa.admits(*st.t));
    EXPECT_TRUE(b.stewart_tijdeman.admits(*st.t));
    EXPECT_LE(b.ruzsa.value(), b.stewart_tijdeman.value() + 1e-12);
  }
}

TEST(DensityProfile, ExactAndSampled) {
  const std::vector<Int> samples{1, 2, 3, 10, 30};
  const auto r = density_profile(EPSet::up_progression(1, 3, 1), samples);
  EXPECT_EQ(*r.exact_density, Rational(1, 3));
  EXPECT_EQ(r.profile[0].second, Rational(1));
  EXPECT_EQ(r.profile[4].second, Rational(1, 3));
  EXPECT_EQ(r.sup_profile[4].second, Rational(1));
  EXPECT_EQ(r.to_csv().substr(0, 20), "n,ratio,running_max\n");
}

}  // namespace
}  // namespace linstab
