#include "support.hpp"

#include <gtest/gtest.h>

using namespace zkseq;
using namespace zkseq::testing;

namespace {

/// Optimum of max |signed(lambda b)| over all units, smallest lambda on ties.
std::pair<u64, u64> optimum_by_scan(const GroundSet& b)
{
    const Modulus& m = b.modulus();
    u64 best_lambda = 0;
    u64 best = ~u64{0};
    for (u64 l = 1; l < m.k(); ++l) {
        if (std::gcd(l, m.k()) != 1)
            continue;
        u64 worst = 0;
        for (Residue x : b.elements())
            worst = std::max<u64>(worst, static_cast<u64>(std::llabs(m.signed_rep(m.mul(Residue{l}, x)))));
        if (worst < best) {
            best = worst;
            best_lambda = l;
        }
    }
    return {best_lambda, best};
}

} // namespace

TEST(GoalInequality, Examples)
{
    EXPECT_TRUE(goal_inequality_holds(2, 5'000'000));
    EXPECT_FALSE(goal_inequality_holds(2, 1'000'000));
    EXPECT_FALSE(goal_inequality_holds(1, 100));
    EXPECT_TRUE(goal_inequality_holds(1, 1000));
}

TEST(Exhaustive, Examples)
{
    const auto r = rectify_exhaustive(GroundSet::from_values(Modulus(5), {1, 2}));
    EXPECT_EQ(r.lambda.value, 1u);
    EXPECT_EQ(r.max_abs, 2u);
    EXPECT_EQ(r.method, RectificationMethod::exhaustive);

    for (u64 k : {7u, 10u, 64u, 101u}) {
        const auto s = rectify_exhaustive(GroundSet::from_values(Modulus(k), {k - 1}));
        EXPECT_EQ(s.max_abs, 1u);
        EXPECT_EQ(s.lambda.value, 1u);  // |signed(k-1)| = 1 already; smallest lambda wins
    }

    const auto b = GroundSet::from_values(Modulus(101), {3, 6});
    const auto [lambda, best] = optimum_by_scan(b);
    const auto t = rectify_exhaustive(b);
    EXPECT_EQ(t.max_abs, best);
    EXPECT_EQ(t.lambda.value, lambda);
    EXPECT_EQ(t.max_abs, 2u);  // lambda = 34: 3*34 = 102 = 1, 6*34 = 2
}

TEST(Exhaustive, MatchesScanOnRandomSets)
{
    Rng rng(31);
    for (int trial = 0; trial < 150; ++trial) {
        const Modulus m(3 + rng.below(600));
        const auto b = random_nonzero_set(rng, m, 1 + rng.below(std::min<u64>(m.k() - 1, 5)));
        const auto [lambda, best] = optimum_by_scan(b);
        const auto r = rectify_exhaustive(b);
        ASSERT_EQ(r.max_abs, best);
        ASSERT_EQ(r.lambda.value, lambda);
        ASSERT_EQ(max_abs_after_dilation(b, r.lambda), r.max_abs);
    }
}

TEST(Exhaustive, SizeLimit)
{
    EXPECT_THROW((void)rectify_exhaustive(GroundSet::from_values(Modulus(10'000'019), {1})), error);
}

TEST(Pigeonhole, SingletonInPrimeModulus)
{
    for (u64 p : {3u, 5u, 101u, 1009u, 65537u}) {
        const auto r = rectify_pigeonhole(GroundSet::from_values(Modulus(p), {1}));
        EXPECT_TRUE(Modulus(p).is_unit(r.lambda));
        EXPECT_LE(r.max_abs * r.boxes, p);
        EXPECT_EQ(r.method, RectificationMethod::pigeonhole);
    }
}

TEST(Pigeonhole, NeverBeatsExhaustive)
{
    const Modulus m(101);
    for (u64 x = 1; x < 101; ++x) {
        const auto b = GroundSet::from_values(m, {x, (2 * x) % 101});
        const auto pg = rectify_pigeonhole(b);
        const auto ex = rectify_exhaustive(b);
        ASSERT_GE(pg.max_abs, ex.max_abs);
        ASSERT_EQ(max_abs_after_dilation(b, pg.lambda), pg.max_abs);
    }
    const auto b = GroundSet::from_values(Modulus(1009), {40, 41});
    EXPECT_GE(rectify_pigeonhole(b).max_abs, rectify_exhaustive(b).max_abs);
}

TEST(Pigeonhole, CoreBoundAndUnitProperty)
{
    Rng rng(32);
    int ran = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const Modulus m(kSmallPrimes[rng.below(std::size(kSmallPrimes))] * (1 + rng.below(50)));
        const auto b = random_nonzero_set(rng, m, 1 + rng.below(std::min<u64>(m.k() - 1, 6)));
        RectificationResult r;
        try {
            r = rectify_pigeonhole(b);
        } catch (const rectification_infeasible& e) {
            ASSERT_LT(e.boxes(), 2u);
            continue;
        }
        ++ran;
        ASSERT_TRUE(m.is_unit(r.lambda));
        ASSERT_GE(r.boxes, 2u);
        for (Residue d : r.core)
            ASSERT_LT(static_cast<u128>(m.magnitude(m.mul(r.lambda, d))) * r.boxes, m.k());
        if (m.k() <= kExhaustiveScanLimit) {
            ASSERT_GE(r.max_abs, rectify_exhaustive(b).max_abs);
        }
    }
    EXPECT_GT(ran, 50);
}

TEST(Pigeonhole, InfeasibleWhenTooFewBoxes)
{
    // p = 3 and a two-element dissociated core: no m >= 2 has m^2 < 3.
    try {
        (void)rectify_pigeonhole(GroundSet::from_values(Modulus(3 * 1'000'003), {1, 1000}));
        FAIL();
    } catch (const rectification_infeasible& e) {
        EXPECT_EQ(e.code(), errc::rectification_infeasible);
        EXPECT_EQ(e.boxes(), 1u);
    }
}

TEST(RectificationTarget, HoldsWhenGoalInequalityHolds)
{
    Rng rng(33);
    const Modulus m(5'000'011);
    int asserted = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto b = random_nonzero_set(rng, m, 2 + rng.below(3));
        if (!goal_inequality_holds(dimension(b), m.p()))
            continue;
        ++asserted;
        const auto r = rectify_pigeonhole(b);
        ASSERT_TRUE(within_rectification_target(r, b)) << r.max_abs;
    }
    EXPECT_GT(asserted, 0);
}
