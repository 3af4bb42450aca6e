#include "support.hpp"

#include <gtest/gtest.h>

using namespace zkseq;
using namespace zkseq::testing;

TEST(BruteForce, Examples)
{
    const auto a = GroundSet::from_values(Modulus(5), {1, 2, 3, 4});
    const auto o = brute_force(a, Goal::valid());
    ASSERT_TRUE(o.has_value());
    EXPECT_TRUE(is_valid_ordering(*o));
    EXPECT_TRUE(is_ordering_of(*o, a));

    const auto s = brute_force(GroundSet::from_values(Modulus(9), {4}), Goal::sequencing());
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ(values_of(s->items), (std::vector<u64>{4}));

    const auto e = brute_force(GroundSet(Modulus(9)), Goal::tweak(3));
    ASSERT_TRUE(e.has_value());
    EXPECT_EQ(e->size(), 0u);
}

TEST(BruteForce, SizeLimit)
{
    std::vector<u64> xs;
    for (u64 i = 1; i <= 13; ++i)
        xs.push_back(i);
    EXPECT_THROW((void)brute_force(GroundSet::from_values(Modulus(101), xs), Goal::valid()), error);
}

TEST(BruteForce, AgreesWithPermutationEnumeration)
{
    Rng rng(91);
    for (int trial = 0; trial < 400; ++trial) {
        const Modulus m(2 + rng.below(20));
        const auto a = random_nonzero_set(rng, m, rng.below(std::min<u64>(m.k() - 1, 6) + 1));
        const Goal goal = std::array{Goal::valid(), Goal::sequencing(), Goal::tweak(1 + rng.below(3))}[rng.below(3)];
        const auto found = brute_force(a, goal);
        const bool exists = any_permutation(a, [&](const Ordering& o) { return satisfies(o, goal); });
        ASSERT_EQ(found.has_value(), exists) << m.k() << " " << goal.name();
        if (found) {
            ASSERT_TRUE(satisfies(*found, goal));
            ASSERT_TRUE(is_ordering_of(*found, a));
        }
    }
}

TEST(Census, ZFiveValid)
{
    const auto r = census(5, 4, Goal::valid(), 2);
    EXPECT_EQ(r.rows.size(), 15u);
    EXPECT_EQ(r.failures(), 0u);
}

TEST(Census, ZSevenSequencingCountsBySize)
{
    const auto r = census(7, 6, Goal::sequencing());
    const auto counts = r.counts_by_size();
    const std::size_t expected[] = {0, 6, 15, 20, 15, 6, 1};
    for (std::size_t size = 1; size <= 6; ++size) {
        EXPECT_EQ(counts.at(size).first, expected[size]);
        EXPECT_EQ(counts.at(size).second, expected[size]);
    }
    for (std::size_t i = 1; i < r.rows.size(); ++i)
        EXPECT_LT(r.rows[i - 1].subset_bitmask, r.rows[i].subset_bitmask);
}

TEST(Census, TwoSingleton)
{
    const auto r = census(2, 1, Goal::sequencing());
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_TRUE(r.rows[0].achievable);
}

TEST(Census, PrimesUpToThirteenAreSequenceable)
{
    for (u64 p : {5u, 7u, 11u, 13u}) {
        const auto r = census(p, 12, Goal::sequencing());
        EXPECT_EQ(r.failures(), 0u) << "counterexample in Z_" << p;
        for (const auto& row : r.rows)
            ASSERT_TRUE(is_sequencing(Ordering{Modulus(p), row.witness}));
    }
}

TEST(Census, ThreadCountDoesNotChangeResult)
{
    const auto a = census(11, 5, Goal::tweak(2), 1);
    const auto b = census(11, 5, Goal::tweak(2), 5);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].achievable, b.rows[i].achievable);
        EXPECT_EQ(a.rows[i].witness, b.rows[i].witness);
    }
}

TEST(Census, ModulusLimit)
{
    EXPECT_THROW((void)census(18, 3, Goal::valid()), error);
}
