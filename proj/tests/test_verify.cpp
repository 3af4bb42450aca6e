#include "support.hpp"

#include <gtest/gtest.h>

using namespace zkseq;
using namespace zkseq::testing;

namespace {

Ordering z5(std::initializer_list<u64> xs) { return Ordering::from_values(Modulus(5), xs); }

} // namespace

TEST(PartialSums, Examples)
{
    EXPECT_EQ(values_of(partial_sums(Ordering::from_values(Modulus(7), {1, 3, 2}))), (std::vector<u64>{1, 4, 6}));
    EXPECT_TRUE(partial_sums(Ordering{Modulus(7), {}}).empty());
    EXPECT_EQ(values_of(partial_sums(z5({1, 2, 4, 3}))), (std::vector<u64>{1, 3, 2, 0}));
}

TEST(ValidOrdering, Examples)
{
    EXPECT_TRUE(is_valid_ordering(z5({1, 2, 4, 3})));
    EXPECT_TRUE(is_valid_ordering(z5({1, 4})));
    EXPECT_TRUE(is_valid_ordering(z5({2, 3})));
    EXPECT_FALSE(is_valid_ordering(z5({1, 2, 3, 4})));
}

TEST(Sequencing, Examples)
{
    EXPECT_TRUE(is_sequencing(z5({1, 4})));
    EXPECT_TRUE(is_sequencing(z5({4, 1})));
    EXPECT_FALSE(is_sequencing(z5({2, 3, 1})));
}

TEST(TWeak, Examples)
{
    EXPECT_FALSE(is_t_weak(z5({1, 2, 4, 3}), 1));
    EXPECT_TRUE(is_t_weak(z5({3}), 1));
    EXPECT_TRUE(is_t_weak(z5({3}), 100));
}

TEST(ZeroIntervals, Examples)
{
    EXPECT_EQ(find_zero_intervals(z5({1, 2, 4, 3}), 4), (std::vector<Interval>{{1, 4}}));
    EXPECT_TRUE(find_zero_intervals(Ordering::from_values(Modulus(100), {1, 2, 3, 4})).empty());
    EXPECT_EQ(find_zero_intervals(Ordering::from_values(Modulus(100), {30, 70})), (std::vector<Interval>{{1, 2}}));
}

TEST(Witness, ReportsFirstViolation)
{
    const auto w = first_violation(z5({2, 3, 1}), Goal::sequencing());
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->kind, Witness::Kind::zero_partial_sum);
    EXPECT_EQ(w->i, 2u);
    const auto v = first_violation(z5({1, 2, 3, 4}), Goal::valid());
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->kind, Witness::Kind::repeated_partial_sum);
    EXPECT_EQ(v->i, 1u);
    EXPECT_EQ(v->j, 3u);
    EXPECT_FALSE(first_violation(z5({1, 4}), Goal::sequencing()).has_value());
}

TEST(Validators, FastAndReferencePathsAgree)
{
    Rng rng(81);
    for (int trial = 0; trial < 5000; ++trial) {
        const Modulus m(2 + rng.below(30));
        const auto o = random_ordering(rng, random_set(rng, m, rng.below(std::min<u64>(m.k(), 9) + 1)));
        const bool valid = is_valid_ordering(o);
        ASSERT_EQ(valid, reference::is_valid_ordering(o));
        ASSERT_EQ(is_sequencing(o), reference::is_sequencing(o));
        // sequencing <=> valid and no zero partial sum before the end
        const auto sums = partial_sums(o);
        bool early_zero = false;
        for (std::size_t i = 0; i + 1 < sums.size(); ++i)
            early_zero = early_zero || sums[i].value == 0;
        ASSERT_EQ(is_sequencing(o), valid && !early_zero);
        for (auto goal : {Goal::valid(), Goal::sequencing(), Goal::tweak(1 + rng.below(4))})
            ASSERT_EQ(satisfies(o, goal), !first_violation(o, goal).has_value());
    }
}

TEST(Validators, TWeakImplications)
{
    Rng rng(82);
    for (int trial = 0; trial < 3000; ++trial) {
        const Modulus m(2 + rng.below(30));
        const auto o = random_ordering(rng, random_set(rng, m, 1 + rng.below(std::min<u64>(m.k(), 8))));
        const auto sums = partial_sums(o);
        const bool all_nonzero = std::none_of(sums.begin(), sums.end(), [](Residue x) { return x.value == 0; });
        if (o.size() >= 2 && is_t_weak(o, o.size())) {
            ASSERT_TRUE(is_valid_ordering(o) && all_nonzero);
        }
        if (is_sequencing(o) && sums.back().value != 0) {
            for (std::size_t t = 1; t <= o.size() + 1; ++t)
                ASSERT_TRUE(is_t_weak(o, t));
        }
        // no zero-sum interval at all <=> partial sums distinct and nonzero
        ASSERT_EQ(find_zero_intervals(o).empty(), is_valid_ordering(o) && all_nonzero);
    }
}
