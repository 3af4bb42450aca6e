#include "support.hpp"

#include <gtest/gtest.h>

using namespace zkseq;
using namespace zkseq::testing;

namespace {

std::vector<Residue> all_parts(const Decomposition& d)
{
    std::vector<Residue> out = d.P;
    out.insert(out.end(), d.N.begin(), d.N.end());
    for (const auto& b : d.blocks)
        out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    return out;
}

/// Two dissociated blocks of large elements plus a few small ones.
GroundSet synthetic(Rng& rng, const Modulus& m, std::size_t block, std::initializer_list<i64> small)
{
    std::vector<u64> xs;
    for (i64 s : small)
        xs.push_back(m.reduce(s).value);
    for (int b = 0; b < 2; ++b) {
        std::vector<Residue> d;
        while (d.size() < block) {
            const Residue x{m.k() / 8 + rng.below(m.k() / 4)};
            d.push_back(x);
            if (!is_dissociated(m, d) || std::find(xs.begin(), xs.end(), x.value) != xs.end())
                d.pop_back();
        }
        for (Residue x : d)
            xs.push_back(x.value);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return GroundSet::from_values(m, xs);
}

} // namespace

TEST(ComputeR, TweakExamples)
{
    EXPECT_EQ(block_scale_tweak_from_log(16.0L, 1.0), 4u);
    EXPECT_EQ(compute_R_tweak(2, 1.0), 1u);
    EXPECT_EQ(compute_R_tweak(101, 0.5), 2u);
    EXPECT_EQ(compute_R_tweak(8'886'109, 1.0), 4u);  // ln p just below 16
}

TEST(ComputeR, ClassicalExamples)
{
    EXPECT_EQ(block_scale_classical_from_logs(16.0L, 2.0L, 1.0), 8u);
    EXPECT_EQ(block_scale_classical_from_logs(16.0L, 8.0L, 1.0), 4u);
    EXPECT_EQ(block_scale_classical_from_logs(9.0L, 3.0L, 1.0), 3u);
    EXPECT_EQ(compute_R_classical(101, 1, 1.0), 1u);
    EXPECT_EQ(compute_R_classical(2, 2, 1.0), 1u);
}

TEST(Decompose, AlreadyRectifiedPositiveSet)
{
    const auto a = GroundSet::from_values(Modulus(101), {1, 2, 3});
    const auto r = decompose(a, 4);
    EXPECT_EQ(r.decomposition.s(), 0u);
    EXPECT_EQ(r.decomposition.lambda.value, 1u);
    EXPECT_EQ(r.decomposition.P, a.elements());
    EXPECT_TRUE(r.decomposition.N.empty());
    EXPECT_TRUE(r.report.passed());
}

TEST(Decompose, PlusMinusOne)
{
    const Modulus m(1'000'003);
    const auto r = decompose(GroundSet::from_values(m, {1, m.k() - 1}), 4);
    EXPECT_EQ(r.decomposition.s(), 0u);
    EXPECT_EQ(r.decomposition.P, (std::vector<Residue>{Residue{1}}));
    EXPECT_EQ(r.decomposition.N, (std::vector<Residue>{Residue{m.k() - 1}}));
}

TEST(Decompose, SyntheticTwoBlocks)
{
    Rng rng(41);
    const Modulus m(1'000'003);
    const auto a = synthetic(rng, m, 4, {1, 2});
    const auto r = decompose(a, 4, DecomposeConfig{2.0, 64, 7, false});
    const auto& d = r.decomposition;
    EXPECT_EQ(d.s(), 2u);
    const auto& rep = r.report;
    EXPECT_TRUE(rep.lambda_unit && rep.partition && rep.delta_consistent);
    EXPECT_TRUE(rep.pn_nonempty && rep.blocks_dissociated && rep.block_sizes && rep.delta_excluded);
    EXPECT_FALSE(rep.endpoints_attainable);
    EXPECT_FALSE(rep.endpoints_dissociated);
    // With two blocks, delta - sum(D_1) - sum(D_2) = 0 is a vanishing combination.
    std::vector<Residue> pool = d.blocks[0];
    pool.insert(pool.end(), d.blocks[1].begin(), d.blocks[1].end());
    pool.push_back(d.delta);
    EXPECT_FALSE(dissociated_by_signs(m, pool));
}

TEST(Decompose, KeepsPNNonemptyWhenBlocksExhaustTheSet)
{
    const Modulus m(1'000'003);
    const GroundSet a(m, powers(3, 5));
    const auto whole = decompose(a, 5, DecomposeConfig{2.0, 4, 1, false});
    EXPECT_EQ(whole.decomposition.s(), 0u);
    EXPECT_EQ(all_parts(whole.decomposition), dilate(a, whole.decomposition.lambda).elements());

    const auto split = decompose(a, 4, DecomposeConfig{2.0, 4, 1, false});
    EXPECT_EQ(split.decomposition.s(), 1u);
    EXPECT_EQ(split.decomposition.P.size() + split.decomposition.N.size(), 1u);
}

TEST(Decompose, PartitionAndDeltaProperty)
{
    Rng rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const Modulus m(random_prime(rng) * 10007);
        const auto a = rng.below(2) ? synthetic(rng, Modulus(1'000'003), 4 + rng.below(3), {1, 2, -3})
                                    : random_nonzero_set(rng, m, 1 + rng.below(15));
        const auto r = decompose(a, 4, DecomposeConfig{2.0, 16, static_cast<u64>(trial), false});
        const auto& d = r.decomposition;
        ASSERT_EQ(all_parts(d), dilate(a, d.lambda).elements());
        ASSERT_EQ(d.delta, d.recomputed_delta());
        for (const auto& b : d.blocks)
            ASSERT_TRUE(is_dissociated(d.modulus, b));
        ASSERT_EQ(validate_decomposition(d, a).passed(), r.report.passed());
    }
}

TEST(Decompose, DeterministicGivenSeed)
{
    Rng rng(43);
    const auto a = synthetic(rng, Modulus(1'000'003), 6, {1, 2});
    const auto x = decompose(a, 6, DecomposeConfig{2.0, 64, 5, false});
    const auto y = decompose(a, 6, DecomposeConfig{2.0, 64, 5, false});
    EXPECT_EQ(x.decomposition.blocks, y.decomposition.blocks);
    EXPECT_EQ(x.decomposition.lambda, y.decomposition.lambda);
}

TEST(Validate, DeltaZeroFailsExclusion)
{
    const Modulus m(101);
    Decomposition d{m, Residue{1}, {Residue{1}}, {}, {{Residue{5}, Residue{96}}}, Residue{0}, 2, 2.0, "identity"};
    const auto a = GroundSet::from_values(m, {1, 5, 96});
    const auto r = validate_decomposition(d, a);
    EXPECT_FALSE(r.delta_excluded);
    EXPECT_FALSE(r.passed());
}

TEST(Validate, OppositePairFailsEndpoints)
{
    const Modulus m(1'000'003);
    const std::vector<Residue> d1{Residue{1000}, Residue{5000}, Residue{30000}, Residue{200000}};
    const std::vector<Residue> mid{Residue{3}, Residue{70}, Residue{900}, Residue{11000}};
    const std::vector<Residue> ds{m.neg(Residue{1000}), Residue{7000}, Residue{40000}, Residue{170000}};
    Decomposition d{m, Residue{1}, {Residue{1}}, {}, {d1, mid, ds}, Residue{0}, 4, 2.0, "identity"};
    d.delta = d.recomputed_delta();
    std::vector<u64> vals{1};
    for (const auto* b : {&d1, &mid, &ds})
        for (Residue x : *b)
            vals.push_back(x.value);
    const auto r = validate_decomposition(d, GroundSet::from_values(m, vals));
    EXPECT_TRUE(r.endpoints_attainable);
    EXPECT_FALSE(r.endpoints_dissociated);
    EXPECT_FALSE(r.passed());
}

TEST(Validate, WrongLambdaBreaksPartition)
{
    const Modulus m(101);
    Decomposition d{m, Residue{2}, {Residue{1}}, {}, {}, Residue{0}, 1, 2.0, "identity"};
    EXPECT_FALSE(validate_decomposition(d, GroundSet::from_values(m, {1})).partition);
}
