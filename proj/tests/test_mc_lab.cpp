#include "support.hpp"

#include "zkseq/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace zkseq;
using namespace zkseq::testing;

namespace {

const Modulus kPow13(1'594'323);  // 3^13

} // namespace

TEST(Binomial, Constants)
{
    EXPECT_EQ(binomial_exact(12, 3), 220);
    EXPECT_EQ(binomial_exact(16, 4), 1820);
    EXPECT_EQ(binomial_exact(5, 7), 0);
    EXPECT_EQ(binomial_exact(100, 50), BigInt("100891344545564193334812497256"));
}

TEST(Anticoncentration, ExactProbabilityOnPowersOfThree)
{
    const auto d = powers(3, 12);
    const auto r = estimate_anticoncentration(kPow13, d, {1}, Residue{13}, 200'000, 1);
    const auto& e = r.estimates.at("x=13");
    EXPECT_NEAR(e.value(), 1.0 / 220.0, 5 * std::sqrt((1.0 / 220) * (219.0 / 220) / 200'000));
    EXPECT_DOUBLE_EQ(r.bounds.at("inverse_binomial_I"), 1.0 / 220.0);
    EXPECT_TRUE(r.passed());
}

TEST(Anticoncentration, TwoQuartersUseTheLargerBinomial)
{
    const auto d = powers(3, 12);
    const Residue x{1 + 3 + 9 + 27 + 81 + 243};
    const auto r = estimate_anticoncentration(kPow13, d, {2, 4}, x, 300'000, 2);
    EXPECT_DOUBLE_EQ(r.bounds.at("inverse_binomial_I"), 1.0 / 924.0);
    EXPECT_NEAR(r.estimates.at("x=364").value(), 1.0 / 924.0, 5 * std::sqrt((1.0 / 924) / 300'000));
}

TEST(Anticoncentration, UnrepresentableTargetIsZero)
{
    const auto r = estimate_anticoncentration(kPow13, powers(3, 12), {1}, Residue{2}, 20'000, 3);
    EXPECT_EQ(r.estimates.at("x=2").successes, 0u);
}

TEST(Anticoncentration, Preconditions)
{
    const auto d = powers(3, 12);
    EXPECT_THROW((void)estimate_anticoncentration(kPow13, d, {1, 2, 3, 4}, Residue{1}, 10, 0), error);
    EXPECT_THROW((void)estimate_anticoncentration(kPow13, d, {}, Residue{1}, 10, 0), error);
    EXPECT_THROW((void)estimate_anticoncentration(kPow13, powers(3, 10), {1}, Residue{1}, 10, 0), error);
    const std::vector<Residue> bad{Residue{1}, Residue{2}, Residue{3}, Residue{4}};
    EXPECT_THROW((void)estimate_anticoncentration(kPow13, bad, {1}, Residue{1}, 10, 0), error);
}

TEST(Anticoncentration, Reproducible)
{
    const auto d = powers(3, 12);
    const std::vector<Residue> xs{Residue{13}, Residue{1 + 3 + 27}};
    const auto a = estimate_anticoncentration(kPow13, d, {1}, xs, 50'000, 9);
    const auto b = estimate_anticoncentration(kPow13, d, {1}, xs, 50'000, 9);
    for (const auto& [name, e] : a.estimates)
        EXPECT_EQ(e.successes, b.estimates.at(name).successes);
}

TEST(Acceptability, TrivialFixtures)
{
    const Modulus m(1'000'003);
    const auto d = powers(3, 8);
    const auto all = estimate_acceptability(m, d, BlockEnd::first, ResidueSet{}, 2, 5000, 1);
    EXPECT_EQ(all.estimates.at("acceptable").value(), 1.0);
    const auto none = estimate_acceptability(m, d, BlockEnd::last, ResidueSet(d), 2, 5000, 1);
    EXPECT_EQ(none.estimates.at("acceptable").value(), 0.0);
    EXPECT_TRUE(none.passed());  // the 0.99 comparison is informational
}

TEST(Acceptability, PlantedFixtureIsReported)
{
    const auto inst = planted_instance(1);
    PipelineConfig cfg;
    cfg.R = 8;
    const auto prep = detail::prepare(inst.set, cfg, Mode::tweak);
    const auto r = estimate_acceptability(prep.decomposition, prep.pn, prep.K, 20'000, 4);
    EXPECT_GT(r.estimates.at("first").value(), 0.5);
    EXPECT_EQ(r.comparisons.size(), 2u);
    EXPECT_NE(r.comparisons[0].verdict, Verdict::fail);
}

TEST(PermissibleDensity, TrivialFixtures)
{
    const Modulus m(101);
    const std::vector<Residue> x{Residue{5}}, minus_x{Residue{96}};
    EXPECT_EQ(estimate_permissible_density(m, x, minus_x, 1, 1000, 1).estimates.at("boundary_safe").value(), 0.0);
    const std::vector<Residue> l{Residue{1}, Residue{2}}, r{Residue{3}, Residue{4}};
    EXPECT_EQ(estimate_permissible_density(m, l, r, 2, 1000, 1).estimates.at("boundary_safe").value(), 1.0);
}

TEST(LllBudget, Arithmetic)
{
    const auto a = lll_budget_report(0.01, 30);
    EXPECT_NEAR(a.comparisons[0].value, 0.8155, 1e-4);
    EXPECT_EQ(a.comparisons[0].verdict, Verdict::pass);
    const auto b = lll_budget_report(0.1, 10);
    EXPECT_NEAR(b.comparisons[0].value, 2.718, 1e-3);
    EXPECT_EQ(b.comparisons[0].verdict, Verdict::fail);
    EXPECT_EQ(lll_budget_report(0.0, 1000).comparisons[0].verdict, Verdict::pass);
    EXPECT_THROW((void)lll_budget_report(1.5, 1), error);
}

TEST(UnionBound, Arithmetic)
{
    EXPECT_EQ(union_bound_report(10, 4, 0.0, 0.0).comparisons[0].value, 0.0);
    EXPECT_NEAR(union_bound_report(10, 4, 1e-5, 1e-4).comparisons[0].value, 0.011, 1e-12);
}

TEST(IntervalEvents, ReproducibleAndConsistent)
{
    const auto inst = planted_instance(2);
    PipelineConfig cfg;
    cfg.R = 8;
    const auto a = estimate_interval_events(inst.set, cfg, Mode::classical, 8, 300, 5);
    const auto b = estimate_interval_events(inst.set, cfg, Mode::classical, 8, 300, 5);
    for (const auto& [name, e] : a.estimates) {
        EXPECT_EQ(e.successes, b.estimates.at(name).successes) << name;
        EXPECT_LE(e.successes, e.trials);
    }
    EXPECT_LE(a.estimates.at("max_type_I").successes, a.estimates.at("any_type_I").successes);
}

TEST(Report, CsvAndJson)
{
    const auto r = lll_budget_report(0.01, 30);
    std::ostringstream csv;
    write_report_csv(csv, {r});
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "experiment,seed,trials,estimate,stderr,bound,verdict");
    EXPECT_NE(csv.str().find("lll_budget/ePD"), std::string::npos);
    const auto j = to_json(r);
    EXPECT_EQ(j["rng"], std::string(Rng::algorithm));
    EXPECT_EQ(j["comparisons"][0]["verdict"], "pass");
}

TEST(Estimate, StandardError)
{
    const Estimate e{25, 100};
    EXPECT_DOUBLE_EQ(e.value(), 0.25);
    EXPECT_DOUBLE_EQ(e.standard_error(), std::sqrt(0.25 * 0.75 / 100));
}
