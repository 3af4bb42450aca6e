#pragma once

// Seeded Monte Carlo estimates of the probabilities the construction relies on,
// next to their theoretical bounds.

#include "zkseq/dissociation.hpp"
#include "zkseq/error.hpp"
#include "zkseq/pipeline.hpp"
#include "zkseq/rng.hpp"
#include "zkseq/verify.hpp"
#include "zkseq/zk.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace zkseq {

inline constexpr std::size_t kMcShards = 16;

using BigInt = boost::multiprecision::cpp_int;

inline BigInt binomial_exact(unsigned n, unsigned k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    BigInt out = 1;
    for (unsigned i = 1; i <= k; ++i)
        out = out * (n - k + i) / i;
    return out;
}

struct Estimate {
    u64 successes = 0;
    u64 trials = 0;

    [[nodiscard]] double value() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials); }

    [[nodiscard]] double standard_error() const
    {
        if (trials == 0)
            return 0.0;
        const double q = value();
        return std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
    }
};

enum class Verdict { pass, fail, info_below, info_above };

constexpr std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::info_below: return "report:below";
    case Verdict::info_above: return "report:above";
    }
    return "?";
}

/// `value` (with its standard error, if sampled) against `bound`.
struct Comparison {
    std::string name;
    double value = 0.0;
    std::optional<double> standard_error;
    double bound = 0.0;
    Verdict verdict = Verdict::pass;
};

struct ExperimentReport {
    std::string experiment;
    u64 seed = 0;
    u64 trials = 0;
    std::string rng{Rng::algorithm};
    std::map<std::string, Estimate> estimates;
    std::map<std::string, double> bounds;
    std::vector<Comparison> comparisons;
    std::vector<std::string> notes;

    [[nodiscard]] bool passed() const
    {
        return std::none_of(comparisons.begin(), comparisons.end(), [](const Comparison& c) { return c.verdict == Verdict::fail; });
    }

    /// Hard check: value <= bound + slack * stderr.
    void require_at_most(std::string name, const Estimate& e, double bound, double slack)
    {
        const bool ok = e.value() <= bound + slack * e.standard_error();
        comparisons.push_back({std::move(name), e.value(), e.standard_error(), bound, ok ? Verdict::pass : Verdict::fail});
    }

    /// Informational: is value at least `bound`?
    void report_at_least(std::string name, const Estimate& e, double bound)
    {
        comparisons.push_back({std::move(name), e.value(), e.standard_error(), bound,
                               e.value() >= bound ? Verdict::info_above : Verdict::info_below});
    }
};

inline void write_report_csv(std::ostream& out, const std::vector<ExperimentReport>& reports)
{
    out << "experiment,seed,trials,estimate,stderr,bound,verdict\n";
    for (const auto& r : reports)
        for (const auto& c : r.comparisons) {
            out << r.experiment << '/' << c.name << ',' << r.seed << ',' << r.trials << ',' << c.value << ',';
            if (c.standard_error)
                out << *c.standard_error;
            out << ',' << c.bound << ',' << to_string(c.verdict) << '\n';
        }
}

namespace detail {

/// Runs `body(rng, count)` on kMcShards shards with derived seeds and sums the
/// returned per-target counts. The split of trials over shards is fixed, so the
/// result depends only on (seed, trials).
template <class Body>
std::vector<u64> sharded_counts(u64 seed, u64 trials, std::size_t width, Body body)
{
    std::vector<std::vector<u64>> partial(kMcShards, std::vector<u64>(width, 0));
    const Rng root(seed);
    {
        std::vector<std::jthread> pool;
        for (std::size_t s = 0; s < kMcShards; ++s) {
            const u64 count = trials / kMcShards + (s < trials % kMcShards ? 1 : 0);
            pool.emplace_back([&, s, count] {
                Rng rng = root.split(s);
                partial[s] = body(rng, count);
            });
        }
    }
    std::vector<u64> total(width, 0);
    for (const auto& p : partial)
        for (std::size_t i = 0; i < width; ++i)
            total[i] += p[i];
    return total;
}

inline void check_quarters(std::span<const Residue> d, const std::vector<std::size_t>& I)
{
    if (d.empty() || d.size() % 4 != 0)
        throw error(errc::invalid_argument, "|D| must be a positive multiple of 4");
    if (I.empty() || I.size() >= 4)
        throw error(errc::invalid_argument, "I must be a proper nonempty subset of {1,2,3,4}");
    for (std::size_t i : I)
        if (i < 1 || i > 4)
            throw error(errc::invalid_argument, "I must be a subset of {1,2,3,4}");
    if (std::set<std::size_t>(I.begin(), I.end()).size() != I.size())
        throw error(errc::invalid_argument, "I has repeated quarters");
}

} // namespace detail

/// P(sum over quarters i in I of a uniform 4-partition of D equals x), for each x in
/// `targets`, from one shared trial stream.
inline ExperimentReport estimate_anticoncentration(const Modulus& m, std::span<const Residue> d,
                                                   const std::vector<std::size_t>& I,
                                                   const std::vector<Residue>& targets, u64 trials, u64 seed)
{
    detail::check_quarters(d, I);
    if (d.size() <= kDissociationEnumerationLimit && !is_dissociated(m, d))
        throw error(errc::invalid_argument, "D is not dissociated");
    const std::size_t q = d.size() / 4;
    std::vector<bool> in_I(4, false);
    for (std::size_t i : I)
        in_I[i - 1] = true;
    const std::vector<Residue> base(d.begin(), d.end());

    const auto counts = detail::sharded_counts(seed, trials, targets.size(), [&](Rng& rng, u64 count) {
        std::vector<u64> hits(targets.size(), 0);
        std::vector<Residue> perm = base;
        for (u64 n = 0; n < count; ++n) {
            rng.shuffle(perm);
            Residue sum{0};
            for (std::size_t pos = 0; pos < perm.size(); ++pos)
                if (in_I[pos / q])
                    sum = m.add(sum, perm[pos]);
            for (std::size_t i = 0; i < targets.size(); ++i)
                hits[i] += sum == targets[i] ? 1 : 0;
        }
        return hits;
    });

    ExperimentReport r;
    r.experiment = "anticoncentration";
    r.seed = seed;
    r.trials = trials;
    const auto n = static_cast<unsigned>(d.size());
    const double bound = 1.0 / binomial_exact(n, static_cast<unsigned>(q * I.size())).convert_to<double>();
    r.bounds["inverse_binomial_I"] = bound;
    r.bounds["inverse_binomial_quarter"] = 1.0 / binomial_exact(n, static_cast<unsigned>(q)).convert_to<double>();
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const std::string name = "x=" + std::to_string(targets[i].value);
        r.estimates[name] = Estimate{counts[i], trials};
        r.require_at_most(name, r.estimates[name], bound, 5.0);
    }
    return r;
}

inline ExperimentReport estimate_anticoncentration(const Modulus& m, std::span<const Residue> d,
                                                   const std::vector<std::size_t>& I, Residue x, u64 trials, u64 seed)
{
    return estimate_anticoncentration(m, d, I, std::vector<Residue>{x}, trials, seed);
}

/// Fraction of uniform orderings of `block` whose induced first quarter (first end)
/// or last quarter (last end) avoids `forbidden` over its first K sums.
inline ExperimentReport estimate_acceptability(const Modulus& m, std::span<const Residue> block, BlockEnd end,
                                               const ResidueSet& forbidden, std::size_t K, u64 trials, u64 seed)
{
    const std::vector<Residue> base(block.begin(), block.end());
    const std::size_t q0 = detail::quarter_size(base.size(), 0);
    const std::size_t q3 = detail::quarter_size(base.size(), 3);
    const auto counts = detail::sharded_counts(seed, trials, 1, [&](Rng& rng, u64 count) {
        std::vector<u64> hits(1, 0);
        std::vector<Residue> perm = base;
        for (u64 n = 0; n < count; ++n) {
            rng.shuffle(perm);
            const std::span<const Residue> all(perm);
            const auto t = end == BlockEnd::first ? all.first(q0) : all.last(q3);
            hits[0] += is_acceptable_against(m, t, end, K, forbidden) ? 1 : 0;
        }
        return hits;
    });
    ExperimentReport r;
    r.experiment = end == BlockEnd::first ? "acceptability/first" : "acceptability/last";
    r.seed = seed;
    r.trials = trials;
    r.estimates["acceptable"] = Estimate{counts[0], trials};
    r.bounds["asymptotic"] = 0.99;
    r.report_at_least("acceptable", r.estimates["acceptable"], 0.99);
    return r;
}

/// Both ends of a decomposition with its P/N orderings.
inline ExperimentReport estimate_acceptability(const Decomposition& d, const PNOrderings& pn, std::size_t K,
                                               u64 trials, u64 seed)
{
    if (d.s() == 0)
        throw error(errc::invalid_argument, "acceptability needs at least one block");
    const Modulus& m = d.modulus;
    const auto ff = acceptability_forbidden(m, BlockEnd::first, pn.p_order, pn.n_order, d.delta);
    const auto fl = acceptability_forbidden(m, BlockEnd::last, pn.p_order, pn.n_order, d.delta);
    auto first = estimate_acceptability(m, d.blocks.front(), BlockEnd::first, ff, K, trials, Rng::derive_seed(seed, 0));
    auto last = estimate_acceptability(m, d.blocks.back(), BlockEnd::last, fl, K, trials, Rng::derive_seed(seed, 1));
    ExperimentReport r;
    r.experiment = "acceptability";
    r.seed = seed;
    r.trials = trials;
    r.estimates["first"] = first.estimates["acceptable"];
    r.estimates["last"] = last.estimates["acceptable"];
    r.bounds["asymptotic"] = 0.99;
    r.report_at_least("first", r.estimates["first"], 0.99);
    r.report_at_least("last", r.estimates["last"], 0.99);
    r.notes.emplace_back("0.99 holds only asymptotically; comparison is informational");
    return r;
}

/// Fraction of independent uniform orderings of (left, right) that are boundary-safe.
inline ExperimentReport estimate_permissible_density(const Modulus& m, std::span<const Residue> left,
                                                     std::span<const Residue> right, std::size_t K, u64 trials, u64 seed)
{
    const std::vector<Residue> l0(left.begin(), left.end());
    const std::vector<Residue> r0(right.begin(), right.end());
    const auto counts = detail::sharded_counts(seed, trials, 1, [&](Rng& rng, u64 count) {
        std::vector<u64> hits(1, 0);
        std::vector<Residue> l = l0;
        std::vector<Residue> rr = r0;
        for (u64 n = 0; n < count; ++n) {
            rng.shuffle(l);
            rng.shuffle(rr);
            hits[0] += is_boundary_safe(m, l, rr, K) ? 1 : 0;
        }
        return hits;
    });
    ExperimentReport r;
    r.experiment = "permissible_density";
    r.seed = seed;
    r.trials = trials;
    r.estimates["boundary_safe"] = Estimate{counts[0], trials};
    r.report_at_least("boundary_safe", r.estimates["boundary_safe"], 0.99);
    return r;
}

/// Vanishing rates of Type I and Type II intervals of length <= max_len over plans
/// drawn exactly as the pipeline draws them (acceptability and boundary safety enforced).
/// "any_*" counts plans with at least one vanishing interval of that type; "mean_*"
/// pools all (plan, interval) pairs; "max_*" is the worst single interval.
inline ExperimentReport estimate_interval_events(const GroundSet& a, const PipelineConfig& config, Mode mode,
                                                 std::size_t max_len, u64 trials, u64 seed)
{
    a.require_nonzero();
    const auto prep = detail::prepare(a, config, mode);
    if (prep.decomposition.s() == 0)
        throw error(errc::invalid_argument, "interval events need at least one block");
    detail::BlockSampler sampler(prep, config.rejection_cap, Rng(seed, 4));
    sampler.sample_all();
    auto f = assemble(prep.pn.p_order, prep.pn.n_order, sampler.orderings(), sampler.plan());
    const std::size_t n = f.ordering.size();
    const std::size_t len = std::min(max_len, n - 1);

    std::vector<Interval> intervals;
    std::vector<IntervalType> types;
    for (std::size_t lo = 1; lo <= n; ++lo)
        for (std::size_t hi = lo; hi <= n && hi - lo + 1 <= len; ++hi) {
            intervals.push_back({lo, hi});
            types.push_back(classify_interval({lo, hi}, sampler.plan(), f.provenance));
        }
    std::vector<u64> hits(intervals.size(), 0);
    u64 any_I = 0;
    u64 any_II = 0;
    for (u64 trial = 0; trial < trials; ++trial) {
        if (trial > 0) {
            sampler.sample_all();
            f = assemble(prep.pn.p_order, prep.pn.n_order, sampler.orderings(), sampler.plan());
        }
        bool seen_I = false;
        bool seen_II = false;
        const auto sums = partial_sums(f.ordering);
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            const Residue before = intervals[i].lo == 1 ? Residue{0} : sums[intervals[i].lo - 2];
            if (before == sums[intervals[i].hi - 1]) {
                ++hits[i];
                (types[i] == IntervalType::type_I ? seen_I : seen_II) = true;
            }
        }
        any_I += seen_I ? 1 : 0;
        any_II += seen_II ? 1 : 0;
    }

    ExperimentReport r;
    r.experiment = "interval_events";
    r.seed = seed;
    r.trials = trials;
    r.estimates["any_type_I"] = Estimate{any_I, trials};
    r.estimates["any_type_II"] = Estimate{any_II, trials};
    for (auto type : {IntervalType::type_I, IntervalType::type_II}) {
        const std::string tag = type == IntervalType::type_I ? "type_I" : "type_II";
        Estimate pooled;
        Estimate worst{0, trials};
        for (std::size_t i = 0; i < intervals.size(); ++i)
            if (types[i] == type) {
                pooled.successes += hits[i];
                pooled.trials += trials;
                worst.successes = std::max(worst.successes, hits[i]);
            }
        r.estimates["mean_" + tag] = pooled;
        r.estimates["max_" + tag] = worst;
    }
    r.notes.emplace_back("Type I rate ~ exp(-Theta(R)), Type II rate ~ exp(-Theta(K log R)); constants unset");
    r.notes.emplace_back("R=" + std::to_string(prep.R) + " K=" + std::to_string(prep.K) + " intervals=" +
                         std::to_string(intervals.size()));
    return r;
}

/// e * P * D <= 1, with D given.
inline ExperimentReport lll_budget_report(double p_hat, std::size_t degree)
{
    if (!(p_hat >= 0.0 && p_hat <= 1.0))
        throw error(errc::invalid_argument, "P must lie in [0, 1]");
    ExperimentReport r;
    r.experiment = "lll_budget";
    const double value = std::numbers::e * p_hat * static_cast<double>(degree);
    r.bounds["ePD"] = 1.0;
    r.comparisons.push_back({"ePD", value, std::nullopt, 1.0, value <= 1.0 ? Verdict::pass : Verdict::fail});
    r.notes.push_back("P=" + std::to_string(p_hat) + " D=" + std::to_string(degree));
    return r;
}

/// Same, with D computed from the plan.
inline ExperimentReport lll_budget_report(const BlockPlan& plan, std::size_t t, double p_hat, std::size_t p_len = 0,
                                          std::size_t n_len = 0)
{
    auto r = lll_budget_report(p_hat, lll_dependency_degree(plan, t, p_len, n_len));
    r.seed = plan.seed;
    return r;
}

/// |A|^2 P_II + |A|^2 P_I against 1 (informational).
inline ExperimentReport union_bound_report(std::size_t a_size, std::size_t R, double p_type_I, double p_type_II)
{
    ExperimentReport r;
    r.experiment = "union_bound";
    const double a2 = static_cast<double>(a_size) * static_cast<double>(a_size);
    const double value = a2 * p_type_II + a2 * p_type_I;
    r.bounds["union"] = 1.0;
    r.comparisons.push_back({"union", value, std::nullopt, 1.0, value < 1.0 ? Verdict::info_below : Verdict::info_above});
    r.notes.push_back("|A|=" + std::to_string(a_size) + " R=" + std::to_string(R));
    r.notes.emplace_back("functional form |A|^2 exp(-Theta(R^(1/2) log R)) + |A|^2 exp(-Theta(R)); constants unset");
    return r;
}

} // namespace zkseq
