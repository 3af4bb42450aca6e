#pragma once

// Decomposition lambda*A = P + N + D_1 + ... + D_s and its validator.

#include "zkseq/dissociation.hpp"
#include "zkseq/error.hpp"
#include "zkseq/rectification.hpp"
#include "zkseq/rng.hpp"
#include "zkseq/zk.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace zkseq {

/// Quarter-splitting needs every block to have at least four elements.
inline constexpr std::size_t kMinBlockSize = 4;

namespace detail {

inline std::size_t ceil_at_least_one(long double x)
{
    const long double c = std::ceil(x);
    return c < 1.0L ? 1 : static_cast<std::size_t>(c);
}

} // namespace detail

/// ceil(c1 * sqrt(log_p)), from a natural log already taken.
inline std::size_t block_scale_tweak_from_log(long double log_p, double c1)
{
    return detail::ceil_at_least_one(c1 * std::sqrt(log_p));
}

/// ceil(c1 * max(sqrt(log_p), log_p / log_a)).
inline std::size_t block_scale_classical_from_logs(long double log_p, long double log_a, double c1)
{
    return detail::ceil_at_least_one(c1 * std::max(std::sqrt(log_p), log_p / log_a));
}

/// R = ceil(c1 (ln p)^{1/2}), at least 1.
inline std::size_t compute_R_tweak(u64 p, double c1)
{
    if (p < 2)
        throw error(errc::invalid_argument, "p must be at least 2");
    return block_scale_tweak_from_log(std::log(static_cast<long double>(p)), c1);
}

/// R = ceil(c1 max((ln p)^{1/2}, ln p / ln |A|)), at least 1; |A| < 2 is degenerate and gives 1.
inline std::size_t compute_R_classical(u64 p, std::size_t a_size, double c1)
{
    if (p < 2)
        throw error(errc::invalid_argument, "p must be at least 2");
    if (a_size < 2)
        return 1;
    return block_scale_classical_from_logs(std::log(static_cast<long double>(p)),
                                           std::log(static_cast<long double>(a_size)), c1);
}

struct Decomposition {
    Modulus modulus;
    Residue lambda{1};
    std::vector<Residue> P;
    std::vector<Residue> N;
    std::vector<std::vector<Residue>> blocks;  ///< D_1 .. D_s
    Residue delta{0};
    std::size_t R = 1;
    double tolerance = 2.0;  ///< blocks must have size in [R/C, C*R]
    std::string rectification = "identity";

    [[nodiscard]] std::size_t s() const noexcept { return blocks.size(); }

    [[nodiscard]] Residue recomputed_delta() const
    {
        Residue total{0};
        for (const auto& b : blocks)
            total = modulus.add(total, modulus.sum(b));
        return total;
    }
};

/// One flag per checked clause. Clauses (ii)-(iv) hold vacuously when s = 0.
struct DecompositionReport {
    bool lambda_unit = false;
    bool partition = false;          ///< parts disjoint, union = lambda*A
    bool delta_consistent = false;   ///< stored delta == recomputed
    bool p_interval = false;         ///< (i) P in (0, k/(4|P u N|))
    bool n_interval = false;         ///< (i) N in (-k/(4|P u N|), 0)
    bool delta_interval = false;     ///< (i) delta in (-k/4, k/4)
    bool pn_nonempty = false;        ///< (ii)
    bool blocks_dissociated = false; ///< (ii)
    bool block_sizes = false;        ///< (ii) |D_j| in [R/C, C R]
    bool delta_excluded = false;     ///< (iii)
    bool endpoints_dissociated = false; ///< (iv)
    /// D_1 u D_s u {delta} always has the vanishing combination
    /// delta - sum(D_1) - sum(D_s) when s <= 2, so (iv) cannot hold there.
    bool endpoints_attainable = true;

    [[nodiscard]] bool interval_clauses() const { return p_interval && n_interval && delta_interval; }

    [[nodiscard]] bool passed() const
    {
        return lambda_unit && partition && delta_consistent && interval_clauses() && pn_nonempty &&
               blocks_dissociated && block_sizes && delta_excluded && endpoints_dissociated;
    }

    [[nodiscard]] std::vector<std::string> failures() const
    {
        std::vector<std::string> out;
        auto note = [&](bool ok, const char* name) {
            if (!ok)
                out.emplace_back(name);
        };
        note(lambda_unit, "lambda-unit");
        note(partition, "partition");
        note(delta_consistent, "delta-consistent");
        note(p_interval, "(i)P-interval");
        note(n_interval, "(i)N-interval");
        note(delta_interval, "(i)delta-interval");
        note(pn_nonempty, "(ii)PN-nonempty");
        note(blocks_dissociated, "(ii)blocks-dissociated");
        note(block_sizes, "(ii)block-sizes");
        note(delta_excluded, "(iii)delta-excluded");
        note(endpoints_dissociated, endpoints_attainable ? "(iv)endpoints-dissociated"
                                                         : "(iv)endpoints-dissociated[unattainable:s<=2]");
        return out;
    }
};

namespace detail {

inline bool endpoints_dissociated(const Decomposition& d, Residue delta)
{
    if (d.s() == 0)
        return true;
    std::vector<Residue> pool = d.blocks.front();
    if (d.s() > 1)
        pool.insert(pool.end(), d.blocks.back().begin(), d.blocks.back().end());
    pool.push_back(delta);
    std::sort(pool.begin(), pool.end());
    if (std::adjacent_find(pool.begin(), pool.end()) != pool.end())
        return false;
    if (pool.size() > kDissociationEnumerationLimit)
        return false;
    return is_dissociated(d.modulus, pool);
}

inline bool delta_excluded(const Decomposition& d, Residue delta)
{
    const Modulus& m = d.modulus;
    if (delta.value == 0)
        return false;
    const Residue minus = m.neg(delta);
    for (Residue x : d.P)
        if (x == minus)
            return false;
    for (Residue x : d.N)
        if (x == minus)
            return false;
    if (!d.N.empty() && delta == m.neg(m.sum(d.P)))
        return false;
    if (!d.P.empty() && delta == m.neg(m.sum(d.N)))
        return false;
    return true;
}

} // namespace detail

/// Checks every clause of the decomposition against the original set A.
inline DecompositionReport validate_decomposition(const Decomposition& d, const GroundSet& a)
{
    const Modulus& m = d.modulus;
    DecompositionReport r;
    r.lambda_unit = d.lambda.value < m.k() && m.is_unit(d.lambda);

    if (r.lambda_unit && m == a.modulus()) {
        std::vector<Residue> parts = d.P;
        parts.insert(parts.end(), d.N.begin(), d.N.end());
        for (const auto& b : d.blocks)
            parts.insert(parts.end(), b.begin(), b.end());
        std::sort(parts.begin(), parts.end());
        r.partition = parts == dilate(a, d.lambda).elements();
    }

    const Residue delta = d.recomputed_delta();
    r.delta_consistent = delta == d.delta;

    const u128 pn = d.P.size() + d.N.size();
    r.p_interval = std::all_of(d.P.begin(), d.P.end(), [&](Residue x) {
        const i64 v = m.signed_rep(x);
        return v > 0 && static_cast<u128>(v) * 4 * pn < m.k();
    });
    r.n_interval = std::all_of(d.N.begin(), d.N.end(), [&](Residue x) {
        const i64 v = m.signed_rep(x);
        return v < 0 && static_cast<u128>(-v) * 4 * pn < m.k();
    });
    r.delta_interval = static_cast<u128>(m.magnitude(delta)) * 4 < m.k() && (d.s() > 0 || delta.value == 0);

    if (d.s() == 0) {
        r.pn_nonempty = r.blocks_dissociated = r.block_sizes = r.delta_excluded = r.endpoints_dissociated = true;
        return r;
    }

    r.pn_nonempty = pn > 0;
    r.blocks_dissociated = std::all_of(d.blocks.begin(), d.blocks.end(), [&](const std::vector<Residue>& b) {
        return b.size() <= kDissociationEnumerationLimit && is_dissociated(m, b);
    });
    r.block_sizes = std::all_of(d.blocks.begin(), d.blocks.end(), [&](const std::vector<Residue>& b) {
        const double size = static_cast<double>(b.size());
        return size * d.tolerance >= static_cast<double>(d.R) && size <= d.tolerance * static_cast<double>(d.R);
    });
    r.delta_excluded = detail::delta_excluded(d, delta);
    r.endpoints_attainable = d.s() >= 3;
    r.endpoints_dissociated = detail::endpoints_dissociated(d, delta);
    return r;
}

struct DecomposeConfig {
    double tolerance = 2.0;
    std::size_t retry_budget = 64;
    u64 seed = 0;
    /// Throw construction-failed when (ii)-(iv) cannot be met; otherwise return the
    /// best attempt and let the caller read the report.
    bool strict = true;
};

struct DecomposeResult {
    Decomposition decomposition;
    DecompositionReport report;
    std::size_t attempts = 0;
};

namespace detail {

/// Rectify the low-dimensional residual: identity if it already sits in the P/N
/// interval, else pigeonhole, with the exhaustive scan as a tighter fallback when k allows.
inline std::pair<Residue, std::string> rectify_residual(const GroundSet& residual)
{
    const Modulus& m = residual.modulus();
    if (residual.empty())
        return {Residue{1}, "identity"};
    const u128 width = 4 * static_cast<u128>(residual.size());
    auto in_interval = [&](u64 max_abs) { return static_cast<u128>(max_abs) * width < m.k(); };
    if (in_interval(max_abs_after_dilation(residual, Residue{1})))
        return {Residue{1}, "identity"};

    std::optional<RectificationResult> best;
    try {
        best = rectify_pigeonhole(residual);
    } catch (const error&) {
    }
    if ((!best || !in_interval(best->max_abs)) && m.k() <= kExhaustiveScanLimit) {
        auto ex = rectify_exhaustive(residual);
        if (!best || ex.max_abs < best->max_abs)
            best = ex;
    }
    if (!best)
        return {Residue{1}, "identity"};
    return {best->lambda, std::string(to_string(best->method))};
}

inline int hard_failures(const DecompositionReport& r)
{
    int n = 0;
    n += r.pn_nonempty ? 0 : 1;
    n += r.blocks_dissociated ? 0 : 1;
    n += r.delta_excluded ? 0 : 1;
    n += (r.endpoints_attainable && !r.endpoints_dissociated) ? 1 : 0;
    return n;
}

/// Pick D_1 and D_s among the blocks so that D_1 u D_s u {delta} is dissociated.
inline void choose_endpoints(Decomposition& d)
{
    const std::size_t s = d.s();
    if (s < 3 || detail::endpoints_dissociated(d, d.delta))
        return;
    for (std::size_t a = 0; a < s; ++a) {
        for (std::size_t b = 0; b < s; ++b) {
            if (a == b)
                continue;
            Decomposition trial = d;
            trial.blocks.clear();
            trial.blocks.push_back(d.blocks[a]);
            for (std::size_t i = 0; i < s; ++i)
                if (i != a && i != b)
                    trial.blocks.push_back(d.blocks[i]);
            trial.blocks.push_back(d.blocks[b]);
            if (detail::endpoints_dissociated(trial, trial.delta)) {
                d.blocks = std::move(trial.blocks);
                return;
            }
        }
    }
}

} // namespace detail

/// Constructive decomposition. Each attempt peels dissociated blocks of size
/// max(R, 4) off A with a greedy scan (first attempt: descending magnitude, later
/// attempts: seeded shuffles) while the residual still yields one, rectifies the
/// residual and splits it by sign into P and N.
inline DecomposeResult decompose(const GroundSet& a, std::size_t R, const DecomposeConfig& config = {})
{
    if (a.empty())
        throw error(errc::invalid_argument, "decompose needs a nonempty set");
    a.require_nonzero();
    const Modulus& m = a.modulus();
    const std::size_t block = std::max(R, kMinBlockSize);
    const std::size_t budget = std::max<std::size_t>(config.retry_budget, 1);

    std::optional<DecomposeResult> best;
    int best_score = 0;
    std::size_t attempts = 0;
    const Rng root(config.seed);

    for (std::size_t attempt = 0; attempt < budget; ++attempt) {
        std::vector<Residue> scan = a.elements();
        if (attempt == 0) {
            scan = magnitude_scan_order(m, scan);
            std::reverse(scan.begin(), scan.end());
        } else {
            Rng rng = root.split(attempt);
            rng.shuffle(scan);
        }

        std::vector<std::vector<Residue>> blocks;
        while (true) {
            auto d = greedy_dissociated_in_order(m, scan, block);
            if (d.size() < block)
                break;
            std::erase_if(scan, [&](Residue x) { return std::find(d.begin(), d.end(), x) != d.end(); });
            blocks.push_back(std::move(d));
        }
        // (ii) wants P u N nonempty whenever s > 0: hand one element back.
        if (!blocks.empty() && scan.empty()) {
            if (blocks.back().size() > block) {
                scan.push_back(blocks.back().back());
                blocks.back().pop_back();
            } else {
                scan = std::move(blocks.back());
                blocks.pop_back();
            }
        }

        const auto [lambda, method] = detail::rectify_residual(GroundSet(m, scan));
        Decomposition d{m, lambda, {}, {}, {}, Residue{0}, block, config.tolerance, method};
        for (Residue x : scan) {
            const Residue y = m.mul(lambda, x);
            (m.signed_rep(y) > 0 ? d.P : d.N).push_back(y);
        }
        std::sort(d.P.begin(), d.P.end());
        std::sort(d.N.begin(), d.N.end());
        for (auto& b : blocks)
            d.blocks.push_back(dilate(m, b, lambda));
        d.delta = d.recomputed_delta();
        detail::choose_endpoints(d);

        ++attempts;
        auto report = validate_decomposition(d, a);
        const int score = detail::hard_failures(report);
        if (!best || score < best_score) {
            best = DecomposeResult{std::move(d), report, 0};
            best_score = score;
        }
        if (score == 0)
            break;
    }

    best->attempts = attempts;
    if (config.strict && best_score > 0) {
        std::string failed;
        for (const auto& f : best->report.failures())
            failed += (failed.empty() ? "" : ", ") + f;
        throw error(errc::construction_failed, "no decomposition within " + std::to_string(budget) +
                                                   " attempts; best attempt fails: " + failed);
    }
    return std::move(*best);
}

} // namespace zkseq
