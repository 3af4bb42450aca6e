#pragma once

// One-shot construction: split the dissociated blocks into quarters, arrange them
// around reverse(p) and n, condition the endpoint and junction orderings, then either
// resample locally until no short interval vanishes (t-weak) or redraw everything
// until the whole ordering is a sequencing (classical).

#include "zkseq/dissociation.hpp"
#include "zkseq/error.hpp"
#include "zkseq/oracle.hpp"
#include "zkseq/pn_ordering.hpp"
#include "zkseq/rng.hpp"
#include "zkseq/structure.hpp"
#include "zkseq/verify.hpp"
#include "zkseq/zk.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zkseq {

enum class Mode { auto_select, tweak, classical };

constexpr std::string_view to_string(Mode mode) noexcept
{
    switch (mode) {
    case Mode::auto_select: return "auto";
    case Mode::tweak: return "tweak";
    case Mode::classical: return "classical";
    }
    return "?";
}

inline constexpr std::size_t kAutoOracleSize = 10;

struct PipelineConfig {
    Mode mode = Mode::auto_select;
    std::size_t t = 0;        ///< t-weak window; 0 = not supplied
    std::size_t K = 0;        ///< 0 = ceil(c2 sqrt(R))
    std::size_t R = 0;        ///< 0 = derived from p (and |A| in classical mode)
    double c1 = 1.0;
    double c2 = 1.0;
    u64 max_resamples = 0;    ///< 0 = 10^6 * |A|
    u64 max_retries = 1000;
    u64 seed = 0;
    bool oracle_fallback = true;
    std::size_t rejection_cap = 10'000;
    std::size_t decompose_retries = 64;
    double tolerance = 2.0;
};

struct PlanBlock {
    std::size_t source = 0;   ///< 0-based index j of D_{j+1}
    std::size_t quarter = 0;  ///< 0..3
    std::vector<Residue> items;  ///< current ordering of the block
};

/// T_1 .. T_u in the order
/// D_1^(1), D_1^(2), ..., D_s^(1), D_s^(2), D_1^(3), D_1^(4), ..., D_s^(3), D_s^(4).
struct BlockPlan {
    Modulus modulus;
    std::vector<PlanBlock> blocks;
    std::size_t sources = 0;  ///< s
    std::size_t K = 1;
    u64 seed = 0;

    [[nodiscard]] std::size_t u() const noexcept { return blocks.size(); }
    [[nodiscard]] bool empty() const noexcept { return blocks.empty(); }
    [[nodiscard]] Residue tau(std::size_t b) const { return modulus.sum(blocks[b].items); }

    [[nodiscard]] std::vector<Residue> taus() const
    {
        std::vector<Residue> out;
        for (std::size_t b = 0; b < u(); ++b)
            out.push_back(tau(b));
        return out;
    }

    [[nodiscard]] std::size_t total_size() const
    {
        std::size_t n = 0;
        for (const auto& b : blocks)
            n += b.items.size();
        return n;
    }
};

/// Plan position of quarter q (0..3) of source j (0..s-1).
constexpr std::size_t plan_index(std::size_t s, std::size_t j, std::size_t q) noexcept
{
    return q < 2 ? 2 * j + q : 2 * s + 2 * j + (q - 2);
}

/// The (source, quarter) tags a plan with s sources must carry, in order.
inline std::vector<std::pair<std::size_t, std::size_t>> arrangement_pattern(std::size_t s)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t half = 0; half < 2; ++half)
        for (std::size_t j = 0; j < s; ++j)
            for (std::size_t q = 2 * half; q < 2 * half + 2; ++q)
                out.emplace_back(j, q);
    return out;
}

inline bool follows_arrangement(const BlockPlan& plan)
{
    const auto pattern = arrangement_pattern(plan.sources);
    if (pattern.size() != plan.u())
        return false;
    for (std::size_t b = 0; b < plan.u(); ++b)
        if (plan.blocks[b].source != pattern[b].first || plan.blocks[b].quarter != pattern[b].second)
            return false;
    return true;
}

/// Internal adjacent pairs (T_2, T_3), (T_4, T_5), ...: 0-based blocks (2q+1, 2q+2).
inline std::optional<std::size_t> pair_of(const BlockPlan& plan, std::size_t b)
{
    if (b == 0 || b + 1 >= plan.u())
        return std::nullopt;
    return (b - 1) / 2;
}

inline std::size_t pair_count(const BlockPlan& plan) { return plan.u() >= 2 ? (plan.u() - 2) / 2 : 0; }

inline std::size_t partner_of(std::size_t b) { return (b % 2 == 1) ? b + 1 : b - 1; }

namespace detail {

inline std::size_t quarter_size(std::size_t n, std::size_t q) { return n / 4 + (q < n % 4 ? 1 : 0); }

/// Cut `items` (already in random order) into the four consecutive quarters of source j.
inline void write_quarters(BlockPlan& plan, std::size_t j, const std::vector<Residue>& items)
{
    std::size_t offset = 0;
    for (std::size_t q = 0; q < 4; ++q) {
        const std::size_t len = quarter_size(items.size(), q);
        auto& block = plan.blocks[plan_index(plan.sources, j, q)];
        block.source = j;
        block.quarter = q;
        block.items.assign(items.begin() + static_cast<std::ptrdiff_t>(offset),
                           items.begin() + static_cast<std::ptrdiff_t>(offset + len));
        offset += len;
    }
}

} // namespace detail

/// Splits every D_j into quarters: a uniform random permutation cut into four
/// consecutive segments. For D_1 and D_s the segment orders are the induced orders
/// that t_1 and t_u start from; for internal blocks this is a uniform 4-partition.
inline BlockPlan split_blocks(const Decomposition& d, std::size_t K, Rng& rng)
{
    BlockPlan plan{d.modulus, {}, d.s(), std::max<std::size_t>(K, 1), rng.seed()};
    plan.blocks.resize(4 * d.s());
    for (std::size_t j = 0; j < d.s(); ++j) {
        std::vector<Residue> sigma = d.blocks[j];
        rng.shuffle(sigma);
        detail::write_quarters(plan, j, sigma);
    }
    return plan;
}

/// Y+_j = -S_j(D_1) u (-delta + S_j(D_s)) and Y-_j = -S_j(D_s) u (-delta + S_j(D_1)),
/// j = 1..K, with S_j the j-element subset sums.
inline std::pair<std::vector<ResidueSet>, std::vector<ResidueSet>> build_Y_targets(const Decomposition& d,
                                                                                   std::size_t K)
{
    if (d.s() == 0)
        throw error(errc::invalid_argument, "targets need at least one block");
    const Modulus& m = d.modulus;
    const auto& first = d.blocks.front();
    const auto& last = d.blocks.back();
    const Residue minus_delta = m.neg(d.delta);
    std::vector<ResidueSet> plus, minus;
    for (std::size_t j = 1; j <= K; ++j) {
        const ResidueSet s1 = subset_sums_exact(m, first, j);
        const ResidueSet ss = subset_sums_exact(m, last, j);
        ResidueSet yp = negate(m, s1);
        yp.merge(translate(m, ss, minus_delta));
        ResidueSet ym = negate(m, ss);
        ym.merge(translate(m, s1, minus_delta));
        plus.push_back(std::move(yp));
        minus.push_back(std::move(ym));
    }
    return {std::move(plus), std::move(minus)};
}

enum class BlockEnd { first, last };

/// Sums an endpoint block's first K elements must avoid:
/// first end -IS(p) u (delta + IS(n)), last end -IS(n) u (delta + IS(p)).
inline ResidueSet acceptability_forbidden(const Modulus& m, BlockEnd end, std::span<const Residue> p_order,
                                          std::span<const Residue> n_order, Residue delta)
{
    const ResidueSet is_p = initial_segment_sums(m, p_order);
    const ResidueSet is_n = initial_segment_sums(m, n_order);
    ResidueSet out = negate(m, end == BlockEnd::first ? is_p : is_n);
    out.merge(translate(m, end == BlockEnd::first ? is_n : is_p, delta));
    return out;
}

/// The first block is read from its start (it follows reverse(p)); the last block is
/// read backwards from its end (it precedes n), so its sums are suffix sums.
inline bool is_acceptable_against(const Modulus& m, std::span<const Residue> block, BlockEnd end, std::size_t K,
                                  const ResidueSet& forbidden)
{
    const std::size_t len = std::min(K, block.size());
    Residue acc{0};
    for (std::size_t i = 0; i < len; ++i) {
        acc = m.add(acc, end == BlockEnd::first ? block[i] : block[block.size() - 1 - i]);
        if (forbidden.contains(acc))
            return false;
    }
    return true;
}

inline bool is_acceptable(const Ordering& t_block, BlockEnd end, std::size_t K, std::span<const Residue> p_order,
                          std::span<const Residue> n_order, Residue delta)
{
    const auto forbidden = acceptability_forbidden(t_block.modulus, end, p_order, n_order, delta);
    return is_acceptable_against(t_block.modulus, t_block.items, end, K, forbidden);
}

/// No junction interval vanishes: for 0 <= i <= min(K, |left|), 0 <= j <= min(K, |right|),
/// (i, j) != (0, 0), the last i of `left` plus the first j of `right` is nonzero.
inline bool is_boundary_safe(const Modulus& m, std::span<const Residue> left, std::span<const Residue> right,
                             std::size_t K)
{
    const std::size_t li = std::min(K, left.size());
    const std::size_t rj = std::min(K, right.size());
    std::vector<Residue> suffix{Residue{0}};
    for (std::size_t i = 0; i < li; ++i)
        suffix.push_back(m.add(suffix.back(), left[left.size() - 1 - i]));
    std::vector<Residue> prefix{Residue{0}};
    for (std::size_t j = 0; j < rj; ++j)
        prefix.push_back(m.add(prefix.back(), right[j]));
    for (std::size_t i = 0; i <= li; ++i)
        for (std::size_t j = 0; j <= rj; ++j)
            if ((i | j) != 0 && m.add(suffix[i], prefix[j]).value == 0)
                return false;
    return true;
}

inline bool is_boundary_safe(const Ordering& left, const Ordering& right, std::size_t K)
{
    return is_boundary_safe(left.modulus, left.items, right.items, K);
}

struct Segment {
    enum class Kind { p, block, n };
    Kind kind = Kind::p;
    std::size_t block = 0;  ///< plan index when kind == block

    friend bool operator==(const Segment&, const Segment&) = default;
};

struct FinalOrdering {
    Ordering ordering;
    std::vector<Segment> provenance{};
    PipelineConfig config{};
    Mode mode = Mode::classical;
    u64 resample_count = 0;
    u64 retries = 0;
    std::optional<BlockPlan> plan{};
    bool used_oracle = false;
    Residue lambda{1};
    std::size_t R = 0;
    std::size_t K = 0;
    std::vector<std::string> notes{};
};

/// reverse(p), t_1, ..., t_u, n with a per-position provenance map.
inline FinalOrdering assemble(std::span<const Residue> p_order, std::span<const Residue> n_order,
                              const std::vector<std::vector<Residue>>& block_orderings, const BlockPlan& plan)
{
    if (block_orderings.size() != plan.u())
        throw error(errc::assembly_mismatch, "expected " + std::to_string(plan.u()) + " block orderings");
    FinalOrdering out{Ordering{plan.modulus, {}}, {}, {}, Mode::classical, 0, 0, plan, false, Residue{1}, 0, plan.K, {}};
    auto& items = out.ordering.items;
    for (auto it = p_order.rbegin(); it != p_order.rend(); ++it) {
        items.push_back(*it);
        out.provenance.push_back({Segment::Kind::p, 0});
    }
    for (std::size_t b = 0; b < plan.u(); ++b) {
        auto got = block_orderings[b];
        auto want = plan.blocks[b].items;
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        if (got != want)
            throw error(errc::assembly_mismatch, "ordering of block T" + std::to_string(b + 1) +
                                                     " is not a permutation of it");
        for (Residue x : block_orderings[b]) {
            items.push_back(x);
            out.provenance.push_back({Segment::Kind::block, b});
        }
        out.plan->blocks[b].items = block_orderings[b];
    }
    for (Residue x : n_order) {
        items.push_back(x);
        out.provenance.push_back({Segment::Kind::n, 0});
    }
    return out;
}

enum class IntervalType { type_I, type_II };

/// Type II iff some block T_j has between K and |T_j| - K of its positions inside I.
inline IntervalType classify_interval(const Interval& iv, const BlockPlan& plan, const std::vector<Segment>& provenance)
{
    if (iv.lo < 1 || iv.hi < iv.lo || iv.hi > provenance.size() || (iv.lo == 1 && iv.hi == provenance.size()))
        throw error(errc::invalid_argument, "interval must be proper and nonempty");
    std::vector<std::size_t> inside(plan.u(), 0);
    for (std::size_t pos = iv.lo; pos <= iv.hi; ++pos)
        if (provenance[pos - 1].kind == Segment::Kind::block)
            ++inside[provenance[pos - 1].block];
    for (std::size_t b = 0; b < plan.u(); ++b) {
        const std::size_t size = plan.blocks[b].items.size();
        if (inside[b] >= plan.K && inside[b] + plan.K <= size)
            return IntervalType::type_II;
    }
    return IntervalType::type_I;
}

/// Randomness sources an interval depends on. Ids 0..s-1 are the splitting
/// variables of D_1..D_s (for D_1 and D_s these are sigma_1, sigma_s, which also fix
/// the orderings of T_1 and T_u); id s + q is the joint ordering of internal pair q.
/// A paired block also depends on its partner's splitting variables.
inline std::vector<std::size_t> interval_sources(const BlockPlan& plan, std::size_t p_len, const Interval& iv)
{
    std::set<std::size_t> out;
    std::size_t start = p_len + 1;
    for (std::size_t b = 0; b < plan.u(); ++b) {
        const std::size_t end = start + plan.blocks[b].items.size() - 1;
        if (!plan.blocks[b].items.empty() && start <= iv.hi && iv.lo <= end) {
            out.insert(plan.blocks[b].source);
            if (auto q = pair_of(plan, b)) {
                out.insert(plan.sources + *q);
                out.insert(plan.blocks[partner_of(b)].source);
            }
        }
        start = end + 1;
    }
    return {out.begin(), out.end()};
}

/// Worst case, over intervals I of length <= t with at least one source, of the number
/// of other such intervals sharing a source with I. Intervals are grouped by their
/// source signature so each group is compared once.
inline std::size_t lll_dependency_degree(const BlockPlan& plan, std::size_t t, std::size_t p_len = 0,
                                         std::size_t n_len = 0)
{
    if (plan.empty())
        throw error(errc::invalid_argument, "dependency degree needs a nonempty plan");
    const std::size_t n = p_len + plan.total_size() + n_len;
    const std::size_t max_len = std::min(t, n - 1);
    std::map<std::vector<std::size_t>, std::size_t> groups;
    for (std::size_t lo = 1; lo <= n; ++lo)
        for (std::size_t hi = lo; hi <= n && hi - lo + 1 <= max_len; ++hi) {
            auto sig = interval_sources(plan, p_len, {lo, hi});
            if (!sig.empty())
                ++groups[std::move(sig)];
        }
    auto meets = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        auto i = a.begin();
        auto j = b.begin();
        while (i != a.end() && j != b.end()) {
            if (*i == *j)
                return true;
            (*i < *j) ? ++i : ++j;
        }
        return false;
    };
    std::size_t worst = 0;
    for (const auto& [sig, count] : groups) {
        std::size_t shared = 0;
        for (const auto& [other, c] : groups)
            if (meets(sig, other))
                shared += c;
        worst = std::max(worst, shared - 1);
    }
    return worst;
}

namespace detail {

/// Everything computed once per run before any block randomness is drawn.
struct Prepared {
    Decomposition decomposition;
    DecompositionReport report;
    PNOrderings pn;
    std::size_t R = 0;
    std::size_t K = 0;
    std::vector<std::string> notes{};
};

inline Prepared prepare(const GroundSet& a, const PipelineConfig& cfg, Mode mode)
{
    const Modulus& m = a.modulus();
    const std::size_t R = cfg.R != 0 ? cfg.R
                          : mode == Mode::tweak ? compute_R_tweak(m.p(), cfg.c1)
                                                : compute_R_classical(m.p(), a.size(), cfg.c1);
    const std::size_t K =
        cfg.K != 0 ? cfg.K : std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cfg.c2 * std::sqrt(static_cast<double>(R)))));

    DecomposeConfig dc{cfg.tolerance, cfg.decompose_retries, Rng::derive_seed(cfg.seed, 1), false};
    auto dr = decompose(a, R, dc);
    std::vector<std::string> notes{};
    if (cfg.K != 0)
        notes.emplace_back("K overridden to " + std::to_string(cfg.K));
    for (const auto& f : dr.report.failures())
        notes.push_back("out-of-regime: decomposition " + f);

    std::vector<ResidueSet> y_plus, y_minus;
    Residue delta{0};
    if (dr.decomposition.s() > 0) {
        std::tie(y_plus, y_minus) = build_Y_targets(dr.decomposition, K);
        delta = dr.decomposition.delta;
    }
    const GroundSet P(m, dr.decomposition.P);
    const GroundSet N(m, dr.decomposition.N);
    auto pn = order_pn(P, N, delta, y_plus, y_minus);
    if (!pn.in_regime)
        notes.emplace_back("out-of-regime: P/N interval hypotheses");
    if (!pn.within_budget)
        notes.emplace_back("P/N target counts exceed the budget");
    if (pn.negated)
        notes.emplace_back("P/N solved in the reflected (delta < 0) convention");
    return Prepared{std::move(dr.decomposition), dr.report, std::move(pn), R, K, std::move(notes)};
}

/// Draws and redraws the block randomness of one plan with acceptability and
/// boundary safety enforced by rejection.
class BlockSampler {
public:
    BlockSampler(const Prepared& prep, std::size_t cap, Rng rng)
        : prep_(prep), cap_(cap), rng_(std::move(rng)),
          plan_{prep.decomposition.modulus, {}, prep.decomposition.s(), prep.K, rng_.seed()}
    {
        const Modulus& m = prep.decomposition.modulus;
        forbid_first_ = acceptability_forbidden(m, BlockEnd::first, prep.pn.p_order, prep.pn.n_order, prep.decomposition.delta);
        forbid_last_ = acceptability_forbidden(m, BlockEnd::last, prep.pn.p_order, prep.pn.n_order, prep.decomposition.delta);
        plan_.blocks.resize(4 * plan_.sources);
    }

    void sample_all()
    {
        for (std::size_t j = 0; j < plan_.sources; ++j)
            redraw_split(j);
        for (std::size_t q = 0; q < pair_count(plan_); ++q)
            redraw_pair(q);
    }

    /// Redraw the given sources (ids as in interval_sources).
    void resample(const std::vector<std::size_t>& sources)
    {
        std::set<std::size_t> pairs;
        for (std::size_t id : sources) {
            if (id < plan_.sources) {
                redraw_split(id);
                for (std::size_t q = 0; q < 4; ++q)
                    if (auto pr = pair_of(plan_, plan_index(plan_.sources, id, q)))
                        pairs.insert(*pr);
            } else {
                pairs.insert(id - plan_.sources);
            }
        }
        for (std::size_t q : pairs)
            redraw_pair(q);
    }

    [[nodiscard]] const BlockPlan& plan() const { return plan_; }

    [[nodiscard]] std::vector<std::vector<Residue>> orderings() const
    {
        std::vector<std::vector<Residue>> out;
        for (const auto& b : plan_.blocks)
            out.push_back(b.items);
        return out;
    }

private:
    void redraw_split(std::size_t j)
    {
        const Modulus& m = plan_.modulus;
        const bool first = j == 0;
        const bool last = j + 1 == plan_.sources;
        std::vector<Residue> sigma = prep_.decomposition.blocks[j];
        for (std::size_t attempt = 0;; ++attempt) {
            if (attempt >= cap_)
                throw error(errc::construction_failed,
                            "out-of-regime: no acceptable endpoint ordering of D_" + std::to_string(j + 1) + " in " +
                                std::to_string(cap_) + " draws");
            rng_.shuffle(sigma);
            detail::write_quarters(plan_, j, sigma);
            const bool ok_first = !first || is_acceptable_against(m, plan_.blocks.front().items, BlockEnd::first,
                                                                  plan_.K, forbid_first_);
            const bool ok_last = !last || is_acceptable_against(m, plan_.blocks.back().items, BlockEnd::last,
                                                                plan_.K, forbid_last_);
            if (ok_first && ok_last)
                return;
        }
    }

    void redraw_pair(std::size_t q)
    {
        auto& left = plan_.blocks[2 * q + 1].items;
        auto& right = plan_.blocks[2 * q + 2].items;
        for (std::size_t attempt = 0;; ++attempt) {
            if (attempt >= cap_)
                throw error(errc::construction_failed, "out-of-regime: no boundary-safe ordering of (T" +
                                                           std::to_string(2 * q + 2) + ", T" + std::to_string(2 * q + 3) +
                                                           ") in " + std::to_string(cap_) + " draws");
            rng_.shuffle(left);
            rng_.shuffle(right);
            if (is_boundary_safe(plan_.modulus, left, right, plan_.K))
                return;
        }
    }

    const Prepared& prep_;
    std::size_t cap_;
    Rng rng_;
    BlockPlan plan_;
    ResidueSet forbid_first_, forbid_last_;
};

/// First bad event of the t-weak condition: [1, i] with p_i = 0, or [i+1, j] with
/// 1 <= i < j <= i + t and p_i = p_j.
inline std::optional<Interval> first_tweak_violation(const Ordering& o, std::size_t t)
{
    const auto sums = partial_sums(o);
    const std::size_t n = sums.size();
    if (n <= 1)
        return std::nullopt;
    for (std::size_t hi = 0; hi < n; ++hi) {
        if (sums[hi].value == 0)
            return Interval{1, hi + 1};
        for (std::size_t d = 1; d <= t && d <= hi; ++d)
            if (sums[hi - d] == sums[hi])
                return Interval{hi - d + 2, hi + 1};
    }
    return std::nullopt;
}

/// Map an ordering of lambda*A back to A.
inline void undilate(FinalOrdering& f, Residue lambda)
{
    const Modulus& m = f.ordering.modulus;
    const Residue inv = m.inverse(lambda);
    for (auto& x : f.ordering.items)
        x = m.mul(inv, x);
    if (f.plan)
        for (auto& b : f.plan->blocks)
            for (auto& x : b.items)
                x = m.mul(inv, x);
    f.lambda = lambda;
}

inline std::string regime_summary(const std::vector<std::string>& notes)
{
    std::string out;
    for (const auto& n : notes)
        if (n.rfind("out-of-regime", 0) == 0)
            out += (out.empty() ? "" : "; ") + n;
    return out.empty() ? "in regime" : out;
}

inline FinalOrdering finish(FinalOrdering f, const Prepared& prep, const PipelineConfig& cfg, Mode mode)
{
    f.config = cfg;
    f.mode = mode;
    f.R = prep.R;
    f.K = prep.K;
    f.notes = prep.notes;
    undilate(f, prep.decomposition.lambda);
    return f;
}

inline FinalOrdering from_oracle(const Ordering& o, const PipelineConfig& cfg, Mode mode, std::string note)
{
    FinalOrdering f{.ordering = o, .provenance = std::vector<Segment>(o.size()), .config = cfg, .mode = mode};
    f.used_oracle = true;
    f.notes.push_back(std::move(note));
    return f;
}

inline FinalOrdering trivial(const GroundSet& a, const PipelineConfig& cfg, Mode mode)
{
    return FinalOrdering{.ordering = Ordering{a.modulus(), a.elements()},
                         .provenance = std::vector<Segment>(a.size()),
                         .config = cfg,
                         .mode = mode};
}

inline FinalOrdering tweak_core(const GroundSet& a, const PipelineConfig& cfg)
{
    const Prepared prep = prepare(a, cfg, Mode::tweak);
    const std::size_t t = cfg.t;
    if (prep.decomposition.s() == 0) {
        auto f = assemble(prep.pn.p_order, prep.pn.n_order, {}, BlockPlan{a.modulus(), {}, 0, prep.K, cfg.seed});
        if (!is_t_weak(f.ordering, t))
            throw error(errc::construction_failed, "P/N ordering is not t-weak (" + regime_summary(prep.notes) + ")");
        return finish(std::move(f), prep, cfg, Mode::tweak);
    }

    const u64 budget = cfg.max_resamples != 0 ? cfg.max_resamples : u64{1'000'000} * a.size();
    BlockSampler sampler(prep, cfg.rejection_cap, Rng(cfg.seed, 2));
    sampler.sample_all();
    const std::size_t p_len = prep.pn.p_order.size();
    for (u64 resamples = 0;; ++resamples) {
        auto f = assemble(prep.pn.p_order, prep.pn.n_order, sampler.orderings(), sampler.plan());
        const auto bad = first_tweak_violation(f.ordering, t);
        if (!bad) {
            f.resample_count = resamples;
            return finish(std::move(f), prep, cfg, Mode::tweak);
        }
        if (resamples >= budget)
            throw error(errc::construction_failed,
                        "resample budget " + std::to_string(budget) + " exhausted; surviving bad interval [" +
                            std::to_string(bad->lo) + ", " + std::to_string(bad->hi) + "] (" +
                            regime_summary(prep.notes) + ")");
        const auto sources = interval_sources(sampler.plan(), p_len, *bad);
        if (sources.empty())
            throw error(errc::construction_failed, "vanishing interval [" + std::to_string(bad->lo) + ", " +
                                                       std::to_string(bad->hi) + "] carries no randomness");
        sampler.resample(sources);
    }
}

inline FinalOrdering classical_core(const GroundSet& a, const PipelineConfig& cfg)
{
    const Prepared prep = prepare(a, cfg, Mode::classical);
    if (prep.decomposition.s() == 0) {
        auto f = assemble(prep.pn.p_order, prep.pn.n_order, {}, BlockPlan{a.modulus(), {}, 0, prep.K, cfg.seed});
        if (!is_sequencing(f.ordering))
            throw error(errc::construction_failed, "P/N ordering is not a sequencing");
        return finish(std::move(f), prep, cfg, Mode::classical);
    }
    BlockSampler sampler(prep, cfg.rejection_cap, Rng(cfg.seed, 3));
    for (u64 retry = 0; retry < cfg.max_retries; ++retry) {
        sampler.sample_all();
        auto f = assemble(prep.pn.p_order, prep.pn.n_order, sampler.orderings(), sampler.plan());
        if (is_sequencing(f.ordering)) {
            f.retries = retry;
            return finish(std::move(f), prep, cfg, Mode::classical);
        }
    }
    throw error(errc::construction_failed, "no sequencing within " + std::to_string(cfg.max_retries) +
                                               " full redraws (" + regime_summary(prep.notes) + ")");
}

template <class Core>
FinalOrdering with_fallback(const GroundSet& a, const PipelineConfig& cfg, Mode mode, const Goal& goal, Core core)
{
    try {
        return core(a, cfg);
    } catch (const error& e) {
        if (!cfg.oracle_fallback || a.size() > kOracleSizeLimit)
            throw;
        if (auto o = brute_force(a, goal))
            return from_oracle(*o, cfg, mode, std::string("oracle fallback after: ") + e.what());
        throw error(errc::construction_failed, "no " + goal.name() + " ordering exists (exhaustive search)");
    }
}

} // namespace detail

/// t-weak construction with local resampling of the randomness behind each
/// vanishing short interval.
inline FinalOrdering run_tweak(const GroundSet& a, const PipelineConfig& config)
{
    a.require_nonzero();
    if (config.t == 0)
        throw error(errc::invalid_argument, "t-weak mode needs t >= 1");
    PipelineConfig cfg = config;
    cfg.mode = Mode::tweak;
    if (a.size() <= 1)
        return detail::trivial(a, cfg, Mode::tweak);
    if (a.modulus().sum(a.elements()).value == 0)
        throw error(errc::construction_failed, "sum(A) = 0, so p_|A| = 0 and no ordering is t-weak");
    return detail::with_fallback(a, cfg, Mode::tweak, Goal::tweak(cfg.t), detail::tweak_core);
}

/// Sequencing by full independent redraws until one verifies.
inline FinalOrdering run_classical(const GroundSet& a, const PipelineConfig& config)
{
    a.require_nonzero();
    PipelineConfig cfg = config;
    cfg.mode = Mode::classical;
    if (a.size() <= 1)
        return detail::trivial(a, cfg, Mode::classical);
    return detail::with_fallback(a, cfg, Mode::classical, Goal::sequencing(), detail::classical_core);
}

/// Mode selection: tweak when t is given, classical otherwise; small sets go to the oracle first.
inline FinalOrdering run(const GroundSet& a, const PipelineConfig& config)
{
    a.require_nonzero();
    Mode mode = config.mode;
    if (mode == Mode::auto_select) {
        mode = config.t != 0 ? Mode::tweak : Mode::classical;
        if (a.size() <= kAutoOracleSize && a.size() > 1) {
            const Goal goal = mode == Mode::tweak ? Goal::tweak(config.t) : Goal::sequencing();
            if (auto o = brute_force(a, goal)) {
                PipelineConfig cfg = config;
                cfg.mode = mode;
                return detail::from_oracle(*o, cfg, mode, "auto mode: oracle on small set");
            }
        }
    }
    return mode == Mode::tweak ? run_tweak(a, config) : run_classical(a, config);
}

} // namespace zkseq
