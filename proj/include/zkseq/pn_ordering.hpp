#pragma once

// Orderings p of P and n of N making reverse(p), delta, n a sequencing while the
// initial segment sums of p and n dodge prescribed target sets.

#include "zkseq/error.hpp"
#include "zkseq/verify.hpp"
#include "zkseq/zk.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <unordered_set>
#include <vector>

namespace zkseq {

/// IS(b) = { b_1 + ... + b_j : 0 <= j <= |b| }; always contains 0.
inline ResidueSet initial_segment_sums(const Modulus& m, std::span<const Residue> b)
{
    std::vector<Residue> out{Residue{0}};
    Residue acc{0};
    for (Residue x : b) {
        acc = m.add(acc, x);
        out.push_back(acc);
    }
    return ResidueSet(std::move(out));
}

inline ResidueSet initial_segment_sums(const Ordering& b) { return initial_segment_sums(b.modulus, b.items); }

/// IS_t(b): prefixes of length at most t (t clamps to |b|).
inline ResidueSet initial_segment_sums_t(const Ordering& b, std::size_t t)
{
    const std::size_t len = std::min(t, b.size());
    return initial_segment_sums(b.modulus, std::span<const Residue>(b.items.data(), len));
}

/// min over L in {1..|Y_j|+1} of ceil(|Y_j|/L) + L + 4 + 4 sum_{i<j} |Y_i|; j is 1-based.
inline std::size_t proposition_budget(std::span<const std::size_t> sizes, std::size_t j)
{
    if (j == 0 || j > sizes.size())
        throw error(errc::invalid_argument, "target index out of range");
    std::size_t earlier = 0;
    for (std::size_t i = 0; i + 1 < j; ++i)
        earlier += sizes[i];
    const std::size_t y = sizes[j - 1];
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t L = 1; L <= y + 1; ++L)
        best = std::min(best, (y + L - 1) / L + L);
    return best + 4 + 4 * earlier;
}

struct PNConfig {
    std::size_t node_budget = 10'000;
};

struct PNOrderings {
    Modulus modulus;
    std::vector<Residue> p_order;
    std::vector<Residue> n_order;
    Residue delta{0};  ///< 0 means no middle element (s = 0)
    std::vector<ResidueSet> targets_plus;
    std::vector<ResidueSet> targets_minus;
    std::vector<std::size_t> achieved_plus;
    std::vector<std::size_t> achieved_minus;
    bool negated = false;       ///< solved through the delta < 0 reflection
    bool in_regime = false;     ///< interval hypotheses held
    bool within_budget = false; ///< every achieved count <= proposition_budget
    std::size_t nodes = 0;

    /// reverse(p), delta, n (delta omitted when 0).
    [[nodiscard]] Ordering sequence() const
    {
        Ordering o{modulus, {}};
        o.items.assign(p_order.rbegin(), p_order.rend());
        if (delta.value != 0)
            o.items.push_back(delta);
        o.items.insert(o.items.end(), n_order.begin(), n_order.end());
        return o;
    }
};

namespace detail {

inline std::vector<std::size_t> intersection_counts(const Modulus& m, std::span<const Residue> order,
                                                    const std::vector<ResidueSet>& targets)
{
    const ResidueSet is = initial_segment_sums(m, order);
    std::vector<std::size_t> out;
    for (const auto& y : targets)
        out.push_back(static_cast<std::size_t>(
            std::count_if(is.begin(), is.end(), [&](Residue x) { return y.contains(x); })));
    return out;
}

inline bool counts_within_budget(const std::vector<ResidueSet>& targets, const std::vector<std::size_t>& achieved)
{
    std::vector<std::size_t> sizes;
    for (const auto& y : targets)
        sizes.push_back(y.size());
    for (std::size_t j = 1; j <= targets.size(); ++j)
        if (achieved[j - 1] > proposition_budget(sizes, j))
            return false;
    return true;
}

/// Search for p, n with reverse(p), delta, n a sequencing. Partial sums of the
/// sequence are S_P - prefix_i(p) at position |P| - i, then S_P + delta, then
/// S_P + delta + prefix_j(n); each branch is cut as soon as one repeats or hits 0 early.
class PNSearch {
public:
    PNSearch(const Modulus& m, std::vector<Residue> P, std::vector<Residue> N, Residue delta,
             const std::vector<ResidueSet>& y_plus, const std::vector<ResidueSet>& y_minus, std::size_t budget)
        : m_(m), P_(std::move(P)), N_(std::move(N)), delta_(delta), budget_(budget)
    {
        for (const auto& y : y_plus)
            avoid_plus_.merge(y);
        for (const auto& y : y_minus)
            avoid_minus_.merge(y);
        total_ = P_.size() + (delta_.value != 0 ? 1 : 0) + N_.size();
        sum_p_ = m_.sum(P_);
    }

    bool run()
    {
        used_p_.assign(P_.size(), false);
        used_n_.assign(N_.size(), false);
        if (!P_.empty() && !place(sum_p_, P_.size()))
            return false;
        return extend_p(Residue{0});
    }

    [[nodiscard]] const std::vector<Residue>& p_order() const { return p_; }
    [[nodiscard]] const std::vector<Residue>& n_order() const { return n_; }
    [[nodiscard]] std::size_t nodes() const { return nodes_; }

private:
    bool place(Residue value, std::size_t position)
    {
        if (value.value == 0 && position != total_)
            return false;
        return seen_.insert(value.value).second;
    }

    void unplace(Residue value) { seen_.erase(value.value); }

    void tick()
    {
        if (++nodes_ > budget_)
            throw error(errc::search_exhausted, "P/N ordering search exceeded " + std::to_string(budget_) + " nodes");
    }

    std::vector<std::size_t> candidates(const std::vector<Residue>& pool, const std::vector<bool>& used,
                                        Residue prefix, const ResidueSet& avoid) const
    {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (!used[i])
                idx.push_back(i);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            const bool ha = avoid.contains(m_.add(prefix, pool[a]));
            const bool hb = avoid.contains(m_.add(prefix, pool[b]));
            if (ha != hb)
                return !ha;
            const u64 ma = m_.magnitude(pool[a]), mb = m_.magnitude(pool[b]);
            return ma != mb ? ma < mb : pool[a].value < pool[b].value;
        });
        return idx;
    }

    bool extend_p(Residue prefix)
    {
        const std::size_t i = p_.size();
        if (i == P_.size())
            return after_p();
        for (std::size_t c : candidates(P_, used_p_, prefix, avoid_plus_)) {
            tick();
            const Residue next = m_.add(prefix, P_[c]);
            // the full prefix_|P| = S_P gives no new partial sum
            const bool emits = i + 1 < P_.size();
            const Residue value = m_.sub(sum_p_, next);
            if (emits && !place(value, P_.size() - (i + 1)))
                continue;
            used_p_[c] = true;
            p_.push_back(P_[c]);
            if (extend_p(next))
                return true;
            p_.pop_back();
            used_p_[c] = false;
            if (emits)
                unplace(value);
        }
        return false;
    }

    bool after_p()
    {
        Residue running = sum_p_;
        bool placed = false;
        if (delta_.value != 0) {
            running = m_.add(running, delta_);
            if (!place(running, P_.size() + 1))
                return false;
            placed = true;
        }
        if (extend_n(running, Residue{0}))
            return true;
        if (placed)
            unplace(running);
        return false;
    }

    bool extend_n(Residue running, Residue prefix)
    {
        const std::size_t j = n_.size();
        if (j == N_.size())
            return true;
        const std::size_t base = P_.size() + (delta_.value != 0 ? 1 : 0);
        for (std::size_t c : candidates(N_, used_n_, prefix, avoid_minus_)) {
            tick();
            const Residue value = m_.add(running, N_[c]);
            if (!place(value, base + j + 1))
                continue;
            used_n_[c] = true;
            n_.push_back(N_[c]);
            if (extend_n(value, m_.add(prefix, N_[c])))
                return true;
            n_.pop_back();
            used_n_[c] = false;
            unplace(value);
        }
        return false;
    }

    Modulus m_;
    std::vector<Residue> P_, N_;
    Residue delta_;
    std::size_t budget_;
    ResidueSet avoid_plus_, avoid_minus_;
    std::size_t total_ = 0;
    Residue sum_p_{0};
    std::unordered_set<u64> seen_;
    std::vector<bool> used_p_, used_n_;
    std::vector<Residue> p_, n_;
    std::size_t nodes_ = 0;
};

inline bool pn_in_regime(const Modulus& m, std::span<const Residue> P, std::span<const Residue> N, Residue delta)
{
    const u128 pn = P.size() + N.size();
    auto small = [&](u64 mag) { return static_cast<u128>(mag) * 4 * pn < m.k(); };
    const bool p_ok = std::all_of(P.begin(), P.end(), [&](Residue x) { return m.signed_rep(x) > 0 && small(m.magnitude(x)); });
    const bool n_ok = std::all_of(N.begin(), N.end(), [&](Residue x) { return m.signed_rep(x) < 0 && small(m.magnitude(x)); });
    const bool d_ok = delta.value == 0 || (m.signed_rep(delta) > 0 && small(m.magnitude(delta)));
    return p_ok && n_ok && d_ok;
}

} // namespace detail

/// Orders P and N. When signed_rep(delta) < 0 the instance is reflected
/// (P' = -N, N' = -P, delta' = -delta, Y+' = -Y-, Y-' = -Y+), solved, and mapped back
/// with p = -n', n = -p'; negating and reversing a sequencing gives a sequencing.
inline PNOrderings order_pn(const GroundSet& P, const GroundSet& N, Residue delta,
                            const std::vector<ResidueSet>& y_plus, const std::vector<ResidueSet>& y_minus,
                            const PNConfig& config = {})
{
    const Modulus& m = P.modulus();
    if (!(N.modulus() == m))
        throw error(errc::invalid_argument, "P and N must share a modulus");
    if (y_plus.size() != y_minus.size())
        throw error(errc::invalid_argument, "Y+ and Y- must have the same length");
    const Residue sum_p = m.sum(P.elements());
    const Residue sum_n = m.sum(N.elements());
    if (delta.value != 0) {
        if (!P.empty() && m.add(delta, sum_n).value == 0)
            throw error(errc::search_exhausted, "delta = -sum(N) with P nonempty: reverse(p), delta, n repeats S_P");
        if (!N.empty() && m.add(delta, sum_p).value == 0)
            throw error(errc::search_exhausted, "delta = -sum(P) with N nonempty: a non-final partial sum is 0");
    }

    const bool negated = delta.value != 0 && m.signed_rep(delta) < 0;
    std::vector<Residue> sp = P.elements(), sn = N.elements();
    Residue sd = delta;
    std::vector<ResidueSet> yp = y_plus, ym = y_minus;
    if (negated) {
        sp.clear();
        sn.clear();
        for (Residue x : N.elements())
            sp.push_back(m.neg(x));
        for (Residue x : P.elements())
            sn.push_back(m.neg(x));
        sd = m.neg(delta);
        yp.clear();
        ym.clear();
        for (const auto& y : y_minus)
            yp.push_back(negate(m, y));
        for (const auto& y : y_plus)
            ym.push_back(negate(m, y));
    }

    detail::PNSearch search(m, sp, sn, sd, yp, ym, config.node_budget);
    if (!search.run())
        throw error(errc::search_exhausted, "no ordering of P and N yields a sequencing");

    PNOrderings out{m, {}, {}, delta, y_plus, y_minus, {}, {}, negated, false, false, search.nodes()};
    if (negated) {
        for (Residue x : search.n_order())
            out.p_order.push_back(m.neg(x));
        for (Residue x : search.p_order())
            out.n_order.push_back(m.neg(x));
    } else {
        out.p_order = search.p_order();
        out.n_order = search.n_order();
    }
    out.in_regime = detail::pn_in_regime(m, sp, sn, sd);
    out.achieved_plus = detail::intersection_counts(m, out.p_order, y_plus);
    out.achieved_minus = detail::intersection_counts(m, out.n_order, y_minus);
    out.within_budget = detail::counts_within_budget(y_plus, out.achieved_plus) &&
                        detail::counts_within_budget(y_minus, out.achieved_minus);
    return out;
}

} // namespace zkseq
