#pragma once

// Dissociated sets, dimension, and bounded subset sums.

#include "zkseq/error.hpp"
#include "zkseq/zk.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace zkseq {

inline constexpr std::size_t kDissociationEnumerationLimit = 30;
inline constexpr std::size_t kExactDimensionLimit = 20;
inline constexpr u64 kSubsetSumLimit = 10'000'000;

/// C(n, m), saturating at `cap + 1`.
inline u64 binomial_capped(std::size_t n, std::size_t m, u64 cap = std::numeric_limits<u64>::max() - 1)
{
    if (m > n)
        return 0;
    m = std::min(m, n - m);
    u128 c = 1;
    for (std::size_t i = 1; i <= m; ++i) {
        c = c * (n - m + i) / i;
        if (c > cap)
            return cap + 1;
    }
    return static_cast<u64>(c);
}

namespace detail {

/// `sums` holds the sorted, pairwise distinct subset sums of some set S.
/// Replaces it with the subset sums of S + {d}; returns false (leaving `sums`
/// unspecified) as soon as two of them coincide.
inline bool extend_distinct_sums(const Modulus& m, std::vector<u64>& sums, Residue d, std::vector<u64>& scratch)
{
    if (d.value == 0)
        return false;
    const u64 k = m.k();
    // sums + d is two ascending runs: the wrapped tail, then the unwrapped head.
    const auto split = std::lower_bound(sums.begin(), sums.end(), k - d.value);
    scratch.clear();
    scratch.reserve(sums.size());
    for (auto it = split; it != sums.end(); ++it)
        scratch.push_back(*it - (k - d.value));
    for (auto it = sums.begin(); it != split; ++it)
        scratch.push_back(*it + d.value);

    std::vector<u64> merged;
    merged.reserve(sums.size() * 2);
    auto a = sums.begin();
    auto b = scratch.begin();
    while (a != sums.end() && b != scratch.end()) {
        if (*a == *b)
            return false;
        merged.push_back(*a < *b ? *a++ : *b++);
    }
    merged.insert(merged.end(), a, sums.end());
    merged.insert(merged.end(), b, scratch.end());
    sums = std::move(merged);
    return true;
}

} // namespace detail

/// True iff all 2^|D| subset sums of `d` are distinct mod k.
inline bool is_dissociated(const Modulus& m, std::span<const Residue> d)
{
    if (d.size() > kDissociationEnumerationLimit)
        throw error(errc::size_limit, "is_dissociated supports at most " +
                                          std::to_string(kDissociationEnumerationLimit) + " elements");
    std::vector<u64> sums{0};
    std::vector<u64> scratch;
    for (Residue x : d) {
        if (!detail::extend_distinct_sums(m, sums, x, scratch))
            return false;
    }
    return true;
}

inline bool is_dissociated(const GroundSet& d) { return is_dissociated(d.modulus(), d.elements()); }

/// Ascending |signed_rep|; x before k-x on ties.
inline std::vector<Residue> magnitude_scan_order(const Modulus& m, std::span<const Residue> xs)
{
    std::vector<Residue> order(xs.begin(), xs.end());
    std::stable_sort(order.begin(), order.end(), [&](Residue a, Residue b) {
        const u64 ma = m.magnitude(a), mb = m.magnitude(b);
        return ma != mb ? ma < mb : a.value < b.value;
    });
    return order;
}

/// Greedy extension along `scan`: keep each element that leaves the set dissociated,
/// stopping once `target_size` elements are kept.
inline std::vector<Residue> greedy_dissociated_in_order(const Modulus& m, std::span<const Residue> scan,
                                                        std::size_t target_size)
{
    std::vector<Residue> kept;
    std::vector<u64> sums{0};
    std::vector<u64> trial;
    std::vector<u64> scratch;
    for (Residue x : scan) {
        if (kept.size() >= target_size || kept.size() >= kDissociationEnumerationLimit)
            break;
        trial = sums;
        if (detail::extend_distinct_sums(m, trial, x, scratch)) {
            sums.swap(trial);
            kept.push_back(x);
        }
    }
    return kept;
}

inline GroundSet greedy_max_dissociated(const GroundSet& b,
                                        std::size_t target_size = std::numeric_limits<std::size_t>::max())
{
    const auto scan = magnitude_scan_order(b.modulus(), b.elements());
    return GroundSet(b.modulus(), greedy_dissociated_in_order(b.modulus(), scan, target_size));
}

/// Exact dim(B): size of a largest dissociated subset. Branch and bound over
/// include/exclude decisions; a branch dies as soon as its set stops being dissociated.
inline std::size_t dimension(const GroundSet& b)
{
    if (b.size() > kExactDimensionLimit)
        throw error(errc::size_limit,
                    "exact dimension supports at most " + std::to_string(kExactDimensionLimit) + " elements");
    const Modulus& m = b.modulus();
    const auto elems = magnitude_scan_order(m, b.elements());
    const std::size_t n = elems.size();
    std::size_t best = 0;
    std::vector<u64> scratch;

    auto search = [&](auto&& self, std::size_t i, const std::vector<u64>& sums, std::size_t size) -> void {
        if (size + (n - i) <= best)
            return;
        if (i == n) {
            best = size;
            return;
        }
        std::vector<u64> with = sums;
        if (detail::extend_distinct_sums(m, with, elems[i], scratch))
            self(self, i + 1, with, size + 1);
        self(self, i + 1, sums, size);
    };
    search(search, 0, std::vector<u64>{0}, 0);
    return best;
}

namespace detail {

inline void check_subset_sum_budget(std::size_t n, std::size_t mm)
{
    if (binomial_capped(n, mm, kSubsetSumLimit) > kSubsetSumLimit)
        throw error(errc::size_limit, "C(" + std::to_string(n) + ", " + std::to_string(mm) + ") exceeds " +
                                          std::to_string(kSubsetSumLimit));
}

/// layers[j] = { sums of j-subsets of t } for j <= depth.
inline std::vector<std::vector<u64>> subset_sum_layers(const Modulus& m, std::span<const Residue> t,
                                                       std::size_t depth)
{
    std::vector<std::vector<u64>> layers(depth + 1);
    layers[0] = {0};
    std::vector<u64> shifted;
    std::vector<u64> merged;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = std::min(depth, i + 1); j >= 1; --j) {
            const auto& prev = layers[j - 1];
            if (prev.empty())
                continue;
            shifted.clear();
            for (u64 s : prev)
                shifted.push_back(m.add(Residue{s}, t[i]).value);
            std::sort(shifted.begin(), shifted.end());
            merged.clear();
            std::set_union(layers[j].begin(), layers[j].end(), shifted.begin(), shifted.end(),
                           std::back_inserter(merged));
            layers[j].swap(merged);
        }
    }
    return layers;
}

inline ResidueSet to_set(const std::vector<u64>& values)
{
    std::vector<Residue> out;
    out.reserve(values.size());
    for (u64 v : values)
        out.push_back(Residue{v});
    return ResidueSet(std::move(out));
}

} // namespace detail

/// { sum(S) : S subset of T, |S| = M }
inline ResidueSet subset_sums_exact(const Modulus& m, std::span<const Residue> t, std::size_t mm)
{
    const std::size_t n = t.size();
    if (mm > n)
        return {};
    detail::check_subset_sum_budget(n, mm);
    // Large M: complement against the full sum keeps every DP layer below C(n, M).
    if (mm > n - mm) {
        const Residue total = m.sum(t);
        const auto layers = detail::subset_sum_layers(m, t, n - mm);
        std::vector<Residue> out;
        out.reserve(layers[n - mm].size());
        for (u64 s : layers[n - mm])
            out.push_back(m.sub(total, Residue{s}));
        return ResidueSet(std::move(out));
    }
    const auto layers = detail::subset_sum_layers(m, t, mm);
    return detail::to_set(layers[mm]);
}

inline ResidueSet subset_sums_exact(const GroundSet& t, std::size_t mm)
{
    return subset_sums_exact(t.modulus(), t.elements(), mm);
}

/// { sum(S) : S subset of T, |S| <= M }
inline ResidueSet subset_sums_upto(const Modulus& m, std::span<const Residue> t, std::size_t mm)
{
    ResidueSet out{0};
    for (std::size_t j = 1; j <= std::min(mm, t.size()); ++j)
        out.merge(subset_sums_exact(m, t, j));
    return out;
}

inline ResidueSet subset_sums_upto(const GroundSet& t, std::size_t mm)
{
    return subset_sums_upto(t.modulus(), t.elements(), mm);
}

} // namespace zkseq
