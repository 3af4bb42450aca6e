#pragma once

// Exhaustive ground truth on small instances.

#include "zkseq/error.hpp"
#include "zkseq/verify.hpp"
#include "zkseq/zk.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <thread>
#include <vector>

namespace zkseq {

inline constexpr std::size_t kOracleSizeLimit = 12;
inline constexpr u64 kCensusModulusLimit = 17;

/// Depth-first search over orderings of `a`, extending a prefix only while its newest
/// partial sum is compatible with the goal. No symmetry reduction.
inline std::optional<Ordering> brute_force(const GroundSet& a, const Goal& goal)
{
    if (a.size() > kOracleSizeLimit)
        throw error(errc::size_limit, "oracle supports |A| <= " + std::to_string(kOracleSizeLimit));
    const Modulus& m = a.modulus();
    const auto& elems = a.elements();
    const std::size_t n = elems.size();
    const std::size_t window = goal.kind == Goal::Kind::tweak ? goal.t : n;

    std::vector<Residue> order;
    std::vector<Residue> sums;
    std::vector<bool> used(n, false);
    order.reserve(n);
    sums.reserve(n);

    auto fits = [&](Residue s) {
        const std::size_t pos = sums.size();  // 0-based index of s
        if (s.value == 0) {
            if (goal.kind == Goal::Kind::sequencing && pos + 1 < n)
                return false;
            if (goal.kind == Goal::Kind::tweak && n > 1 && window >= 1)
                return false;
        }
        for (std::size_t i = (pos > window ? pos - window : 0); i < pos; ++i)
            if (sums[i] == s)
                return false;
        return true;
    };

    auto dfs = [&](auto&& self) -> bool {
        if (order.size() == n)
            return true;
        const Residue last = sums.empty() ? Residue{0} : sums.back();
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i])
                continue;
            const Residue s = m.add(last, elems[i]);
            if (!fits(s))
                continue;
            used[i] = true;
            order.push_back(elems[i]);
            sums.push_back(s);
            if (self(self))
                return true;
            used[i] = false;
            order.pop_back();
            sums.pop_back();
        }
        return false;
    };

    if (!dfs(dfs))
        return std::nullopt;
    return Ordering{m, std::move(order)};
}

struct CensusRow {
    u64 k = 0;
    u64 subset_bitmask = 0;  ///< bit (x-1) set iff x in A
    std::size_t size = 0;
    Goal goal;
    bool achievable = false;
    std::vector<Residue> witness;
};

struct CensusReport {
    u64 k = 0;
    std::size_t max_size = 0;
    Goal goal;
    std::vector<CensusRow> rows;  ///< ascending bitmask

    [[nodiscard]] std::size_t failures() const
    {
        return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const CensusRow& r) { return !r.achievable; }));
    }

    /// size -> (subsets, achievable)
    [[nodiscard]] std::map<std::size_t, std::pair<std::size_t, std::size_t>> counts_by_size() const
    {
        std::map<std::size_t, std::pair<std::size_t, std::size_t>> out;
        for (const auto& r : rows) {
            auto& c = out[r.size];
            ++c.first;
            c.second += r.achievable ? 1 : 0;
        }
        return out;
    }
};

/// Every nonempty A in Z_k \ {0} with |A| <= max_size, checked with brute_force.
inline CensusReport census(u64 k, std::size_t max_size, const Goal& goal, unsigned threads = 0)
{
    if (k > kCensusModulusLimit)
        throw error(errc::size_limit, "census supports k <= " + std::to_string(kCensusModulusLimit));
    const Modulus m(k);
    max_size = std::min<std::size_t>(max_size, std::min<u64>(k - 1, kOracleSizeLimit));
    std::vector<u64> masks;
    for (u64 mask = 1; mask < (u64{1} << (k - 1)); ++mask)
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) <= max_size)
            masks.push_back(mask);

    CensusReport report{k, max_size, goal, std::vector<CensusRow>(masks.size())};
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, masks.size())));

    auto work = [&](unsigned shard) {
        for (std::size_t idx = shard; idx < masks.size(); idx += threads) {
            std::vector<Residue> elems;
            for (u64 x = 1; x < k; ++x)
                if (masks[idx] >> (x - 1) & 1u)
                    elems.push_back(Residue{x});
            const GroundSet a(m, std::move(elems));
            auto found = brute_force(a, goal);
            auto& row = report.rows[idx];
            row = CensusRow{k, masks[idx], a.size(), goal, found.has_value(), {}};
            if (found)
                row.witness = std::move(found->items);
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned s = 0; s < threads; ++s)
        pool.emplace_back(work, s);
    pool.clear();
    return report;
}

} // namespace zkseq
