#pragma once

// Validators for valid orderings, sequencings and t-weak sequencings.

#include "zkseq/zk.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zkseq {

/// What an ordering is asked to be.
struct Goal {
    enum class Kind { valid, sequencing, tweak };
    Kind kind = Kind::sequencing;
    std::size_t t = 0;  ///< window for Kind::tweak

    static Goal valid() { return {Kind::valid, 0}; }
    static Goal sequencing() { return {Kind::sequencing, 0}; }
    static Goal tweak(std::size_t t) { return {Kind::tweak, t}; }

    [[nodiscard]] std::string name() const
    {
        switch (kind) {
        case Kind::valid: return "valid";
        case Kind::sequencing: return "sequencing";
        case Kind::tweak: return "tweak";
        }
        return "?";
    }

    friend bool operator==(const Goal&, const Goal&) = default;
};

/// Closed interval of 1-based positions.
struct Interval {
    std::size_t lo = 1;
    std::size_t hi = 1;

    [[nodiscard]] std::size_t length() const noexcept { return hi - lo + 1; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// p_i = a_1 + ... + a_i.
inline std::vector<Residue> partial_sums(const Ordering& o)
{
    std::vector<Residue> out;
    out.reserve(o.size());
    Residue acc{0};
    for (Residue a : o.items) {
        acc = o.modulus.add(acc, a);
        out.push_back(acc);
    }
    return out;
}

/// Partial sums pairwise distinct.
inline bool is_valid_ordering(const Ordering& o)
{
    auto sums = partial_sums(o);
    std::sort(sums.begin(), sums.end());
    return std::adjacent_find(sums.begin(), sums.end()) == sums.end();
}

/// Valid, and no partial sum but the last is 0.
inline bool is_sequencing(const Ordering& o)
{
    const auto sums = partial_sums(o);
    for (std::size_t i = 0; i + 1 < sums.size(); ++i) {
        if (sums[i].value == 0)
            return false;
    }
    return is_valid_ordering(o);
}

/// For every i != j with |i - j| <= t, p_i and p_j are nonzero and distinct.
inline bool is_t_weak(const Ordering& o, std::size_t t)
{
    const auto sums = partial_sums(o);
    const std::size_t n = sums.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n && j - i <= t; ++j) {
            if (sums[i].value == 0 || sums[j].value == 0 || sums[i] == sums[j])
                return false;
        }
    }
    return true;
}

inline bool satisfies(const Ordering& o, const Goal& goal)
{
    switch (goal.kind) {
    case Goal::Kind::valid: return is_valid_ordering(o);
    case Goal::Kind::sequencing: return is_sequencing(o);
    case Goal::Kind::tweak: return is_t_weak(o, goal.t);
    }
    return false;
}

/// All [i, j] with j - i + 1 <= max_len whose elements sum to 0, lexicographic.
inline std::vector<Interval> find_zero_intervals(const Ordering& o, std::optional<std::size_t> max_len = std::nullopt)
{
    const std::size_t n = o.size();
    const std::size_t limit = max_len.value_or(n);
    std::vector<Interval> out;
    for (std::size_t lo = 0; lo < n; ++lo) {
        Residue acc{0};
        for (std::size_t hi = lo; hi < n && hi - lo + 1 <= limit; ++hi) {
            acc = o.modulus.add(acc, o.items[hi]);
            if (acc.value == 0)
                out.push_back({lo + 1, hi + 1});
        }
    }
    return out;
}

/// First reason an ordering misses its goal: a zero partial sum at `i`
/// (j == 0), or p_i == p_j.
struct Witness {
    enum class Kind { zero_partial_sum, repeated_partial_sum };
    Kind kind;
    std::size_t i = 0;
    std::size_t j = 0;
    Residue value;

    [[nodiscard]] std::string_view kind_name() const noexcept
    {
        return kind == Kind::zero_partial_sum ? "zero_partial_sum" : "repeated_partial_sum";
    }
};

inline std::optional<Witness> first_violation(const Ordering& o, const Goal& goal)
{
    const auto sums = partial_sums(o);
    const std::size_t n = sums.size();
    const bool window = goal.kind == Goal::Kind::tweak;
    const std::size_t t = window ? goal.t : n;
    for (std::size_t j = 0; j < n; ++j) {
        const bool zero_forbidden = (goal.kind == Goal::Kind::sequencing && j + 1 < n) ||
                                    (window && n > 1 && t >= 1);
        if (zero_forbidden && sums[j].value == 0)
            return Witness{Witness::Kind::zero_partial_sum, j + 1, 0, sums[j]};
        for (std::size_t i = (j > t ? j - t : 0); i < j; ++i) {
            if (sums[i] == sums[j])
                return Witness{Witness::Kind::repeated_partial_sum, i + 1, j + 1, sums[j]};
        }
    }
    return std::nullopt;
}

namespace reference {

/// Pairwise O(n^2) checks, kept independent of the sort-based fast path.
inline bool is_valid_ordering(const Ordering& o)
{
    const auto sums = partial_sums(o);
    for (std::size_t i = 0; i < sums.size(); ++i)
        for (std::size_t j = i + 1; j < sums.size(); ++j)
            if (sums[i] == sums[j])
                return false;
    return true;
}

/// Via zero-sum intervals: an interval [i+1, j] sums to 0 iff p_i == p_j, and [1, j] iff p_j == 0.
inline bool is_sequencing(const Ordering& o)
{
    const std::size_t n = o.size();
    for (const Interval& iv : find_zero_intervals(o)) {
        if (iv.lo > 1)
            return false;
        if (iv.hi < n)
            return false;
    }
    return true;
}

} // namespace reference

} // namespace zkseq
