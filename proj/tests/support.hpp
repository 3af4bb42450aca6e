#pragma once

// Hand-rolled generators for property tests.

#include "zkseq/zkseq.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

namespace zkseq::testing {

inline constexpr u64 kSmallPrimes[] = {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101};

inline u64 random_modulus(Rng& rng, u64 lo, u64 hi) { return lo + rng.below(hi - lo + 1); }

inline u64 random_prime(Rng& rng) { return kSmallPrimes[rng.below(std::size(kSmallPrimes))]; }

/// Uniform subset of Z_k \ {0} of the given size (size < k).
inline GroundSet random_nonzero_set(Rng& rng, const Modulus& m, std::size_t size)
{
    std::vector<u64> pool(m.k() - 1);
    std::iota(pool.begin(), pool.end(), u64{1});
    rng.shuffle(pool);
    pool.resize(std::min<std::size_t>(size, pool.size()));
    return GroundSet::from_values(m, pool);
}

/// Uniform subset of Z_k (zero allowed).
inline GroundSet random_set(Rng& rng, const Modulus& m, std::size_t size)
{
    std::vector<u64> pool(m.k());
    std::iota(pool.begin(), pool.end(), u64{0});
    rng.shuffle(pool);
    pool.resize(std::min<std::size_t>(size, pool.size()));
    return GroundSet::from_values(m, pool);
}

inline Ordering random_ordering(Rng& rng, const GroundSet& a)
{
    Ordering o{a.modulus(), a.elements()};
    rng.shuffle(o.items);
    return o;
}

inline Residue random_unit(Rng& rng, const Modulus& m)
{
    for (;;) {
        const Residue x{rng.below(m.k())};
        if (m.is_unit(x))
            return x;
    }
}

/// Powers of a base below the modulus; dissociated whenever base >= 3 and the
/// signed sums stay below k/2.
inline std::vector<Residue> powers(u64 base, std::size_t count)
{
    std::vector<Residue> out;
    u64 v = 1;
    for (std::size_t i = 0; i < count; ++i, v *= base)
        out.push_back(Residue{v});
    return out;
}

inline std::vector<Residue> subset_by_mask(std::span<const Residue> xs, u64 mask)
{
    std::vector<Residue> out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (mask >> i & 1u)
            out.push_back(xs[i]);
    return out;
}

/// Definition-level check: no nonzero {-1,0,1} combination vanishes.
inline bool dissociated_by_signs(const Modulus& m, std::span<const Residue> d)
{
    std::size_t total = 1;
    for (std::size_t i = 0; i < d.size(); ++i)
        total *= 3;
    for (std::size_t code = 1; code < total; ++code) {
        std::size_t c = code;
        Residue acc{0};
        for (Residue x : d) {
            const std::size_t e = c % 3;
            c /= 3;
            if (e == 1)
                acc = m.add(acc, x);
            else if (e == 2)
                acc = m.sub(acc, x);
        }
        if (acc.value == 0)
            return false;
    }
    return true;
}

/// Largest dissociated subset by trying every subset.
inline std::size_t dimension_by_subsets(const Modulus& m, std::span<const Residue> b)
{
    std::size_t best = 0;
    for (u64 mask = 0; mask < (u64{1} << b.size()); ++mask) {
        const auto sub = subset_by_mask(b, mask);
        if (sub.size() > best && dissociated_by_signs(m, sub))
            best = sub.size();
    }
    return best;
}

/// Every permutation of `a`, filtered by `pred`; stops at the first hit.
template <class Pred>
bool any_permutation(const GroundSet& a, Pred pred)
{
    std::vector<Residue> items = a.elements();
    std::sort(items.begin(), items.end());
    do {
        if (pred(Ordering{a.modulus(), items}))
            return true;
    } while (std::next_permutation(items.begin(), items.end()));
    return false;
}

struct PlantedInstance {
    GroundSet set;
    std::vector<std::vector<Residue>> blocks;
    Residue delta;
};

/// k = 1000003; two blocks of eight elements whose union is dissociated, plus
/// P = {1, 2} and N = {k - 2}. The union is c * {+-w 2^i : i < 16} for a random
/// unit c and w in [1, 7]: every signed sum of w 2^i is below k/2 in magnitude, so
/// the set is dissociated, and the dilation scatters it. Redrawn until every block
/// element has magnitude at least k/64 and delta lies in (-k/4, k/4) avoiding
/// {0} u -P u -N u {-sum P, -sum N}.
inline PlantedInstance planted_instance(u64 seed, std::size_t block = 8)
{
    const Modulus m(1'000'003);
    Rng rng(seed, 0x91a7);
    const std::vector<Residue> small{Residue{1}, Residue{2}, Residue{m.k() - 2}};
    const u64 w = 1 + rng.below(7);
    for (;;) {
        const Residue c{1 + rng.below(m.k() - 1)};
        std::vector<Residue> all;
        bool large = true;
        for (std::size_t i = 0; i < 2 * block; ++i) {
            const Residue base = m.residue((w << i) % m.k());
            const Residue x = m.mul(c, rng.below(2) ? base : m.neg(base));
            large = large && m.magnitude(x) * 64 >= m.k();
            all.push_back(x);
        }
        if (!large)
            continue;
        rng.shuffle(all);
        const Residue delta = m.sum(all);
        if (static_cast<u128>(m.magnitude(delta)) * 4 >= m.k())
            continue;
        const i64 d = m.signed_rep(delta);
        if (d == 0 || d == -1 || d == -2 || d == 2 || d == -3)
            continue;
        std::vector<Residue> elems = all;
        elems.insert(elems.end(), small.begin(), small.end());
        std::vector<std::vector<Residue>> blocks{{all.begin(), all.begin() + static_cast<std::ptrdiff_t>(block)},
                                                 {all.begin() + static_cast<std::ptrdiff_t>(block), all.end()}};
        return {GroundSet(m, std::move(elems)), std::move(blocks), delta};
    }
}

} // namespace zkseq::testing
