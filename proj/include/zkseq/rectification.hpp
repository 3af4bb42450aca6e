#pragma once

// Dilating a low-dimensional set into a short interval around 0.

#include "zkseq/dissociation.hpp"
#include "zkseq/error.hpp"
#include "zkseq/zk.hpp"

#include <cmath>
#include <cstddef>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace zkseq {

inline constexpr std::size_t kPigeonholeCoreLimit = 12;
inline constexpr u64 kExhaustiveScanLimit = 10'000'000;

enum class RectificationMethod { pigeonhole, exhaustive };

constexpr std::string_view to_string(RectificationMethod m) noexcept
{
    return m == RectificationMethod::pigeonhole ? "pigeonhole" : "exhaustive";
}

struct RectificationResult {
    Residue lambda;
    u64 max_abs = 0;  ///< max over b of |signed_rep(lambda * b)|
    RectificationMethod method = RectificationMethod::exhaustive;
    // pigeonhole only: boxes per coordinate m and the dissociated core it was run on;
    // every core element d then satisfies |signed_rep(lambda * d)| * m < k.
    u64 boxes = 0;
    std::vector<Residue> core;
};

/// h ln h + 2h ln 10 + h^2 ln 3 < ln p, with a relative guard band of 1e-12 on ln p.
inline bool goal_inequality_holds(u64 h, u64 p)
{
    const long double hh = static_cast<long double>(h);
    const long double lhs = hh * std::log(hh) + 2.0L * hh * std::log(10.0L) + hh * hh * std::log(3.0L);
    const long double rhs = std::log(static_cast<long double>(p));
    return lhs < rhs - 1e-12L * std::fabs(rhs);
}

inline u64 max_abs_after_dilation(const GroundSet& b, Residue lambda)
{
    const Modulus& m = b.modulus();
    u64 worst = 0;
    for (Residue x : b.elements())
        worst = std::max(worst, m.magnitude(m.mul(lambda, x)));
    return worst;
}

/// True iff max_abs < k / (100 |B|), the rectification target interval.
inline bool within_rectification_target(const RectificationResult& r, const GroundSet& b)
{
    return static_cast<u128>(r.max_abs) * 100u * b.size() < b.modulus().k();
}

namespace detail {

/// Largest m with m^r < p (so p points in m^r boxes must collide).
inline u64 pigeonhole_boxes(u64 p, std::size_t r)
{
    auto pow_below = [&](u64 m) {
        u128 acc = 1;
        for (std::size_t i = 0; i < r; ++i) {
            acc *= m;
            if (acc >= p)
                return false;
        }
        return true;
    };
    u64 m = static_cast<u64>(std::floor(std::pow(static_cast<long double>(p), 1.0L / static_cast<long double>(r))));
    m = std::max<u64>(m, 1);
    while (m > 1 && !pow_below(m))
        --m;
    while (pow_below(m + 1))
        ++m;
    return m;
}

// Box vectors are stored by their mixed-radix index, below boxes^r < p.
inline constexpr u64 kDenseBoxTable = u64{1} << 24;

} // namespace detail

/// Pigeonhole rectification over Lambda = {0, ..., p-1}: each lambda is hashed to the
/// vector of boxes containing lambda * d_i for the greedy maximal dissociated core
/// {d_1..d_r} of B. The first repeated box vector gives lambda_1 > lambda_2 and
/// lambda = lambda_1 - lambda_2, a unit because 0 < lambda < p.
inline RectificationResult rectify_pigeonhole(const GroundSet& b)
{
    if (b.empty())
        throw error(errc::invalid_argument, "rectification needs a nonempty set");
    const Modulus& m = b.modulus();
    const u64 k = m.k();
    const u64 p = m.p();
    auto core = greedy_max_dissociated(b).elements();
    const std::size_t r = core.size();
    if (r == 0)
        throw error(errc::invalid_argument, "set has no nonzero element");
    if (r > kPigeonholeCoreLimit)
        throw error(errc::size_limit, "dissociated core of size " + std::to_string(r) + " exceeds " +
                                          std::to_string(kPigeonholeCoreLimit));
    const u64 boxes = detail::pigeonhole_boxes(p, r);
    if (boxes < 2)
        throw rectification_infeasible(boxes, "p^(1/r) too small for a useful pigeonhole (p=" + std::to_string(p) +
                                                  ", r=" + std::to_string(r) + ")");

    u64 cells = 1;
    for (std::size_t i = 0; i < r; ++i)
        cells *= boxes;
    constexpr u64 kEmpty = ~u64{0};
    std::vector<u64> dense(cells <= detail::kDenseBoxTable ? cells : 0, kEmpty);
    std::unordered_map<u64, u64> sparse;
    // boxes^r + 1 dilates always collide, and boxes^r < p keeps them distinct.
    for (u64 lam = 0; lam <= cells && lam < p; ++lam) {
        u64 key = 0;
        for (std::size_t i = 0; i < r; ++i) {
            const u64 v = m.mul(Residue{lam % k}, core[i]).value;
            key = key * boxes + static_cast<u64>(static_cast<u128>(v) * boxes / k);
        }
        u64 earlier = kEmpty;
        if (!dense.empty()) {
            earlier = dense[key];
            dense[key] = earlier == kEmpty ? lam : earlier;
        } else if (auto [it, inserted] = sparse.try_emplace(key, lam); !inserted) {
            earlier = it->second;
        }
        if (earlier != kEmpty) {
            const Residue lambda{lam - earlier};
            return RectificationResult{lambda, max_abs_after_dilation(b, lambda), RectificationMethod::pigeonhole,
                                       boxes, std::move(core)};
        }
    }
    throw rectification_infeasible(boxes, "no box collision among " + std::to_string(p) + " dilates");
}

/// Unit lambda minimising max |signed_rep(lambda * b)|; ties go to the smallest lambda.
inline RectificationResult rectify_exhaustive(const GroundSet& b)
{
    if (b.empty())
        throw error(errc::invalid_argument, "rectification needs a nonempty set");
    const Modulus& m = b.modulus();
    if (m.k() > kExhaustiveScanLimit)
        throw error(errc::size_limit, "exhaustive rectification supports k <= " + std::to_string(kExhaustiveScanLimit));
    Residue best{1};
    u64 best_abs = max_abs_after_dilation(b, best);
    for (u64 lam = 2; lam < m.k(); ++lam) {
        const Residue l{lam};
        if (!m.is_unit(l))
            continue;
        u64 worst = 0;
        for (Residue x : b.elements()) {
            worst = std::max(worst, m.magnitude(m.mul(l, x)));
            if (worst >= best_abs)
                break;
        }
        if (worst < best_abs) {
            best_abs = worst;
            best = l;
        }
    }
    return RectificationResult{best, best_abs, RectificationMethod::exhaustive, 0, {}};
}

} // namespace zkseq
