#pragma once

// Residue arithmetic in Z_k.

#include "zkseq/error.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <numeric>
#include <span>
#include <tuple>
#include <utility>
#include <string>
#include <vector>

namespace zkseq {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 n) { return static_cast<u64>(static_cast<u128>(a) * b % n); }

inline u64 powmod(u64 a, u64 e, u64 n)
{
    u64 r = 1 % n;
    for (a %= n; e; e >>= 1, a = mulmod(a, a, n))
        if (e & 1)
            r = mulmod(r, a, n);
    return r;
}

/// Deterministic Miller-Rabin; these bases cover every 64-bit n.
inline bool is_prime_u64(u64 n)
{
    if (n < 2)
        return false;
    for (u64 q : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u})
        if (n % q == 0)
            return n == q;
    u64 d = n - 1;
    int s = 0;
    for (; d % 2 == 0; d /= 2)
        ++s;
    for (u64 a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s && composite; ++i) {
            x = mulmod(x, x, n);
            composite = x != n - 1;
        }
        if (composite)
            return false;
    }
    return true;
}

} // namespace detail

/// Smallest prime dividing k: a primality test, then trial division.
inline u64 least_prime_divisor(u64 k)
{
    if (k < 2)
        throw error(errc::invalid_modulus, "modulus must be at least 2, got " + std::to_string(k));
    if (k % 2 == 0)
        return 2;
    if (detail::is_prime_u64(k))
        return k;
    for (u64 q = 3; q <= k / q; q += 2) {
        if (k % q == 0)
            return q;
    }
    return k;
}

struct Residue {
    u64 value = 0;

    constexpr auto operator<=>(const Residue&) const = default;
};

/// The ring Z_k together with its least prime divisor p.
class Modulus {
public:
    explicit Modulus(u64 k) : k_(k), p_(least_prime_divisor(k)) {}

    [[nodiscard]] u64 k() const noexcept { return k_; }
    [[nodiscard]] u64 p() const noexcept { return p_; }

    [[nodiscard]] Residue residue(u64 value) const
    {
        if (value >= k_)
            throw error(errc::invalid_argument,
                        "residue " + std::to_string(value) + " out of range [0, " + std::to_string(k_) + ")");
        return Residue{value};
    }

    [[nodiscard]] Residue reduce(i64 x) const noexcept
    {
        const auto k = static_cast<__int128>(k_);
        __int128 r = static_cast<__int128>(x) % k;
        if (r < 0)
            r += k;
        return Residue{static_cast<u64>(r)};
    }

    [[nodiscard]] Residue add(Residue a, Residue b) const noexcept
    {
        return Residue{static_cast<u64>((static_cast<u128>(a.value) + b.value) % k_)};
    }

    [[nodiscard]] Residue sub(Residue a, Residue b) const noexcept
    {
        return a.value >= b.value ? Residue{a.value - b.value} : Residue{k_ - (b.value - a.value)};
    }

    [[nodiscard]] Residue neg(Residue a) const noexcept { return a.value == 0 ? a : Residue{k_ - a.value}; }

    [[nodiscard]] Residue mul(Residue a, Residue b) const noexcept
    {
        return Residue{static_cast<u64>(static_cast<u128>(a.value) * b.value % k_)};
    }

    /// The representative in (-k/2, k/2].
    [[nodiscard]] i64 signed_rep(Residue a) const noexcept
    {
        if (a.value <= k_ / 2)
            return static_cast<i64>(a.value);
        return -static_cast<i64>(k_ - a.value);
    }

    /// |signed_rep(a)|, the distance from a to 0 on the circle.
    [[nodiscard]] u64 magnitude(Residue a) const noexcept { return std::min(a.value, k_ - a.value); }

    [[nodiscard]] bool is_unit(Residue a) const noexcept { return std::gcd(a.value, k_) == 1; }

    [[nodiscard]] Residue inverse(Residue a) const
    {
        // extended Euclid on signed 128-bit to avoid overflow near 2^64
        __int128 r0 = k_, r1 = a.value, s0 = 0, s1 = 1;
        while (r1 != 0) {
            const __int128 q = r0 / r1;
            std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
            std::tie(s0, s1) = std::pair{s1, s0 - q * s1};
        }
        if (r0 != 1)
            throw error(errc::non_unit_dilation, std::to_string(a.value) + " is not a unit mod " + std::to_string(k_));
        if (s0 < 0)
            s0 += k_;
        return Residue{static_cast<u64>(s0)};
    }

    [[nodiscard]] Residue sum(std::span<const Residue> xs) const noexcept
    {
        Residue total{0};
        for (Residue x : xs)
            total = add(total, x);
        return total;
    }

    friend bool operator==(const Modulus& a, const Modulus& b) noexcept { return a.k_ == b.k_; }

private:
    u64 k_;
    u64 p_;
};

/// Sorted, duplicate-free collection of residues.
class ResidueSet {
public:
    ResidueSet() = default;
    ResidueSet(std::initializer_list<u64> values)
    {
        for (u64 v : values)
            items_.push_back(Residue{v});
        normalize();
    }
    explicit ResidueSet(std::vector<Residue> items) : items_(std::move(items)) { normalize(); }

    [[nodiscard]] bool contains(Residue x) const { return std::binary_search(items_.begin(), items_.end(), x); }
    [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }
    [[nodiscard]] bool empty() const noexcept { return items_.empty(); }
    [[nodiscard]] auto begin() const noexcept { return items_.begin(); }
    [[nodiscard]] auto end() const noexcept { return items_.end(); }
    [[nodiscard]] const std::vector<Residue>& items() const noexcept { return items_; }

    void merge(const ResidueSet& other)
    {
        std::vector<Residue> out;
        out.reserve(items_.size() + other.items_.size());
        std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                       std::back_inserter(out));
        items_ = std::move(out);
    }

    friend bool operator==(const ResidueSet&, const ResidueSet&) = default;

private:
    void normalize()
    {
        std::sort(items_.begin(), items_.end());
        items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
    }

    std::vector<Residue> items_;
};

/// {c + x : x in xs}
inline ResidueSet translate(const Modulus& m, const ResidueSet& xs, Residue c)
{
    std::vector<Residue> out;
    out.reserve(xs.size());
    for (Residue x : xs)
        out.push_back(m.add(x, c));
    return ResidueSet(std::move(out));
}

/// {-x : x in xs}
inline ResidueSet negate(const Modulus& m, const ResidueSet& xs)
{
    std::vector<Residue> out;
    out.reserve(xs.size());
    for (Residue x : xs)
        out.push_back(m.neg(x));
    return ResidueSet(std::move(out));
}

/// A finite set of residues of a fixed modulus, stored in ascending order.
class GroundSet {
public:
    explicit GroundSet(Modulus modulus) : modulus_(modulus) {}

    /// Throws invalid-argument on out-of-range values or duplicates.
    GroundSet(Modulus modulus, std::vector<Residue> elements) : modulus_(modulus), elements_(std::move(elements))
    {
        std::sort(elements_.begin(), elements_.end());
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (elements_[i].value >= modulus_.k())
                throw error(errc::invalid_argument, "element " + std::to_string(elements_[i].value) +
                                                        " out of range for k=" + std::to_string(modulus_.k()));
            if (i > 0 && elements_[i] == elements_[i - 1])
                throw error(errc::invalid_argument, "duplicate element " + std::to_string(elements_[i].value));
        }
    }

    static GroundSet from_values(Modulus modulus, std::span<const u64> values)
    {
        std::vector<Residue> rs;
        rs.reserve(values.size());
        for (u64 v : values)
            rs.push_back(Residue{v});
        return GroundSet(modulus, std::move(rs));
    }

    static GroundSet from_values(Modulus modulus, std::initializer_list<u64> values)
    {
        return from_values(modulus, std::span<const u64>(values.begin(), values.size()));
    }

    [[nodiscard]] const Modulus& modulus() const noexcept { return modulus_; }
    [[nodiscard]] const std::vector<Residue>& elements() const noexcept { return elements_; }
    [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
    [[nodiscard]] bool empty() const noexcept { return elements_.empty(); }
    [[nodiscard]] bool contains(Residue x) const
    {
        return std::binary_search(elements_.begin(), elements_.end(), x);
    }

    /// Inputs A to the sequencing problem must avoid 0.
    void require_nonzero() const
    {
        if (contains(Residue{0}))
            throw error(errc::zero_element, "0 is not allowed in the ground set");
    }

    friend bool operator==(const GroundSet& a, const GroundSet& b)
    {
        return a.modulus_ == b.modulus_ && a.elements_ == b.elements_;
    }

private:
    Modulus modulus_;
    std::vector<Residue> elements_;
};

/// An arrangement of residues; when it orders a GroundSet the items are a permutation of it.
struct Ordering {
    Modulus modulus;
    std::vector<Residue> items;

    [[nodiscard]] std::size_t size() const noexcept { return items.size(); }

    static Ordering from_values(Modulus modulus, std::initializer_list<u64> values)
    {
        Ordering o{modulus, {}};
        for (u64 v : values)
            o.items.push_back(Residue{v});
        return o;
    }

    friend bool operator==(const Ordering& a, const Ordering& b)
    {
        return a.modulus == b.modulus && a.items == b.items;
    }
};

/// True iff `o` lists exactly the elements of `a`.
inline bool is_ordering_of(const Ordering& o, const GroundSet& a)
{
    if (!(o.modulus == a.modulus()) || o.items.size() != a.size())
        return false;
    std::vector<Residue> sorted = o.items;
    std::sort(sorted.begin(), sorted.end());
    return sorted == a.elements();
}

inline bool is_unit(const Modulus& m, Residue x) { return m.is_unit(x); }

inline i64 signed_rep(const Modulus& m, Residue x) { return m.signed_rep(x); }

/// {lambda * s : s in S}; lambda must be a unit.
inline GroundSet dilate(const GroundSet& s, Residue lambda)
{
    const Modulus& m = s.modulus();
    if (lambda.value >= m.k() || !m.is_unit(lambda))
        throw error(errc::non_unit_dilation,
                    std::to_string(lambda.value) + " is not a unit mod " + std::to_string(m.k()));
    std::vector<Residue> out;
    out.reserve(s.size());
    for (Residue x : s.elements())
        out.push_back(m.mul(lambda, x));
    return GroundSet(m, std::move(out));
}

inline std::vector<Residue> dilate(const Modulus& m, std::span<const Residue> xs, Residue lambda)
{
    std::vector<Residue> out;
    out.reserve(xs.size());
    for (Residue x : xs)
        out.push_back(m.mul(lambda, x));
    return out;
}

inline std::vector<u64> values_of(std::span<const Residue> xs)
{
    std::vector<u64> out;
    out.reserve(xs.size());
    for (Residue x : xs)
        out.push_back(x.value);
    return out;
}

} // namespace zkseq
