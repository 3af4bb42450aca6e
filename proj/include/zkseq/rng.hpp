#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace zkseq {

/// Seedable, splittable generator. A stream is identified by (seed, stream id);
/// child streams are derived through std::seed_seq so shards never share state.
class Rng {
public:
    static constexpr std::string_view algorithm = "mt19937_64+seed_seq(seed,stream)";

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream), engine_(make(seed, stream)) {}

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

    /// Independent generator for sub-stream `id` of this stream.
    [[nodiscard]] Rng split(std::uint64_t id) const { return Rng(derive_seed(seed_, stream_), id); }

    template <class T>
    void shuffle(std::span<T> xs)
    {
        std::shuffle(xs.begin(), xs.end(), engine_);
    }

    template <class Container>
    void shuffle(Container& xs)
    {
        std::shuffle(xs.begin(), xs.end(), engine_);
    }

    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n)
    {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
    {
        std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), 0x5eedu};
        std::array<std::uint32_t, 2> out{};
        seq.generate(out.begin(), out.end());
        return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    }

private:
    static std::uint32_t lo(std::uint64_t x) { return static_cast<std::uint32_t>(x); }
    static std::uint32_t hi(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

    static std::mt19937_64 make(std::uint64_t seed, std::uint64_t stream)
    {
        std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream)};
        return std::mt19937_64(seq);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

} // namespace zkseq
