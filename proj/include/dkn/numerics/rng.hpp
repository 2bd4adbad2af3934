#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dkn {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finalizer, used to derive stream identifiers.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Reproducible random stream keyed by (master_seed, stream_id).
///
/// Draw k of a stream is a pure function of (master_seed, stream_id, k): the
/// master seed is the Philox key, the stream id and draw index form the
/// 128-bit counter. Streams must not be shared between workers; hand each
/// worker its own stream or a substream.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
        : seed_(master_seed), stream_(stream_id)
    {
    }

    std::uint64_t master_seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_; }
    std::uint64_t draws() const noexcept { return counter_; }

    /// Independent stream for a named purpose, derived from this stream's
    /// identity only (not from how many draws have been consumed).
    RngStream substream(std::uint64_t purpose) const noexcept;

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    /// Standard normal via Box–Muller; one counter block per draw.
    double normal() noexcept;
    /// Uniform integer in [0, n) without modulo bias.
    std::uint64_t uniform_index(std::uint64_t n) noexcept;

    void fill_normal(std::span<double> out) noexcept;

private:
    std::array<std::uint32_t, 4> next_block() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

/// `count` i.i.d. standard normal draws from the stream.
std::vector<double> sample_std_normal(RngStream& stream, std::size_t count);

/// Purpose tags for substreams used across the library.
namespace stream_purpose {
inline constexpr std::uint64_t knockoff = 0x6b6e6f636b6f6666ULL;
inline constexpr std::uint64_t statistic = 0x7374617469737469ULL;
inline constexpr std::uint64_t pcst = 0x7063737475000000ULL;
inline constexpr std::uint64_t dataset = 0x6461746173657400ULL;
inline constexpr std::uint64_t coefficients = 0x6265746162617200ULL;
inline constexpr std::uint64_t method = 0x6d6574686f640000ULL;
} // namespace stream_purpose

} // namespace dkn
