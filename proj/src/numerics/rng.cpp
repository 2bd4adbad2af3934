#include "dkn/numerics/rng.hpp"

#include <cmath>
#include <numbers>

namespace dkn {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
}

// 53 random bits mapped to (0, 1].
inline double to_unit(std::uint32_t hi, std::uint32_t lo)
{
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) noexcept
{
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c[0], hi0, lo0);
        mulhilo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kPhiloxW0;
        k[1] += kPhiloxW1;
    }
    return c;
}

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RngStream RngStream::substream(std::uint64_t purpose) const noexcept
{
    return RngStream(seed_, mix64(stream_ ^ mix64(purpose)));
}

std::array<std::uint32_t, 4> RngStream::next_block() noexcept
{
    const std::uint64_t n = counter_++;
    const std::array<std::uint32_t, 4> ctr{
        static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                           static_cast<std::uint32_t>(seed_ >> 32)};
    return philox4x32(ctr, key);
}

double RngStream::uniform() noexcept
{
    const auto b = next_block();
    // (0, 1] → (0, 1): the value 1 has probability 2^-53; fold it onto the
    // smallest positive draw.
    const double u = to_unit(b[0], b[1]);
    return u < 1.0 ? u : 0x1.0p-53;
}

double RngStream::normal() noexcept
{
    const auto b = next_block();
    const double u1 = to_unit(b[0], b[1]);
    const double u2 = to_unit(b[2], b[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) noexcept
{
    if (n <= 1) {
        return 0;
    }
    // Rejection sampling on 64-bit words.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    for (;;) {
        const auto b = next_block();
        const std::uint64_t r = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
        if (r < limit) {
            return r % n;
        }
    }
}

void RngStream::fill_normal(std::span<double> out) noexcept
{
    for (double& v : out) {
        v = normal();
    }
}

std::vector<double> sample_std_normal(RngStream& stream, std::size_t count)
{
    std::vector<double> out(count);
    stream.fill_normal(out);
    return out;
}

} // namespace dkn
