#pragma once

// Counter-based random streams (Philox4x32-10) keyed by (seed, stream id).
//
// A stream's output is a pure function of (seed, stream id, counter), so the
// same draws are produced on every platform and under any thread schedule.
// Normal variates use Box-Muller on our own uniforms; std:: distributions are
// avoided because their algorithms are implementation-defined.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace randhull::random {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t mix_ids(std::uint64_t a, std::uint64_t b) noexcept {
    return splitmix64(a ^ splitmix64(b + 0x632BE59BD9B4E019ull));
}

namespace detail {

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) noexcept {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

}  // namespace detail

class RngStream {
public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
        const std::uint64_t k = mix_ids(seed, stream_id);
        key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    std::uint64_t counter_lo() const noexcept { return ctr_lo_; }
    std::uint64_t counter_hi() const noexcept { return ctr_hi_; }

    /// Independent substream; depends only on (seed, stream id, index).
    RngStream substream(std::uint64_t index) const noexcept {
        return RngStream(seed_, mix_ids(stream_id_, index));
    }

    std::uint64_t next_u64() noexcept {
        if (buffered_ == 0) refill();
        const std::uint64_t v = buffer_[2 - buffered_];
        --buffered_;
        return v;
    }

    /// Uniform on [0, 1).
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1).
    double uniform_open() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    bool operator==(const RngStream&) const = default;

private:
    void refill() noexcept {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(ctr_lo_), static_cast<std::uint32_t>(ctr_lo_ >> 32),
            static_cast<std::uint32_t>(ctr_hi_), static_cast<std::uint32_t>(ctr_hi_ >> 32)};
        const auto out = detail::philox4x32_10(ctr, key_);
        buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
        buffered_ = 2;
        if (++ctr_lo_ == 0) ++ctr_hi_;
    }

    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::array<std::uint32_t, 2> key_{};
    std::uint64_t ctr_lo_ = 0;  // 128-bit counter
    std::uint64_t ctr_hi_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace randhull::random
