#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace latmix {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123), exposed
/// as a 64-bit UniformRandomBitGenerator.
///
/// The 64-bit key is the base seed; the upper half of the 128-bit counter
/// holds the stream index and the lower half the block position, so every
/// (seed, stream) pair addresses its own 2^64-block sequence.
class Philox4x32 {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    result_type operator()() noexcept {
        if (lane_ == 2) refill();
        const result_type hi = buffer_[2 * lane_];
        const result_type lo = buffer_[2 * lane_ + 1];
        ++lane_;
        return (hi << 32) | lo;
    }

    /// The raw ten-round bijection.
    static constexpr Block encrypt(Block ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    void refill() noexcept {
        const Block ctr{static_cast<std::uint32_t>(position_), static_cast<std::uint32_t>(position_ >> 32),
                        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        buffer_ = encrypt(ctr, key_);
        ++position_;
        lane_ = 0;
    }

    Key key_;
    std::uint64_t stream_;
    std::uint64_t position_ = 0;
    Block buffer_{};
    int lane_ = 2;
};

}  // namespace latmix
