#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace tempres {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The stream is fully determined by a 64-bit key and a 128-bit counter, so any
/// (seed, coordinates) tuple maps to an independent stream without shared state.
/// Satisfies UniformRandomBitGenerator; the low counter word advances per block.
class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using Counter = std::array<std::uint32_t, 4>;

    Philox4x32(std::uint64_t key, const Counter& counter) noexcept
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)}, counter_(counter) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (index_ == 4) {
            block_ = generate(counter_, key_);
            ++counter_[0];
            index_ = 0;
        }
        return block_[index_++];
    }

    /// One block of the raw bijection.
    static Counter generate(Counter ctr, std::array<std::uint32_t, 2> key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeylA;
                key[1] += kWeylB;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMulA = 0xD2511F53;
    static constexpr std::uint32_t kMulB = 0xCD9E8D57;
    static constexpr std::uint32_t kWeylA = 0x9E3779B9;
    static constexpr std::uint32_t kWeylB = 0xBB67AE85;

    std::array<std::uint32_t, 2> key_;
    Counter counter_;
    Counter block_{};
    int index_ = 4;
};

} // namespace tempres
