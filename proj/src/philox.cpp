#include "tmcc/philox.hpp"

namespace tmcc {

namespace {

constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;
constexpr std::uint32_t kMulA = 0xD2511F53u;
constexpr std::uint32_t kMulB = 0xCD9E8D57u;

inline void round_once(std::array<std::uint32_t, 4>& ctr,
                       const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t prod0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t prod1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(prod0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(prod0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(prod1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(prod1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeylA;
            key[1] += kWeylB;
        }
        round_once(counter, key);
    }
    return counter;
}

double uniform_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

SlotDraws slot_draws(std::uint64_t seed, std::uint64_t slot) {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(slot), static_cast<std::uint32_t>(slot >> 32), 0u, 0u};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const auto out = philox4x32(counter, key);
    const std::uint64_t w0 = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    const std::uint64_t w1 = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    return SlotDraws{uniform_from_bits(w0), uniform_from_bits(w1)};
}

}  // namespace tmcc
