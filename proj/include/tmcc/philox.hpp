#pragma once

#include <array>
#include <cstdint>

namespace tmcc {

/// Philox-4x32-10 counter-based generator (Salmon et al., SC 2011).
///
/// Stateless: each 128-bit counter block maps to 128 random bits under a
/// 64-bit key, so the draws for a slot are a pure function of (seed, slot)
/// and any number of workers can evaluate disjoint slot ranges and get
/// bit-identical streams.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit word.
double uniform_from_bits(std::uint64_t bits);

/// The two uniform draws a protocol slot consumes: .first drives the
/// source sample, .second the eavesdropper resend.
struct SlotDraws {
    double first;
    double second;
};

SlotDraws slot_draws(std::uint64_t seed, std::uint64_t slot);

}  // namespace tmcc
