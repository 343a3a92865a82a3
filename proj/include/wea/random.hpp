#pragma once

// Counter-based random numbers. Every draw is a pure function of
// (seed, stream, counter), so any slice of a sequence can be generated
// independently of the others.

#include <array>
#include <cstdint>

namespace wea::rng {

/// Philox4x32 with 10 rounds (Salmon et al.), the generator behind Random123.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Distinct streams keep unrelated uses of one seed statistically independent.
enum class Stream : std::uint32_t {
    uniform_phase = 1,
    cramer = 2,
    doubling_bits = 3,
    test = 99,
};

std::uint64_t bits64(std::uint64_t seed, Stream stream, std::uint64_t counter);

/// Uniform double in [0,1) with 53 random bits.
inline double uniform01(std::uint64_t seed, Stream stream, std::uint64_t counter) {
    return static_cast<double>(bits64(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Success probability of the clamped Cramér model at integer i >= 3.
double cramer_probability(std::uint64_t i);

/// X_i of the Cramér model: 1 with probability min(1, 1/log i). Defined for i >= 3.
bool cramer_bit(std::uint64_t seed, std::uint64_t i);

} // namespace wea::rng
