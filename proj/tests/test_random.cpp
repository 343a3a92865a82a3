#include <doctest.h>

#include <cmath>
#include <set>

#include "wea/random.hpp"

using namespace wea::rng;

TEST_CASE("philox4x32-10 known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("draws are pure functions of seed, stream and counter") {
    CHECK(bits64(7, Stream::test, 123) == bits64(7, Stream::test, 123));
    CHECK(bits64(7, Stream::test, 123) != bits64(8, Stream::test, 123));
    CHECK(bits64(7, Stream::test, 123) != bits64(7, Stream::cramer, 123));
    CHECK(bits64(7, Stream::test, 123) != bits64(7, Stream::test, 124));
    std::set<std::uint64_t> seen;
    for (std::uint64_t c = 0; c < 10000; ++c) seen.insert(bits64(1, Stream::test, c));
    CHECK(seen.size() == 10000);
}

TEST_CASE("uniform01 moments") {
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = uniform01(3, Stream::test, static_cast<std::uint64_t>(i));
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
        s += x;
        s2 += x * x;
    }
    CHECK(s / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
}

TEST_CASE("cramer model probabilities") {
    CHECK(cramer_probability(3) == doctest::Approx(1.0 / std::log(3.0)));
    CHECK(cramer_probability(1000) == doctest::Approx(1.0 / std::log(1000.0)));
    // frequency of X_i over a band of i near 10^6 against 1/log i
    const std::uint64_t lo = 1000000, hi = 1200000;
    double expected = 0.0, hits = 0.0;
    for (std::uint64_t i = lo; i < hi; ++i) {
        expected += 1.0 / std::log(static_cast<double>(i));
        hits += cramer_bit(11, i) ? 1.0 : 0.0;
    }
    CHECK(std::abs(hits - expected) < 5.0 * std::sqrt(expected));
}
