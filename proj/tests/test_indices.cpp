#include <doctest.h>

#include <cmath>

#include "wea/error.hpp"
#include "wea/indices.hpp"
#include "wea/random.hpp"

using namespace wea;

namespace {
bool is_prime_trial(Index n) {
    if (n < 2) return false;
    for (Index d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}
} // namespace

TEST_CASE("sieve agrees with trial division") {
    const auto ps = primes_up_to(20000);
    std::size_t j = 0;
    for (Index n = 0; n <= 20000; ++n) {
        if (is_prime_trial(n)) {
            REQUIRE(j < ps.size());
            REQUIRE(ps[j] == n);
            ++j;
        }
    }
    CHECK(j == ps.size());
}

TEST_CASE("prime counts and nth primes") {
    CHECK(pi_count(IndexSpec::primes(), 10) == 4);
    CHECK(pi_count(IndexSpec::primes(), 1000) == 168);
    CHECK(pi_count(IndexSpec::primes(), 1000000) == 78498);
    CHECK(pi_count(IndexSpec::primes(), 10000000) == 664579);
    const auto p = nth_primes(1, 11);
    CHECK(p == std::vector<Index>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(nth_primes(10000, 10001)[0] == 104729);
    CHECK(gen_indices(IndexSpec::primes(), 1, 4) == std::vector<Index>{2, 3, 5});
    CHECK_THROWS_AS(gen_indices(IndexSpec::primes(), 0, 4), DomainError);
}

TEST_CASE("cramer members follow the seeded bits") {
    const std::uint64_t seed = 5;
    std::vector<Index> direct;
    for (Index i = 3; direct.size() < 2000; ++i)
        if (rng::cramer_bit(seed, i)) direct.push_back(i);
    const auto mem = cramer_members(seed, 1, 2001);
    CHECK(mem == direct);
    clear_cramer_cache();
    CHECK(cramer_members(seed, 501, 1001) == std::vector<Index>(direct.begin() + 500, direct.begin() + 1000));
    std::uint64_t cnt = 0;
    for (Index i = 3; i <= direct.back(); ++i) cnt += rng::cramer_bit(seed, i);
    CHECK(cramer_count(seed, direct.back()) == cnt);
    CHECK(pi_count(IndexSpec::cramer_primes(seed), direct.back()) == 2000);
}

TEST_CASE("cramer count is close to N / log N scale") {
    const double N = 1e6;
    const double r = static_cast<double>(cramer_count(1, 1000000)) * std::log(N) / N;
    CHECK(r > 0.9);
    CHECK(r < 1.2);
}

TEST_CASE("arithmetic index kinds") {
    CHECK(gen_indices(IndexSpec::identity(), 3, 6) == std::vector<Index>{3, 4, 5});
    CHECK(gen_indices(IndexSpec::monomial(3), 0, 4) == std::vector<Index>{0, 1, 8, 27});
    CHECK(gen_indices(IndexSpec::polynomial({1, 0, 2}), 0, 3) == std::vector<Index>{1, 3, 9});
    CHECK(gen_indices(IndexSpec::explicit_list({4, 9, 9, 20}), 1, 4) == std::vector<Index>{9, 9, 20});
    CHECK_THROWS_AS(gen_indices(IndexSpec::monomial(0), 0, 4), ParameterError);
    CHECK_THROWS_AS(gen_indices(IndexSpec::monomial(5), 0, 10000), RangeError);
    CHECK_THROWS_AS(gen_indices(IndexSpec::polynomial({5, -1}), 0, 10), ValidationError);
    CHECK_THROWS_AS(gen_indices(IndexSpec::explicit_list({1, 2}), 0, 3), RangeError);
    CHECK_THROWS_AS(gen_indices(IndexSpec::explicit_list({3, 2}), 0, 2), ValidationError);
    CHECK_THROWS_AS(gen_indices(IndexSpec::identity(), 4, 4), ShapeError);
    CHECK_THROWS_AS(pi_count(IndexSpec::identity(), 10), UnsupportedError);
    CHECK_THROWS_AS(index_kind_from_string("squarefree"), ValidationError);
}
