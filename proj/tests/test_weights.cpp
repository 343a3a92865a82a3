#include <doctest.h>

#include <cmath>
#include <complex>

#include "wea/error.hpp"
#include "wea/weights.hpp"

using namespace wea;

namespace {

cplx phase(long double turns) {
    const long double f = turns - std::floor(turns);
    return std::polar(1.0, 2.0 * M_PI * static_cast<double>(f));
}

// mu(k) by trial division
int mu_trial(Index k) {
    int sign = 1;
    for (Index p = 2; p * p <= k; ++p) {
        if (k % p == 0) {
            k /= p;
            if (k % p == 0) return 0;
            sign = -sign;
        }
    }
    if (k > 1) sign = -sign;
    return sign;
}

} // namespace

TEST_CASE("deterministic phase families against direct formulas") {
    const auto poly = gen_weights(WeightSpec::polynomial_phase({0.25, 0.1, std::sqrt(2.0)}), 0, 200);
    for (Index k = 0; k < 200; ++k) {
        const long double P = 0.25L + 0.1L * k + static_cast<long double>(std::sqrt(2.0)) * k * k;
        CHECK(std::abs(poly[k] - phase(P)) < 1e-9);
    }
    const auto pw = gen_weights(WeightSpec::power_phase(0.5), 1, 1000);
    CHECK(std::abs(pw[3] - cplx(1.0, 0.0)) < 1e-14);  // k = 4: e^{2 i pi 2}
    CHECK(std::abs(pw[1] - phase(std::sqrt(2.0L))) < 1e-12);
    const auto lp = gen_weights(WeightSpec::log_phase(1.0), 1, 100);
    for (Index k = 1; k < 100; ++k) CHECK(std::abs(lp[k - 1] - phase(std::log(static_cast<long double>(k)))) < 1e-12);
    const auto lg = gen_weights(WeightSpec::logpower_phase(2.5), 2, 100);
    for (Index k = 2; k < 100; ++k)
        CHECK(std::abs(lg[k - 2] - phase(std::pow(std::log(static_cast<long double>(k)), 2.5L))) < 1e-12);
    for (const auto& w : gen_weights(WeightSpec::constant(), 0, 10)) CHECK(w == cplx(1.0, 0.0));
}

TEST_CASE("unimodular kinds have modulus one") {
    for (const auto& spec : {WeightSpec::power_phase(0.7), WeightSpec::log_phase(-2.0), WeightSpec::iid_uniform_phase(5),
                             WeightSpec::polynomial_phase({0.0, 0.3, 0.01})}) {
        CHECK(spec.unimodular());
        for (const auto& w : gen_weights(spec, spec.first_index(), 5000)) REQUIRE(std::abs(std::abs(w) - 1.0) < 1e-14);
    }
}

TEST_CASE("moebius weights against trial division and Mertens values") {
    const auto mu = gen_weights(WeightSpec::moebius(), 1, 10001);
    double mertens = 0.0;
    for (Index k = 1; k <= 10000; ++k) {
        REQUIRE(mu[k - 1].real() == mu_trial(k));
        mertens += mu[k - 1].real();
        if (k == 1000) CHECK(mertens == 2.0);
        if (k == 100) CHECK(mertens == 1.0);
    }
    CHECK(mertens == -23.0);
    CHECK_THROWS_AS(moebius_sieve(0), ParameterError);
}

TEST_CASE("random weights: reproducible, slice-consistent, centered") {
    const auto a = gen_weights(WeightSpec::iid_uniform_phase(9), 0, 100000);
    const auto b = gen_weights(WeightSpec::iid_uniform_phase(9), 500, 700);
    for (std::size_t j = 0; j < b.size(); ++j) CHECK(b[j] == a[500 + j]);
    cplx mean = 0.0;
    for (const auto& w : a) mean += w;
    CHECK(std::abs(mean) / a.size() < 0.02);
    CHECK(gen_weights(WeightSpec::iid_uniform_phase(10), 0, 1)[0] != a[0]);

    const auto c = gen_weights(WeightSpec::centered_cramer(4), 3, 200003);
    double s = 0.0;
    for (const auto& w : c) s += w.real();
    CHECK(std::abs(s) < 5.0 * std::sqrt(200000.0));
    for (Index k = 3; k < 1000; ++k) {
        const double x = c[k - 3].real() + 1.0 / std::log(static_cast<double>(k));
        REQUIRE((std::abs(x) < 1e-12 || std::abs(x - 1.0) < 1e-12));
    }
}

TEST_CASE("weight errors") {
    CHECK_THROWS_AS(gen_weights(WeightSpec::constant(), 5, 5), ShapeError);
    CHECK_THROWS_AS(gen_weights(WeightSpec::log_phase(1.0), 0, 5), DomainError);
    CHECK_THROWS_AS(gen_weights(WeightSpec::logpower_phase(2.0), 1, 5), DomainError);
    CHECK_THROWS_AS(gen_weights(WeightSpec::centered_cramer(1), 2, 5), DomainError);
    CHECK_THROWS_AS(gen_weights(WeightSpec::power_phase(0.0), 1, 5), ParameterError);
    CHECK_THROWS_AS(gen_weights(WeightSpec::log_phase(0.0), 1, 5), ParameterError);
    CHECK_THROWS_AS(weight_kind_from_string("nope"), ValidationError);
    try {
        gen_weights(WeightSpec::log_phase(1.0), 0, 5);
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("log_phase") != std::string::npos);
    }
    WeightSpec shifted = WeightSpec::power_phase(0.5);
    shifted.offset = 10;
    CHECK(shifted.first_index() == 10);
    CHECK_THROWS_AS(gen_weights(shifted, 9, 20), DomainError);
}
