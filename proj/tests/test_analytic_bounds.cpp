#include <doctest.h>

#include <cmath>
#include <random>

#include "wea/analytic_bounds.hpp"
#include "wea/error.hpp"

using namespace wea;

TEST_CASE("phase function derivatives against finite differences") {
    const auto f = PhaseFunction::power(2.5);
    const double x = 37.0, h = 1e-3;
    CHECK(f.derivative(1, x) == doctest::Approx((f.value(x + h) - f.value(x - h)) / (2 * h)).epsilon(1e-7));
    CHECK(f.derivative(3, x) == doctest::Approx(2.5 * 1.5 * 0.5 * std::pow(x, -0.5)));
    const auto g = PhaseFunction::log_power(2.0);
    CHECK(g.derivative(2, x) == doctest::Approx(2.0 * (1.0 - std::log(x)) / (x * x)));
    CHECK_THROWS_AS(g.derivative(3, x), ParameterError);
    const auto q = PhaseFunction::quadratic(0.01, 0.3);
    CHECK(q.derivative(2, 5.0) == doctest::Approx(-0.02));
    CHECK(q.value(10.0) == doctest::Approx(-1.0 + 3.0));
}

TEST_CASE("exp_sum matches direct long double summation") {
    const auto f = PhaseFunction::quadratic(0.003, 0.2);
    std::complex<long double> ref = 0;
    for (int k = 5; k <= 400; ++k) {
        const long double v = -0.003L * k * k + 0.2L * k;
        const long double t = v - std::floor(v);
        ref += std::polar(1.0L, 2.0L * 3.14159265358979323846L * t);
    }
    CHECK(std::abs(exp_sum(f, 5, 400) - cplx(double(ref.real()), double(ref.imag()))) < 1e-10);
}

TEST_CASE("lemma3 bound holds and checks its hypothesis") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> G(1e-5, 0.4), B(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const double gamma = G(gen);
        const auto f = PhaseFunction::quadratic(gamma, B(gen));
        const std::int64_t a = 1 + static_cast<std::int64_t>(B(gen) * 100);
        const std::int64_t b = a + 10 + static_cast<std::int64_t>(B(gen) * 3000);
        CHECK(std::abs(exp_sum(f, a, b)) <= lemma3_bound(f, a, b, 2 * gamma));
    }
    CHECK_THROWS_AS(lemma3_bound(PhaseFunction::quadratic(0.01), 1, 100, 0.05), PreconditionError);
    CHECK_THROWS_AS(lemma3_bound(PhaseFunction::power(2.5), 1, 100, 0.05), PreconditionError);
}

TEST_CASE("lemma4 bound and derivative ranges") {
    const auto f = PhaseFunction::power(2.5);
    const auto r = derivative_range(f, 3, 100.0, 1000.0);
    CHECK(r.lambda == doctest::Approx(1.875 * std::pow(1000.0, -0.5)));
    CHECK(r.h == doctest::Approx(std::sqrt(10.0)));
    const double K = 8.0;
    const double N = 900.0, lam = 0.01, h = 2.0;
    const double ref = h * N * (std::pow(lam, 1.0 / (K - 2)) + std::pow(N, -2.0 / K) + std::pow(N * N * N * lam, -2.0 / K));
    CHECK(lemma4_bound(3, lam, h, N) == doctest::Approx(ref));
    CHECK_THROWS_AS(lemma4_bound(1, lam, h, N), ParameterError);
    CHECK_THROWS_AS(derivative_range(PhaseFunction::quadratic(0.1), 3, 1, 10), PreconditionError);
}

TEST_CASE("example exponents") {
    CHECK(example2_exponent(0.5) == doctest::Approx(0.75));
    CHECK(example1_exponent(2.5) == doctest::Approx(17.0 / 18.0));
    CHECK(example1_exponent(1.5) == doctest::Approx(5.0 / 6.0));
    CHECK(hlawka_bound(0.5) == doctest::Approx(75.0));
    CHECK(hlawka_bound(-2.0) == doctest::Approx(75.0));
    CHECK(frac_dist(2.3) == doctest::Approx(0.3));
    CHECK(frac_dist(-0.2) == doctest::Approx(0.2));
    CHECK_THROWS_AS(example1_exponent(2.0), DomainError);
    CHECK_THROWS_AS(example2_exponent(1.0), DomainError);
}
