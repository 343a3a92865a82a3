#include <doctest.h>

#include <cmath>
#include <random>

#include "wea/error.hpp"
#include "wea/scaling_fit.hpp"

using namespace wea;

namespace {

template <class F>
std::vector<EnvelopeSample> h2_samples(F f, int lo, int hi, double noise = 0.0, unsigned seed = 1) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> Z(0.0, 1.0);
    std::vector<EnvelopeSample> s;
    for (int e = lo; e <= hi; ++e) {
        const Index N = Index{1} << e;
        const double v = f(static_cast<double>(N)) * std::exp(noise * Z(gen));
        s.push_back({0, N, v, v, false});
    }
    return s;
}

} // namespace

TEST_CASE("least squares recovers an exact line and reports rank") {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i < 10; ++i) {
        rows.push_back({1.0, double(i), double(i * i % 7)});
        y.push_back(2.0 - 0.5 * i + 0.25 * (i * i % 7));
    }
    const auto f = least_squares(rows, y);
    CHECK(f.rank == 3);
    CHECK(f.coef[0] == doctest::Approx(2.0));
    CHECK(f.coef[1] == doctest::Approx(-0.5));
    CHECK(f.coef[2] == doctest::Approx(0.25));
    CHECK(f.rms < 1e-12);
    for (auto& r : rows) r[2] = 3.0 * r[1];
    CHECK(least_squares(rows, y).rank == 2);
    CHECK(max_vif(rows) > 1e6);
}

TEST_CASE("variance inflation of orthogonal columns is one") {
    std::vector<std::vector<double>> rows{{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}};
    CHECK(max_vif(rows) == doctest::Approx(1.0));
}

TEST_CASE("H2 fit recovers the exponent of a power law") {
    const auto s = h2_samples([](double N) { return 3.0 * std::pow(N, 0.7); }, 6, 18);
    const auto f = fit_H2(s);
    CHECK(f.alpha == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(f.C == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(f.rms_residual < 1e-9);
    CHECK(f.verdict == Verdict::satisfied);
    CHECK(f.classification == "theorem2");
    CHECK(f.alternatives.size() == 1);

    const auto noisy = fit_H2(h2_samples([](double N) { return std::pow(N, 0.6); }, 6, 20, 0.05), {});
    CHECK(std::abs(noisy.alpha - 0.6) < 4 * noisy.se_alpha + 0.02);

    const auto big = fit_H2(h2_samples([](double N) { return std::pow(N, 1.3); }, 6, 18));
    CHECK(big.verdict == Verdict::violated);
}

TEST_CASE("H2 fit with a log factor over a wide range") {
    const auto s = h2_samples([](double N) { return std::pow(N, 0.55) * std::pow(std::log(N), 2.0); }, 2, 62);
    const auto f = fit_H2(s);
    const auto& full = f.restricted ? f.alternatives.at(0) : f;
    CHECK(full.alpha == doctest::Approx(0.55).epsilon(1e-6));
    CHECK(full.beta == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("insufficient data is inconclusive") {
    auto s = h2_samples([](double N) { return std::sqrt(N); }, 6, 10);
    CHECK(fit_H2(s).verdict == Verdict::inconclusive);
    s = h2_samples([](double N) { return std::sqrt(N); }, 6, 8);
    s.push_back({0, 200, 1, 1, false});
    s.push_back({0, 300, 1, 1, false});
    s.push_back({0, 400, 1, 1, false});
    CHECK(fit_H2(s).verdict == Verdict::inconclusive);
    s.push_back({0, 2, 1, 1, false});
    s.push_back({5, 5, 1, 1, false});
    CHECK(fit_H2(s).rejected == 2);
    CHECK(fit_H1(h2_samples([](double N) { return N; }, 3, 20)).verdict == Verdict::inconclusive);
}

TEST_CASE("H1 fit separates N and N - M") {
    std::vector<EnvelopeSample> s;
    for (int e = 8; e <= 18; ++e) {
        const Index N = Index{1} << e;
        for (double frac : {0.0, 0.5, 0.75, 0.9375}) {
            const Index M = static_cast<Index>(frac * static_cast<double>(N));
            const double v = 2.0 * std::pow(double(N), 0.2) * std::pow(double(N - M), 0.55);
            s.push_back({M, N, v, v, false});
        }
    }
    const auto f = fit_H1(s);
    CHECK(f.delta == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(f.alpha == doctest::Approx(0.55).epsilon(1e-6));
    CHECK(f.verdict == Verdict::satisfied);
    CHECK(f.classification == "theorem1");
    const auto cmp = compare_H1_H2(s);
    CHECK(cmp.preferred == "H1");
    const auto j = to_json(f);
    for (const char* key : {"template", "parameters", "stderr", "rms_residual", "verdict", "classification", "checks",
                            "notes", "sample_count", "N_range", "collinear", "restricted", "aic"})
        CHECK(j.contains(key));
    CHECK(j["parameters"]["delta"].get<double>() == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("decay templates") {
    const auto s = h2_samples([](double N) { return N / std::pow(std::log(N), 1.5); }, 4, 40);
    const auto f = fit_log_decay(s);
    CHECK(f.beta == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(f.classification == "theorem3_part1");
    const auto g = fit_log_decay(h2_samples([](double N) { return N / std::pow(std::log(N), 0.8); }, 4, 40));
    CHECK(g.classification == "theorem3_part2");

    auto h = h2_samples([](double N) { return std::pow(std::log(N), 0.5); }, 2, 60);
    for (auto& x : h) x.harmonic = true;
    const auto hf = fit_harmonic(h, Template::harmonic_H2);
    CHECK(hf.alpha == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(hf.classification == "theorem5");
    const auto hd = fit_harmonic(h2_samples([](double N) { return std::log(N) / std::pow(std::log(std::log(N)), 2.0); }, 4, 60),
                                 Template::harmonic_log_decay);
    CHECK(hd.beta == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(hd.classification == "theorem6_part1");
    CHECK_THROWS_AS(fit_harmonic(h, Template::H2), ParameterError);
    CHECK_THROWS_AS(template_from_string("H3"), ValidationError);
    CHECK(template_from_string("harmonic_H1") == Template::harmonic_H1);
}
