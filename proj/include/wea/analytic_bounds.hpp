#pragma once

// Closed-form exponential-sum bounds of van der Corput type and the
// envelope exponents of the worked examples, used as reference curves.

#include <cstdint>
#include <string>

#include "wea/types.hpp"

namespace wea {

enum class PhaseFamily { quadratic, power, power_plus_linear, log_power, h_log };

/// A phase function from a closed-form family with exact derivatives.
///
///   quadratic          f(x) = -gamma x^2 + beta x
///   power              f(x) = x^delta
///   power_plus_linear  f(x) = theta x^d + x^delta
///   log_power          f(x) = log^delta x            (derivatives up to order 2)
///   h_log              f(x) = h log x + theta x
class PhaseFunction {
public:
    static PhaseFunction quadratic(double gamma, double beta = 0.0);
    static PhaseFunction power(double delta);
    static PhaseFunction power_plus_linear(double delta, double theta, unsigned d);
    static PhaseFunction log_power(double delta);
    static PhaseFunction h_log(double h, double theta = 0.0);

    PhaseFamily family() const { return family_; }
    std::string name() const;
    /// Highest derivative order with a closed form.
    unsigned max_order() const;

    double value(double x) const;
    /// n-th derivative; n = 0 is the value. Throws ParameterError past max_order().
    double derivative(unsigned n, double x) const;

    /// True when f^{(n)} is monotone on [a, b] for this family, so its range
    /// on the interval is spanned by the endpoint values.
    bool derivative_monotone(unsigned n, double a, double b) const;

private:
    PhaseFunction(PhaseFamily f, double p0, double p1, double p2, unsigned d)
        : family_(f), p0_(p0), p1_(p1), p2_(p2), d_(d) {}

    PhaseFamily family_;
    double p0_;  // gamma | delta | delta | delta | h
    double p1_;  // beta  | -     | theta | -     | theta
    double p2_;  // unused
    unsigned d_;  // power_plus_linear degree
};

/// sum_{k=a}^{b} e^{2 i pi f(k)} by direct summation.
cplx exp_sum(const PhaseFunction& f, std::int64_t a, std::int64_t b);

/// (|f'(b) - f'(a)| + 2)(4 / sqrt(rho) + 3), after checking -f'' >= rho on [a, b].
double lemma3_bound(const PhaseFunction& f, std::int64_t a, std::int64_t b, double rho);

/// h N (lambda^{1/(K-2)} + N^{-2/K} + (N^n lambda)^{-2/K}) with K = 2^n: the
/// n-th derivative bound with its unknown absolute constant set to 1.
double lemma4_bound(unsigned n, double lambda, double h, double N);

/// lambda = min |f^{(n)}| and h = max / min on [a, b] for a family with a
/// monotone n-th derivative of constant sign.
struct DerivativeRange {
    double lambda;
    double h;
};
DerivativeRange derivative_range(const PhaseFunction& f, unsigned n, double a, double b);

/// ||x|| = min({x}, 1 - {x}).
double frac_dist(double x);

/// 1 - ||delta|| 2 / (3 (K - 2)) with K = 2^ceil(delta); delta > 1, non-integer.
double example1_exponent(double delta);
/// 1 - delta / 2 for 0 < delta < 1.
double example2_exponent(double delta);
/// 30 (|h| + 1/|h|).
double hlawka_bound(double h);

} // namespace wea
