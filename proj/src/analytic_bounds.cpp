#include "wea/analytic_bounds.hpp"

#include <cmath>

#include "wea/error.hpp"
#include "wea/summation.hpp"

namespace wea {

PhaseFunction PhaseFunction::quadratic(double gamma, double beta) {
    return {PhaseFamily::quadratic, gamma, beta, 0.0, 2};
}
PhaseFunction PhaseFunction::power(double delta) {
    if (!(delta > 0.0)) throw ParameterError("power phase needs delta > 0");
    return {PhaseFamily::power, delta, 0.0, 0.0, 0};
}
PhaseFunction PhaseFunction::power_plus_linear(double delta, double theta, unsigned d) {
    if (!(delta > 0.0)) throw ParameterError("power_plus_linear phase needs delta > 0");
    return {PhaseFamily::power_plus_linear, delta, theta, 0.0, d};
}
PhaseFunction PhaseFunction::log_power(double delta) {
    if (!(delta > 0.0)) throw ParameterError("log_power phase needs delta > 0");
    return {PhaseFamily::log_power, delta, 0.0, 0.0, 0};
}
PhaseFunction PhaseFunction::h_log(double h, double theta) {
    if (h == 0.0) throw ParameterError("h_log phase needs h != 0");
    return {PhaseFamily::h_log, h, theta, 0.0, 0};
}

std::string PhaseFunction::name() const {
    switch (family_) {
    case PhaseFamily::quadratic: return "quadratic";
    case PhaseFamily::power: return "power";
    case PhaseFamily::power_plus_linear: return "power_plus_linear";
    case PhaseFamily::log_power: return "log_power";
    case PhaseFamily::h_log: return "h_log";
    }
    return "?";
}

unsigned PhaseFunction::max_order() const {
    return family_ == PhaseFamily::log_power ? 2u : 64u;
}

namespace {

// d^n/dx^n x^p = p (p-1) ... (p-n+1) x^{p-n}
double falling(double p, unsigned n) {
    double c = 1.0;
    for (unsigned i = 0; i < n; ++i) c *= p - i;
    return c;
}

double power_derivative(double p, unsigned n, double x) {
    const double c = falling(p, n);
    return c == 0.0 ? 0.0 : c * std::pow(x, p - n);
}

} // namespace

double PhaseFunction::value(double x) const { return derivative(0, x); }

double PhaseFunction::derivative(unsigned n, double x) const {
    if (n > max_order()) {
        throw ParameterError(name() + " phase: derivative order " + std::to_string(n) +
                             " not available");
    }
    switch (family_) {
    case PhaseFamily::quadratic:
        if (n == 0) return -p0_ * x * x + p1_ * x;
        if (n == 1) return -2.0 * p0_ * x + p1_;
        if (n == 2) return -2.0 * p0_;
        return 0.0;
    case PhaseFamily::power:
        return power_derivative(p0_, n, x);
    case PhaseFamily::power_plus_linear:
        return p1_ * power_derivative(static_cast<double>(d_), n, x) + power_derivative(p0_, n, x);
    case PhaseFamily::log_power: {
        const double L = std::log(x);
        if (n == 0) return std::pow(L, p0_);
        if (n == 1) return p0_ * std::pow(L, p0_ - 1.0) / x;
        // d/dx [delta L^{delta-1} / x] = delta L^{delta-2} (delta - 1 - L) / x^2
        return p0_ * std::pow(L, p0_ - 2.0) * (p0_ - 1.0 - L) / (x * x);
    }
    case PhaseFamily::h_log:
        if (n == 0) return p0_ * std::log(x) + p1_ * x;
        if (n == 1) return p0_ / x + p1_;
        // h (-1)^{n-1} (n-1)! / x^n
        {
            double c = p0_;
            for (unsigned i = 1; i < n; ++i) c *= -static_cast<double>(i);
            return c / std::pow(x, static_cast<double>(n));
        }
    }
    return 0.0;
}

bool PhaseFunction::derivative_monotone(unsigned n, double a, double b) const {
    switch (family_) {
    case PhaseFamily::quadratic: return true;
    case PhaseFamily::power:
    case PhaseFamily::h_log: return a > 0.0;
    case PhaseFamily::power_plus_linear: {
        if (!(a > 0.0)) return false;
        // both terms are monotone powers; the sum is monotone when their
        // derivatives (order n+1) share a sign on (0, inf)
        const double s1 = p1_ * falling(static_cast<double>(d_), n + 1);
        const double s2 = falling(p0_, n + 1);
        return s1 == 0.0 || s2 == 0.0 || (s1 > 0.0) == (s2 > 0.0);
    }
    case PhaseFamily::log_power:
        (void)b;
        return false;
    }
    return false;
}

cplx exp_sum(const PhaseFunction& f, std::int64_t a, std::int64_t b) {
    if (b < a) throw ShapeError("exp_sum: empty interval");
    const std::size_t n = static_cast<std::size_t>(b - a + 1);
    return sum::tree_sum<cplx>(n, [&](std::size_t j) {
        const double x = static_cast<double>(a + static_cast<std::int64_t>(j));
        const long double v = f.value(x);
        return unit_phase(static_cast<double>(frac_turns(v)));
    });
}

double lemma3_bound(const PhaseFunction& f, std::int64_t a, std::int64_t b, double rho) {
    if (!(rho > 0.0)) throw PreconditionError("lemma3_bound: rho must be > 0");
    if (a >= b) throw PreconditionError("lemma3_bound: need a < b");
    const double xa = static_cast<double>(a), xb = static_cast<double>(b);
    if (!f.derivative_monotone(2, xa, xb)) {
        throw PreconditionError("lemma3_bound: cannot verify -f'' >= rho for the " + f.name() +
                                " family on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    const double lo = std::min(-f.derivative(2, xa), -f.derivative(2, xb));
    if (lo < rho) {
        throw PreconditionError("lemma3_bound: -f'' drops to " + std::to_string(lo) +
                                " < rho = " + std::to_string(rho));
    }
    return (std::abs(f.derivative(1, xb) - f.derivative(1, xa)) + 2.0) * (4.0 / std::sqrt(rho) + 3.0);
}

double lemma4_bound(unsigned n, double lambda, double h, double N) {
    if (n < 2) throw ParameterError("lemma4_bound: n must be >= 2");
    if (!(lambda > 0.0)) throw ParameterError("lemma4_bound: lambda must be > 0");
    if (!(h >= 1.0)) throw ParameterError("lemma4_bound: h must be >= 1");
    if (!(N >= 1.0)) throw ParameterError("lemma4_bound: N must be >= 1");
    const double K = std::ldexp(1.0, static_cast<int>(n));
    return h * N *
           (std::pow(lambda, 1.0 / (K - 2.0)) + std::pow(N, -2.0 / K) +
            std::pow(std::pow(N, static_cast<double>(n)) * lambda, -2.0 / K));
}

DerivativeRange derivative_range(const PhaseFunction& f, unsigned n, double a, double b) {
    if (!(a < b)) throw PreconditionError("derivative_range: need a < b");
    if (!f.derivative_monotone(n, a, b)) {
        throw PreconditionError("derivative_range: " + f.name() +
                                " family has no declared monotone derivative of order " +
                                std::to_string(n));
    }
    const double da = f.derivative(n, a), db = f.derivative(n, b);
    if (da == 0.0 || db == 0.0 || (da > 0.0) != (db > 0.0)) {
        throw PreconditionError("derivative_range: f^(n) vanishes or changes sign on the interval");
    }
    const double lo = std::min(std::abs(da), std::abs(db));
    const double hi = std::max(std::abs(da), std::abs(db));
    return {lo, hi / lo};
}

double frac_dist(double x) {
    const double f = x - std::floor(x);
    return std::min(f, 1.0 - f);
}

double example1_exponent(double delta) {
    if (!(delta > 1.0)) throw DomainError("example1_exponent: needs delta > 1");
    if (delta == std::floor(delta)) {
        throw DomainError("example1_exponent: integral delta gives ||delta|| = 0");
    }
    const double K = std::ldexp(1.0, static_cast<int>(std::ceil(delta)));
    return 1.0 - frac_dist(delta) * 2.0 / (3.0 * (K - 2.0));
}

double example2_exponent(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("example2_exponent: needs 0 < delta < 1");
    return 1.0 - delta / 2.0;
}

double hlawka_bound(double h) {
    if (h == 0.0) throw DomainError("hlawka_bound: needs h != 0");
    return 30.0 * (std::abs(h) + 1.0 / std::abs(h));
}

} // namespace wea
