#include "wea/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "wea/error.hpp"
#include "wea/random.hpp"

namespace wea {

WeightSpec WeightSpec::constant() { return {}; }

WeightSpec WeightSpec::polynomial_phase(std::vector<double> coeffs) {
    WeightSpec s;
    s.kind = WeightKind::polynomial_phase;
    s.coeffs = std::move(coeffs);
    return s;
}

WeightSpec WeightSpec::power_phase(double delta) {
    WeightSpec s;
    s.kind = WeightKind::power_phase;
    s.delta = delta;
    return s;
}

WeightSpec WeightSpec::logpower_phase(double delta) {
    WeightSpec s;
    s.kind = WeightKind::logpower_phase;
    s.delta = delta;
    return s;
}

WeightSpec WeightSpec::log_phase(double h) {
    WeightSpec s;
    s.kind = WeightKind::log_phase;
    s.h = h;
    return s;
}

WeightSpec WeightSpec::moebius() {
    WeightSpec s;
    s.kind = WeightKind::moebius;
    return s;
}

WeightSpec WeightSpec::iid_uniform_phase(std::uint64_t seed) {
    WeightSpec s;
    s.kind = WeightKind::iid_uniform_phase;
    s.seed = seed;
    return s;
}

WeightSpec WeightSpec::centered_cramer(std::uint64_t seed) {
    WeightSpec s;
    s.kind = WeightKind::centered_cramer;
    s.seed = seed;
    return s;
}

bool WeightSpec::unimodular() const {
    return kind != WeightKind::moebius && kind != WeightKind::centered_cramer;
}

bool WeightSpec::stochastic() const {
    return kind == WeightKind::iid_uniform_phase || kind == WeightKind::centered_cramer;
}

Index WeightSpec::kind_minimum() const {
    switch (kind) {
    case WeightKind::log_phase: return 1;
    case WeightKind::logpower_phase: return 2;
    case WeightKind::centered_cramer: return 3;
    default: return 0;
    }
}

std::string to_string(WeightKind kind) {
    switch (kind) {
    case WeightKind::constant: return "constant";
    case WeightKind::polynomial_phase: return "polynomial_phase";
    case WeightKind::power_phase: return "power_phase";
    case WeightKind::logpower_phase: return "logpower_phase";
    case WeightKind::log_phase: return "log_phase";
    case WeightKind::moebius: return "moebius";
    case WeightKind::iid_uniform_phase: return "iid_uniform_phase";
    case WeightKind::centered_cramer: return "centered_cramer";
    }
    return "?";
}

WeightKind weight_kind_from_string(const std::string& name) {
    for (auto k : {WeightKind::constant, WeightKind::polynomial_phase, WeightKind::power_phase,
                   WeightKind::logpower_phase, WeightKind::log_phase, WeightKind::moebius,
                   WeightKind::iid_uniform_phase, WeightKind::centered_cramer}) {
        if (to_string(k) == name) return k;
    }
    throw ValidationError("unknown weight kind '" + name + "'");
}

namespace {

long double polynomial_turns(const std::vector<double>& coeffs, Index k) {
    // Horner with reduction mod 1 at every step: k is an integer, so
    // dropping the integer part before multiplying by k leaves P(k) mod 1 intact.
    long double acc = 0.0L;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = frac_turns(acc * static_cast<long double>(k) + static_cast<long double>(*it));
    }
    return acc;
}

} // namespace

std::vector<cplx> gen_weights(const WeightSpec& spec, Index m, Index n) {
    if (m >= n) throw ShapeError("gen_weights: empty range [" + std::to_string(m) + ", " +
                                 std::to_string(n) + ")");
    if (m < spec.first_index()) {
        throw DomainError("gen_weights: " + to_string(spec.kind) + " weights start at k = " +
                          std::to_string(spec.first_index()) + ", range starts at " +
                          std::to_string(m));
    }
    if ((spec.kind == WeightKind::power_phase || spec.kind == WeightKind::logpower_phase) &&
        !(spec.delta > 0.0)) {
        throw ParameterError("gen_weights: " + to_string(spec.kind) + " needs delta > 0");
    }
    if (spec.kind == WeightKind::log_phase && spec.h == 0.0) {
        throw ParameterError("gen_weights: log_phase needs h != 0");
    }

    const std::size_t len = static_cast<std::size_t>(n - m);
    std::vector<cplx> out(len);

    if (spec.kind == WeightKind::moebius) {
        const auto mu = moebius_sieve(static_cast<std::size_t>(n - 1 > 0 ? n - 1 : 1));
        for (std::size_t j = 0; j < len; ++j) out[j] = static_cast<double>(mu[m + j]);
        return out;
    }

    for (std::size_t j = 0; j < len; ++j) {
        const Index k = m + j;
        const auto kl = static_cast<long double>(k);
        switch (spec.kind) {
        case WeightKind::constant: out[j] = 1.0; break;
        case WeightKind::polynomial_phase:
            out[j] = unit_phase(static_cast<double>(polynomial_turns(spec.coeffs, k)));
            break;
        case WeightKind::power_phase:
            out[j] = unit_phase(static_cast<double>(
                frac_turns(std::pow(kl, static_cast<long double>(spec.delta)))));
            break;
        case WeightKind::logpower_phase:
            out[j] = unit_phase(static_cast<double>(
                frac_turns(std::pow(std::log(kl), static_cast<long double>(spec.delta)))));
            break;
        case WeightKind::log_phase:
            out[j] = unit_phase(static_cast<double>(
                frac_turns(static_cast<long double>(spec.h) * std::log(kl))));
            break;
        case WeightKind::iid_uniform_phase:
            out[j] = unit_phase(rng::uniform01(spec.seed, rng::Stream::uniform_phase, k));
            break;
        case WeightKind::centered_cramer: {
            const double x = rng::cramer_bit(spec.seed, k) ? 1.0 : 0.0;
            out[j] = x - 1.0 / std::log(static_cast<double>(k));
            break;
        }
        case WeightKind::moebius: break;
        }
    }
    return out;
}

std::vector<std::int8_t> moebius_sieve(std::size_t n) {
    if (n == 0) throw ParameterError("moebius_sieve: n must be >= 1");
    std::vector<std::int8_t> mu(n + 1, 0);
    std::vector<std::uint32_t> primes;
    std::vector<bool> composite(n + 1, false);
    mu[1] = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<std::uint32_t>(i));
            mu[i] = -1;
        }
        for (auto p : primes) {
            const std::size_t ip = i * p;
            if (ip > n) break;
            composite[ip] = true;
            if (i % p == 0) {
                mu[ip] = 0;
                break;
            }
            mu[ip] = static_cast<std::int8_t>(-mu[i]);
        }
    }
    return mu;
}

} // namespace wea
