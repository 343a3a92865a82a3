#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wea/types.hpp"

namespace wea {

enum class WeightKind {
    constant,
    polynomial_phase,
    power_phase,
    logpower_phase,
    log_phase,
    moebius,
    iid_uniform_phase,
    centered_cramer,
};

/// Declarative description of a weight sequence (w_k). Only the fields
/// relevant to `kind` are read.
struct WeightSpec {
    WeightKind kind = WeightKind::constant;
    std::vector<double> coeffs;  // polynomial_phase: P(k) = sum coeffs[j] k^j
    double delta = 0.0;          // power_phase, logpower_phase
    double h = 0.0;              // log_phase
    std::uint64_t seed = 0;      // iid_uniform_phase, centered_cramer
    Index offset = 0;            // first admissible k

    static WeightSpec constant();
    static WeightSpec polynomial_phase(std::vector<double> coeffs);
    static WeightSpec power_phase(double delta);
    static WeightSpec logpower_phase(double delta);
    static WeightSpec log_phase(double h);
    static WeightSpec moebius();
    static WeightSpec iid_uniform_phase(std::uint64_t seed);
    static WeightSpec centered_cramer(std::uint64_t seed);

    /// Phase kinds have |w_k| = 1.
    bool unimodular() const;
    bool stochastic() const;
    /// Smallest k the kind is defined at, before `offset` is applied.
    Index kind_minimum() const;
    Index first_index() const { return offset > kind_minimum() ? offset : kind_minimum(); }
};

std::string to_string(WeightKind kind);
WeightKind weight_kind_from_string(const std::string& name);

/// Element j holds w_{m+j} for j in [0, n-m). Throws DomainError when m is
/// below the first admissible index, ParameterError for invalid parameters.
std::vector<cplx> gen_weights(const WeightSpec& spec, Index m, Index n);

/// mu(k) for 0 <= k <= n via a linear sieve; entry 0 is a 0 sentinel.
std::vector<std::int8_t> moebius_sieve(std::size_t n);

} // namespace wea
