#pragma once

// Measure-preserving systems and the spectral multiplication model used to
// evaluate T^{u_k} f along orbits and exact L^2 norms of weighted sums.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wea/types.hpp"

namespace wea {

/// p / q with 0 < p < q <= 2^62; used both as an exact angle and as an exact
/// starting point.
struct RationalAngle {
    Index p = 0;
    Index q = 1;
    long double value() const { return static_cast<long double>(p) / static_cast<long double>(q); }
    /// (u * p mod q) / q, exact up to the final division.
    long double times(Index u) const;
};

/// Last continued-fraction convergent of sqrt(2) - 1 = [0; 2, 2, ...] with q <= q_max.
RationalAngle sqrt2_minus_1(Index q_max = Index{1} << 62);
/// Same for the golden mean conjugate (sqrt(5) - 1) / 2 = [0; 1, 1, ...].
RationalAngle golden_mean(Index q_max = Index{1} << 62);

/// Finite positive measure on [0,1): exact atoms plus a piecewise-constant
/// density on 2^m equal cells.
struct SpectralMeasure {
    std::vector<std::pair<double, double>> atoms;  // (position, mass)
    std::vector<double> density;                   // empty, or 2^m cell values

    static SpectralMeasure uniform(std::size_t cells = std::size_t{1} << 16);
    static SpectralMeasure from_atoms(std::vector<std::pair<double, double>> atoms);

    double total_mass() const;
    /// Throws ParameterError for zero or infinite mass, negative masses,
    /// repeated atoms or a non-dyadic cell count.
    void validate() const;

    /// Quadrature weights q_j for the points j / resolution such that
    /// sum_j q_j g(j / resolution) is the cell-wise trapezoid rule for the
    /// density part. `resolution` must be a multiple of the cell count.
    std::vector<double> density_weights(std::size_t resolution) const;
};

/// Functions on [0,1) with closed-form L^2(dx) norm.
struct Observable {
    enum class Kind { fourier_mode, indicator, finite_fourier };
    Kind kind = Kind::fourier_mode;
    std::int64_t mode = 1;
    double a = 0.0, b = 0.5;                             // indicator of [a, b)
    std::vector<std::pair<std::int64_t, cplx>> terms;    // finite_fourier

    static Observable fourier_mode(std::int64_t m);
    static Observable indicator(double a, double b);
    static Observable finite_fourier(std::vector<std::pair<std::int64_t, cplx>> terms);

    /// f(x) for x given in turns.
    cplx operator()(long double x) const;
    /// ||f||_2 with respect to Lebesgue measure.
    double l2_norm() const;
    /// sup |f|.
    double sup_norm() const;
};

/// Starting point of an orbit.
struct OrbitPoint {
    double x0 = 0.0;
    std::optional<RationalAngle> exact;  // rotation: exact rational x0
    std::vector<std::uint64_t> words;    // doubling: binary expansion, MSB first
    std::size_t bit_length = 0;

    static OrbitPoint at(double x0);
    static OrbitPoint rational(RationalAngle x0);
    /// L seeded random bits; throws PrecisionError for L < 64.
    static OrbitPoint doubling(std::uint64_t seed, std::size_t L);

    /// Bit i (0-based) of the expansion x0 = sum b_i 2^{-i-1}.
    bool bit(std::size_t i) const;
    /// The 53 bits starting at position i as a double in [0,1).
    double window(std::size_t i) const;
};

struct SystemModel {
    enum class Kind { rotation, doubling, spectral };
    Kind kind = Kind::rotation;
    double theta0 = 0.0;
    std::optional<RationalAngle> exact;  // rotation angle as p/q
    SpectralMeasure measure;             // spectral model

    static SystemModel rotation(double theta0);
    static SystemModel rotation(RationalAngle theta0);
    static SystemModel doubling();
    static SystemModel spectral(SpectralMeasure m);
};

std::string to_string(SystemModel::Kind kind);

/// Element j is f(T^{u_j} x0).
///  rotation: f(x0 + u_j theta0 mod 1), exact modular reduction when the
///            angle is rational;
///  doubling: f evaluated on the `precision` bits of x0 starting at bit u_j;
///  spectral: e^{2 i pi u_j x0} f(x0), the multiplication model at t = x0.
std::vector<cplx> orbit_eval(const SystemModel& system, const Observable& f, const OrbitPoint& x0,
                             std::span<const Index> indices, unsigned precision = 53);
/// Real-valued index list; throws TypeError unless every entry is a
/// nonnegative integer.
std::vector<cplx> orbit_eval(const SystemModel& system, const Observable& f, const OrbitPoint& x0,
                             std::span<const double> indices, unsigned precision = 53);

/// Smallest power of two >= max(cells, 4 (u_max - u_min + 1)), capped at 2^24.
std::size_t default_resolution(const SpectralMeasure& m, std::span<const Index> u);

/// (1/A^2) integral |V_N(t)|^2 dmu(t): atoms exactly, density by the
/// cell-wise trapezoid rule on `resolution` points (0 picks the default).
double spectral_norm_sq(std::span<const cplx> w, std::span<const Index> u, double normalizer,
                        const SpectralMeasure& m, std::size_t resolution = 0);
/// ||S_N f / A_N|| in the multiplication model: the square root of the above.
double spectral_norm_S(std::span<const cplx> w, std::span<const Index> u, double normalizer,
                       const SpectralMeasure& m, std::size_t resolution = 0);

} // namespace wea
