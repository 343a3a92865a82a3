#pragma once

// Trigonometric sums V_{M,N}(theta) = sum_k w_k e^{2 i pi theta u_k}, their
// harmonic variant with weights w_k / k, and certified estimates of
// sup over theta of |V|.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wea/types.hpp"

namespace wea {

/// P equispaced points on [lo, hi): theta_j = lo + j (hi - lo) / P.
struct ThetaGrid {
    std::size_t points = 2;
    double lo = 0.0;
    double hi = 1.0;

    double spacing() const { return (hi - lo) / static_cast<double>(points); }
    double at(std::size_t j) const { return lo + static_cast<double>(j) * spacing(); }
    /// [0,1) grids allow exact integer phase reduction and the FFT path.
    bool canonical() const { return lo == 0.0 && hi == 1.0; }
};

/// Validating constructor; throws ParameterError for P < 2 or an empty span.
ThetaGrid make_grid(std::size_t points, double lo = 0.0, double hi = 1.0);

/// min(2^22, next_pow2(16 n)); with `monomial` the size is scaled by span / n
/// (span = u_max - u_min) and capped at 2^26.
ThetaGrid default_grid(std::size_t n_terms, Index span, bool monomial = false);

enum class GridPath { automatic, direct, fft };

cplx eval_V(std::span<const cplx> w, std::span<const Index> u, double theta);
/// Non-integer frequencies (direct evaluation only).
cplx eval_V(std::span<const cplx> w, std::span<const double> freq, double theta);

/// Values of V on every grid point. `automatic` takes the FFT route for
/// canonical grids and direct evaluation otherwise.
std::vector<cplx> eval_V_grid(std::span<const cplx> w, std::span<const Index> u,
                              const ThetaGrid& grid, GridPath path = GridPath::automatic);
/// Requesting GridPath::fft here throws UnsupportedError.
std::vector<cplx> eval_V_grid(std::span<const cplx> w, std::span<const double> freq,
                              const ThetaGrid& grid, GridPath path = GridPath::automatic);

/// Estimate of sup_theta |V(theta)|.
///
/// `lower` is an attained value |V(argmax_theta)|. Each of the best grid
/// cells is refined to a bracket [a, b]; over it |V| is at most
/// |V((a+b)/2)| + (b - a) deriv_bound / 2, and `upper` is the largest such
/// bound (capped by abs_sum). It certifies |V| on the refined brackets only.
/// `global_upper` bounds the supremum rigorously from the raw grid maximum:
/// the mean-value bound with the raw spacing and, on [0,1) grids, the
/// Bernstein bound grid_max / (1 - pi span h / 2), whichever is smaller.
struct SupEstimate {
    double lower = 0.0;
    double upper = 0.0;
    double argmax_theta = 0.0;
    double deriv_bound = 0.0;   // 2 pi sum |w_k| (u_k - u_min)
    double abs_sum = 0.0;       // sum |w_k|
    double grid_spacing = 0.0;
    double bracket_width = 0.0;  // widest final bracket
    double global_upper = 0.0;
    std::size_t grid_points = 0;
    bool used_fft = false;
    /// grid_spacing * deriv_bound > abs_sum / 2: the global bound says little.
    bool vacuous = false;

    double honesty_ratio() const { return lower > 0.0 ? global_upper / lower : 0.0; }
};

struct SupOptions {
    std::optional<ThetaGrid> grid;
    int refine_iters = 40;
    std::size_t top_cells = 8;
    GridPath path = GridPath::automatic;
    bool monomial = false;  // use the monomial grid heuristic for the default grid
};

SupEstimate sup_V(std::span<const cplx> w, std::span<const Index> u, const SupOptions& opts = {});

/// w_k / k for k = first_k, first_k + 1, ...; DomainError when first_k == 0.
std::vector<cplx> harmonic_weights(std::span<const cplx> w, Index first_k);

cplx eval_Vstar(std::span<const cplx> w, std::span<const Index> u, Index first_k, double theta);
SupEstimate sup_Vstar(std::span<const cplx> w, std::span<const Index> u, Index first_k,
                      const SupOptions& opts = {});

double abs_sum(std::span<const cplx> w);

/// Serial reference kernels. Same summation trees as the parallel versions,
/// kept for cross-checking and benchmarking.
namespace serial {
cplx eval_V(std::span<const cplx> w, std::span<const Index> u, double theta);
std::vector<cplx> eval_V_grid(std::span<const cplx> w, std::span<const Index> u,
                              const ThetaGrid& grid);
} // namespace serial

/// Kernel-level helpers shared by the serial and parallel paths.
namespace detail {
/// theta * u mod 1 in turns, extended precision.
double turns(double theta, Index u);
/// (j * u mod P) / P exactly.
double grid_turns(std::size_t j, Index u, std::size_t points);
cplx grid_value(std::span<const cplx> w, std::span<const Index> u, const ThetaGrid& g,
                std::size_t j);
std::vector<cplx> fft_grid(std::span<const cplx> w, std::span<const Index> u, std::size_t points);
} // namespace detail

} // namespace wea
