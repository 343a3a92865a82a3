#include <bit>

#include "wea/error.hpp"
#include "wea/summation.hpp"
#include "wea/trigsum.hpp"

namespace wea {

namespace detail {

double turns(double theta, Index u) {
    return static_cast<double>(
        frac_turns(static_cast<long double>(theta) * static_cast<long double>(u)));
}

double grid_turns(std::size_t j, Index u, std::size_t points) {
    if (std::has_single_bit(points)) {
        // wrapping 64-bit product is exact mod 2^64, hence mod any power of two
        const Index r = (static_cast<Index>(j) * u) & (static_cast<Index>(points) - 1);
        return static_cast<double>(r) / static_cast<double>(points);
    }
    const auto r = (static_cast<unsigned __int128>(j) * u) % points;
    return static_cast<double>(r) / static_cast<double>(points);
}

cplx grid_value(std::span<const cplx> w, std::span<const Index> u, const ThetaGrid& g,
                std::size_t j) {
    if (g.canonical()) {
        return sum::tree_sum<cplx>(w.size(), [&](std::size_t k) {
            return w[k] * unit_phase(grid_turns(j, u[k], g.points));
        });
    }
    const double theta = g.at(j);
    return sum::tree_sum<cplx>(w.size(), [&](std::size_t k) {
        return w[k] * unit_phase(turns(theta, u[k]));
    });
}

} // namespace detail

namespace serial {

cplx eval_V(std::span<const cplx> w, std::span<const Index> u, double theta) {
    if (w.size() != u.size()) throw ShapeError("eval_V: weights and indices differ in length");
    return sum::tree_sum<cplx>(w.size(), [&](std::size_t k) {
        return w[k] * unit_phase(detail::turns(theta, u[k]));
    });
}

std::vector<cplx> eval_V_grid(std::span<const cplx> w, std::span<const Index> u,
                              const ThetaGrid& grid) {
    if (w.size() != u.size()) throw ShapeError("eval_V_grid: weights and indices differ in length");
    std::vector<cplx> out(grid.points);
    for (std::size_t j = 0; j < grid.points; ++j) out[j] = detail::grid_value(w, u, grid, j);
    return out;
}

} // namespace serial

} // namespace wea
