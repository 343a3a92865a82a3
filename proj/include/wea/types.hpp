#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace wea {

using cplx = std::complex<double>;

/// Integer position along an orbit, u_k in the weighted sums.
using Index = std::uint64_t;

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// e^{2 i pi t} for a phase measured in turns; `t` should already be reduced.
inline cplx unit_phase(double turns) {
    // shift into [-1/2, 1/2) so the argument of sincos stays small
    if (turns >= 0.5) turns -= 1.0;
    const double a = two_pi * turns;
    return {std::cos(a), std::sin(a)};
}

/// Fractional part in [0,1), computed in extended precision.
inline long double frac_turns(long double x) {
    long double f = x - std::floor(x);
    if (f >= 1.0L) f = 0.0L;
    return f;
}

} // namespace wea
