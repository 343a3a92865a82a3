#include "wea/trigsum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include <fftw3.h>

#include "wea/error.hpp"
#include "wea/summation.hpp"

namespace wea {

namespace {

void check_shape(std::size_t a, std::size_t b, const char* op) {
    if (a != b) throw ShapeError(std::string(op) + ": weights and indices differ in length");
    if (a == 0) throw ShapeError(std::string(op) + ": empty range");
}

// The FFTW planner is not reentrant; execution of a finished plan is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

std::size_t next_pow2(std::size_t x) { return std::bit_ceil(std::max<std::size_t>(x, 2)); }

} // namespace

ThetaGrid make_grid(std::size_t points, double lo, double hi) {
    if (points < 2) throw ParameterError("ThetaGrid: need at least 2 points");
    if (!(hi > lo)) throw ParameterError("ThetaGrid: span must be a nonempty interval");
    return {points, lo, hi};
}

ThetaGrid default_grid(std::size_t n_terms, Index span, bool monomial) {
    std::size_t p = std::min<std::size_t>(std::size_t{1} << 22, next_pow2(16 * n_terms));
    if (monomial && n_terms > 0) {
        const double factor = std::max(1.0, static_cast<double>(span) / static_cast<double>(n_terms));
        const double scaled = std::min(static_cast<double>(std::size_t{1} << 26),
                                       static_cast<double>(p) * factor);
        p = next_pow2(static_cast<std::size_t>(scaled));
    }
    return make_grid(p);
}

double abs_sum(std::span<const cplx> w) {
    return sum::tree_sum<double>(w.size(), [&](std::size_t k) { return std::abs(w[k]); });
}

cplx eval_V(std::span<const cplx> w, std::span<const Index> u, double theta) {
    check_shape(w.size(), u.size(), "eval_V");
    return sum::tree_sum_parallel<cplx>(w.size(), [&](std::size_t k) {
        return w[k] * unit_phase(detail::turns(theta, u[k]));
    });
}

cplx eval_V(std::span<const cplx> w, std::span<const double> freq, double theta) {
    check_shape(w.size(), freq.size(), "eval_V");
    const auto t = static_cast<long double>(theta);
    return sum::tree_sum_parallel<cplx>(w.size(), [&](std::size_t k) {
        return w[k] * unit_phase(static_cast<double>(frac_turns(t * freq[k])));
    });
}

namespace detail {

std::vector<cplx> fft_grid(std::span<const cplx> w, std::span<const Index> u, std::size_t points) {
    // V(j/L) = sum_n x_n e^{+2 i pi j n / L} with x scattered at u mod L:
    // exactly FFTW's backward transform, whatever the size of u.
    fftw_complex* buf = fftw_alloc_complex(points);
    if (buf == nullptr) throw std::bad_alloc();
    std::fill_n(reinterpret_cast<double*>(buf), 2 * points, 0.0);
    for (std::size_t k = 0; k < w.size(); ++k) {
        const std::size_t slot = static_cast<std::size_t>(u[k] % points);
        buf[slot][0] += w[k].real();
        buf[slot][1] += w[k].imag();
    }
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(points), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::vector<cplx> out(points);
    for (std::size_t j = 0; j < points; ++j) out[j] = {buf[j][0], buf[j][1]};
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    return out;
}

} // namespace detail

std::vector<cplx> eval_V_grid(std::span<const cplx> w, std::span<const Index> u,
                              const ThetaGrid& grid, GridPath path) {
    check_shape(w.size(), u.size(), "eval_V_grid");
    if (path == GridPath::fft && !grid.canonical()) {
        throw UnsupportedError("eval_V_grid: FFT path needs the canonical [0,1) grid");
    }
    if (path == GridPath::fft || (path == GridPath::automatic && grid.canonical())) {
        return detail::fft_grid(w, u, grid.points);
    }
    std::vector<cplx> out(grid.points);
    const auto np = static_cast<std::ptrdiff_t>(grid.points);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t j = 0; j < np; ++j) {
        out[static_cast<std::size_t>(j)] = detail::grid_value(w, u, grid, static_cast<std::size_t>(j));
    }
    return out;
}

std::vector<cplx> eval_V_grid(std::span<const cplx> w, std::span<const double> freq,
                              const ThetaGrid& grid, GridPath path) {
    check_shape(w.size(), freq.size(), "eval_V_grid");
    if (path == GridPath::fft) {
        throw UnsupportedError("eval_V_grid: FFT path needs integer indices");
    }
    std::vector<cplx> out(grid.points);
    const auto np = static_cast<std::ptrdiff_t>(grid.points);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t j = 0; j < np; ++j) {
        const auto t = static_cast<long double>(grid.at(static_cast<std::size_t>(j)));
        out[static_cast<std::size_t>(j)] = sum::tree_sum<cplx>(w.size(), [&](std::size_t k) {
            return w[k] * unit_phase(static_cast<double>(frac_turns(t * freq[k])));
        });
    }
    return out;
}

namespace {

// V with its first two theta-derivatives, from one pass over the terms.
struct Jet {
    cplx v, d1, d2;
    Jet& operator+=(const Jet& o) {
        v += o.v;
        d1 += o.d1;
        d2 += o.d2;
        return *this;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    // derivatives of |V|^2
    double g1() const { return 2.0 * (std::conj(v) * d1).real(); }
    double g2() const { return 2.0 * (std::norm(d1) + (std::conj(v) * d2).real()); }
};

Jet jet(std::span<const cplx> w, std::span<const Index> u, double theta) {
    return sum::tree_sum_parallel<Jet>(w.size(), [&](std::size_t k) {
        const cplx e = w[k] * unit_phase(detail::turns(theta, u[k]));
        const cplx iw(0.0, two_pi * static_cast<double>(u[k]));
        const cplx e1 = iw * e;
        return Jet{e, e1, iw * e1};
    });
}

struct Refined {
    double a, b;           // final bracket
    double best, best_theta;
    double mid_value;      // |V| at the bracket midpoint
};

// Maximizes |V| on [a, b]. When d|V|^2 changes sign from + to - across the
// cell, a safeguarded Newton iteration on that derivative keeps a true
// bracket around the critical point; otherwise golden-section search.
template <class Modulus>
Refined refine_cell(std::span<const cplx> w, std::span<const Index> u, double a, double b, double D, int iters,
                    const Modulus& modulus) {
    Refined r{a, b, 0.0, a, 0.0};
    auto consider = [&](double x, double f) {
        if (f > r.best) {
            r.best = f;
            r.best_theta = x;
        }
    };
    const Jet ja = jet(w, u, a), jb = jet(w, u, b);
    consider(a, std::abs(ja.v));
    consider(b, std::abs(jb.v));
    if (ja.g1() > 0.0 && jb.g1() < 0.0) {
        double x = 0.5 * (a + b), step_old = b - a;
        for (int it = 0; it < iters; ++it) {
            const Jet jx = jet(w, u, x);
            consider(x, std::abs(jx.v));
            const double g1 = jx.g1(), g2 = jx.g2();
            if (g1 > 0.0) a = x;
            else b = x;
            const double target = std::max(1e-12 * std::max(r.best, 1e-300) / std::max(D, 1e-300),
                                           4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)));
            if (b - a <= 2.0 * target) break;
            double xn = g2 < 0.0 ? x - g1 / g2 : 0.5 * (a + b);
            if (!(xn > a && xn < b) || std::abs(xn - x) > 0.5 * step_old) xn = 0.5 * (a + b);
            step_old = std::abs(xn - x);
            if (step_old < target) {
                // converged: try to close the bracket symmetrically around xn
                const double lo = std::max(a, xn - target), hi = std::min(b, xn + target);
                const Jet jl = jet(w, u, lo), jh = jet(w, u, hi);
                consider(lo, std::abs(jl.v));
                consider(hi, std::abs(jh.v));
                if (jl.g1() > 0.0) a = lo;
                if (jh.g1() < 0.0) b = hi;
                if (b - a <= 2.0 * target) break;
                xn = 0.5 * (a + b);
            }
            x = xn;
        }
    } else {
        constexpr double kInvPhi = 0.61803398874989484820;
        double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
        double f1 = modulus(x1), f2 = modulus(x2);
        consider(x1, f1);
        consider(x2, f2);
        for (int it = 1; it < iters; ++it) {
            if (f1 >= f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - kInvPhi * (b - a);
                f1 = modulus(x1);
                consider(x1, f1);
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + kInvPhi * (b - a);
                f2 = modulus(x2);
                consider(x2, f2);
            }
        }
    }
    r.a = a;
    r.b = b;
    r.mid_value = modulus(0.5 * (a + b));
    consider(0.5 * (a + b), r.mid_value);
    return r;
}

} // namespace

SupEstimate sup_V(std::span<const cplx> w, std::span<const Index> u, const SupOptions& opts) {
    check_shape(w.size(), u.size(), "sup_V");
    const std::size_t n = w.size();

    // |V| is unchanged by a common shift of the indices; shifting keeps the
    // derivative bound and the phases small.
    const Index u_min = *std::min_element(u.begin(), u.end());
    const Index u_max = *std::max_element(u.begin(), u.end());
    std::vector<Index> shifted(n);
    for (std::size_t k = 0; k < n; ++k) shifted[k] = u[k] - u_min;

    SupEstimate est;
    est.abs_sum = abs_sum(w);
    est.deriv_bound = two_pi * sum::tree_sum<double>(n, [&](std::size_t k) {
        return std::abs(w[k]) * static_cast<double>(shifted[k]);
    });

    const ThetaGrid grid = opts.grid ? *opts.grid : default_grid(n, u_max - u_min, opts.monomial);
    const double h = grid.spacing();
    est.grid_points = grid.points;
    est.grid_spacing = h;
    est.used_fft = opts.path == GridPath::fft || (opts.path == GridPath::automatic && grid.canonical());

    const auto values = eval_V_grid(w, shifted, grid, opts.path);
    std::vector<double> mod(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) mod[j] = std::abs(values[j]);

    const std::size_t P = mod.size();
    const bool periodic = grid.canonical();
    std::vector<std::size_t> cells;
    for (std::size_t j = 0; j < P; ++j) {
        const bool has_left = periodic || j > 0;
        const bool has_right = periodic || j + 1 < P;
        const double left = has_left ? mod[(j + P - 1) % P] : -1.0;
        const double right = has_right ? mod[(j + 1) % P] : -1.0;
        if (mod[j] >= left && mod[j] >= right) cells.push_back(j);
    }
    const std::size_t keep = std::min(opts.top_cells, cells.size());
    std::partial_sort(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(keep), cells.end(),
                      [&](std::size_t a, std::size_t b) {
                          return mod[a] != mod[b] ? mod[a] > mod[b] : a < b;
                      });
    cells.resize(keep);

    const std::size_t grid_best = static_cast<std::size_t>(
        std::max_element(mod.begin(), mod.end()) - mod.begin());
    double best = mod[grid_best];
    double best_theta = grid.at(grid_best);
    const double grid_max = best;

    const auto modulus = [&](double theta) { return std::abs(eval_V(w, shifted, theta)); };
    double bracket = 2.0 * h;
    double local_upper = 0.0;
    for (std::size_t c : cells) {
        if (opts.refine_iters <= 0) continue;
        const Refined r = refine_cell(w, shifted, grid.at(c) - h, grid.at(c) + h, est.deriv_bound, opts.refine_iters,
                                      modulus);
        if (r.best > best) {
            best = r.best;
            best_theta = r.best_theta;
        }
        local_upper = std::max(local_upper, r.mid_value + 0.5 * (r.b - r.a) * est.deriv_bound);
        bracket = std::max(r.b - r.a, c == cells.front() ? 0.0 : bracket);
    }
    if (cells.empty() || opts.refine_iters <= 0) local_upper = best + 0.5 * bracket * est.deriv_bound;
    if (periodic) best_theta -= std::floor(best_theta);

    est.lower = best;
    est.argmax_theta = best_theta;
    est.bracket_width = bracket;
    est.upper = std::max(est.lower, std::min(local_upper, est.abs_sum));
    // every theta lies within h/2 of a grid point; allow for FFT rounding in the grid values
    const double grid_safe = grid_max + 1e-12 * est.abs_sum;
    double global = grid_safe + 0.5 * h * est.deriv_bound;
    // Bernstein: after centering, the spectrum lies in [-span/2, span/2], so
    // |V'| <= pi span sup|V| and sup|V| <= grid_max / (1 - pi span h / 2).
    const double bern = two_pi * 0.25 * static_cast<double>(u_max - u_min) * h;
    if (periodic && bern < 1.0) global = std::min(global, grid_safe / (1.0 - bern));
    est.global_upper = std::max(est.lower, std::min(global, est.abs_sum));
    est.vacuous = h * est.deriv_bound > 0.5 * est.abs_sum;
    return est;
}

std::vector<cplx> harmonic_weights(std::span<const cplx> w, Index first_k) {
    if (first_k == 0) throw DomainError("harmonic weights w_k / k: range contains k = 0");
    std::vector<cplx> out(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) out[j] = w[j] / static_cast<double>(first_k + j);
    return out;
}

cplx eval_Vstar(std::span<const cplx> w, std::span<const Index> u, Index first_k, double theta) {
    const auto hw = harmonic_weights(w, first_k);
    return eval_V(hw, u, theta);
}

SupEstimate sup_Vstar(std::span<const cplx> w, std::span<const Index> u, Index first_k,
                      const SupOptions& opts) {
    const auto hw = harmonic_weights(w, first_k);
    return sup_V(hw, u, opts);
}

} // namespace wea
