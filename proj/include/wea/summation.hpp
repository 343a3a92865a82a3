#pragma once

// Deterministic summation trees. A range of n terms is cut into fixed
// chunks of kChunk terms; each chunk is summed pairwise and the chunk totals
// are combined by a second pairwise tree. The tree shape depends only on n,
// so serial and parallel evaluation give bit-identical results.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "wea/types.hpp"

namespace wea::sum {

inline constexpr std::size_t kChunk = 4096;
inline constexpr std::size_t kLeaf = 32;

template <class T, class Term>
T pairwise(std::size_t lo, std::size_t hi, const Term& term) {
    if (hi - lo <= kLeaf) {
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        return acc;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise<T>(lo, mid, term) + pairwise<T>(mid, hi, term);
}

template <class T>
T reduce_totals(const std::vector<T>& totals) {
    return pairwise<T>(0, totals.size(), [&](std::size_t i) { return totals[i]; });
}

inline std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

/// Serial chunked tree sum of term(0..n-1).
template <class T, class Term>
T tree_sum(std::size_t n, const Term& term) {
    const std::size_t chunks = chunk_count(n);
    std::vector<T> totals(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        totals[c] = pairwise<T>(c * kChunk, std::min(n, (c + 1) * kChunk), term);
    }
    return reduce_totals(totals);
}

/// Same tree as tree_sum with chunks distributed over OpenMP threads.
template <class T, class Term>
T tree_sum_parallel(std::size_t n, const Term& term) {
    const std::size_t chunks = chunk_count(n);
    if (chunks <= 1) return tree_sum<T>(n, term);
    std::vector<T> totals(chunks);
    const auto nc = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        totals[cu] = pairwise<T>(cu * kChunk, std::min(n, (cu + 1) * kChunk), term);
    }
    return reduce_totals(totals);
}

/// Neumaier-compensated running sum, used for prefix sums.
template <class T>
struct Compensated {
    T sum{};
    T carry{};

    void add(T x) {
        add_component(sum, carry, x);
    }
    T value() const { return sum + carry; }

private:
    static void add_component(double& s, double& c, double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x)) c += (s - t) + x;
        else c += (x - t) + s;
        s = t;
    }
    static void add_component(cplx& s, cplx& c, cplx x) {
        double sr = s.real(), si = s.imag(), cr = c.real(), ci = c.imag();
        add_component(sr, cr, x.real());
        add_component(si, ci, x.imag());
        s = {sr, si};
        c = {cr, ci};
    }
};

} // namespace wea::sum
