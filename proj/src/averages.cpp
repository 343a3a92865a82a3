#include "wea/averages.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wea/error.hpp"
#include "wea/scaling_fit.hpp"
#include "wea/summation.hpp"
#include "wea/trigsum.hpp"

namespace wea {

// ---------------------------------------------------------------- normalizer

Index NormalizerSpec::default_offset() const {
    if (b != 0.0) return 16;
    if (a != 0.0) return 3;
    return 1;
}

Index NormalizerSpec::minimum_offset() const {
    if (b != 0.0) return 3;
    if (a != 0.0) return 2;
    return 1;
}

double NormalizerSpec::log_value(double k) const {
    double v = gamma * std::log(k);
    if (a != 0.0 || b != 0.0) {
        const double L = std::log(k);
        if (a != 0.0) v += a * std::log(L);
        if (b != 0.0) v += b * std::log(std::log(L));
    }
    return v;
}

double NormalizerSpec::operator()(double k) const {
    if (k < static_cast<double>(minimum_offset())) {
        throw DomainError("normalizer: A(k) undefined or nonpositive at k = " + std::to_string(k));
    }
    const double v = std::exp(log_value(k));
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("normalizer: A(k) is not a positive finite number");
    return v;
}

double NormalizerSpec::log_step(Index k) const {
    const double kd = static_cast<double>(k);
    const double dlog = std::log1p(1.0 / kd);  // log(k+1) - log k
    double step = gamma * dlog;
    if (a != 0.0 || b != 0.0) {
        const double L = std::log(kd);
        const double dloglog = std::log1p(dlog / L);
        step += a * dloglog;
        if (b != 0.0) step += b * std::log1p(dloglog / std::log(L));
    }
    return step;
}

void NormalizerSpec::validate() const {
    if (!(gamma >= 0.0) || !std::isfinite(gamma) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ParameterError("normalizer: gamma must be finite and >= 0, a and b finite");
    }
    if (k0 != 0 && k0 < minimum_offset()) {
        throw ParameterError("normalizer: offset k0 = " + std::to_string(k0) + " below the minimum " +
                             std::to_string(minimum_offset()));
    }
    if (gamma == 0.0 && a == 0.0 && b == 0.0) throw ParameterError("normalizer: A(k) = 1 is not a normalizer");
}

void NormalizerSpec::check_monotone(Index hi) const {
    validate();
    const Index lo = offset();
    if (hi <= lo) return;
    // sign of k d/dk log A = gamma + a / log k + b / (log k log log k)
    auto slope = [&](double k) {
        const double L = std::log(k);
        double s = gamma;
        if (a != 0.0) s += a / L;
        if (b != 0.0) s += b / (L * std::log(L));
        return s;
    };
    const double l0 = std::log(static_cast<double>(lo)), l1 = std::log(static_cast<double>(hi));
    constexpr int kSamples = 2048;
    for (int i = 0; i <= kSamples; ++i) {
        const double k = std::exp(l0 + (l1 - l0) * i / kSamples);
        if (slope(k) < -1e-12) {
            throw DomainError("normalizer " + describe(*this) + " decreases near k = " + std::to_string(k));
        }
    }
    // exact first steps, where the continuous test is coarsest
    for (Index k = lo; k < std::min<Index>(hi, lo + 64); ++k) {
        if (log_step(k) < 0.0) throw DomainError("normalizer " + describe(*this) + " decreases at k = " + std::to_string(k));
    }
}

NormalizerSpec NormalizerSpec::power(double g) { return {g, 0.0, 0.0, 0}; }
NormalizerSpec NormalizerSpec::theorem1(double alpha, double delta, double H) { return {alpha + delta, H, 0.0, 0}; }
NormalizerSpec NormalizerSpec::theorem2(double alpha, double H) { return {(alpha + 1.0) / 2.0, H, 0.0, 0}; }
NormalizerSpec NormalizerSpec::theorem3() { return {1.0, 0.0, 0.0, 0}; }
NormalizerSpec NormalizerSpec::theorem4(double alpha, double H) { return {0.0, alpha, H, 0}; }
NormalizerSpec NormalizerSpec::theorem5(double H) { return {0.0, H, 0.0, 0}; }
NormalizerSpec NormalizerSpec::theorem6() { return {0.0, 1.0, 0.0, 0}; }

std::string describe(const NormalizerSpec& n) {
    std::ostringstream os;
    os << "k^" << n.gamma << " log^" << n.a << " k (log log k)^" << n.b << " [k >= " << n.offset() << "]";
    return os.str();
}

// ---------------------------------------------------------------- ladders

BlockLadder BlockLadder::dyadic(unsigned j_min, unsigned j_max) { return {Kind::dyadic, 2.0, 0.5, j_min, j_max}; }
BlockLadder BlockLadder::doubly_exponential(unsigned j_min, unsigned j_max) {
    return {Kind::doubly_exponential, 2.0, 0.5, j_min, j_max};
}
BlockLadder BlockLadder::rho_ladder(double rho, double epsilon, unsigned j_min, unsigned j_max) {
    return {Kind::rho, rho, epsilon, j_min, j_max};
}
BlockLadder BlockLadder::rho_rho_ladder(double rho, double epsilon, unsigned j_min, unsigned j_max) {
    return {Kind::rho_rho, rho, epsilon, j_min, j_max};
}

void BlockLadder::validate() const {
    if (j_max < j_min) throw ParameterError("ladder: j_max < j_min");
    if (kind == Kind::rho || kind == Kind::rho_rho) {
        if (!(rho > 1.0)) throw ParameterError("ladder: rho must be > 1");
        if (!(epsilon > 0.0 && epsilon <= 0.5)) throw ParameterError("ladder: epsilon must lie in (0, 1/2]");
        if (j_min < 2) throw ParameterError("ladder: rho ladders start at j = 2");
    }
}

std::vector<std::pair<unsigned, Index>> BlockLadder::points(Index limit) const {
    validate();
    std::vector<std::pair<unsigned, Index>> out;
    const long double cap = static_cast<long double>(limit);
    for (unsigned j = j_min; j <= j_max; ++j) {
        long double v = 0.0L;
        switch (kind) {
        case Kind::dyadic: v = j >= 64 ? cap + 1 : std::ldexp(1.0L, static_cast<int>(j)); break;
        case Kind::doubly_exponential: v = j >= 7 ? cap + 1 : std::ldexp(1.0L, 1 << j); break;
        case Kind::rho: {
            const long double e = std::pow(static_cast<long double>(j), 1.0L - epsilon) * std::log(static_cast<long double>(j));
            v = std::pow(static_cast<long double>(rho), e);
            break;
        }
        case Kind::rho_rho: {
            const long double e = std::pow(static_cast<long double>(j), 1.0L - epsilon) * std::log(static_cast<long double>(j));
            const long double inner = std::pow(static_cast<long double>(rho), e);
            v = inner > 64.0L ? cap + 1 : std::pow(static_cast<long double>(rho), inner);
            break;
        }
        }
        if (!(v <= cap)) break;
        const auto n = static_cast<Index>(std::floor(v));
        if (n == 0 || (!out.empty() && n <= out.back().second)) continue;
        out.emplace_back(j, n);
    }
    return out;
}

std::string to_string(BlockLadder::Kind kind) {
    switch (kind) {
    case BlockLadder::Kind::dyadic: return "dyadic";
    case BlockLadder::Kind::doubly_exponential: return "doubly_exponential";
    case BlockLadder::Kind::rho: return "rho";
    case BlockLadder::Kind::rho_rho: return "rho_rho";
    }
    return "?";
}

BlockLadder::Kind ladder_kind_from_string(const std::string& name) {
    for (auto k : {BlockLadder::Kind::dyadic, BlockLadder::Kind::doubly_exponential, BlockLadder::Kind::rho,
                   BlockLadder::Kind::rho_rho}) {
        if (to_string(k) == name) return k;
    }
    throw ValidationError("unknown ladder kind '" + name + "'");
}

// ---------------------------------------------------------------- runs

namespace {

std::vector<Index> storage_grid(Index n, const StorageOptions& opt) {
    if (!(opt.ratio > 1.0)) throw ParameterError("storage: ratio must be > 1");
    std::vector<Index> grid;
    const Index full = std::min(n, opt.full_limit);
    grid.reserve(static_cast<std::size_t>(full) + 1024);
    for (Index N = 1; N <= full; ++N) grid.push_back(N);
    double next = static_cast<double>(full) * opt.ratio;
    while (next < static_cast<double>(n)) {
        const auto N = static_cast<Index>(std::ceil(next));
        if (grid.empty() || N > grid.back()) grid.push_back(N);
        next = static_cast<double>(std::max<Index>(N, grid.back())) * opt.ratio;
    }
    for (Index f : opt.forced)
        if (f >= 1 && f <= n) grid.push_back(f);
    if (n >= 1) grid.push_back(n);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

// Prefix sums of term(j) at the (sorted) grid positions, one compensated
// running sum per chunk seeded by a compensated scan of the chunk totals.
template <class Term>
std::vector<cplx> prefix_at(std::size_t n, const std::vector<Index>& grid, const Term& term) {
    const std::size_t chunks = sum::chunk_count(n);
    std::vector<cplx> totals(chunks);
    const auto nc = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        totals[cu] = sum::pairwise<cplx>(cu * sum::kChunk, std::min(n, (cu + 1) * sum::kChunk), term);
    }
    std::vector<sum::Compensated<cplx>> base(chunks);
    for (std::size_t c = 1; c < chunks; ++c) {
        base[c] = base[c - 1];
        base[c].add(totals[c - 1]);
    }
    std::vector<cplx> out(grid.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        const std::size_t lo = cu * sum::kChunk, hi = std::min(n, (cu + 1) * sum::kChunk);
        auto g = std::lower_bound(grid.begin(), grid.end(), static_cast<Index>(lo + 1));
        auto acc = base[cu];
        for (std::size_t j = lo; j < hi && g != grid.end(); ++j) {
            acc.add(term(j));
            if (*g == j + 1) {
                out[static_cast<std::size_t>(g - grid.begin())] = acc.value();
                ++g;
            }
        }
    }
    return out;
}

} // namespace

bool SeriesRun::stored(Index n) const { return std::binary_search(N.begin(), N.end(), n); }

cplx SeriesRun::at(Index n) const {
    const auto it = std::lower_bound(N.begin(), N.end(), n);
    if (it == N.end() || *it != n) throw RangeError("series run: N = " + std::to_string(n) + " is not stored");
    return S[static_cast<std::size_t>(it - N.begin())];
}

SeriesRun weighted_sums(std::span<const cplx> orbit, std::span<const cplx> w, const StorageOptions& storage) {
    if (orbit.size() != w.size()) {
        throw ShapeError("weighted_sums: " + std::to_string(orbit.size()) + " orbit values vs " +
                         std::to_string(w.size()) + " weights");
    }
    SeriesRun run;
    run.terms = orbit.size();
    run.storage = storage;
    run.N = storage_grid(run.terms, storage);
    run.S = prefix_at(orbit.size(), run.N, [&](std::size_t j) { return w[j] * orbit[j]; });
    return run;
}

// ---------------------------------------------------------------- normalized series

double normalized_at(const SeriesRun& run, const NormalizerSpec& norm, Index N) {
    if (N < norm.offset()) throw DomainError("normalized_at: N below the normalizer offset");
    return std::abs(run.at(N)) / norm(static_cast<double>(N));
}

NormalizedSeries normalized_series(const SeriesRun& run, const NormalizerSpec& norm, Index N_tail) {
    norm.validate();
    NormalizedSeries out;
    out.loglog_slope = norm.gamma == 0.0;
    const Index k0 = norm.offset();
    for (std::size_t i = 0; i < run.N.size(); ++i) {
        if (run.N[i] < k0) {
            ++out.skipped;
            continue;
        }
        out.N.push_back(run.N[i]);
        out.ratio.push_back(std::abs(run.S[i]) / norm(static_cast<double>(run.N[i])));
    }
    if (out.N.empty()) return out;
    out.N_tail = N_tail == 0 ? std::max<Index>(out.N.back() / 2, k0) : N_tail;
    for (std::size_t i = 0; i < out.N.size(); ++i)
        if (out.N[i] >= out.N_tail) out.tail_max = std::max(out.tail_max, out.ratio[i]);

    // regression on a geometric subsample so the dense low range does not dominate
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    double last = 0.0;
    for (std::size_t i = 0; i < out.N.size(); ++i) {
        const double n = static_cast<double>(out.N[i]);
        if (n < 3.0 || out.ratio[i] <= 0.0 || (last > 0.0 && n < last * 1.05)) continue;
        const double x = out.loglog_slope ? std::log(std::log(n)) : std::log(n);
        rows.push_back({1.0, x});
        y.push_back(std::log(out.ratio[i]));
        last = n;
    }
    if (rows.size() >= 2) out.slope = least_squares(rows, y).coef[1];
    return out;
}

double window_max(const NormalizedSeries& s, Index lo, Index hi) {
    double m = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < s.N.size(); ++i) {
        if (s.N[i] >= lo && s.N[i] <= hi) {
            m = std::max(m, s.ratio[i]);
            any = true;
        }
    }
    if (!any) throw RangeError("window_max: no stored N in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return m;
}

// ---------------------------------------------------------------- Hilbert sums

namespace {

void check_hilbert(std::span<const cplx> w, std::span<const cplx> orbit, const NormalizerSpec& norm, Index first_k) {
    if (w.size() != orbit.size()) throw ShapeError("hilbert: weights and orbit differ in length");
    norm.validate();
    if (first_k < norm.offset()) {
        throw DomainError("hilbert: first label " + std::to_string(first_k) + " below the normalizer offset " +
                          std::to_string(norm.offset()));
    }
}

using Pt = std::pair<double, double>;

double cross(const Pt& o, const Pt& a, const Pt& b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

std::vector<Pt> convex_hull(std::vector<Pt> p) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) return p;
    std::vector<Pt> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return h;
}

double diameter(const std::vector<Pt>& hull) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j) {
            const double dx = hull[i].first - hull[j].first, dy = hull[i].second - hull[j].second;
            d2 = std::max(d2, dx * dx + dy * dy);
        }
    return std::sqrt(d2);
}

} // namespace

HilbertReport hilbert_partial(std::span<const cplx> w, std::span<const cplx> orbit, const NormalizerSpec& norm,
                              Index first_k, const StorageOptions& storage, std::vector<Index> tail_ladder) {
    check_hilbert(w, orbit, norm, first_k);
    HilbertReport rep;
    const std::size_t n = w.size();
    if (n == 0) return rep;
    // positions are term counts; labels are first_k + position - 1
    std::vector<Index> counts = storage_grid(n, storage);
    const auto partial = prefix_at(n, counts, [&](std::size_t j) {
        return w[j] * orbit[j] / norm(static_cast<double>(first_k + j));
    });
    rep.N.reserve(counts.size());
    for (Index c : counts) rep.N.push_back(first_k + c - 1);
    rep.partial = partial;
    rep.final_value = partial.back();

    if (tail_ladder.empty()) {
        for (Index N0 = std::max<Index>(first_k, 2); N0 <= rep.N.back(); N0 *= 2) tail_ladder.push_back(N0);
    }
    std::sort(tail_ladder.begin(), tail_ladder.end());
    tail_ladder.erase(std::unique(tail_ladder.begin(), tail_ladder.end()), tail_ladder.end());
    // nested suffix hulls, from the largest N0 down
    std::vector<Pt> hull;
    std::size_t end = rep.N.size();
    std::vector<double> diam(tail_ladder.size());
    for (std::size_t t = tail_ladder.size(); t-- > 0;) {
        const auto begin = static_cast<std::size_t>(
            std::lower_bound(rep.N.begin(), rep.N.end(), tail_ladder[t]) - rep.N.begin());
        std::vector<Pt> pts = hull;
        for (std::size_t i = begin; i < end; ++i) pts.emplace_back(partial[i].real(), partial[i].imag());
        hull = convex_hull(std::move(pts));
        diam[t] = diameter(hull);
        end = std::min(end, begin);
    }
    rep.N0 = tail_ladder;
    rep.tail_diameter = diam;
    return rep;
}

cplx hilbert_sum(std::span<const cplx> w, std::span<const cplx> orbit, const NormalizerSpec& norm, Index first_k,
                 Index N) {
    check_hilbert(w, orbit, norm, first_k);
    if (N < first_k || N - first_k + 1 > w.size()) throw RangeError("hilbert_sum: N outside the supplied terms");
    const std::size_t count = static_cast<std::size_t>(N - first_k + 1);
    sum::Compensated<cplx> acc;
    for (std::size_t j = 0; j < count; ++j) acc.add(w[j] * orbit[j] / norm(static_cast<double>(first_k + j)));
    return acc.value();
}

cplx abel_decompose(std::span<const cplx> w, std::span<const cplx> orbit, const NormalizerSpec& norm, Index first_k,
                    Index N) {
    check_hilbert(w, orbit, norm, first_k);
    if (N < first_k || N - first_k + 1 > w.size()) throw RangeError("abel_decompose: N outside the supplied terms");
    const std::size_t count = static_cast<std::size_t>(N - first_k + 1);
    sum::Compensated<cplx> B;    // B_k = sum_{j=first_k}^{k} w_j x_j
    sum::Compensated<cplx> out;
    for (std::size_t j = 0; j + 1 < count; ++j) {
        B.add(w[j] * orbit[j]);
        const Index k = first_k + j;
        // 1/A(k) - 1/A(k+1) = expm1(log A(k+1) - log A(k)) / A(k+1)
        const double diff = std::expm1(norm.log_step(k)) / norm(static_cast<double>(k + 1));
        out.add(diff * B.value());
    }
    B.add(w[count - 1] * orbit[count - 1]);
    out.add(B.value() / norm(static_cast<double>(N)));
    return out.value();
}

double g_integral(Index m, Index n, double L) {
    if (!(L > 1.0)) throw ParameterError("g_integral: L <= 1 gives a divergent template");
    if (m < 3) throw DomainError("g_integral: m must be >= 3");
    if (n <= m) throw ParameterError("g_integral: need m < n");
    const double md = static_cast<double>(m), nd = static_cast<double>(n);
    const double c = 1.0 - L;
    const double logm = std::log(md);
    // log(log n / log m), without cancellation for nearby m and n
    const double dlog = std::log1p((nd - md) / md);
    const double ratio = std::log1p(dlog / logm);
    return std::pow(logm, c) * -std::expm1(c * ratio) / (L - 1.0);
}

// ---------------------------------------------------------------- oscillation

OscillationReport oscillation_report(const SeriesRun& run, const NormalizerSpec& norm, const BlockLadder& ladder,
                                     std::vector<double> moment_orders) {
    norm.validate();
    const auto pts = ladder.points(run.N_max());
    OscillationReport rep;
    for (const auto& [j, Nj] : pts) {
        if (Nj >= norm.offset() && !run.stored(Nj)) {
            throw RangeError("oscillation_report: ladder point " + std::to_string(Nj) + " not on the stored grid");
        }
    }
    std::vector<std::pair<unsigned, Index>> usable;
    for (const auto& p : pts)
        if (p.second >= norm.offset()) usable.push_back(p);
    rep.grid_points = run.N.size();
    rep.full_grid = run.N_max() <= run.storage.full_limit;
    double running = 0.0;
    std::vector<double> moment_running(moment_orders.size(), 0.0);
    for (double l : moment_orders) rep.moments.push_back({l, {}});
    constexpr double kOutward = 1.0 + 8.0 * std::numeric_limits<double>::epsilon();
    for (std::size_t b = 0; b + 1 < usable.size(); ++b) {
        OscillationBlock blk;
        blk.j = usable[b].first;
        blk.N_lo = usable[b].second;
        blk.N_hi = usable[b + 1].second;
        const cplx r0 = run.at(blk.N_lo) / norm(static_cast<double>(blk.N_lo));
        blk.anchor = std::abs(r0);
        auto it = std::upper_bound(run.N.begin(), run.N.end(), blk.N_lo);
        for (; it != run.N.end() && *it <= blk.N_hi; ++it) {
            const std::size_t i = static_cast<std::size_t>(it - run.N.begin());
            const cplx r = run.S[i] / norm(static_cast<double>(*it));
            blk.osc = std::max(blk.osc, std::abs(r - r0));
            ++blk.stored;
        }
        // rounded outward so |r| <= anchor + osc also holds in floating point
        blk.osc *= kOutward;
        for (auto jt = std::upper_bound(run.N.begin(), run.N.end(), blk.N_lo); jt != it; ++jt) {
            const std::size_t i = static_cast<std::size_t>(jt - run.N.begin());
            const double r = std::abs(run.S[i] / norm(static_cast<double>(*jt)));
            if (!(r <= blk.anchor + blk.osc)) blk.osc = std::max(blk.osc, r - blk.anchor);
            while (!(r <= blk.anchor + blk.osc)) blk.osc = std::nextafter(blk.osc, std::numeric_limits<double>::infinity());
        }
        running += blk.osc * blk.osc;
        rep.sum_osc2.push_back(running);
        for (std::size_t m = 0; m < moment_orders.size(); ++m) {
            moment_running[m] += std::pow(static_cast<double>(blk.j), moment_orders[m]) * blk.osc * blk.osc;
            rep.moments[m].second.push_back(moment_running[m]);
        }
        rep.blocks.push_back(blk);
    }
    return rep;
}

std::size_t decomposition_violations(const SeriesRun& run, const NormalizerSpec& norm,
                                     const OscillationReport& report) {
    std::size_t bad = 0;
    for (const auto& blk : report.blocks) {
        auto it = std::upper_bound(run.N.begin(), run.N.end(), blk.N_lo);
        for (; it != run.N.end() && *it <= blk.N_hi; ++it) {
            const std::size_t i = static_cast<std::size_t>(it - run.N.begin());
            const double r = std::abs(run.S[i] / norm(static_cast<double>(*it)));
            if (!(r <= blk.anchor + blk.osc)) ++bad;
        }
    }
    return bad;
}

// ---------------------------------------------------------------- maximal norm

MaximalNormRecord maximal_norm(std::span<const cplx> w, std::span<const Index> u, const NormalizerSpec& norm,
                               const SpectralMeasure& m, std::vector<Index> N_grid, std::size_t resolution) {
    if (w.size() != u.size()) throw ShapeError("maximal_norm: weights and indices differ in length");
    if (N_grid.empty()) throw ParameterError("maximal_norm: empty N grid");
    m.validate();
    norm.validate();
    std::sort(N_grid.begin(), N_grid.end());
    N_grid.erase(std::unique(N_grid.begin(), N_grid.end()), N_grid.end());
    if (N_grid.front() < norm.offset() || N_grid.back() > w.size()) {
        throw RangeError("maximal_norm: N grid must lie in [offset, number of terms]");
    }
    MaximalNormRecord rec;
    rec.grid_size = N_grid.size();
    rec.f_norm = std::sqrt(m.total_mass());
    double total = 0.0;

    for (const auto& [t, mass] : m.atoms) {
        sum::Compensated<cplx> acc;
        double best = 0.0;
        std::size_t g = 0;
        for (std::size_t k = 0; k < w.size() && g < N_grid.size(); ++k) {
            acc.add(w[k] * unit_phase(detail::turns(t, u[k])));
            if (k + 1 == N_grid[g]) {
                best = std::max(best, std::norm(acc.value()) / std::pow(norm(static_cast<double>(N_grid[g])), 2));
                ++g;
            }
        }
        total += mass * best;
    }
    if (!m.density.empty()) {
        const std::size_t R = resolution == 0 ? default_resolution(m, u.first(static_cast<std::size_t>(N_grid.back())))
                                              : resolution;
        rec.resolution = R;
        std::vector<double> best(R, 0.0);
        const auto grid = make_grid(R);
        for (Index N : N_grid) {
            const auto n = static_cast<std::size_t>(N);
            const auto v = eval_V_grid(w.first(n), u.first(n), grid);
            const double A2 = std::pow(norm(static_cast<double>(N)), 2);
            for (std::size_t j = 0; j < R; ++j) best[j] = std::max(best[j], std::norm(v[j]) / A2);
        }
        const auto q = m.density_weights(R);
        total += sum::tree_sum<double>(R, [&](std::size_t j) { return q[j] * best[j]; });
    }
    rec.value = std::sqrt(total);
    return rec;
}

// ---------------------------------------------------------------- truncation split

TruncationSplit truncation_split(std::span<const cplx> w, std::span<const cplx> orbit, Index first_k, double beta,
                                 double delta, double epsilon) {
    if (w.size() != orbit.size()) throw ShapeError("truncation_split: weights and orbit differ in length");
    if (!(beta > 0.5 && beta <= 1.0)) throw ParameterError("truncation_split: beta must lie in (1/2, 1]");
    if (first_k < 3) throw DomainError("truncation_split: labels start at k >= 3");
    TruncationSplit out;
    out.epsilon = epsilon < 0.0 ? 1.0 - 1.0 / (2.0 * beta) : epsilon;
    out.delta = delta;
    sum::Compensated<cplx> s1, s2, s;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double k = static_cast<double>(first_k + j);
        const double level = std::pow(k, out.epsilon) / std::pow(std::log(k), delta);
        const cplx term = w[j] * orbit[j];
        s.add(term);
        if (std::abs(orbit[j]) <= level) {
            s1.add(term);
        } else {
            s2.add(term);
            ++out.truncated;
            out.last_truncated = first_k + j;
        }
    }
    out.S1 = s1.value();
    out.S2 = s2.value();
    out.S = s.value();
    out.split_error = std::abs(out.S1 + out.S2 - out.S);
    return out;
}

} // namespace wea
