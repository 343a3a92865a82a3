#include "wea/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "wea/error.hpp"
#include "wea/random.hpp"
#include "wea/summation.hpp"
#include "wea/trigsum.hpp"

namespace wea {

long double RationalAngle::times(Index u) const {
    const auto r = static_cast<unsigned __int128>(u % q) * p % q;
    return static_cast<long double>(static_cast<Index>(r)) / static_cast<long double>(q);
}

namespace {

// Convergents of [0; a, a, a, ...].
RationalAngle periodic_convergent(Index a, Index q_max) {
    if (q_max < 2) throw ParameterError("convergent: q_max must be >= 2");
    unsigned __int128 p0 = 0, q0 = 1;  // p_0 / q_0 = 0 / 1
    unsigned __int128 p1 = 1, q1 = a;  // p_1 / q_1 = 1 / a
    while (true) {
        const unsigned __int128 p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > q_max) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    return {static_cast<Index>(p1), static_cast<Index>(q1)};
}

} // namespace

RationalAngle sqrt2_minus_1(Index q_max) { return periodic_convergent(2, q_max); }
RationalAngle golden_mean(Index q_max) { return periodic_convergent(1, q_max); }

SpectralMeasure SpectralMeasure::uniform(std::size_t cells) {
    SpectralMeasure m;
    m.density.assign(cells, 1.0);
    m.validate();
    return m;
}

SpectralMeasure SpectralMeasure::from_atoms(std::vector<std::pair<double, double>> atoms) {
    SpectralMeasure m;
    m.atoms = std::move(atoms);
    m.validate();
    return m;
}

double SpectralMeasure::total_mass() const {
    double total = 0.0;
    for (const auto& [t, mass] : atoms) total += mass;
    if (!density.empty()) {
        double d = 0.0;
        for (double v : density) d += v;
        total += d / static_cast<double>(density.size());
    }
    return total;
}

void SpectralMeasure::validate() const {
    if (!density.empty() && !std::has_single_bit(density.size())) {
        throw ParameterError("spectral measure: density cell count must be a power of two");
    }
    for (double v : density) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("spectral measure: density must be finite and >= 0");
    }
    std::vector<double> pos;
    for (const auto& [t, mass] : atoms) {
        if (!(t >= 0.0 && t < 1.0)) throw ParameterError("spectral measure: atom position outside [0,1)");
        if (!(mass > 0.0) || !std::isfinite(mass)) throw ParameterError("spectral measure: atom mass must be finite and > 0");
        pos.push_back(t);
    }
    std::sort(pos.begin(), pos.end());
    if (std::adjacent_find(pos.begin(), pos.end()) != pos.end()) {
        throw ParameterError("spectral measure: repeated atom position");
    }
    const double mass = total_mass();
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ParameterError("spectral measure: total mass must be finite and > 0");
}

std::vector<double> SpectralMeasure::density_weights(std::size_t resolution) const {
    const std::size_t C = density.size();
    if (C == 0) return {};
    if (resolution < C || resolution % C != 0) {
        throw ParameterError("spectral measure: resolution must be a multiple of the cell count");
    }
    const std::size_t n = resolution / C;
    const double h = 1.0 / static_cast<double>(resolution);
    std::vector<double> q(resolution);
    for (std::size_t j = 0; j < resolution; ++j) {
        const std::size_t c = j / n;
        q[j] = j % n == 0 ? h * 0.5 * (density[c] + density[(c + C - 1) % C]) : h * density[c];
    }
    return q;
}

Observable Observable::fourier_mode(std::int64_t m) {
    Observable f;
    f.kind = Kind::fourier_mode;
    f.mode = m;
    return f;
}

Observable Observable::indicator(double a, double b) {
    if (!(0.0 <= a && a < b && b <= 1.0)) throw ParameterError("indicator: need 0 <= a < b <= 1");
    Observable f;
    f.kind = Kind::indicator;
    f.a = a;
    f.b = b;
    return f;
}

Observable Observable::finite_fourier(std::vector<std::pair<std::int64_t, cplx>> terms) {
    if (terms.empty()) throw ParameterError("finite_fourier: empty coefficient list");
    std::vector<std::int64_t> modes;
    for (const auto& t : terms) modes.push_back(t.first);
    std::sort(modes.begin(), modes.end());
    if (std::adjacent_find(modes.begin(), modes.end()) != modes.end()) {
        throw ParameterError("finite_fourier: repeated mode");
    }
    Observable f;
    f.kind = Kind::finite_fourier;
    f.terms = std::move(terms);
    return f;
}

namespace {

cplx mode_value(std::int64_t m, long double x) {
    return unit_phase(static_cast<double>(frac_turns(static_cast<long double>(m) * x)));
}

} // namespace

cplx Observable::operator()(long double x) const {
    switch (kind) {
    case Kind::fourier_mode: return mode_value(mode, x);
    case Kind::indicator: {
        const auto xd = static_cast<double>(x);
        return (a <= xd && xd < b) ? 1.0 : 0.0;
    }
    case Kind::finite_fourier: {
        cplx s = 0.0;
        for (const auto& [m, c] : terms) s += c * mode_value(m, x);
        return s;
    }
    }
    return 0.0;
}

double Observable::l2_norm() const {
    switch (kind) {
    case Kind::fourier_mode: return 1.0;
    case Kind::indicator: return std::sqrt(b - a);
    case Kind::finite_fourier: {
        double s = 0.0;
        for (const auto& t : terms) s += std::norm(t.second);
        return std::sqrt(s);
    }
    }
    return 0.0;
}

double Observable::sup_norm() const {
    if (kind != Kind::finite_fourier) return 1.0;
    double s = 0.0;
    for (const auto& t : terms) s += std::abs(t.second);
    return s;
}

OrbitPoint OrbitPoint::at(double x0) {
    if (!(x0 >= 0.0 && x0 < 1.0)) throw ParameterError("orbit point: x0 outside [0,1)");
    OrbitPoint p;
    p.x0 = x0;
    return p;
}

OrbitPoint OrbitPoint::rational(RationalAngle x0) {
    if (x0.q == 0 || x0.p >= x0.q) throw ParameterError("orbit point: need 0 <= p < q");
    OrbitPoint p;
    p.x0 = static_cast<double>(x0.value());
    p.exact = x0;
    return p;
}

OrbitPoint OrbitPoint::doubling(std::uint64_t seed, std::size_t L) {
    if (L < 64) throw PrecisionError("doubling point: bit length must be >= 64");
    OrbitPoint p;
    p.bit_length = L;
    p.words.resize((L + 63) / 64);
    for (std::size_t i = 0; i < p.words.size(); ++i) p.words[i] = rng::bits64(seed, rng::Stream::doubling_bits, i);
    if (const std::size_t tail = L % 64; tail != 0) p.words.back() &= ~std::uint64_t{0} << (64 - tail);
    p.x0 = p.window(0);
    return p;
}

bool OrbitPoint::bit(std::size_t i) const {
    if (i >= bit_length) throw PrecisionError("doubling point: bit index beyond the stored expansion");
    return (words[i / 64] >> (63 - i % 64)) & 1u;
}

double OrbitPoint::window(std::size_t i) const {
    const std::size_t w = i / 64, off = i % 64;
    std::uint64_t v = w < words.size() ? words[w] << off : 0;
    if (off != 0 && w + 1 < words.size()) v |= words[w + 1] >> (64 - off);
    return static_cast<double>(v >> 11) * 0x1.0p-53;
}

SystemModel SystemModel::rotation(double theta0) {
    if (!(theta0 > 0.0 && theta0 < 1.0)) throw ParameterError("rotation: theta0 must lie in (0,1)");
    SystemModel s;
    s.kind = Kind::rotation;
    s.theta0 = theta0;
    return s;
}

SystemModel SystemModel::rotation(RationalAngle theta0) {
    if (theta0.q == 0 || theta0.p == 0 || theta0.p >= theta0.q) throw ParameterError("rotation: need 0 < p < q");
    if (theta0.q > (Index{1} << 62)) throw ParameterError("rotation: q must be <= 2^62");
    SystemModel s;
    s.kind = Kind::rotation;
    s.theta0 = static_cast<double>(theta0.value());
    s.exact = theta0;
    return s;
}

SystemModel SystemModel::doubling() {
    SystemModel s;
    s.kind = Kind::doubling;
    return s;
}

SystemModel SystemModel::spectral(SpectralMeasure m) {
    m.validate();
    SystemModel s;
    s.kind = Kind::spectral;
    s.measure = std::move(m);
    return s;
}

std::string to_string(SystemModel::Kind kind) {
    switch (kind) {
    case SystemModel::Kind::rotation: return "rotation";
    case SystemModel::Kind::doubling: return "doubling";
    case SystemModel::Kind::spectral: return "spectral";
    }
    return "?";
}

std::vector<cplx> orbit_eval(const SystemModel& system, const Observable& f, const OrbitPoint& x0,
                             std::span<const Index> indices, unsigned precision) {
    const std::size_t n = indices.size();
    std::vector<cplx> out(n);
    if (n == 0) return out;
    if (system.kind == SystemModel::Kind::doubling) {
        const Index top = *std::max_element(indices.begin(), indices.end());
        if (x0.bit_length == 0 || top > x0.bit_length || x0.bit_length - top < precision) {
            throw PrecisionError("orbit_eval: doubling point needs at least max(u) + " + std::to_string(precision) +
                                 " bits, has " + std::to_string(x0.bit_length));
        }
    }
    const long double start = x0.exact ? x0.exact->value() : static_cast<long double>(x0.x0);
    const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t jj = 0; jj < nn; ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        const Index u = indices[j];
        switch (system.kind) {
        case SystemModel::Kind::rotation: {
            const long double step = system.exact ? system.exact->times(u)
                                                  : static_cast<long double>(detail::turns(system.theta0, u));
            out[j] = f(frac_turns(start + step));
            break;
        }
        case SystemModel::Kind::doubling: {
            if (f.kind == Observable::Kind::indicator && f.a == 0.0 && f.b == 0.5) {
                out[j] = x0.bit(static_cast<std::size_t>(u)) ? 0.0 : 1.0;
            } else {
                out[j] = f(x0.window(static_cast<std::size_t>(u)));
            }
            break;
        }
        case SystemModel::Kind::spectral:
            out[j] = unit_phase(detail::turns(x0.x0, u)) * f(start);
            break;
        }
    }
    return out;
}

std::vector<cplx> orbit_eval(const SystemModel& system, const Observable& f, const OrbitPoint& x0,
                             std::span<const double> indices, unsigned precision) {
    std::vector<Index> u(indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const double v = indices[j];
        if (!(v >= 0.0) || v != std::floor(v) || v >= 0x1.0p64) {
            throw TypeError("orbit_eval: index " + std::to_string(j) + " is not a nonnegative integer");
        }
        u[j] = static_cast<Index>(v);
    }
    return orbit_eval(system, f, x0, std::span<const Index>(u), precision);
}

std::size_t default_resolution(const SpectralMeasure& m, std::span<const Index> u) {
    Index span = 0;
    if (!u.empty()) {
        const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
        span = *hi - *lo;
    }
    const std::size_t cap = std::size_t{1} << 24;
    const std::size_t want = span >= cap / 4 ? cap : static_cast<std::size_t>(4 * (span + 1));
    return std::min(cap, std::bit_ceil(std::max(want, std::max<std::size_t>(m.density.size(), 2))));
}

double spectral_norm_sq(std::span<const cplx> w, std::span<const Index> u, double normalizer,
                        const SpectralMeasure& m, std::size_t resolution) {
    if (w.size() != u.size()) throw ShapeError("spectral_norm: weights and indices differ in length");
    if (!(normalizer > 0.0)) throw ParameterError("spectral_norm: normalizer must be > 0");
    m.validate();
    double total = 0.0;
    for (const auto& [t, mass] : m.atoms) total += mass * std::norm(eval_V(w, u, t));
    if (!m.density.empty()) {
        const std::size_t R = resolution == 0 ? default_resolution(m, u) : resolution;
        const auto values = eval_V_grid(w, u, make_grid(R));
        const auto q = m.density_weights(R);
        total += sum::tree_sum<double>(R, [&](std::size_t j) { return q[j] * std::norm(values[j]); });
    }
    return total / (normalizer * normalizer);
}

double spectral_norm_S(std::span<const cplx> w, std::span<const Index> u, double normalizer,
                       const SpectralMeasure& m, std::size_t resolution) {
    return std::sqrt(spectral_norm_sq(w, u, normalizer, m, resolution));
}

} // namespace wea
