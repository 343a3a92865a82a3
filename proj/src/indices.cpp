#include "wea/indices.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "wea/error.hpp"
#include "wea/random.hpp"

namespace wea {

IndexSpec IndexSpec::identity() { return {}; }

IndexSpec IndexSpec::monomial(unsigned d) {
    IndexSpec s;
    s.kind = IndexKind::monomial;
    s.degree = d;
    return s;
}

IndexSpec IndexSpec::polynomial(std::vector<std::int64_t> coeffs) {
    IndexSpec s;
    s.kind = IndexKind::polynomial;
    s.coeffs = std::move(coeffs);
    return s;
}

IndexSpec IndexSpec::primes() {
    IndexSpec s;
    s.kind = IndexKind::primes;
    return s;
}

IndexSpec IndexSpec::cramer_primes(std::uint64_t seed) {
    IndexSpec s;
    s.kind = IndexKind::cramer_primes;
    s.seed = seed;
    return s;
}

IndexSpec IndexSpec::explicit_list(std::vector<Index> values) {
    IndexSpec s;
    s.kind = IndexKind::explicit_list;
    s.values = std::move(values);
    return s;
}

Index IndexSpec::kind_minimum() const {
    return (kind == IndexKind::primes || kind == IndexKind::cramer_primes) ? 1 : 0;
}

std::string to_string(IndexKind kind) {
    switch (kind) {
    case IndexKind::identity: return "identity";
    case IndexKind::monomial: return "monomial";
    case IndexKind::polynomial: return "polynomial";
    case IndexKind::primes: return "primes";
    case IndexKind::cramer_primes: return "cramer_primes";
    case IndexKind::explicit_list: return "explicit";
    }
    return "?";
}

IndexKind index_kind_from_string(const std::string& name) {
    for (auto k : {IndexKind::identity, IndexKind::monomial, IndexKind::polynomial,
                   IndexKind::primes, IndexKind::cramer_primes, IndexKind::explicit_list}) {
        if (to_string(k) == name) return k;
    }
    throw ValidationError("unknown index kind '" + name + "'");
}

namespace {

constexpr Index kIndexLimit = Index{1} << 63;

Index checked_power(Index k, unsigned d) {
    unsigned __int128 acc = 1;
    for (unsigned i = 0; i < d; ++i) {
        acc *= k;
        if (acc >= kIndexLimit) {
            throw RangeError("monomial index k^" + std::to_string(d) + " overflows at k = " +
                             std::to_string(k));
        }
    }
    return static_cast<Index>(acc);
}

__int128 polynomial_value(const std::vector<std::int64_t>& coeffs, Index k) {
    __int128 acc = 0;
    const __int128 bound = static_cast<__int128>(kIndexLimit);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * static_cast<__int128>(k) + *it;
        if (acc >= bound || acc <= -bound) {
            throw RangeError("polynomial index overflows at k = " + std::to_string(k));
        }
    }
    return acc;
}

// ---- Cramér realization cache -------------------------------------------

constexpr Index kSegmentBits = 16;
constexpr Index kSegmentSize = Index{1} << kSegmentBits;

struct CramerSegment {
    std::vector<std::uint64_t> words;
    std::uint32_t count = 0;
};

class CramerCache {
public:
    std::shared_ptr<const CramerSegment> get(std::uint64_t seed, Index segment) {
        const auto key = std::make_pair(seed, segment);
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        }
        // Filled outside the lock; a concurrent fill of the same segment
        // produces identical contents, and the first insertion wins.
        auto seg = std::make_shared<CramerSegment>();
        seg->words.assign(kSegmentSize / 64, 0);
        const Index base = segment * kSegmentSize;
        for (Index off = 0; off < kSegmentSize; ++off) {
            const Index i = base + off;
            if (i >= 3 && rng::cramer_bit(seed, i)) {
                seg->words[off / 64] |= std::uint64_t{1} << (off % 64);
                ++seg->count;
            }
        }
        std::lock_guard lock(mutex_);
        return cache_.try_emplace(key, std::move(seg)).first->second;
    }

    void clear() {
        std::lock_guard lock(mutex_);
        cache_.clear();
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::uint64_t, Index>, std::shared_ptr<const CramerSegment>> cache_;
};

CramerCache& cramer_cache() {
    static CramerCache cache;
    return cache;
}

} // namespace

void clear_cramer_cache() { cramer_cache().clear(); }

std::vector<Index> cramer_members(std::uint64_t seed, Index m, Index n) {
    if (m < 1 || m >= n) throw ShapeError("cramer_members: need 1 <= m < n");
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(n - m));
    Index rank = 0;  // members seen so far
    for (Index segment = 0; out.size() < n - m; ++segment) {
        auto seg = cramer_cache().get(seed, segment);
        if (rank + seg->count < m) {
            rank += seg->count;
            continue;
        }
        for (std::size_t w = 0; w < seg->words.size() && out.size() < n - m; ++w) {
            std::uint64_t bits = seg->words[w];
            while (bits != 0 && out.size() < n - m) {
                const int b = std::countr_zero(bits);
                bits &= bits - 1;
                ++rank;
                if (rank >= m) out.push_back(segment * kSegmentSize + w * 64 + b);
            }
        }
    }
    return out;
}

std::uint64_t cramer_count(std::uint64_t seed, Index N) {
    std::uint64_t total = 0;
    const Index last_segment = N / kSegmentSize;
    for (Index segment = 0; segment < last_segment; ++segment) {
        total += cramer_cache().get(seed, segment)->count;
    }
    auto seg = cramer_cache().get(seed, last_segment);
    const Index upto = N % kSegmentSize;  // inclusive offset
    for (Index off = 0; off <= upto; ++off) {
        if ((seg->words[off / 64] >> (off % 64)) & 1u) ++total;
    }
    return total;
}

// ---- primes ---------------------------------------------------------------

std::vector<Index> primes_up_to(Index limit) {
    std::vector<Index> out;
    if (limit < 2) return out;
    const Index root = static_cast<Index>(std::sqrt(static_cast<double>(limit))) + 1;

    std::vector<bool> small(root + 1, true);
    std::vector<Index> base;
    for (Index i = 2; i <= root; ++i) {
        if (!small[i]) continue;
        base.push_back(i);
        for (Index j = i * i; j <= root; j += i) small[j] = false;
    }

    constexpr Index kSegment = Index{1} << 18;
    std::vector<bool> seg(kSegment);
    for (Index lo = 2; lo <= limit; lo += kSegment) {
        const Index hi = std::min(limit, lo + kSegment - 1);
        std::fill(seg.begin(), seg.end(), true);
        for (Index p : base) {
            if (p * p > hi) break;
            Index start = std::max(p * p, (lo + p - 1) / p * p);
            for (Index j = start; j <= hi; j += p) seg[j - lo] = false;
        }
        for (Index i = lo; i <= hi; ++i) {
            if (seg[i - lo]) out.push_back(i);
        }
    }
    return out;
}

std::vector<Index> nth_primes(Index m, Index n) {
    if (m < 1 || m >= n) throw ShapeError("nth_primes: need 1 <= m < n");
    const double nn = static_cast<double>(n);
    Index bound = n < 6 ? 15 : static_cast<Index>(nn * (std::log(nn) + std::log(std::log(nn)))) + 1;
    for (;;) {
        auto ps = primes_up_to(bound);
        if (ps.size() >= n - 1) {
            return {ps.begin() + static_cast<std::ptrdiff_t>(m - 1),
                    ps.begin() + static_cast<std::ptrdiff_t>(n - 1)};
        }
        bound *= 2;
    }
}

std::vector<Index> gen_indices(const IndexSpec& spec, Index m, Index n) {
    if (m >= n) throw ShapeError("gen_indices: empty range");
    if (m < spec.first_index()) {
        throw DomainError("gen_indices: " + to_string(spec.kind) + " indices start at k = " +
                          std::to_string(spec.first_index()));
    }
    const std::size_t len = static_cast<std::size_t>(n - m);
    std::vector<Index> out(len);
    switch (spec.kind) {
    case IndexKind::identity:
        for (std::size_t j = 0; j < len; ++j) out[j] = m + j;
        break;
    case IndexKind::monomial:
        if (spec.degree < 1) throw ParameterError("gen_indices: monomial degree must be >= 1");
        for (std::size_t j = 0; j < len; ++j) out[j] = checked_power(m + j, spec.degree);
        break;
    case IndexKind::polynomial: {
        if (spec.coeffs.empty()) throw ParameterError("gen_indices: polynomial without coefficients");
        __int128 prev = -1;
        for (std::size_t j = 0; j < len; ++j) {
            const __int128 v = polynomial_value(spec.coeffs, m + j);
            if (v < 0) {
                throw ValidationError("gen_indices: polynomial negative at k = " +
                                      std::to_string(m + j));
            }
            if (v < prev) {
                throw ValidationError("gen_indices: polynomial decreasing at k = " +
                                      std::to_string(m + j));
            }
            prev = v;
            out[j] = static_cast<Index>(v);
        }
        break;
    }
    case IndexKind::primes:
        out = nth_primes(m, n);
        break;
    case IndexKind::cramer_primes:
        out = cramer_members(spec.seed, m, n);
        break;
    case IndexKind::explicit_list:
        if (spec.values.size() < n) {
            throw RangeError("gen_indices: explicit list has " + std::to_string(spec.values.size()) +
                             " entries, range needs " + std::to_string(n));
        }
        for (std::size_t i = 1; i < spec.values.size(); ++i) {
            if (spec.values[i] < spec.values[i - 1]) {
                throw ValidationError("gen_indices: explicit list decreases at position " +
                                      std::to_string(i));
            }
        }
        std::copy(spec.values.begin() + static_cast<std::ptrdiff_t>(m),
                  spec.values.begin() + static_cast<std::ptrdiff_t>(n), out.begin());
        break;
    }
    return out;
}

std::uint64_t pi_count(const IndexSpec& set, Index N) {
    if (N < 2) throw ParameterError("pi_count: N must be >= 2");
    switch (set.kind) {
    case IndexKind::primes: return primes_up_to(N).size();
    case IndexKind::cramer_primes: return cramer_count(set.seed, N);
    default: throw UnsupportedError("pi_count: only primes and cramer_primes define a counting set");
    }
}

} // namespace wea
