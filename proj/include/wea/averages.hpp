#pragma once

// Weighted ergodic sums S_N = sum_{k<N} w_k T^{u_k} f, their normalizations
// A(N), one-sided Hilbert-type series sum w_k / A(k) T^{u_k} f, block
// ladders and oscillation statistics.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wea/dynamics.hpp"
#include "wea/types.hpp"

namespace wea {

/// A(k) = k^gamma log^a k (log log k)^b, used from k = offset() on.
struct NormalizerSpec {
    double gamma = 1.0;
    double a = 0.0;
    double b = 0.0;
    Index k0 = 0;  // 0 selects the default offset

    /// 1 for a pure power, 3 when log k appears, 16 when log log k does.
    Index default_offset() const;
    /// Smallest offset where every factor is positive: 1, 2 or 3.
    Index minimum_offset() const;
    Index offset() const { return k0 == 0 ? default_offset() : k0; }

    double log_value(double k) const;
    double operator()(double k) const;
    /// log A(k+1) - log A(k), accurate for large k.
    double log_step(Index k) const;

    /// Throws ParameterError for gamma < 0 or k0 below minimum_offset().
    void validate() const;
    /// Throws DomainError unless A is nondecreasing on [offset(), hi].
    void check_monotone(Index hi) const;

    static NormalizerSpec power(double gamma);
    /// N^{alpha+delta} log^H N.
    static NormalizerSpec theorem1(double alpha, double delta, double H);
    /// N^{(alpha+1)/2} log^H N.
    static NormalizerSpec theorem2(double alpha, double H);
    /// N.
    static NormalizerSpec theorem3();
    /// log^alpha N (log log N)^H.
    static NormalizerSpec theorem4(double alpha, double H);
    /// log^H N.
    static NormalizerSpec theorem5(double H);
    /// log N.
    static NormalizerSpec theorem6();
};

std::string describe(const NormalizerSpec& n);

struct BlockLadder {
    enum class Kind { dyadic, doubly_exponential, rho, rho_rho };
    Kind kind = Kind::dyadic;
    double rho = 2.0;
    double epsilon = 0.5;
    unsigned j_min = 1;
    unsigned j_max = 64;

    static BlockLadder dyadic(unsigned j_min = 1, unsigned j_max = 64);
    static BlockLadder doubly_exponential(unsigned j_min = 0, unsigned j_max = 6);
    /// N_j = floor(rho^{j^{1-eps} log j}), j >= 2.
    static BlockLadder rho_ladder(double rho, double epsilon, unsigned j_min = 2, unsigned j_max = 4096);
    /// N_j = floor(rho^{rho^{j^{1-eps} log j}}), j >= 2.
    static BlockLadder rho_rho_ladder(double rho, double epsilon, unsigned j_min = 2, unsigned j_max = 4096);

    void validate() const;
    /// Strictly increasing N_j <= limit; j values whose floor repeats the
    /// previous point are skipped.
    std::vector<std::pair<unsigned, Index>> points(Index limit) const;
};

std::string to_string(BlockLadder::Kind kind);
BlockLadder::Kind ladder_kind_from_string(const std::string& name);

struct StorageOptions {
    Index full_limit = 1000000;   // every N up to here is stored
    double ratio = 1.01;          // geometric spacing beyond full_limit
    std::vector<Index> forced;    // always stored (ladder points)
};

/// Prefix sums S_N (N = number of terms) on a stored grid of N values.
struct SeriesRun {
    std::vector<Index> N;
    std::vector<cplx> S;
    Index first_label = 0;  // label k of the first term
    Index terms = 0;
    StorageOptions storage;
    std::string provenance;
    std::vector<std::uint64_t> seeds;

    bool stored(Index n) const;
    /// Throws RangeError when n is not on the grid.
    cplx at(Index n) const;
    Index N_max() const { return N.empty() ? 0 : N.back(); }
};

/// S_N = sum_{j<N} w_j x_j with a deterministic chunked reduction;
/// ShapeError on a length mismatch.
SeriesRun weighted_sums(std::span<const cplx> orbit, std::span<const cplx> w,
                        const StorageOptions& storage = {});

struct NormalizedSeries {
    std::vector<Index> N;
    std::vector<double> ratio;  // |S_N| / A(N)
    Index N_tail = 0;
    double tail_max = 0.0;      // max ratio over N >= N_tail
    double slope = 0.0;         // d log ratio / d log N (or d log log N)
    bool loglog_slope = false;  // slope against log log N (gamma = 0)
    std::size_t skipped = 0;    // stored N below the normalizer offset
};

/// N_tail = 0 picks N_max / 2.
NormalizedSeries normalized_series(const SeriesRun& run, const NormalizerSpec& norm, Index N_tail = 0);
/// Ratio at a stored N; RangeError if N is not stored, DomainError below the offset.
double normalized_at(const SeriesRun& run, const NormalizerSpec& norm, Index N);
/// max of |S_n| / A(n) over stored n in [lo, hi].
double window_max(const NormalizedSeries& s, Index lo, Index hi);

/// Partial sums P(N) = sum_{k=first_k}^{N} w_k / A(k) x_k, the arrays
/// starting at label first_k.
struct HilbertReport {
    std::vector<Index> N;
    std::vector<cplx> partial;
    std::vector<Index> N0;           // Cauchy-tail ladder
    std::vector<double> tail_diameter;  // sup_{M,N >= N0 stored} |P(N) - P(M)|
    cplx final_value = 0.0;
};

HilbertReport hilbert_partial(std::span<const cplx> w, std::span<const cplx> orbit,
                              const NormalizerSpec& norm, Index first_k,
                              const StorageOptions& storage = {}, std::vector<Index> tail_ladder = {});
/// P(N) alone.
cplx hilbert_sum(std::span<const cplx> w, std::span<const cplx> orbit, const NormalizerSpec& norm,
                 Index first_k, Index N);

/// The same partial sum through summation by parts:
/// sum_{k0}^{N-1} (1/A(k) - 1/A(k+1)) B_k + B_N / A(N), B_k the running sum.
cplx abel_decompose(std::span<const cplx> w, std::span<const cplx> orbit, const NormalizerSpec& norm,
                    Index first_k, Index N);

/// integral_{1/n}^{1/m} dx / (x log^L(1/x)) = (log^{1-L} m - log^{1-L} n) / (L - 1).
double g_integral(Index m, Index n, double L);

struct OscillationBlock {
    unsigned j = 0;
    Index N_lo = 0;     // N_j
    Index N_hi = 0;     // N_{j+1}
    double anchor = 0.0;  // |S_{N_j} / A(N_j)|
    double osc = 0.0;     // max over stored N in (N_j, N_{j+1}] of the deviation
    std::size_t stored = 0;
};

struct OscillationReport {
    std::vector<OscillationBlock> blocks;
    std::vector<double> sum_osc2;                           // running sum of osc_j^2
    std::vector<std::pair<double, std::vector<double>>> moments;  // (l, running sum of j^l osc_j^2)
    std::size_t grid_points = 0;
    bool full_grid = true;  // every N in the ladder range was stored
};

/// Throws RangeError when a ladder point is not stored.
OscillationReport oscillation_report(const SeriesRun& run, const NormalizerSpec& norm, const BlockLadder& ladder,
                                     std::vector<double> moment_orders = {});

/// Checks |S_N/A_N| <= anchor_j + osc_j on every stored N of every block;
/// returns the number of violations.
std::size_t decomposition_violations(const SeriesRun& run, const NormalizerSpec& norm,
                                     const OscillationReport& report);

struct MaximalNormRecord {
    double value = 0.0;       // lower bound for || sup_N |S_N / A_N| ||
    double f_norm = 0.0;      // mu(T)^{1/2}
    std::size_t grid_size = 0;
    std::size_t resolution = 0;
    bool lower_bound = true;
};

/// (integral max_{N in grid} |V_N(t) / A(N)|^2 dmu)^{1/2}; w and u hold the
/// terms with labels first_k, first_k + 1, ...
MaximalNormRecord maximal_norm(std::span<const cplx> w, std::span<const Index> u, const NormalizerSpec& norm,
                               const SpectralMeasure& m, std::vector<Index> N_grid, std::size_t resolution = 0);

/// Level-truncation diagnostic for bounded observables: x_k = f1_k + f2_k
/// with f1_k = x_k when |x_k| <= k^eps / log^delta k and 0 otherwise.
struct TruncationSplit {
    double epsilon = 0.0;
    double delta = 0.0;
    cplx S1 = 0.0;
    cplx S2 = 0.0;
    cplx S = 0.0;
    std::size_t truncated = 0;  // terms sent to f2
    Index last_truncated = 0;    // largest label with f2 nonzero (0 if none)
    double split_error = 0.0;    // |S1 + S2 - S|
};

/// epsilon < 0 selects 1 - 1 / (2 beta).
TruncationSplit truncation_split(std::span<const cplx> w, std::span<const cplx> orbit, Index first_k,
                                 double beta, double delta, double epsilon = -1.0);

} // namespace wea
