#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wea/types.hpp"

namespace wea {

enum class IndexKind { identity, monomial, polynomial, primes, cramer_primes, explicit_list };

/// Declarative description of an index sequence (u_k).
struct IndexSpec {
    IndexKind kind = IndexKind::identity;
    unsigned degree = 1;                // monomial: u_k = k^degree
    std::vector<std::int64_t> coeffs;   // polynomial: u_k = sum coeffs[j] k^j
    std::uint64_t seed = 0;             // cramer_primes
    std::vector<Index> values;          // explicit_list: u_k = values[k]
    Index offset = 0;

    static IndexSpec identity();
    static IndexSpec monomial(unsigned d);
    static IndexSpec polynomial(std::vector<std::int64_t> coeffs);
    static IndexSpec primes();
    static IndexSpec cramer_primes(std::uint64_t seed);
    static IndexSpec explicit_list(std::vector<Index> values);

    /// primes and cramer_primes are 1-based: u_1 is the first element.
    Index kind_minimum() const;
    Index first_index() const { return offset > kind_minimum() ? offset : kind_minimum(); }
    bool stochastic() const { return kind == IndexKind::cramer_primes; }
};

std::string to_string(IndexKind kind);
IndexKind index_kind_from_string(const std::string& name);

/// Element j holds u_{m+j}.
std::vector<Index> gen_indices(const IndexSpec& spec, Index m, Index n);

/// Number of selected integers in [2, N] for `primes`, in [3, N] for the
/// clamped Cramér model.
std::uint64_t pi_count(const IndexSpec& set, Index N);

/// All primes <= limit, by a segmented sieve of Eratosthenes.
std::vector<Index> primes_up_to(Index limit);

/// p_m, ..., p_{n-1} with p_1 = 2.
std::vector<Index> nth_primes(Index m, Index n);

/// Members u_m..u_{n-1} of {i >= 3 : X_i = 1} under the seeded Cramér model.
std::vector<Index> cramer_members(std::uint64_t seed, Index m, Index n);

/// #{3 <= i <= N : X_i = 1}.
std::uint64_t cramer_count(std::uint64_t seed, Index N);

/// Drops every cached Cramér segment.
void clear_cramer_cache();

} // namespace wea
