#pragma once

#include <vector>

#include "qdb/block_table.hpp"

namespace qdb {

// Classical model of the C_j-mixing transform: uniformly distributed rank
// registers are routed into an ordering of the blocks by selection without
// replacement. The first rank picks the position-0 block among the T
// candidates matching the query prefix; rank s >= 1 picks among the N - s
// blocks still unplaced, in base order.

/// Sorted keys whose first j base-4 digits equal those of the query.
struct CandidateList {
    std::vector<Key> keys;
};

struct RankTuple {
    // ranks[0] < first_bound; ranks[s] < N - s for s >= 1.
    std::vector<std::uint64_t> ranks;
    std::uint64_t first_bound;

    std::size_t degree() const { return ranks.size(); }
    std::uint64_t bound(std::size_t s) const;
    friend bool operator==(const RankTuple&, const RankTuple&) = default;
};

CandidateList candidates(const BlockTable& table, Key query, unsigned depth);

/// T * (N-1)!
BigNat tuple_space_size(std::size_t N, std::size_t T);

/// Mixed-radix decoding of index into a tuple of shape (N, T).
RankTuple tuple_at(std::uint64_t index, std::size_t N, std::size_t T);
std::uint64_t tuple_index(const RankTuple& r);

Permutation unrank(const RankTuple& ranks, const CandidateList& cands, const Permutation& base);
RankTuple rank(const Permutation& p, const CandidateList& cands, const Permutation& base);

/// All-zero ranks: the tuple produced for P_0 under the reference routing.
RankTuple reference_ranks(std::size_t N, std::size_t T);

/// Componentwise (r_s - ref_s) mod bound_s.
RankTuple step3_residue(const RankTuple& ranks, const RankTuple& reference);
/// Inverse of step3_residue for the same reference.
RankTuple step3_restore(const RankTuple& residue, const RankTuple& reference);

/// Number of rank tuples landing on each presentation (Lehmer order), for
/// the candidates of (query, depth) and base order 0..N-1. N <= 8.
std::vector<std::uint64_t> mix_counts(const BlockTable& table, Key query, unsigned depth);

/// Pushforward of uniform ranks: mix_counts / (T (N-1)!).
std::vector<double> mix_distribution(const BlockTable& table, Key query, unsigned depth);

}  // namespace qdb
