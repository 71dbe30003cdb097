#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qdb/core.hpp"

namespace qdb {

/// The function f as an explicit table of N = 2^n blocks (k, f(k)).
///
/// A table is cascade capable when n is even; position-0 prefix sets are then
/// indexed by base-4 digits of the key, most significant digit first.
class BlockTable {
   public:
    static constexpr unsigned kMaxBits = 16;

    BlockTable(unsigned n, std::vector<Key> values);

    static BlockTable identity(unsigned n);
    static BlockTable random(unsigned n, std::uint64_t seed);

    unsigned bits() const { return n_; }
    std::size_t size() const { return values_.size(); }
    Key value(Key k) const { return values_.at(k); }
    const std::vector<Key>& values() const { return values_; }
    bool cascade_capable() const { return n_ % 2 == 0; }

    /// Number of base-4 digits of a key (n/2); requires cascade_capable().
    unsigned digit_count() const;
    /// i-th base-4 digit of key, most significant first.
    unsigned digit(Key key, unsigned i) const;
    /// Keys whose first `depth` digits equal those of `key`: [lo, hi).
    std::pair<Key, Key> prefix_range(Key key, unsigned depth) const;

    /// FNV-1a over (n, values), hex encoded.
    std::string hash() const;

    friend bool operator==(const BlockTable&, const BlockTable&) = default;

   private:
    unsigned n_;
    std::vector<Key> values_;
};

/// order[s] = key of the block at position s.
struct Permutation {
    std::vector<Key> order;

    static Permutation identity(std::size_t N);
    std::size_t size() const { return order.size(); }
    bool valid() const;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;
};

/// Lexicographic (Lehmer) rank of a permutation of [0, N), N <= 20.
std::uint64_t lehmer_rank(std::span<const Key> order);
Permutation lehmer_unrank(std::uint64_t rank, std::size_t N);

/// All permutations of [0, N) in Lehmer order, flattened row-major
/// (row r holds the permutation of rank r). Cached per N, N <= 8.
std::span<const std::uint8_t> permutation_table(std::size_t N);

}  // namespace qdb
