#include "qdb/block_table.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <mutex>
#include <numeric>

namespace qdb {

BlockTable::BlockTable(unsigned n, std::vector<Key> values) : n_(n), values_(std::move(values)) {
    if (n_ == 0 || n_ > kMaxBits) {
        throw DomainError("BlockTable: n must be in [1, " + std::to_string(kMaxBits) + "]");
    }
    const std::size_t N = std::size_t{1} << n_;
    if (values_.size() != N) {
        throw DomainError("BlockTable: expected " + std::to_string(N) + " values, got " +
                          std::to_string(values_.size()));
    }
    for (Key v : values_) {
        if (v >= N) throw DomainError("BlockTable: value does not fit in n bits");
    }
}

BlockTable BlockTable::identity(unsigned n) {
    std::vector<Key> v(std::size_t{1} << n);
    std::iota(v.begin(), v.end(), Key{0});
    return BlockTable(n, std::move(v));
}

BlockTable BlockTable::random(unsigned n, std::uint64_t seed) {
    if (n == 0 || n > kMaxBits) throw DomainError("BlockTable: n out of range");
    Rng rng(seed);
    const std::size_t N = std::size_t{1} << n;
    std::vector<Key> v(N);
    for (auto& x : v) x = static_cast<Key>(rng.below(N));
    return BlockTable(n, std::move(v));
}

unsigned BlockTable::digit_count() const {
    if (!cascade_capable()) throw DomainError("BlockTable: odd n has no base-4 digit structure");
    return n_ / 2;
}

unsigned BlockTable::digit(Key key, unsigned i) const {
    const unsigned t = digit_count();
    if (i >= t) throw DomainError("BlockTable::digit: index out of range");
    return (key >> (2 * (t - 1 - i))) & 3u;
}

std::pair<Key, Key> BlockTable::prefix_range(Key key, unsigned depth) const {
    const unsigned t = digit_count();
    if (depth > t) throw DomainError("BlockTable::prefix_range: depth exceeds digit count");
    const unsigned free_bits = 2 * (t - depth);
    const Key lo = (key >> free_bits) << free_bits;
    return {lo, lo + (Key{1} << free_bits)};
}

std::string BlockTable::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint32_t x) {
        for (int b = 0; b < 4; ++b) {
            h ^= (x >> (8 * b)) & 0xffu;
            h *= 0x100000001b3ull;
        }
    };
    mix(n_);
    for (Key v : values_) mix(v);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Permutation Permutation::identity(std::size_t N) {
    Permutation p;
    p.order.resize(N);
    std::iota(p.order.begin(), p.order.end(), Key{0});
    return p;
}

bool Permutation::valid() const {
    std::vector<bool> seen(order.size(), false);
    for (Key k : order) {
        if (k >= order.size() || seen[k]) return false;
        seen[k] = true;
    }
    return true;
}

std::uint64_t lehmer_rank(std::span<const Key> order) {
    const std::size_t N = order.size();
    if (N > 20) throw SizeError("lehmer_rank: N > 20 overflows 64 bits");
    std::uint64_t rank = 0;
    std::uint32_t used = 0;
    for (std::size_t s = 0; s < N; ++s) {
        const Key k = order[s];
        // Digit = unused keys smaller than k.
        const std::uint64_t smaller = k - static_cast<std::uint64_t>(std::popcount(used & ((1u << k) - 1u)));
        rank = rank * (N - s) + smaller;
        used |= 1u << k;
    }
    return rank;
}

Permutation lehmer_unrank(std::uint64_t rank, std::size_t N) {
    if (N > 20) throw SizeError("lehmer_unrank: N > 20");
    std::vector<std::uint64_t> digits(N);
    for (std::size_t s = N; s-- > 0;) {
        const std::uint64_t radix = N - s;
        digits[s] = rank % radix;
        rank /= radix;
    }
    if (rank != 0) throw DomainError("lehmer_unrank: rank out of range");
    std::vector<Key> remaining(N);
    std::iota(remaining.begin(), remaining.end(), Key{0});
    Permutation p;
    p.order.reserve(N);
    for (std::size_t s = 0; s < N; ++s) {
        p.order.push_back(remaining[digits[s]]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(digits[s]));
    }
    return p;
}

std::span<const std::uint8_t> permutation_table(std::size_t N) {
    if (N == 0 || N > 8) throw SizeError("permutation_table: N must be in [1, 8]");
    static std::array<std::vector<std::uint8_t>, 9> tables;
    static std::array<std::once_flag, 9> once;
    std::call_once(once[N], [N] {
        std::vector<std::uint8_t> perm(N);
        std::iota(perm.begin(), perm.end(), std::uint8_t{0});
        auto& t = tables[N];
        do {
            t.insert(t.end(), perm.begin(), perm.end());
        } while (std::next_permutation(perm.begin(), perm.end()));
    });
    return tables[N];
}

}  // namespace qdb
