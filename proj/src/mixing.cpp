#include "qdb/mixing.hpp"

#include <algorithm>

namespace qdb {

namespace {

void check_shape(const RankTuple& r) {
    if (r.ranks.empty() || r.first_bound == 0) throw DomainError("RankTuple: empty shape");
    for (std::size_t s = 0; s < r.ranks.size(); ++s) {
        if (r.ranks[s] >= r.bound(s)) {
            throw DomainError("RankTuple: rank " + std::to_string(s) + " out of bounds");
        }
    }
}

}  // namespace

std::uint64_t RankTuple::bound(std::size_t s) const { return s == 0 ? first_bound : ranks.size() - s; }

CandidateList candidates(const BlockTable& table, Key query, unsigned depth) {
    if (query >= table.size()) throw DomainError("candidates: query out of range");
    const auto [lo, hi] = table.prefix_range(query, depth);
    CandidateList c;
    for (Key k = lo; k < hi; ++k) c.keys.push_back(k);
    return c;
}

BigNat tuple_space_size(std::size_t N, std::size_t T) { return BigNat(T) * factorial(N - 1); }

RankTuple tuple_at(std::uint64_t index, std::size_t N, std::size_t T) {
    RankTuple r{std::vector<std::uint64_t>(N), T};
    for (std::size_t s = N; s-- > 0;) {
        const std::uint64_t radix = r.bound(s);
        r.ranks[s] = index % radix;
        index /= radix;
    }
    if (index != 0) throw DomainError("tuple_at: index out of range");
    return r;
}

std::uint64_t tuple_index(const RankTuple& r) {
    check_shape(r);
    std::uint64_t index = 0;
    for (std::size_t s = 0; s < r.ranks.size(); ++s) index = index * r.bound(s) + r.ranks[s];
    return index;
}

Permutation unrank(const RankTuple& ranks, const CandidateList& cands, const Permutation& base) {
    const std::size_t N = base.size();
    if (ranks.degree() != N) throw DomainError("unrank: tuple length differs from N");
    if (ranks.first_bound != cands.keys.size()) throw DomainError("unrank: first bound differs from candidate count");
    check_shape(ranks);
    std::vector<Key> remaining = base.order;
    Permutation out;
    out.order.reserve(N);
    const Key first = cands.keys[ranks.ranks[0]];
    auto it = std::find(remaining.begin(), remaining.end(), first);
    if (it == remaining.end()) throw DomainError("unrank: candidate missing from the base order");
    remaining.erase(it);
    out.order.push_back(first);
    // k_s = h^{s-1}[r_s]: the r_s-th block still unplaced, in base order.
    for (std::size_t s = 1; s < N; ++s) {
        const auto pick = static_cast<std::ptrdiff_t>(ranks.ranks[s]);
        out.order.push_back(remaining[static_cast<std::size_t>(pick)]);
        remaining.erase(remaining.begin() + pick);
    }
    return out;
}

RankTuple rank(const Permutation& p, const CandidateList& cands, const Permutation& base) {
    const std::size_t N = base.size();
    if (p.size() != N || !p.valid()) throw DomainError("rank: invalid permutation");
    const auto c = std::find(cands.keys.begin(), cands.keys.end(), p.order[0]);
    if (c == cands.keys.end()) throw DomainError("rank: first block is not a candidate");
    RankTuple r{std::vector<std::uint64_t>(N), cands.keys.size()};
    r.ranks[0] = static_cast<std::uint64_t>(c - cands.keys.begin());
    std::vector<Key> remaining = base.order;
    remaining.erase(std::find(remaining.begin(), remaining.end(), p.order[0]));
    for (std::size_t s = 1; s < N; ++s) {
        const auto it = std::find(remaining.begin(), remaining.end(), p.order[s]);
        r.ranks[s] = static_cast<std::uint64_t>(it - remaining.begin());
        remaining.erase(it);
    }
    return r;
}

RankTuple reference_ranks(std::size_t N, std::size_t T) { return RankTuple{std::vector<std::uint64_t>(N, 0), T}; }

RankTuple step3_residue(const RankTuple& ranks, const RankTuple& reference) {
    if (ranks.degree() != reference.degree() || ranks.first_bound != reference.first_bound) {
        throw DomainError("step3_residue: shape mismatch");
    }
    check_shape(ranks);
    check_shape(reference);
    RankTuple out = ranks;
    for (std::size_t s = 0; s < out.ranks.size(); ++s) {
        const std::uint64_t b = out.bound(s);
        out.ranks[s] = (ranks.ranks[s] + b - reference.ranks[s]) % b;
    }
    return out;
}

RankTuple step3_restore(const RankTuple& residue, const RankTuple& reference) {
    if (residue.degree() != reference.degree() || residue.first_bound != reference.first_bound) {
        throw DomainError("step3_restore: shape mismatch");
    }
    check_shape(residue);
    check_shape(reference);
    RankTuple out = residue;
    for (std::size_t s = 0; s < out.ranks.size(); ++s) {
        out.ranks[s] = (residue.ranks[s] + reference.ranks[s]) % out.bound(s);
    }
    return out;
}

std::vector<std::uint64_t> mix_counts(const BlockTable& table, Key query, unsigned depth) {
    const std::size_t N = table.size();
    if (N > 8) throw SizeError("mix_counts: explicit expansion needs N <= 8");
    const CandidateList cands = candidates(table, query, depth);
    const Permutation base = Permutation::identity(N);
    const auto tuples = static_cast<std::int64_t>(tuple_space_size(N, cands.keys.size()));
    std::vector<std::uint64_t> image(static_cast<std::size_t>(tuples));
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < tuples; ++i) {
        const auto p = unrank(tuple_at(static_cast<std::uint64_t>(i), N, cands.keys.size()), cands, base);
        image[static_cast<std::size_t>(i)] = lehmer_rank(p.order);
    }
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(factorial(N)));
    for (auto r : image) ++counts[r];
    return counts;
}

std::vector<double> mix_distribution(const BlockTable& table, Key query, unsigned depth) {
    const auto counts = mix_counts(table, query, depth);
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    std::vector<double> dist(counts.size());
    for (std::size_t r = 0; r < counts.size(); ++r) dist[r] = static_cast<double>(counts[r]) / static_cast<double>(total);
    return dist;
}

}  // namespace qdb
