#include "qdb/dense_state.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qdb/kernels.hpp"

namespace qdb {

namespace {

constexpr double kNormTol = 1e-9;

void check_cap(const BlockTable& table) {
    if (table.size() > DenseState::kMaxBlocks) {
        throw SizeError("dense engine: N = " + std::to_string(table.size()) + " exceeds the cap of " +
                        std::to_string(DenseState::kMaxBlocks));
    }
}

std::size_t basis_size(std::size_t N) { return static_cast<std::size_t>(factorial(N)); }

void check_same_table(const DenseState& x, const PermSet& set) {
    if (set.degree() != x.degree()) throw DomainError("dense engine: set degree does not match the state");
}

std::vector<Position> normalize_positions(std::span<const Position> positions, std::size_t N) {
    if (positions.empty()) throw DomainError("measurement: empty position set");
    std::vector<Position> out(positions.begin(), positions.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.back() >= N) throw DomainError("measurement: position out of range");
    return out;
}

}  // namespace

std::vector<std::uint8_t> membership_mask(std::size_t N, const PermSet& set) {
    if (N > DenseState::kMaxBlocks) throw SizeError("membership_mask: N exceeds dense cap");
    std::vector<std::uint8_t> mask(basis_size(N));
    kernels::parallel::membership(permutation_table(N), N, set.predicate(), mask);
    return mask;
}

DenseState DenseState::from_amplitudes(const BlockTable& table, std::vector<Complex> amps) {
    check_cap(table);
    if (amps.size() != basis_size(table.size())) throw DomainError("DenseState: wrong amplitude count");
    const std::vector<std::uint8_t> all(amps.size(), 1);
    const double n2 = kernels::parallel::masked_norm2(amps, all);
    if (std::abs(n2 - 1.0) > kNormTol) throw DomainError("DenseState: amplitudes are not normalized");
    return DenseState(table, std::move(amps));
}

DenseState DenseState::basis(const BlockTable& table, const Permutation& p) {
    check_cap(table);
    if (p.size() != table.size() || !p.valid()) throw DomainError("DenseState::basis: invalid permutation");
    std::vector<Complex> amps(basis_size(table.size()));
    amps[lehmer_rank(p.order)] = 1.0;
    return DenseState(table, std::move(amps));
}

DenseState DenseState::uniform_over(const BlockTable& table, const PermSet& set) {
    check_cap(table);
    if (set.degree() != table.size()) throw DomainError("DenseState::uniform_over: degree mismatch");
    const auto mask = membership_mask(table.size(), set);
    const auto count = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
    if (count == 0) throw DomainError("DenseState::uniform_over: empty set");
    const double a = 1.0 / std::sqrt(static_cast<double>(count));
    std::vector<Complex> amps(mask.size());
    for (std::size_t r = 0; r < mask.size(); ++r) amps[r] = mask[r] ? a : 0.0;
    return DenseState(table, std::move(amps));
}

Complex DenseState::amplitude(const Permutation& p) const {
    if (p.size() != degree() || !p.valid()) throw DomainError("DenseState::amplitude: invalid permutation");
    return amps_[lehmer_rank(p.order)];
}

double DenseState::norm2() const {
    const std::vector<std::uint8_t> all(amps_.size(), 1);
    return kernels::parallel::masked_norm2(amps_, all);
}

DenseState uniform_state(const BlockTable& table) {
    check_cap(table);
    return DenseState::uniform_over(table, PermSet::all(table.size()));
}

Complex inner(const DenseState& x, const DenseState& y) {
    if (!(x.table() == y.table())) throw DomainError("inner: states belong to different tables");
    return kernels::parallel::inner(x.amplitudes(), y.amplitudes());
}

Complex overlap_uniform(const DenseState& x, const PermSet& set) {
    check_same_table(x, set);
    const auto mask = membership_mask(x.degree(), set);
    const auto count = std::count(mask.begin(), mask.end(), 1);
    if (count == 0) return 0.0;
    return kernels::parallel::masked_sum(x.amplitudes(), mask) / std::sqrt(static_cast<double>(count));
}

double probability_in(const DenseState& x, const PermSet& set) {
    check_same_table(x, set);
    return kernels::parallel::masked_norm2(x.amplitudes(), membership_mask(x.degree(), set));
}

DenseState phase_flip(const DenseState& x, const PermSet& T) {
    check_same_table(x, T);
    DenseState out = x;
    kernels::parallel::phase_flip(out.amps_, membership_mask(x.degree(), T));
    return out;
}

DenseState rdt(const DenseState& x, const PermSet& C) {
    check_same_table(x, C);
    const auto mask = membership_mask(x.degree(), C);
    const auto count = std::count(mask.begin(), mask.end(), 1);
    if (count == 0) throw DomainError("rdt: empty set C");
    const Complex sum = kernels::parallel::masked_sum(x.amps_, mask);
    DenseState out = x;
    kernels::parallel::reflect(out.amps_, mask, 2.0 * sum / static_cast<double>(count));
    kernels::parallel::prune(out.amps_, kPruneTol);
    return out;
}

DenseState rdt_step(const DenseState& x, const PermSet& C, const PermSet& T) {
    check_same_table(x, C);
    check_same_table(x, T);
    const auto cmask = membership_mask(x.degree(), C);
    const auto tmask = membership_mask(x.degree(), T);
    std::size_t c_count = 0;
    std::size_t t_count = 0;
    for (std::size_t r = 0; r < cmask.size(); ++r) {
        if (tmask[r] && !cmask[r]) throw DomainError("rdt_step: T is not a subset of C");
        c_count += cmask[r];
        t_count += tmask[r];
    }
    if (c_count == 0 || 4 * t_count != c_count) throw DomainError("rdt_step: requires |T| = |C|/4");
    return rdt(phase_flip(x, T), C);
}

DenseState restrict_renormalize(const DenseState& x, std::span<const std::uint8_t> keep, double probability) {
    DenseState out = x;
    const double scale = 1.0 / std::sqrt(probability);
    for (std::size_t r = 0; r < out.amps_.size(); ++r) out.amps_[r] = keep[r] ? out.amps_[r] * scale : 0.0;
    return out;
}

std::vector<Branch<DenseState>> branches(const DenseState& x, std::span<const Position> positions) {
    const std::size_t N = x.degree();
    const auto pos = normalize_positions(positions, N);
    const auto perms = permutation_table(N);
    std::vector<std::uint32_t> codes(x.amplitudes().size());
    kernels::parallel::assignment_codes(perms, N, pos, codes);

    std::map<std::uint32_t, double> prob;
    for (std::size_t r = 0; r < codes.size(); ++r) {
        const double p = std::norm(x.amplitudes()[r]);
        if (p > 0.0) prob[codes[r]] += p;
    }
    std::vector<Branch<DenseState>> out;
    std::vector<std::uint8_t> keep(codes.size());
    for (const auto& [code, p] : prob) {
        if (p <= kPruneTol) continue;
        Assignment a;
        std::uint32_t c = code;
        for (Position s : pos) {
            a[s] = c % N;
            c /= static_cast<std::uint32_t>(N);
        }
        for (std::size_t r = 0; r < codes.size(); ++r) keep[r] = codes[r] == code;
        out.push_back({std::move(a), p, restrict_renormalize(x, keep, p)});
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.assignment < r.assignment; });
    return out;
}

Branch<DenseState> measure_positions(const DenseState& x, std::span<const Position> positions, Rng& rng) {
    return pick_branch(branches(x, positions), rng.uniform());
}

Branch<DenseState> measure_positions(const DenseState& x, std::span<const Position> positions,
                                     std::uint64_t seed) {
    Rng rng(seed);
    return measure_positions(x, positions, rng);
}

}  // namespace qdb
