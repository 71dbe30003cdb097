#pragma once

#include <span>
#include <vector>

#include "qdb/block_table.hpp"
#include "qdb/perm_set.hpp"

namespace qdb {

/// Complex amplitude per presentation (ordering of the N blocks), stored as
/// a dense array indexed by Lehmer rank. This is the brute-force reference
/// engine; N is capped at 8.
class DenseState {
   public:
    static constexpr std::size_t kMaxBlocks = 8;

    /// Validates the table size and that the amplitudes have unit norm.
    static DenseState from_amplitudes(const BlockTable& table, std::vector<Complex> amps);
    static DenseState basis(const BlockTable& table, const Permutation& p);
    /// Uniform superposition over a nonempty set, chi_C.
    static DenseState uniform_over(const BlockTable& table, const PermSet& set);

    const BlockTable& table() const { return table_; }
    std::size_t degree() const { return table_.size(); }
    std::span<const Complex> amplitudes() const { return amps_; }
    Complex amplitude(const Permutation& p) const;
    double norm2() const;

   private:
    DenseState(BlockTable table, std::vector<Complex> amps) : table_(std::move(table)), amps_(std::move(amps)) {}

    friend DenseState phase_flip(const DenseState&, const PermSet&);
    friend DenseState rdt(const DenseState&, const PermSet&);
    friend DenseState restrict_renormalize(const DenseState&, std::span<const std::uint8_t>, double);

    BlockTable table_;
    std::vector<Complex> amps_;
};

template <class State>
struct Branch {
    Assignment assignment;
    double probability;
    State state;
};

/// chi_0: amplitude 1/sqrt(N!) on every presentation.
DenseState uniform_state(const BlockTable& table);

/// <x|y> = sum x(pi) conj(y(pi)).
Complex inner(const DenseState& x, const DenseState& y);

/// <x|chi_C>.
Complex overlap_uniform(const DenseState& x, const PermSet& set);

/// Squared norm of the projection of x onto the span of the set.
double probability_in(const DenseState& x, const PermSet& set);

/// Negates amplitudes inside T.
DenseState phase_flip(const DenseState& x, const PermSet& T);

/// Reflection 2|chi_C><chi_C| - I: inside C an amplitude mu becomes
/// 2A/|C| - mu with A the sum over C; outside C it becomes -mu.
DenseState rdt(const DenseState& x, const PermSet& C);

/// rdt(phase_flip(x, T), C); requires T subset of C and |T| = |C|/4, which
/// is what makes chi_C -> chi_T exact.
DenseState rdt_step(const DenseState& x, const PermSet& C, const PermSet& T);

/// All outcomes of observing the blocks at `positions`, with probability
/// above 1e-15, sorted by assignment.
std::vector<Branch<DenseState>> branches(const DenseState& x, std::span<const Position> positions);

/// One sampled observation; deterministic in the seed.
Branch<DenseState> measure_positions(const DenseState& x, std::span<const Position> positions,
                                     std::uint64_t seed);
Branch<DenseState> measure_positions(const DenseState& x, std::span<const Position> positions, Rng& rng);

/// Picks the branch whose cumulative probability interval contains u in [0, 1).
template <class State>
Branch<State> pick_branch(std::vector<Branch<State>> outcomes, double u) {
    if (outcomes.empty()) throw NumericError("measurement: no outcome with nonzero probability");
    double total = 0.0;
    for (const auto& b : outcomes) total += b.probability;
    double acc = 0.0;
    for (auto& b : outcomes) {
        acc += b.probability / total;
        if (u < acc) return std::move(b);
    }
    return std::move(outcomes.back());
}

/// Membership mask over the Lehmer-ordered basis.
std::vector<std::uint8_t> membership_mask(std::size_t N, const PermSet& set);

}  // namespace qdb
