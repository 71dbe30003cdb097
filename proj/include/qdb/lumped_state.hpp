#pragma once

#include <span>
#include <vector>

#include "qdb/dense_state.hpp"
#include "qdb/descriptor.hpp"

namespace qdb {

/// A class of permutations sharing one amplitude. `mass` is the amplitude
/// times sqrt(size), so the squared masses of a state sum to 1 and stay O(1)
/// even when the amplitudes themselves would underflow.
struct LumpedClass {
    ClassDescriptor descriptor;
    BigNat size;
    Complex mass;
};

/// State vector over presentations stored as disjoint uniform classes.
/// Permutations outside every class have amplitude zero.
class LumpedState {
   public:
    static LumpedState uniform(const BlockTable& table);
    static LumpedState uniform_over(const BlockTable& table, const ClassDescriptor& d);
    /// Validates disjointness, nonempty classes and unit norm.
    static LumpedState from_classes(const BlockTable& table, std::vector<LumpedClass> classes);

    const BlockTable& table() const { return table_; }
    const std::vector<LumpedClass>& classes() const { return classes_; }
    double norm2() const;

   private:
    LumpedState(BlockTable table, std::vector<LumpedClass> classes)
        : table_(std::move(table)), classes_(std::move(classes)) {}

    friend LumpedState make_lumped_unchecked(const BlockTable&, std::vector<LumpedClass>);

    BlockTable table_;
    std::vector<LumpedClass> classes_;
};

inline constexpr std::size_t kDefaultBranchCap = 1'000'000;

/// Splits classes so each lies entirely inside or outside d. The state
/// vector is unchanged.
LumpedState refine(const LumpedState& x, const ClassDescriptor& d);
/// Same, for a PermSet; throws UnsupportedOperator unless it carries a descriptor.
LumpedState refine(const LumpedState& x, const PermSet& set);

LumpedState phase_flip(const LumpedState& x, const ClassDescriptor& T);
LumpedState rdt(const LumpedState& x, const ClassDescriptor& C);
LumpedState rdt_step(const LumpedState& x, const ClassDescriptor& C, const ClassDescriptor& T);

LumpedState phase_flip(const LumpedState& x, const PermSet& T);
LumpedState rdt(const LumpedState& x, const PermSet& C);
LumpedState rdt_step(const LumpedState& x, const PermSet& C, const PermSet& T);

/// Merges identical descriptors and drops classes with |mass| < 1e-15.
LumpedState compact(const LumpedState& x);

Complex inner(const LumpedState& x, const LumpedState& y);
/// <x|chi_d>
Complex overlap_uniform(const LumpedState& x, const ClassDescriptor& d);
double probability_in(const LumpedState& x, const ClassDescriptor& d);

/// Exact enumeration of observation outcomes at `positions`, sorted by
/// assignment. Throws ResourceError when more than `cap` branches arise.
std::vector<Branch<LumpedState>> branches(const LumpedState& x, std::span<const Position> positions,
                                          std::size_t cap = kDefaultBranchCap);
Branch<LumpedState> measure_positions(const LumpedState& x, std::span<const Position> positions, Rng& rng);

/// Expands to the dense engine; N <= 8.
DenseState to_dense(const LumpedState& x);

/// True when no two classes share a permutation.
bool pairwise_disjoint(const LumpedState& x);

}  // namespace qdb
