#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdb/block_table.hpp"
#include "qdb/descriptor.hpp"
#include "qdb/kernels.hpp"

namespace qdb {

/// A set of permutations of [0, N): a membership predicate plus its exact
/// cardinality. Sets built from a ClassDescriptor remember it, which is what
/// makes them usable by the lumped engine.
class PermSet {
   public:
    static PermSet all(std::size_t N);
    static PermSet none(std::size_t N);
    /// {pi : pi(s) = k}
    static PermSet at_position(std::size_t N, Position s, Key k);
    /// {pi : pi(s) = k for every (s, k) in the assignment}
    static PermSet matching(std::size_t N, const Assignment& assignment);
    static PermSet from_descriptor(const BlockTable& table, const ClassDescriptor& d);
    static PermSet explicit_list(std::size_t N, const std::vector<Permutation>& members);

    bool contains(std::span<const std::uint8_t> order) const { return pred_(order); }
    bool contains(const Permutation& p) const;
    const BigNat& cardinality() const { return cardinality_; }
    std::size_t degree() const { return degree_; }
    const std::optional<ClassDescriptor>& descriptor() const { return descriptor_; }
    const std::string& label() const { return label_; }
    const kernels::PermPredicate& predicate() const { return pred_; }

   private:
    PermSet(std::size_t degree, kernels::PermPredicate pred, BigNat cardinality, std::string label,
            std::optional<ClassDescriptor> descriptor = std::nullopt)
        : degree_(degree),
          pred_(std::move(pred)),
          cardinality_(std::move(cardinality)),
          label_(std::move(label)),
          descriptor_(std::move(descriptor)) {}

    std::size_t degree_;
    kernels::PermPredicate pred_;
    BigNat cardinality_;
    std::string label_;
    std::optional<ClassDescriptor> descriptor_;
};

}  // namespace qdb
