#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdb/block_table.hpp"
#include "qdb/core.hpp"

namespace qdb {

/// A set of permutations described by a position-0 key prefix (base-4
/// digits) and a partial injective map from positions >= 1 to keys.
///
/// Canonical form: position 0 is never stored in `fixed`; a fixed key at
/// position 0 is encoded as a full-length prefix. `fixed` is sorted by
/// position. Every operator of the honest cascade and every block
/// observation maps such classes to unions of such classes.
struct ClassDescriptor {
    std::vector<std::uint8_t> prefix;
    std::vector<std::pair<Position, Key>> fixed;

    friend auto operator<=>(const ClassDescriptor&, const ClassDescriptor&) = default;
};

/// Builds a canonical descriptor. `fixed` may contain position 0, which is
/// folded into the prefix. Throws DomainError on malformed or contradictory input.
ClassDescriptor make_descriptor(const BlockTable& table, std::vector<std::uint8_t> prefix,
                                const Assignment& fixed);

/// C_j: permutations whose position-0 key shares the first `depth` digits of `query`.
ClassDescriptor prefix_descriptor(const BlockTable& table, Key query, unsigned depth);

/// {pi : pi(s) = k}.
ClassDescriptor position_descriptor(const BlockTable& table, Position s, Key k);

/// Keys allowed at position 0: matching the prefix and not used by `fixed`.
std::size_t candidate_count(const BlockTable& table, const ClassDescriptor& d);

/// Exact number of permutations in the class.
BigNat class_size(const BlockTable& table, const ClassDescriptor& d);

bool contains(const BlockTable& table, const ClassDescriptor& d, std::span<const Key> order);
bool contains(const BlockTable& table, const ClassDescriptor& d, std::span<const std::uint8_t> order);

/// Intersection as a descriptor, or nullopt when empty.
std::optional<ClassDescriptor> intersect(const BlockTable& table, const ClassDescriptor& a,
                                         const ClassDescriptor& b);

/// Children by one more prefix digit; empty children are dropped.
std::vector<ClassDescriptor> split_by_digit(const BlockTable& table, const ClassDescriptor& d);

/// Children by the key at position s (s >= 1, not yet fixed).
std::vector<ClassDescriptor> split_by_position(const BlockTable& table, const ClassDescriptor& d,
                                               Position s);

/// Disjoint descriptors covering w minus the union of `blockers`.
/// Blockers need not be disjoint from one another.
std::vector<ClassDescriptor> subtract(const BlockTable& table, const ClassDescriptor& w,
                                      std::span<const ClassDescriptor> blockers);

/// Position-0 key if the prefix is full length.
std::optional<Key> prefix_key(const BlockTable& table, const ClassDescriptor& d);

std::string to_string(const ClassDescriptor& d);

}  // namespace qdb
