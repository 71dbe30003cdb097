#include "qdb/perm_set.hpp"

#include <algorithm>
#include <memory>
#include <set>

namespace qdb {

namespace {

void check_degree(std::size_t N) {
    if (N == 0 || N > 255) throw SizeError("PermSet: degree must be in [1, 255]");
}

}  // namespace

PermSet PermSet::all(std::size_t N) {
    check_degree(N);
    return PermSet(N, [](std::span<const std::uint8_t>) { return true; }, factorial(N), "all");
}

PermSet PermSet::none(std::size_t N) {
    check_degree(N);
    return PermSet(N, [](std::span<const std::uint8_t>) { return false; }, BigNat(0), "none");
}

PermSet PermSet::at_position(std::size_t N, Position s, Key k) {
    return matching(N, Assignment{{s, k}});
}

PermSet PermSet::matching(std::size_t N, const Assignment& assignment) {
    check_degree(N);
    std::vector<bool> used(N, false);
    bool consistent = true;
    for (const auto& [s, k] : assignment) {
        if (s >= N || k >= N) throw DomainError("PermSet::matching: position or key out of range");
        if (used[k]) consistent = false;
        used[k] = true;
    }
    std::string label = "match{";
    for (const auto& [s, k] : assignment) label += std::to_string(s) + "->" + std::to_string(k) + ";";
    label += "}";
    if (!consistent) return PermSet(N, [](std::span<const std::uint8_t>) { return false; }, BigNat(0), label);
    auto pairs = std::vector<std::pair<Position, Key>>(assignment.begin(), assignment.end());
    return PermSet(
        N,
        [pairs](std::span<const std::uint8_t> order) {
            return std::all_of(pairs.begin(), pairs.end(), [&](const auto& pk) { return order[pk.first] == pk.second; });
        },
        factorial(N - assignment.size()), label);
}

PermSet PermSet::from_descriptor(const BlockTable& table, const ClassDescriptor& d) {
    check_degree(table.size());
    auto shared = std::make_shared<const std::pair<BlockTable, ClassDescriptor>>(table, d);
    return PermSet(
        table.size(),
        [shared](std::span<const std::uint8_t> order) { return qdb::contains(shared->first, shared->second, order); },
        class_size(table, d), to_string(d), d);
}

PermSet PermSet::explicit_list(std::size_t N, const std::vector<Permutation>& members) {
    check_degree(N);
    std::set<std::vector<std::uint8_t>> set;
    for (const auto& p : members) {
        if (p.size() != N || !p.valid()) throw DomainError("PermSet::explicit_list: invalid permutation");
        set.emplace(p.order.begin(), p.order.end());
    }
    const std::size_t count = set.size();
    auto shared = std::make_shared<const std::set<std::vector<std::uint8_t>>>(std::move(set));
    return PermSet(
        N,
        [shared](std::span<const std::uint8_t> order) {
            return shared->count(std::vector<std::uint8_t>(order.begin(), order.end())) > 0;
        },
        BigNat(count), "list[" + std::to_string(count) + "]");
}

bool PermSet::contains(const Permutation& p) const {
    if (p.size() != degree_) return false;
    std::vector<std::uint8_t> order(p.order.begin(), p.order.end());
    return pred_(order);
}

}  // namespace qdb
