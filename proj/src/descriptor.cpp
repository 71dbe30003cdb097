#include "qdb/descriptor.hpp"

#include <algorithm>

namespace qdb {

namespace {

Key prefix_value(const ClassDescriptor& d) {
    Key v = 0;
    for (auto digit : d.prefix) v = (v << 2) | digit;
    return v;
}

// Keys admitted at position 0 by the prefix alone: [lo, hi).
std::pair<Key, Key> prefix_keys(const BlockTable& table, const ClassDescriptor& d) {
    const unsigned t = table.cascade_capable() ? table.digit_count() : 0;
    if (d.prefix.empty()) return {0, static_cast<Key>(table.size())};
    const unsigned free_bits = 2 * (t - static_cast<unsigned>(d.prefix.size()));
    const Key lo = prefix_value(d) << free_bits;
    return {lo, lo + (Key{1} << free_bits)};
}

bool key_used(const ClassDescriptor& d, Key k) {
    return std::any_of(d.fixed.begin(), d.fixed.end(), [k](const auto& pk) { return pk.second == k; });
}

bool position_fixed(const ClassDescriptor& d, Position s) {
    return std::any_of(d.fixed.begin(), d.fixed.end(), [s](const auto& pk) { return pk.first == s; });
}

template <class Elem>
bool contains_impl(const BlockTable& table, const ClassDescriptor& d, std::span<const Elem> order) {
    if (order.size() != table.size()) return false;
    const auto [lo, hi] = prefix_keys(table, d);
    const Key first = static_cast<Key>(order[0]);
    if (first < lo || first >= hi) return false;
    for (const auto& [s, k] : d.fixed) {
        if (static_cast<Key>(order[s]) != k) return false;
    }
    return true;
}

}  // namespace

ClassDescriptor make_descriptor(const BlockTable& table, std::vector<std::uint8_t> prefix,
                                const Assignment& fixed) {
    const std::size_t N = table.size();
    if (!prefix.empty() && !table.cascade_capable()) {
        throw DomainError("descriptor: prefix constraints need an even number of key bits");
    }
    const unsigned t = table.cascade_capable() ? table.digit_count() : 0;
    if (prefix.size() > t) throw DomainError("descriptor: prefix longer than the key");
    for (auto digit : prefix) {
        if (digit > 3) throw DomainError("descriptor: prefix digit out of range");
    }
    ClassDescriptor d;
    d.prefix = std::move(prefix);
    std::vector<bool> used(N, false);
    for (const auto& [s, k] : fixed) {
        if (s >= N || k >= N) throw DomainError("descriptor: position or key out of range");
        if (used[k]) throw DomainError("descriptor: fixed map is not injective");
        used[k] = true;
        if (s == 0) {
            if (!table.cascade_capable()) {
                throw DomainError("descriptor: position 0 constraints need an even number of key bits");
            }
            for (std::size_t i = 0; i < d.prefix.size(); ++i) {
                if (table.digit(k, static_cast<unsigned>(i)) != d.prefix[i]) {
                    throw DomainError("descriptor: position-0 key contradicts the prefix");
                }
            }
            d.prefix.clear();
            for (unsigned i = 0; i < t; ++i) d.prefix.push_back(static_cast<std::uint8_t>(table.digit(k, i)));
        } else {
            d.fixed.emplace_back(s, k);
        }
    }
    return d;
}

ClassDescriptor prefix_descriptor(const BlockTable& table, Key query, unsigned depth) {
    if (query >= table.size()) throw DomainError("prefix_descriptor: query out of range");
    if (depth > table.digit_count()) throw DomainError("prefix_descriptor: depth exceeds n/2");
    ClassDescriptor d;
    for (unsigned i = 0; i < depth; ++i) d.prefix.push_back(static_cast<std::uint8_t>(table.digit(query, i)));
    return d;
}

ClassDescriptor position_descriptor(const BlockTable& table, Position s, Key k) {
    return make_descriptor(table, {}, Assignment{{s, k}});
}

std::size_t candidate_count(const BlockTable& table, const ClassDescriptor& d) {
    const auto [lo, hi] = prefix_keys(table, d);
    std::size_t count = hi - lo;
    for (const auto& [s, k] : d.fixed) {
        if (k >= lo && k < hi) --count;
    }
    return count;
}

BigNat class_size(const BlockTable& table, const ClassDescriptor& d) {
    const std::size_t y = candidate_count(table, d);
    if (y == 0) return BigNat(0);
    const std::size_t free_positions = table.size() - d.fixed.size();
    return BigNat(y) * factorial(free_positions - 1);
}

bool contains(const BlockTable& table, const ClassDescriptor& d, std::span<const Key> order) {
    return contains_impl(table, d, order);
}

bool contains(const BlockTable& table, const ClassDescriptor& d, std::span<const std::uint8_t> order) {
    return contains_impl(table, d, order);
}

std::optional<ClassDescriptor> intersect(const BlockTable& table, const ClassDescriptor& a,
                                         const ClassDescriptor& b) {
    const auto& shorter = a.prefix.size() <= b.prefix.size() ? a.prefix : b.prefix;
    const auto& longer = a.prefix.size() <= b.prefix.size() ? b.prefix : a.prefix;
    if (!std::equal(shorter.begin(), shorter.end(), longer.begin())) return std::nullopt;

    ClassDescriptor r;
    r.prefix = longer;
    r.fixed.reserve(a.fixed.size() + b.fixed.size());
    auto ia = a.fixed.begin();
    auto ib = b.fixed.begin();
    while (ia != a.fixed.end() || ib != b.fixed.end()) {
        if (ib == b.fixed.end() || (ia != a.fixed.end() && ia->first < ib->first)) {
            r.fixed.push_back(*ia++);
        } else if (ia == a.fixed.end() || ib->first < ia->first) {
            r.fixed.push_back(*ib++);
        } else {
            if (ia->second != ib->second) return std::nullopt;
            r.fixed.push_back(*ia);
            ++ia;
            ++ib;
        }
    }
    std::vector<Key> keys;
    keys.reserve(r.fixed.size());
    for (const auto& pk : r.fixed) keys.push_back(pk.second);
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) return std::nullopt;
    if (candidate_count(table, r) == 0) return std::nullopt;
    return r;
}

std::vector<ClassDescriptor> split_by_digit(const BlockTable& table, const ClassDescriptor& d) {
    if (d.prefix.size() >= table.digit_count()) {
        throw DomainError("split_by_digit: prefix already full length");
    }
    std::vector<ClassDescriptor> out;
    for (std::uint8_t digit = 0; digit < 4; ++digit) {
        ClassDescriptor c = d;
        c.prefix.push_back(digit);
        if (candidate_count(table, c) > 0) out.push_back(std::move(c));
    }
    return out;
}

std::vector<ClassDescriptor> split_by_position(const BlockTable& table, const ClassDescriptor& d,
                                               Position s) {
    if (s == 0 || s >= table.size()) throw DomainError("split_by_position: position out of range");
    if (position_fixed(d, s)) throw DomainError("split_by_position: position already fixed");
    std::vector<ClassDescriptor> out;
    const auto insert_at =
        std::find_if(d.fixed.begin(), d.fixed.end(), [s](const auto& pk) { return pk.first > s; }) -
        d.fixed.begin();
    for (Key k = 0; k < table.size(); ++k) {
        if (key_used(d, k)) continue;
        ClassDescriptor c = d;
        c.fixed.insert(c.fixed.begin() + insert_at, {s, k});
        if (candidate_count(table, c) > 0) out.push_back(std::move(c));
    }
    return out;
}

std::vector<ClassDescriptor> subtract(const BlockTable& table, const ClassDescriptor& w,
                                      std::span<const ClassDescriptor> blockers) {
    std::vector<ClassDescriptor> out;
    if (candidate_count(table, w) == 0) return out;
    std::vector<ClassDescriptor> work{w};
    while (!work.empty()) {
        ClassDescriptor cur = std::move(work.back());
        work.pop_back();

        const ClassDescriptor* overlap = nullptr;
        bool covered = false;
        for (const auto& b : blockers) {
            auto inter = intersect(table, cur, b);
            if (!inter) continue;
            if (class_size(table, *inter) == class_size(table, cur)) {
                covered = true;
                break;
            }
            if (!overlap) overlap = &b;
        }
        if (covered) continue;
        if (!overlap) {
            out.push_back(std::move(cur));
            continue;
        }
        // Split along one constraint of the overlapping blocker that cur lacks.
        std::vector<ClassDescriptor> children;
        if (overlap->prefix.size() > cur.prefix.size()) {
            children = split_by_digit(table, cur);
        } else {
            for (const auto& [s, k] : overlap->fixed) {
                if (!position_fixed(cur, s)) {
                    children = split_by_position(table, cur, s);
                    break;
                }
            }
        }
        if (children.empty()) {
            throw NumericError("subtract: no splitting constraint for a partial overlap");
        }
        // Reverse so pieces come out in ascending order.
        for (auto it = children.rbegin(); it != children.rend(); ++it) work.push_back(std::move(*it));
    }
    return out;
}

std::optional<Key> prefix_key(const BlockTable& table, const ClassDescriptor& d) {
    if (!table.cascade_capable() || d.prefix.size() != table.digit_count()) return std::nullopt;
    return prefix_value(d);
}

std::string to_string(const ClassDescriptor& d) {
    std::string s = "{prefix=";
    for (auto digit : d.prefix) s += static_cast<char>('0' + digit);
    for (const auto& [p, k] : d.fixed) s += "; " + std::to_string(p) + "->" + std::to_string(k);
    s += "}";
    return s;
}

}  // namespace qdb
