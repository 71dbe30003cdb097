#include "qdb/lumped_state.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qdb {

namespace {

constexpr double kNormTol = 1e-9;

double sqrt_ratio(const BigNat& num, const BigNat& den) { return std::sqrt(ratio(num, den)); }

const ClassDescriptor& descriptor_of(const LumpedState& x, const PermSet& set) {
    if (set.degree() != x.table().size()) throw DomainError("lumped engine: set degree does not match the state");
    if (!set.descriptor()) {
        throw UnsupportedOperator("lumped engine: set '" + set.label() +
                                  "' is not expressible as a prefix/position class");
    }
    return *set.descriptor();
}

struct Piece {
    LumpedClass cls;
    bool inside;
};

// Splits every class into pieces lying inside or outside d.
std::vector<Piece> split_against(const BlockTable& table, const std::vector<LumpedClass>& classes,
                                 const ClassDescriptor& d) {
    std::vector<Piece> out;
    out.reserve(classes.size());
    for (const auto& c : classes) {
        auto inter = intersect(table, c.descriptor, d);
        if (!inter) {
            out.push_back({c, false});
            continue;
        }
        BigNat inter_size = class_size(table, *inter);
        if (inter_size == c.size) {
            out.push_back({c, true});
            continue;
        }
        out.push_back({{*inter, inter_size, c.mass * sqrt_ratio(inter_size, c.size)}, true});
        const ClassDescriptor blocker[] = {d};
        for (auto& rest : subtract(table, c.descriptor, blocker)) {
            BigNat size = class_size(table, rest);
            const Complex mass = c.mass * sqrt_ratio(size, c.size);
            out.push_back({{std::move(rest), std::move(size), mass}, false});
        }
    }
    return out;
}

// Fully splits a class by the keys at the given positions.
std::vector<LumpedClass> split_positions(const BlockTable& table, const LumpedClass& c,
                                         std::span<const Position> positions) {
    std::vector<ClassDescriptor> pieces{c.descriptor};
    for (Position s : positions) {
        std::vector<ClassDescriptor> next;
        for (auto& p : pieces) {
            if (s == 0) {
                std::vector<ClassDescriptor> work{std::move(p)};
                while (!work.empty()) {
                    ClassDescriptor w = std::move(work.back());
                    work.pop_back();
                    if (prefix_key(table, w)) {
                        next.push_back(std::move(w));
                    } else {
                        auto kids = split_by_digit(table, w);
                        for (auto it = kids.rbegin(); it != kids.rend(); ++it) work.push_back(std::move(*it));
                    }
                }
            } else if (std::any_of(p.fixed.begin(), p.fixed.end(), [s](const auto& pk) { return pk.first == s; })) {
                next.push_back(std::move(p));
            } else {
                for (auto& kid : split_by_position(table, p, s)) next.push_back(std::move(kid));
            }
        }
        pieces = std::move(next);
    }
    std::vector<LumpedClass> out;
    out.reserve(pieces.size());
    for (auto& p : pieces) {
        BigNat size = class_size(table, p);
        const Complex mass = c.mass * sqrt_ratio(size, c.size);
        out.push_back({std::move(p), std::move(size), mass});
    }
    return out;
}

Assignment assignment_of(const BlockTable& table, const ClassDescriptor& d, std::span<const Position> positions) {
    Assignment a;
    for (Position s : positions) {
        if (s == 0) {
            a[0] = *prefix_key(table, d);
        } else {
            const auto it = std::find_if(d.fixed.begin(), d.fixed.end(), [s](const auto& pk) { return pk.first == s; });
            a[s] = it->second;
        }
    }
    return a;
}

}  // namespace

LumpedState make_lumped_unchecked(const BlockTable& table, std::vector<LumpedClass> classes) {
    return LumpedState(table, std::move(classes));
}

LumpedState LumpedState::uniform(const BlockTable& table) {
    if (!table.cascade_capable()) throw DomainError("lumped engine: n must be even");
    return uniform_over(table, ClassDescriptor{});
}

LumpedState LumpedState::uniform_over(const BlockTable& table, const ClassDescriptor& d) {
    if (!table.cascade_capable()) throw DomainError("lumped engine: n must be even");
    BigNat size = class_size(table, d);
    if (size == 0) throw DomainError("LumpedState::uniform_over: empty class");
    return LumpedState(table, {{d, std::move(size), 1.0}});
}

LumpedState LumpedState::from_classes(const BlockTable& table, std::vector<LumpedClass> classes) {
    if (!table.cascade_capable()) throw DomainError("lumped engine: n must be even");
    double n2 = 0.0;
    for (auto& c : classes) {
        const BigNat expected = class_size(table, c.descriptor);
        if (expected == 0) throw DomainError("LumpedState: empty class");
        if (c.size != expected) throw DomainError("LumpedState: class size does not match its descriptor");
        n2 += std::norm(c.mass);
    }
    if (std::abs(n2 - 1.0) > kNormTol) throw DomainError("LumpedState: masses are not normalized");
    LumpedState s(table, std::move(classes));
    if (!pairwise_disjoint(s)) throw DomainError("LumpedState: classes overlap");
    return s;
}

double LumpedState::norm2() const {
    double n2 = 0.0;
    for (const auto& c : classes_) n2 += std::norm(c.mass);
    return n2;
}

LumpedState refine(const LumpedState& x, const ClassDescriptor& d) {
    std::vector<LumpedClass> out;
    for (auto& piece : split_against(x.table(), x.classes(), d)) out.push_back(std::move(piece.cls));
    return make_lumped_unchecked(x.table(), std::move(out));
}

LumpedState refine(const LumpedState& x, const PermSet& set) { return refine(x, descriptor_of(x, set)); }

LumpedState compact(const LumpedState& x) {
    std::vector<LumpedClass> sorted = x.classes();
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& l, const auto& r) { return l.descriptor < r.descriptor; });
    std::vector<LumpedClass> out;
    for (auto& c : sorted) {
        if (!out.empty() && out.back().descriptor == c.descriptor) {
            out.back().mass += c.mass;
        } else {
            out.push_back(std::move(c));
        }
    }
    std::erase_if(out, [](const auto& c) { return std::abs(c.mass) < kPruneTol; });
    return make_lumped_unchecked(x.table(), std::move(out));
}

LumpedState phase_flip(const LumpedState& x, const ClassDescriptor& T) {
    std::vector<LumpedClass> out;
    for (auto& piece : split_against(x.table(), x.classes(), T)) {
        if (piece.inside) piece.cls.mass = -piece.cls.mass;
        out.push_back(std::move(piece.cls));
    }
    return compact(make_lumped_unchecked(x.table(), std::move(out)));
}

LumpedState rdt(const LumpedState& x, const ClassDescriptor& C) {
    const auto& table = x.table();
    const BigNat c_size = class_size(table, C);
    if (c_size == 0) throw DomainError("rdt: empty set C");

    auto pieces = split_against(table, x.classes(), C);
    // alpha = <chi_C|x> = A / sqrt(|C|)
    Complex alpha{0.0, 0.0};
    std::vector<ClassDescriptor> inside;
    for (const auto& p : pieces) {
        if (!p.inside) continue;
        alpha += p.cls.mass * sqrt_ratio(p.cls.size, c_size);
        inside.push_back(p.cls.descriptor);
    }
    std::vector<LumpedClass> out;
    out.reserve(pieces.size());
    for (auto& p : pieces) {
        if (p.inside) {
            p.cls.mass = 2.0 * alpha * sqrt_ratio(p.cls.size, c_size) - p.cls.mass;
        } else {
            p.cls.mass = -p.cls.mass;
        }
        out.push_back(std::move(p.cls));
    }
    // Zero-amplitude parts of C pick up the uniform component too.
    if (std::abs(alpha) > kPruneTol) {
        for (auto& u : subtract(table, C, inside)) {
            BigNat size = class_size(table, u);
            const Complex mass = 2.0 * alpha * sqrt_ratio(size, c_size);
            out.push_back({std::move(u), std::move(size), mass});
        }
    }
    return compact(make_lumped_unchecked(table, std::move(out)));
}

LumpedState rdt_step(const LumpedState& x, const ClassDescriptor& C, const ClassDescriptor& T) {
    const auto& table = x.table();
    const BigNat c_size = class_size(table, C);
    const BigNat t_size = class_size(table, T);
    const auto inter = intersect(table, C, T);
    const BigNat inter_size = inter ? class_size(table, *inter) : BigNat(0);
    if (inter_size != t_size) throw DomainError("rdt_step: T is not a subset of C");
    if (c_size == 0 || 4 * t_size != c_size) throw DomainError("rdt_step: requires |T| = |C|/4");
    return rdt(phase_flip(x, T), C);
}

LumpedState phase_flip(const LumpedState& x, const PermSet& T) { return phase_flip(x, descriptor_of(x, T)); }
LumpedState rdt(const LumpedState& x, const PermSet& C) { return rdt(x, descriptor_of(x, C)); }
LumpedState rdt_step(const LumpedState& x, const PermSet& C, const PermSet& T) {
    return rdt_step(x, descriptor_of(x, C), descriptor_of(x, T));
}

Complex inner(const LumpedState& x, const LumpedState& y) {
    if (!(x.table() == y.table())) throw DomainError("inner: states belong to different tables");
    Complex acc{0.0, 0.0};
    for (const auto& a : x.classes()) {
        for (const auto& b : y.classes()) {
            const auto inter = intersect(x.table(), a.descriptor, b.descriptor);
            if (!inter) continue;
            const BigNat s = class_size(x.table(), *inter);
            acc += a.mass * std::conj(b.mass) * std::sqrt(ratio(s, a.size) * ratio(s, b.size));
        }
    }
    return acc;
}

Complex overlap_uniform(const LumpedState& x, const ClassDescriptor& d) {
    const BigNat d_size = class_size(x.table(), d);
    if (d_size == 0) return 0.0;
    Complex acc{0.0, 0.0};
    for (const auto& c : x.classes()) {
        const auto inter = intersect(x.table(), c.descriptor, d);
        if (!inter) continue;
        const BigNat s = class_size(x.table(), *inter);
        acc += c.mass * std::sqrt(ratio(s, c.size) * ratio(s, d_size));
    }
    return acc;
}

double probability_in(const LumpedState& x, const ClassDescriptor& d) {
    double acc = 0.0;
    for (const auto& c : x.classes()) {
        const auto inter = intersect(x.table(), c.descriptor, d);
        if (!inter) continue;
        acc += std::norm(c.mass) * ratio(class_size(x.table(), *inter), c.size);
    }
    return acc;
}

std::vector<Branch<LumpedState>> branches(const LumpedState& x, std::span<const Position> positions,
                                          std::size_t cap) {
    const auto& table = x.table();
    if (positions.empty()) throw DomainError("measurement: empty position set");
    std::vector<Position> pos(positions.begin(), positions.end());
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    if (pos.back() >= table.size()) throw DomainError("measurement: position out of range");

    std::map<Assignment, std::vector<LumpedClass>> groups;
    for (const auto& c : x.classes()) {
        for (auto& piece : split_positions(table, c, pos)) {
            auto& bucket = groups[assignment_of(table, piece.descriptor, pos)];
            bucket.push_back(std::move(piece));
            if (groups.size() > cap) {
                throw ResourceError("branch enumeration exceeds the cap of " + std::to_string(cap));
            }
        }
    }
    std::vector<Branch<LumpedState>> out;
    for (auto& [assignment, classes] : groups) {
        double p = 0.0;
        for (const auto& c : classes) p += std::norm(c.mass);
        if (p <= kPruneTol) continue;
        const double scale = 1.0 / std::sqrt(p);
        for (auto& c : classes) c.mass *= scale;
        out.push_back({assignment, p, compact(make_lumped_unchecked(table, std::move(classes)))});
    }
    return out;
}

Branch<LumpedState> measure_positions(const LumpedState& x, std::span<const Position> positions, Rng& rng) {
    return pick_branch(branches(x, positions), rng.uniform());
}

DenseState to_dense(const LumpedState& x) {
    const auto& table = x.table();
    const std::size_t N = table.size();
    if (N > DenseState::kMaxBlocks) throw SizeError("to_dense: N exceeds the dense cap");
    const auto perms = permutation_table(N);
    const std::size_t count = perms.size() / N;
    std::vector<Complex> amps(count);
    for (const auto& c : x.classes()) {
        const Complex amp = c.mass / std::sqrt(c.size.convert_to<double>());
        for (std::size_t r = 0; r < count; ++r) {
            if (contains(table, c.descriptor, perms.subspan(r * N, N))) amps[r] = amp;
        }
    }
    return DenseState::from_amplitudes(table, std::move(amps));
}

bool pairwise_disjoint(const LumpedState& x) {
    const auto& cs = x.classes();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
            if (intersect(x.table(), cs[i].descriptor, cs[j].descriptor)) return false;
        }
    }
    return true;
}

}  // namespace qdb
