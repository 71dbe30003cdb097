#include "qdb/engine.hpp"

namespace qdb {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

PermSet dense_set(const DenseState& x, const ClassDescriptor& d) { return PermSet::from_descriptor(x.table(), d); }

template <class State>
std::vector<Branch<QuantumState>> wrap(std::vector<Branch<State>> bs) {
    std::vector<Branch<QuantumState>> out;
    out.reserve(bs.size());
    for (auto& b : bs) out.push_back({std::move(b.assignment), b.probability, QuantumState(std::move(b.state))});
    return out;
}

}  // namespace

Engine resolve_engine(std::string_view name, const BlockTable& table) {
    if (name == "dense") return Engine::dense;
    if (name == "lumped") return Engine::lumped;
    if (name == "auto") return table.size() <= DenseState::kMaxBlocks ? Engine::dense : Engine::lumped;
    throw DomainError("unknown engine '" + std::string(name) + "' (expected dense, lumped or auto)");
}

std::string_view engine_name(Engine e) { return e == Engine::dense ? "dense" : "lumped"; }

Engine engine_of(const QuantumState& s) { return s.index() == 0 ? Engine::dense : Engine::lumped; }

const BlockTable& table_of(const QuantumState& s) {
    return std::visit([](const auto& x) -> const BlockTable& { return x.table(); }, s);
}

QuantumState uniform_state(const BlockTable& table, Engine engine) {
    if (engine == Engine::dense) return uniform_state(table);
    return LumpedState::uniform(table);
}

QuantumState uniform_over(const BlockTable& table, Engine engine, const ClassDescriptor& d) {
    if (engine == Engine::dense) return DenseState::uniform_over(table, PermSet::from_descriptor(table, d));
    return LumpedState::uniform_over(table, d);
}

QuantumState phase_flip(const QuantumState& x, const ClassDescriptor& T) {
    return std::visit(Overloaded{[&](const DenseState& s) -> QuantumState { return phase_flip(s, dense_set(s, T)); },
                                 [&](const LumpedState& s) -> QuantumState { return phase_flip(s, T); }},
                      x);
}

QuantumState rdt(const QuantumState& x, const ClassDescriptor& C) {
    return std::visit(Overloaded{[&](const DenseState& s) -> QuantumState { return rdt(s, dense_set(s, C)); },
                                 [&](const LumpedState& s) -> QuantumState { return rdt(s, C); }},
                      x);
}

QuantumState rdt_step(const QuantumState& x, const ClassDescriptor& C, const ClassDescriptor& T) {
    return std::visit(
        Overloaded{[&](const DenseState& s) -> QuantumState { return rdt_step(s, dense_set(s, C), dense_set(s, T)); },
                   [&](const LumpedState& s) -> QuantumState { return rdt_step(s, C, T); }},
        x);
}

Complex inner(const QuantumState& x, const QuantumState& y) {
    if (x.index() != y.index()) return inner(as_dense(x), as_dense(y));
    return std::visit(
        Overloaded{[&](const DenseState& s) { return inner(s, std::get<DenseState>(y)); },
                   [&](const LumpedState& s) { return inner(s, std::get<LumpedState>(y)); }},
        x);
}

Complex overlap_uniform(const QuantumState& x, const ClassDescriptor& d) {
    return std::visit(Overloaded{[&](const DenseState& s) { return overlap_uniform(s, dense_set(s, d)); },
                                 [&](const LumpedState& s) { return overlap_uniform(s, d); }},
                      x);
}

double probability_in(const QuantumState& x, const ClassDescriptor& d) {
    return std::visit(Overloaded{[&](const DenseState& s) { return probability_in(s, dense_set(s, d)); },
                                 [&](const LumpedState& s) { return probability_in(s, d); }},
                      x);
}

double norm2(const QuantumState& x) {
    return std::visit([](const auto& s) { return s.norm2(); }, x);
}

std::vector<Branch<QuantumState>> branches(const QuantumState& x, std::span<const Position> positions,
                                           std::size_t cap) {
    return std::visit(
        Overloaded{[&](const DenseState& s) {
                       auto bs = branches(s, positions);
                       if (bs.size() > cap) throw ResourceError("branch enumeration exceeds the cap");
                       return wrap(std::move(bs));
                   },
                   [&](const LumpedState& s) { return wrap(branches(s, positions, cap)); }},
        x);
}

Branch<QuantumState> measure_positions(const QuantumState& x, std::span<const Position> positions, Rng& rng) {
    return pick_branch(branches(x, positions), rng.uniform());
}

DenseState as_dense(const QuantumState& x) {
    return std::visit(Overloaded{[](const DenseState& s) { return s; },
                                 [](const LumpedState& s) { return to_dense(s); }},
                      x);
}

}  // namespace qdb
