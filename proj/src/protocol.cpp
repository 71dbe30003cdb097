#include "qdb/protocol.hpp"

#include <cmath>

namespace qdb {

namespace {

void check_query(const BlockTable& table, Key a) {
    if (a >= table.size()) throw DomainError("query key out of range");
}

}  // namespace

PrefixSet PrefixSet::of(const BlockTable& table, Key query, unsigned depth) {
    check_query(table, query);
    const auto d = prefix_descriptor(table, query, depth);
    return PrefixSet{query, depth, d.prefix};
}

BigNat PrefixSet::cardinality(const BlockTable& table) const {
    const std::size_t candidates = table.size() >> (2 * depth);
    return BigNat(candidates) * factorial(table.size() - 1);
}

PermSet PrefixSet::perm_set(const BlockTable& table) const { return PermSet::from_descriptor(table, descriptor()); }

Database prepare(const BlockTable& table, Engine engine, std::uint64_t seed) {
    if (!table.cascade_capable()) throw DomainError("prepare: the cascade needs an even number of key bits");
    return Database(table, uniform_state(table, engine), seed);
}

QuantumState reference_state(const BlockTable& table, Engine engine, Key a, unsigned depth) {
    return uniform_over(table, engine, PrefixSet::of(table, a, depth).descriptor());
}

QuantumState run_cascade(const QuantumState& x, Key a, unsigned from, unsigned to) {
    const auto& table = table_of(x);
    if (to > table.digit_count() || from > to) throw DomainError("run_cascade: stage range out of bounds");
    QuantumState s = x;
    for (unsigned j = from; j < to; ++j) {
        s = rdt_step(s, PrefixSet::of(table, a, j).descriptor(), PrefixSet::of(table, a, j + 1).descriptor());
    }
    return s;
}

QuantumState undo_cascade(const QuantumState& x, Key a, unsigned from, unsigned to) {
    const auto& table = table_of(x);
    if (to > table.digit_count() || from > to) throw DomainError("undo_cascade: stage range out of bounds");
    QuantumState s = x;
    // (R_C F_T)^{-1} = F_T R_C, both factors being involutions.
    for (unsigned j = to; j-- > from;) {
        s = rdt(s, PrefixSet::of(table, a, j).descriptor());
        s = phase_flip(s, PrefixSet::of(table, a, j + 1).descriptor());
    }
    return s;
}

Database extract(Database db, Key a) {
    check_query(db.table(), a);
    if (!db.table().cascade_capable()) throw DomainError("extract: table is not cascade capable");
    db.set_state(run_cascade(db.state(), a, 0, db.table().digit_count()));
    return db;
}

std::pair<Answer, Database> observe(Database db) {
    const Position first[] = {0};
    auto outcome = measure_positions(db.state(), first, db.rng());
    const Key key = outcome.assignment.at(0);
    db.set_state(std::move(outcome.state));
    return {Answer{key, db.table().value(key)}, std::move(db)};
}

Database restore(Database db, Key a) {
    check_query(db.table(), a);
    db.set_state(undo_cascade(db.state(), a, 0, db.table().digit_count()));
    return db;
}

double success_probability(const QuantumState& x, Key a) {
    const auto& table = table_of(x);
    return probability_in(x, prefix_descriptor(table, a, table.digit_count()));
}

double fidelity_to_uniform(const QuantumState& x) { return std::abs(overlap_uniform(x, ClassDescriptor{})); }

ServeResult serve(Database db, const std::vector<Key>& queries) {
    std::vector<QueryRecord> answers;
    answers.reserve(queries.size());
    for (Key a : queries) {
        db = extract(std::move(db), a);
        auto [answer, observed] = observe(std::move(db));
        db = restore(std::move(observed), a);
        QueryRecord r{a, answer, answer.key == a && answer.value == db.table().value(a), answer.key != a,
                      fidelity_to_uniform(db.state())};
        db.record(r);
        answers.push_back(r);
    }
    return {std::move(answers), std::move(db)};
}

}  // namespace qdb
