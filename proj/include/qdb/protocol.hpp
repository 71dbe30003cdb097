#pragma once

#include <vector>

#include "qdb/engine.hpp"

namespace qdb {

/// C_j for a query a: presentations whose first block's key agrees with a
/// on the first `depth` base-4 digits.
struct PrefixSet {
    Key query;
    unsigned depth;
    std::vector<std::uint8_t> digits;

    static PrefixSet of(const BlockTable& table, Key query, unsigned depth);

    /// (N / 4^depth) * (N-1)!
    BigNat cardinality(const BlockTable& table) const;
    ClassDescriptor descriptor() const { return ClassDescriptor{digits, {}}; }
    PermSet perm_set(const BlockTable& table) const;
};

struct Answer {
    Key key;
    Key value;
};

struct QueryRecord {
    Key query;
    Answer answer;
    bool correct;
    // Outcome key differs from the query.
    bool exposure;
    double fidelity_after_restore;
};

/// The database: a block table, its quantum state and a log of served
/// queries. Values are self-contained; all randomness flows from the seed.
class Database {
   public:
    Database(BlockTable table, QuantumState state, std::uint64_t seed)
        : table_(std::move(table)), state_(std::move(state)), rng_(seed) {}

    const BlockTable& table() const { return table_; }
    Engine engine() const { return engine_of(state_); }
    const QuantumState& state() const { return state_; }
    const std::vector<QueryRecord>& log() const { return log_; }

    void set_state(QuantumState s) { state_ = std::move(s); }
    void record(QueryRecord r) { log_.push_back(r); }
    Rng& rng() { return rng_; }

   private:
    BlockTable table_;
    QuantumState state_;
    Rng rng_;
    std::vector<QueryRecord> log_;
};

/// chi_0 over all N! presentations. Requires an even number of key bits.
Database prepare(const BlockTable& table, Engine engine, std::uint64_t seed);

/// chi_{C_j} for query a.
QuantumState reference_state(const BlockTable& table, Engine engine, Key a, unsigned depth);

/// Applies cascade steps j = from .. to-1: rdt_step(C_j, C_{j+1}).
QuantumState run_cascade(const QuantumState& x, Key a, unsigned from, unsigned to);
/// Inverse of run_cascade(x, a, from, to).
QuantumState undo_cascade(const QuantumState& x, Key a, unsigned from, unsigned to);

/// Full extraction cascade (n/2 steps): chi_0 -> chi_a.
Database extract(Database db, Key a);
/// Observes the block at position 0 and collapses the state.
std::pair<Answer, Database> observe(Database db);
/// Inverse cascade: chi_a -> chi_0.
Database restore(Database db, Key a);

/// Probability that observing position 0 yields key a.
double success_probability(const QuantumState& x, Key a);
/// |<x|chi_0>|
double fidelity_to_uniform(const QuantumState& x);

struct ServeResult {
    std::vector<QueryRecord> answers;
    Database db;
};

/// extract, observe, restore for every query in order.
ServeResult serve(Database db, const std::vector<Key>& queries);

}  // namespace qdb
