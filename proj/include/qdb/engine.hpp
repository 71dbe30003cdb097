#pragma once

#include <string_view>
#include <variant>

#include "qdb/dense_state.hpp"
#include "qdb/lumped_state.hpp"

namespace qdb {

enum class Engine { dense, lumped };

/// "dense" | "lumped" | "auto" (dense for N <= 8, else lumped).
Engine resolve_engine(std::string_view name, const BlockTable& table);
std::string_view engine_name(Engine e);

/// A state held by either engine. Operators below take class descriptors,
/// the common algebra of both engines.
using QuantumState = std::variant<DenseState, LumpedState>;

Engine engine_of(const QuantumState& s);
const BlockTable& table_of(const QuantumState& s);

QuantumState uniform_state(const BlockTable& table, Engine engine);
QuantumState uniform_over(const BlockTable& table, Engine engine, const ClassDescriptor& d);

QuantumState phase_flip(const QuantumState& x, const ClassDescriptor& T);
QuantumState rdt(const QuantumState& x, const ClassDescriptor& C);
QuantumState rdt_step(const QuantumState& x, const ClassDescriptor& C, const ClassDescriptor& T);

Complex inner(const QuantumState& x, const QuantumState& y);
Complex overlap_uniform(const QuantumState& x, const ClassDescriptor& d);
double probability_in(const QuantumState& x, const ClassDescriptor& d);
double norm2(const QuantumState& x);

std::vector<Branch<QuantumState>> branches(const QuantumState& x, std::span<const Position> positions,
                                           std::size_t cap = kDefaultBranchCap);
Branch<QuantumState> measure_positions(const QuantumState& x, std::span<const Position> positions, Rng& rng);

/// Dense view for comparisons (lumped states expand; N <= 8).
DenseState as_dense(const QuantumState& x);

}  // namespace qdb
