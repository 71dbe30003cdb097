#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdb/protocol.hpp"

namespace qdb {

/// Spy action that cannot be expressed in the engine's operator algebra, or
/// that touches inaccessible blocks.
struct StrategyError : Error {
    using Error::Error;
};

/// What the spy does after observing its blocks.
///
/// measure_and_phase and measure_and_remix take a class predicate as
/// '+'-joined terms: `obs` (the branch's observed assignment) and `s=k`
/// (position s holds hex key k). The phase variant negates amplitudes in the
/// class; the remix variant applies the relative diffusion transform about it.
/// A branch whose observation contradicts the predicate's own terms leaves
/// the state unchanged.
struct Strategy {
    enum class Kind { noop, measure_only, measure_and_phase, measure_and_remix };
    Kind kind = Kind::measure_only;
    bool use_observation = false;
    Assignment extra;

    /// "name" or "name:params". Throws StrategyError for unknown or
    /// unsupported strategies.
    static Strategy parse(const std::string& spec);
    std::string to_string() const;
};

struct AttackConfig {
    Key query = 0;
    Key target = 1;
    // The spy acts on chi_{C_stage}.
    unsigned stage = 0;
    std::vector<Position> observed;
    // Must contain position 0; its size is g.
    std::vector<Position> inaccessible{0};
    Strategy strategy;
    std::uint64_t seed = 0;
    std::size_t branch_cap = kDefaultBranchCap;
    // Evaluate one branch per orbit of the key relabelings that fix the
    // query's prefix sets, the target and the strategy's keys.
    bool use_symmetry = true;
};

struct BranchRow {
    Assignment assignment;
    double probability;
    Complex epsilon;
    bool spy_learned_b;
    bool saw_a;
    // P(position 0 yields key a) at the end of the cascade.
    double success;
    // p (1 - |eps|^2)
    double exposure_bound;
};

struct AttackReport {
    std::vector<BranchRow> rows;
    double p = 0.0;
    double P1 = 0.0;
    double P2 = 0.0;
    double P_ex = 0.0;
    double max_abs_eps = 0.0;
    // 2 (1 - p)^g
    double eps_bound = 0.0;
    bool eps_within_bound = false;
    // P_ex / p; absent when p = 0.
    std::optional<double> alpha_hat;
    double identity_residual = 0.0;
    bool check_identity = false;
    bool check_P1_le_eps2 = false;
    // max over branches and cascade steps of |<Q_i|chi_{C_{i+j}}> - eps|
    double eps_invariance_residual = 0.0;
};

/// Throws DomainError for malformed configurations.
void validate(const BlockTable& table, const AttackConfig& cfg);

/// Honest cascade to the stage, exact enumeration of the spy's observation,
/// the strategy's action per branch, the rest of the cascade, and the
/// exposure accounting.
AttackReport run_attack(const BlockTable& table, Engine engine, const AttackConfig& cfg);

/// <Q0|chi_{C_j}>
Complex epsilon(const QuantumState& q0, Key a, unsigned stage);

struct ScanGrid {
    std::vector<std::size_t> sizes{4, 16};
    std::vector<unsigned> stages{0, 1};
    std::vector<std::size_t> observed_counts{1};
    std::vector<std::size_t> gs{1};
    std::vector<Strategy> strategies{Strategy{}};
    std::string engine = "auto";
    std::uint64_t seed = 0;
    std::size_t branch_cap = kDefaultBranchCap;
};

struct ScanRow {
    std::size_t N;
    unsigned j;
    std::size_t m_observed;
    std::size_t g;
    std::string strategy;
    Key query;
    Key target;
    AttackReport report;
};

/// Cells with stage > n/2, g < 1 or g + m > N are skipped. Rows are
/// returned in grid order.
std::vector<ScanRow> theorem_scan(const ScanGrid& grid);

}  // namespace qdb
