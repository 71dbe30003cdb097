#include <gtest/gtest.h>

#include <cmath>

#include "qdb/adversary.hpp"

using namespace qdb;

namespace {

AttackConfig canonical() {
    AttackConfig c;
    c.query = 0;
    c.target = 1;
    c.stage = 0;
    c.observed = {3};
    return c;
}

void expect_reports_equal(const AttackReport& x, const AttackReport& y, double tol) {
    ASSERT_EQ(x.rows.size(), y.rows.size());
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
        EXPECT_EQ(x.rows[i].assignment, y.rows[i].assignment);
        EXPECT_NEAR(x.rows[i].probability, y.rows[i].probability, tol);
        EXPECT_NEAR(std::abs(x.rows[i].epsilon - y.rows[i].epsilon), 0.0, tol);
        EXPECT_EQ(x.rows[i].spy_learned_b, y.rows[i].spy_learned_b);
        EXPECT_EQ(x.rows[i].saw_a, y.rows[i].saw_a);
        EXPECT_NEAR(x.rows[i].success, y.rows[i].success, tol);
        EXPECT_NEAR(x.rows[i].exposure_bound, y.rows[i].exposure_bound, tol);
    }
    EXPECT_NEAR(x.p, y.p, tol);
    EXPECT_NEAR(x.P1, y.P1, tol);
    EXPECT_NEAR(x.P2, y.P2, tol);
    EXPECT_NEAR(x.P_ex, y.P_ex, tol);
    EXPECT_NEAR(x.max_abs_eps, y.max_abs_eps, tol);
    EXPECT_NEAR(x.eps_bound, y.eps_bound, tol);
    EXPECT_EQ(x.eps_within_bound, y.eps_within_bound);
    ASSERT_EQ(x.alpha_hat.has_value(), y.alpha_hat.has_value());
    if (x.alpha_hat) {
        EXPECT_NEAR(*x.alpha_hat, *y.alpha_hat, tol);
    }
    EXPECT_NEAR(x.identity_residual, y.identity_residual, tol);
    EXPECT_EQ(x.check_identity, y.check_identity);
    EXPECT_EQ(x.check_P1_le_eps2, y.check_P1_le_eps2);
    EXPECT_NEAR(x.eps_invariance_residual, y.eps_invariance_residual, tol);
}

}  // namespace

TEST(Strategy, ParseAndPrint) {
    EXPECT_EQ(Strategy::parse("noop").kind, Strategy::Kind::noop);
    EXPECT_EQ(Strategy::parse("measure_only").to_string(), "measure_only");
    const auto ph = Strategy::parse("measure_and_phase");
    EXPECT_TRUE(ph.use_observation);
    EXPECT_EQ(ph.to_string(), "measure_and_phase:obs");
    const auto rm = Strategy::parse("measure_and_remix:obs+3=a");
    EXPECT_EQ(rm.extra, (Assignment{{3, 10}}));
    EXPECT_EQ(rm.to_string(), "measure_and_remix:obs+3=a");
    EXPECT_EQ(Strategy::parse(rm.to_string()).to_string(), rm.to_string());
}

TEST(Strategy, RejectsUnknownAndOutOfAlgebra) {
    EXPECT_THROW(Strategy::parse("entangle"), StrategyError);
    EXPECT_THROW(Strategy::parse("arbitrary_unitary"), StrategyError);
    EXPECT_THROW(Strategy::parse("teleport"), StrategyError);
    EXPECT_THROW(Strategy::parse("measure_only:obs"), StrategyError);
    EXPECT_THROW(Strategy::parse("measure_and_phase:0=1"), StrategyError);
    EXPECT_THROW(Strategy::parse("measure_and_phase:prefix=1"), StrategyError);
    EXPECT_THROW(Strategy::parse("measure_and_phase:3=zz"), StrategyError);
}

TEST(Attack, ValidateRejectsBadConfigs) {
    const auto t = BlockTable::random(2, 0);
    auto c = canonical();
    c.target = c.query;
    EXPECT_THROW(validate(t, c), DomainError);
    c = canonical();
    c.inaccessible = {1};
    EXPECT_THROW(validate(t, c), DomainError);
    c = canonical();
    c.inaccessible = {0, 3};
    EXPECT_THROW(validate(t, c), DomainError);
    c = canonical();
    c.stage = 2;
    EXPECT_THROW(validate(t, c), DomainError);
    c = canonical();
    c.observed = {4};
    EXPECT_THROW(validate(t, c), DomainError);
    c = canonical();
    c.inaccessible = {0, 2};
    c.strategy = Strategy::parse("measure_and_phase:2=1");
    EXPECT_THROW(validate(t, c), StrategyError);
    EXPECT_THROW(validate(BlockTable::random(3, 0), canonical()), DomainError);
}

TEST(Attack, CanonicalCellMatchesHandEnumeration) {
    const auto t = BlockTable::random(2, 0);
    const auto r = run_attack(t, Engine::dense, canonical());
    ASSERT_EQ(r.rows.size(), 4u);
    for (const auto& row : r.rows) {
        EXPECT_NEAR(row.probability, 0.25, 1e-12);
        EXPECT_NEAR(std::abs(row.epsilon), 0.5, 1e-12);
        if (row.saw_a) {
            // Equality case: success = |eps|^2 = 1/4.
            EXPECT_NEAR(row.success, 0.25, 1e-12);
            EXPECT_NEAR(row.success, std::norm(row.epsilon), 1e-12);
        } else {
            EXPECT_NEAR(row.success, 17.0 / 36.0, 1e-12);
        }
    }
    EXPECT_NEAR(r.p, 0.25, 1e-12);
    EXPECT_NEAR(r.P_ex, 7.0 / 12.0, 1e-12);
    EXPECT_GT(r.P_ex, 0.5);
    EXPECT_TRUE(r.check_identity);
    EXPECT_TRUE(r.check_P1_le_eps2);
    EXPECT_LE(r.eps_invariance_residual, 1e-9);
    ASSERT_TRUE(r.alpha_hat.has_value());
    EXPECT_NEAR(*r.alpha_hat, 7.0 / 3.0, 1e-12);
}

TEST(Attack, HonestRunHasNoExposure) {
    const auto t = BlockTable::random(4, 1);
    AttackConfig c;
    c.query = 5;
    c.target = 9;
    c.strategy = Strategy::parse("noop");
    const auto r = run_attack(t, Engine::lumped, c);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_NEAR(r.P_ex, 0.0, 1e-12);
    EXPECT_EQ(r.p, 0.0);
    EXPECT_FALSE(r.alpha_hat.has_value());
    EXPECT_NEAR(std::abs(r.rows[0].epsilon), 1.0, 1e-12);
}

TEST(Attack, NoopEqualsMeasureOnly) {
    const auto t = BlockTable::random(2, 2);
    auto c = canonical();
    const auto a = run_attack(t, Engine::dense, c);
    c.strategy = Strategy::parse("noop");
    expect_reports_equal(a, run_attack(t, Engine::dense, c), 0.0);
}

TEST(Attack, EpsilonExamples) {
    const auto t = BlockTable::random(4, 3);
    EXPECT_NEAR(std::abs(epsilon(reference_state(t, Engine::lumped, 6, 1), 6, 1) - 1.0), 0.0, 1e-12);
    const auto away = uniform_over(t, Engine::lumped, make_descriptor(t, {}, {{0, 12}}));
    EXPECT_NEAR(std::abs(epsilon(away, 6, 1)), 0.0, 1e-15);
}

TEST(Attack, EngineEquivalenceOnScriptedScenarios) {
    const auto t = BlockTable::random(2, 4);
    const std::vector<std::string> strategies{"noop", "measure_only", "measure_and_phase", "measure_and_remix",
                                              "measure_and_phase:obs+2=3", "measure_and_remix:1=0"};
    for (const auto& s : strategies) {
        for (unsigned j = 0; j <= 1; ++j) {
            for (const std::vector<Position>& obs : {std::vector<Position>{}, {3}, {1, 2}, {1, 2, 3}}) {
                AttackConfig c;
                c.query = 2;
                c.target = 0;
                c.stage = j;
                c.observed = obs;
                c.strategy = Strategy::parse(s);
                SCOPED_TRACE(s + " j=" + std::to_string(j) + " m=" + std::to_string(obs.size()));
                const auto d = run_attack(t, Engine::dense, c);
                const auto l = run_attack(t, Engine::lumped, c);
                expect_reports_equal(d, l, 1e-9);
                EXPECT_TRUE(d.check_identity);
                for (const auto& row : d.rows) EXPECT_LE(std::abs(row.epsilon), 1.0 + 1e-12);
            }
        }
    }
}

TEST(Attack, SymmetryReductionMatchesFullEnumeration) {
    for (unsigned n : {2u, 4u}) {
        const auto t = BlockTable::random(n, 5);
        for (const std::string s : {"measure_only", "measure_and_phase", "measure_and_remix:obs+3=2"}) {
            for (unsigned j = 0; j <= 1; ++j) {
                AttackConfig c;
                c.query = 1;
                c.target = 2;
                c.stage = j;
                c.observed = n == 2 ? std::vector<Position>{2, 3} : std::vector<Position>{3, 7};
                c.strategy = Strategy::parse(s);
                const auto fast = run_attack(t, Engine::lumped, c);
                c.use_symmetry = false;
                const auto full = run_attack(t, Engine::lumped, c);
                SCOPED_TRACE(s + " n=" + std::to_string(n) + " j=" + std::to_string(j));
                expect_reports_equal(fast, full, 1e-12);
            }
        }
    }
}

// Reflecting chi_{C_j ∩ K} about chi_K scales its overlap with chi_{C_j} by
// 2|C_j ∩ K|/|K| - 1, so remixing never raises |eps|.
TEST(Attack, RemixScalesEpsilonByClassRatio) {
    const auto t = BlockTable::random(4, 6);
    AttackConfig c;
    c.query = 3;
    c.target = 8;
    c.stage = 1;
    c.observed = {15};
    const auto plain = run_attack(t, Engine::lumped, c);
    c.strategy = Strategy::parse("measure_and_remix");
    const auto remix = run_attack(t, Engine::lumped, c);
    ASSERT_EQ(plain.rows.size(), remix.rows.size());
    const auto Cj = prefix_descriptor(t, c.query, c.stage);
    bool changed = false;
    for (std::size_t i = 0; i < plain.rows.size(); ++i) {
        ASSERT_EQ(plain.rows[i].assignment, remix.rows[i].assignment);
        const auto K = make_descriptor(t, {}, plain.rows[i].assignment);
        const auto both = intersect(t, Cj, K);
        const double r = both ? ratio(class_size(t, *both), class_size(t, K)) : 0.0;
        const Complex expected = plain.rows[i].epsilon * (2 * r - 1);
        EXPECT_LT(std::abs(remix.rows[i].epsilon - expected), 1e-9);
        EXPECT_LE(std::abs(remix.rows[i].epsilon), std::abs(plain.rows[i].epsilon) + 1e-12);
        changed = changed || std::abs(remix.rows[i].epsilon - plain.rows[i].epsilon) > 1e-9;
    }
    EXPECT_TRUE(changed);
    EXPECT_TRUE(remix.check_identity);
}

TEST(Attack, BranchCapFailsLoudly) {
    const auto t = BlockTable::random(4, 7);
    AttackConfig c;
    c.observed = {1, 2, 3};
    c.branch_cap = 100;
    EXPECT_THROW(run_attack(t, Engine::lumped, c), ResourceError);
}

TEST(Scan, ExhaustiveObservedSubsetsAtFour) {
    const auto t = BlockTable::random(2, 8);
    for (unsigned mask = 0; mask < 8; ++mask) {
        AttackConfig c;
        c.query = 3;
        c.target = 1;
        for (Position s = 1; s <= 3; ++s) {
            if (mask & (1u << (s - 1))) c.observed.push_back(s);
        }
        const auto r = run_attack(t, Engine::dense, c);
        EXPECT_TRUE(r.check_identity) << mask;
        EXPECT_TRUE(r.check_P1_le_eps2) << mask;
        if (c.observed.empty()) {
            EXPECT_NEAR(r.P_ex, 0.0, 1e-12);
        }
    }
}

TEST(Scan, GridRowsInOrderAndChecksPass) {
    ScanGrid g;
    g.sizes = {4, 16, 64};
    g.stages = {0, 1};
    g.observed_counts = {0, 1, 2};
    g.gs = {1, 2};
    g.seed = 3;
    const auto rows = theorem_scan(g);
    std::size_t expected = 0;
    for (std::size_t N : g.sizes) {
        for (unsigned j : g.stages) {
            for (std::size_t m : g.observed_counts) {
                for (std::size_t gg : g.gs) {
                    if (j <= 1u + (N > 4) + (N > 16) && gg + m <= N) {
                        ASSERT_LT(expected, rows.size());
                        EXPECT_EQ(rows[expected].N, N);
                        EXPECT_EQ(rows[expected].j, j);
                        EXPECT_EQ(rows[expected].m_observed, m);
                        EXPECT_EQ(rows[expected].g, gg);
                        ++expected;
                    }
                }
            }
        }
    }
    EXPECT_EQ(rows.size(), expected);
    for (const auto& r : rows) {
        EXPECT_TRUE(r.report.check_identity);
        EXPECT_TRUE(r.report.check_P1_le_eps2);
        EXPECT_LE(r.report.eps_invariance_residual, 1e-9);
        EXPECT_NE(r.query, r.target);
        if (r.m_observed == 0) {
            EXPECT_NEAR(r.report.P_ex, 0.0, 1e-12);
        }
    }
    EXPECT_THROW(theorem_scan(ScanGrid{{8}, {0}, {1}, {1}, {Strategy{}}, "auto", 0, kDefaultBranchCap}),
                 DomainError);
}
