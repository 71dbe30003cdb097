#include "qdb/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <set>
#include <sstream>

namespace qdb {

namespace {

constexpr double kCheckTol = 1e-9;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

void parse_params(Strategy& st, const std::string& params) {
    for (const auto& term : split(params, '+')) {
        if (term == "obs") {
            st.use_observation = true;
            continue;
        }
        const auto eq = term.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == term.size()) {
            throw StrategyError("strategy predicate: cannot parse term '" + term + "'");
        }
        Position s;
        Key k;
        try {
            std::size_t used = 0;
            s = static_cast<Position>(std::stoul(term.substr(0, eq), &used, 10));
            if (used != eq) throw std::invalid_argument("pos");
            const std::string key = term.substr(eq + 1);
            k = static_cast<Key>(std::stoul(key, &used, 16));
            if (used != key.size()) throw std::invalid_argument("key");
        } catch (const std::logic_error&) {
            throw StrategyError("strategy predicate: '" + term + "' is neither 'obs' nor 'pos=hexkey'");
        }
        if (s == 0) throw StrategyError("strategy predicate: position 0 is never accessible to the spy");
        st.extra[s] = k;
    }
}

// The class a phase/remix strategy acts on in one branch, or nullopt when empty.
std::optional<ClassDescriptor> action_class(const BlockTable& table, const Strategy& st, const Assignment& obs) {
    Assignment fixed = st.extra;
    if (st.use_observation) {
        for (const auto& [s, k] : obs) {
            auto [it, inserted] = fixed.emplace(s, k);
            if (!inserted && it->second != k) return std::nullopt;
        }
    }
    std::set<Key> keys;
    for (const auto& [s, k] : fixed) {
        if (!keys.insert(k).second) return std::nullopt;
    }
    auto d = make_descriptor(table, {}, fixed);
    if (class_size(table, d) == 0) return std::nullopt;
    return d;
}

QuantumState apply_strategy(const BlockTable& table, const Strategy& st, const Assignment& obs, QuantumState q) {
    switch (st.kind) {
        case Strategy::Kind::noop:
        case Strategy::Kind::measure_only:
            return q;
        case Strategy::Kind::measure_and_phase: {
            const auto d = action_class(table, st, obs);
            return d ? phase_flip(q, *d) : q;
        }
        case Strategy::Kind::measure_and_remix: {
            const auto d = action_class(table, st, obs);
            return d ? rdt(q, *d) : q;
        }
    }
    return q;
}

}  // namespace

Strategy Strategy::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string params = colon == std::string::npos ? "" : spec.substr(colon + 1);
    Strategy st;
    if (name == "noop" || name == "measure_only") {
        st.kind = name == "noop" ? Kind::noop : Kind::measure_only;
        if (!params.empty()) throw StrategyError(name + " takes no parameters");
        return st;
    }
    if (name == "measure_and_phase" || name == "measure_and_remix") {
        st.kind = name == "measure_and_phase" ? Kind::measure_and_phase : Kind::measure_and_remix;
        parse_params(st, params.empty() ? "obs" : params);
        return st;
    }
    if (name == "entangle" || name == "entangle_memory" || name == "arbitrary_unitary") {
        throw StrategyError("strategy '" + name +
                            "' needs an entangling unitary over spy memory, which neither engine represents");
    }
    throw StrategyError("unknown strategy '" + name + "'");
}

std::string Strategy::to_string() const {
    switch (kind) {
        case Kind::noop:
            return "noop";
        case Kind::measure_only:
            return "measure_only";
        default:
            break;
    }
    std::string s = kind == Kind::measure_and_phase ? "measure_and_phase:" : "measure_and_remix:";
    bool first = true;
    if (use_observation) {
        s += "obs";
        first = false;
    }
    for (const auto& [p, k] : extra) {
        std::ostringstream term;
        term << p << '=' << std::hex << k;
        s += (first ? "" : "+") + term.str();
        first = false;
    }
    return s;
}

void validate(const BlockTable& table, const AttackConfig& cfg) {
    const std::size_t N = table.size();
    if (!table.cascade_capable()) throw DomainError("attack: n must be even");
    if (cfg.query >= N || cfg.target >= N) throw DomainError("attack: query or target key out of range");
    if (cfg.query == cfg.target) throw DomainError("attack: target key must differ from the query");
    if (cfg.stage > table.digit_count()) throw DomainError("attack: stage exceeds n/2");
    const std::set<Position> inacc(cfg.inaccessible.begin(), cfg.inaccessible.end());
    const std::set<Position> obs(cfg.observed.begin(), cfg.observed.end());
    if (inacc.size() != cfg.inaccessible.size() || obs.size() != cfg.observed.size()) {
        throw DomainError("attack: repeated positions");
    }
    if (!inacc.count(0)) throw DomainError("attack: position 0 must be inaccessible");
    for (Position s : inacc) {
        if (s >= N) throw DomainError("attack: inaccessible position out of range");
    }
    for (Position s : obs) {
        if (s >= N) throw DomainError("attack: observed position out of range");
        if (inacc.count(s)) throw DomainError("attack: observed position " + std::to_string(s) + " is inaccessible");
    }
    for (const auto& [s, k] : cfg.strategy.extra) {
        if (s >= N || k >= N) throw StrategyError("strategy predicate: position or key out of range");
        if (inacc.count(s)) {
            throw StrategyError("strategy predicate touches inaccessible position " + std::to_string(s));
        }
    }
}

Complex epsilon(const QuantumState& q0, Key a, unsigned stage) {
    return overlap_uniform(q0, PrefixSet::of(table_of(q0), a, stage).descriptor());
}

AttackReport run_attack(const BlockTable& table, Engine engine, const AttackConfig& cfg) {
    validate(table, cfg);
    const unsigned t = table.digit_count();
    const Key a = cfg.query;
    const QuantumState at_stage = run_cascade(uniform_state(table, engine), a, 0, cfg.stage);

    std::vector<Branch<QuantumState>> spy;
    if (cfg.observed.empty()) {
        spy.push_back({Assignment{}, 1.0, at_stage});
    } else {
        spy = branches(at_stage, cfg.observed, cfg.branch_cap);
    }

    // Branches with the same signature are related by a key relabeling that
    // commutes with every cascade operator and the strategy, so they share
    // epsilon, success and drift.
    std::set<Key> distinguished{cfg.target};
    for (const auto& [s, k] : cfg.strategy.extra) distinguished.insert(k);
    auto signature = [&](const Assignment& as) {
        std::vector<std::int64_t> sig;
        for (const auto& [s, k] : as) {
            if (!cfg.use_symmetry || distinguished.count(k)) {
                sig.push_back(-1 - static_cast<std::int64_t>(k));
                continue;
            }
            unsigned shared = 0;
            while (shared < t && table.digit(k, shared) == table.digit(a, shared)) ++shared;
            sig.push_back(shared);
        }
        return sig;
    };
    std::map<std::vector<std::int64_t>, std::size_t> orbit_of;
    std::vector<std::size_t> representative;
    std::vector<std::size_t> orbit(spy.size());
    for (std::size_t i = 0; i < spy.size(); ++i) {
        auto [it, fresh] = orbit_of.emplace(signature(spy[i].assignment), representative.size());
        if (fresh) representative.push_back(i);
        orbit[i] = it->second;
    }

    struct Outcome {
        Complex eps;
        double success;
        double drift;
    };
    std::vector<Outcome> outcomes(representative.size());
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(representative.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t r = 0; r < count; ++r) {
        try {
            const auto& br = spy[representative[static_cast<std::size_t>(r)]];
            QuantumState q = apply_strategy(table, cfg.strategy, br.assignment, br.state);
            const Complex eps = epsilon(q, a, cfg.stage);
            double drift = 0.0;
            for (unsigned j = cfg.stage; j < t; ++j) {
                q = run_cascade(q, a, j, j + 1);
                drift = std::max(drift, std::abs(epsilon(q, a, j + 1) - eps));
            }
            outcomes[static_cast<std::size_t>(r)] = {eps, success_probability(q, a), drift};
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    AttackReport report;
    report.rows.reserve(spy.size());
    for (std::size_t i = 0; i < spy.size(); ++i) {
        const Outcome& o = outcomes[orbit[i]];
        BranchRow row{spy[i].assignment, spy[i].probability, o.eps, false, false, o.success, 0.0};
        for (const auto& [s, k] : row.assignment) {
            row.spy_learned_b = row.spy_learned_b || k == cfg.target;
            row.saw_a = row.saw_a || k == a;
        }
        report.rows.push_back(std::move(row));
        report.eps_invariance_residual = std::max(report.eps_invariance_residual, o.drift);
    }

    double p = 0.0;
    double learned_success = 0.0;
    double other_success = 0.0;
    double total_success = 0.0;
    report.check_P1_le_eps2 = true;
    for (const auto& row : report.rows) {
        total_success += row.probability * row.success;
        if (row.spy_learned_b) {
            p += row.probability;
            learned_success += row.probability * row.success;
        } else {
            other_success += row.probability * row.success;
        }
        report.max_abs_eps = std::max(report.max_abs_eps, std::abs(row.epsilon));
        if (row.saw_a && row.success > std::norm(row.epsilon) + kCheckTol) report.check_P1_le_eps2 = false;
    }
    for (auto& row : report.rows) row.exposure_bound = p * (1.0 - std::norm(row.epsilon));

    report.p = p;
    report.P1 = p > 0.0 ? learned_success / p : 0.0;
    report.P2 = p < 1.0 ? other_success / (1.0 - p) : 0.0;
    report.P_ex = 1.0 - total_success;
    report.identity_residual = std::abs((1.0 - report.P_ex) - (p * report.P1 + (1.0 - p) * report.P2));
    report.check_identity = report.identity_residual <= kCheckTol;
    report.eps_bound = 2.0 * std::pow(1.0 - p, static_cast<double>(cfg.inaccessible.size()));
    report.eps_within_bound = report.max_abs_eps <= report.eps_bound + kCheckTol;
    if (p > 0.0) report.alpha_hat = report.P_ex / p;
    return report;
}

std::vector<ScanRow> theorem_scan(const ScanGrid& grid) {
    struct Cell {
        std::size_t N;
        unsigned n;
        unsigned j;
        std::size_t m;
        std::size_t g;
        const Strategy* strategy;
    };
    std::vector<Cell> cells;
    for (std::size_t N : grid.sizes) {
        unsigned n = 0;
        while ((std::size_t{1} << n) < N) ++n;
        if ((std::size_t{1} << n) != N || n % 2 != 0 || n == 0) {
            throw DomainError("scan: N = " + std::to_string(N) + " is not a power of 4");
        }
        for (unsigned j : grid.stages) {
            if (j > n / 2) continue;
            for (std::size_t m : grid.observed_counts) {
                for (std::size_t g : grid.gs) {
                    if (g < 1 || g + m > N) continue;
                    for (const auto& st : grid.strategies) cells.push_back({N, n, j, m, g, &st});
                }
            }
        }
    }

    std::vector<ScanRow> rows(cells.size());
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            const Cell& c = cells[static_cast<std::size_t>(i)];
            const BlockTable table = BlockTable::random(c.n, grid.seed);
            Rng rng(grid.seed ^ (0x9e3779b97f4a7c15ull * c.N));
            AttackConfig cfg;
            cfg.query = static_cast<Key>(rng.below(c.N));
            cfg.target = static_cast<Key>((cfg.query + 1 + rng.below(c.N - 1)) % c.N);
            cfg.stage = c.j;
            cfg.inaccessible.clear();
            for (std::size_t s = 0; s < c.g; ++s) cfg.inaccessible.push_back(static_cast<Position>(s));
            for (std::size_t s = c.N - c.m; s < c.N; ++s) cfg.observed.push_back(static_cast<Position>(s));
            cfg.strategy = *c.strategy;
            cfg.seed = grid.seed;
            cfg.branch_cap = grid.branch_cap;
            const Engine engine = resolve_engine(grid.engine, table);
            rows[static_cast<std::size_t>(i)] =
                ScanRow{c.N, c.j, c.m, c.g, c.strategy->to_string(), cfg.query, cfg.target,
                        run_attack(table, engine, cfg)};
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

}  // namespace qdb
