#include "qdb/cli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdb/adversary.hpp"
#include "qdb/ecc.hpp"
#include "qdb/grover.hpp"
#include "qdb/mixing.hpp"

#ifndef QDB_VERSION
#define QDB_VERSION "0.0.0"
#endif

namespace qdb::cli {

namespace {

using json = nlohmann::ordered_json;

struct Common {
    unsigned n = 2;
    std::uint64_t seed = 0;
    std::string engine = "auto";
    std::string out;
    std::string format;
    std::string f_table;
    std::optional<std::uint64_t> f_seed;
    bool record_timing = false;
};

Key parse_hex(const std::string& s, const char* what) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(s, &used, 16);
    } catch (const std::logic_error&) {
        used = 0;
    }
    if (s.empty() || used != s.size() || v > 0xffffffffUL) {
        throw DomainError(std::string(what) + ": '" + s + "' is not a hex key");
    }
    return static_cast<Key>(v);
}

std::string hex(Key k) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%x", k);
    return buf;
}

// %.17g, so CSV values round-trip exactly.
std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

BlockTable load_table(const Common& c, bool n_given) {
    if (c.f_table.empty()) return BlockTable::random(c.n, c.f_seed.value_or(c.seed));
    std::ifstream in(c.f_table);
    if (!in) throw DomainError("--f-table: cannot open '" + c.f_table + "'");
    std::vector<Key> values;
    std::string line;
    while (std::getline(in, line)) {
        line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); }),
                   line.end());
        if (line.empty()) continue;
        values.push_back(parse_hex(line, "--f-table"));
    }
    unsigned n = c.n;
    if (!n_given) {
        n = 0;
        while ((std::size_t{1} << n) < values.size()) ++n;
    }
    return BlockTable(n, std::move(values));
}

json header(const std::string& command, const Common& c, const json& config) {
    json j;
    j["tool"] = "qdb";
    j["version"] = QDB_VERSION;
    j["command"] = command;
    j["seed"] = c.seed;
    j["config"] = config;
    return j;
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json assignment_json(const Assignment& as) {
    json arr = json::array();
    for (const auto& [s, k] : as) arr.push_back(json{{"position", s}, {"key", hex(k)}});
    return arr;
}

std::string assignment_text(const Assignment& as) {
    std::string s;
    for (const auto& [p, k] : as) s += (s.empty() ? "" : " ") + std::to_string(p) + "=" + hex(k);
    return s;
}

class Emitter {
   public:
    Emitter(const Common& c, std::ostream& out, std::ostream& err) : c_(c), out_(out), err_(err) {}

    void emit(const std::string& text) {
        if (c_.out.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(c_.out, std::ios::binary);
        if (!f) throw DomainError("--out: cannot write '" + c_.out + "'");
        f << text;
    }

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    void log(const std::string& command, const std::string& engine) const {
        err_ << "qdb " << command << ": engine=" << engine << " wall_time_s=" << elapsed() << "\n";
    }

    // Wall time changes between runs, so byte-identical reports leave it out
    // unless asked for.
    void finish_json(json& j) const {
        if (c_.record_timing) j["wall_time_s"] = elapsed();
    }
    std::string csv_footer() const { return c_.record_timing ? "# wall_time_s=" + num(elapsed()) + "\n" : ""; }

   private:
    const Common& c_;
    std::ostream& out_;
    std::ostream& err_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--n", c.n, "Key bits; N = 2^n blocks")->check(CLI::Range(1u, BlockTable::kMaxBits));
    app->add_option("--seed", c.seed, "Seed for every random choice");
    app->add_option("--engine", c.engine, "State engine")->check(CLI::IsMember({"dense", "lumped", "auto"}));
    app->add_option("--out", c.out, "Write the report here instead of stdout");
    app->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    auto* table = app->add_option("--f-table", c.f_table, "Hex file with one f value per line");
    app->add_option("--f-seed", c.f_seed, "Seed of the random f (defaults to --seed)")->excludes(table);
    app->add_flag("--record-timing", c.record_timing, "Embed wall time in the report");
}

json common_config(const Common& c, const BlockTable& table, Engine engine) {
    json j;
    j["n"] = table.bits();
    j["N"] = table.size();
    j["engine"] = engine_name(engine);
    if (c.f_table.empty()) {
        j["f_seed"] = c.f_seed.value_or(c.seed);
    } else {
        j["f_table"] = c.f_table;
    }
    j["table_hash"] = table.hash();
    return j;
}

// query ----------------------------------------------------------------

struct QueryOpts {
    Common c;
    std::vector<std::string> keys;
};

int cmd_query(const QueryOpts& o, bool n_given, std::ostream& out, std::ostream& err) {
    Emitter em(o.c, out, err);
    const BlockTable table = load_table(o.c, n_given);
    const Engine engine = resolve_engine(o.c.engine, table);
    std::vector<Key> queries;
    for (const auto& k : o.keys) {
        queries.push_back(parse_hex(k, "query"));
        if (queries.back() >= table.size()) throw DomainError("query: key " + k + " out of range");
    }
    auto result = serve(prepare(table, engine, o.c.seed), queries);

    bool all_correct = true;
    for (const auto& r : result.answers) all_correct = all_correct && r.correct;

    std::string text;
    if (o.c.format == "csv") {
        text = "query,answer_key,answer_value,correct,fidelity_to_chi0_after_restore\n";
        for (const auto& r : result.answers) {
            text += hex(r.query) + "," + hex(r.answer.key) + "," + hex(r.answer.value) + "," +
                    (r.correct ? "true" : "false") + "," + num(r.fidelity_after_restore) + "\n";
        }
        text += em.csv_footer();
    } else {
        json cfg = common_config(o.c, table, engine);
        json qs = json::array();
        for (Key q : queries) qs.push_back(hex(q));
        cfg["queries"] = qs;
        json j = header("query", o.c, cfg);
        j["engine"] = engine_name(engine);
        j["table_hash"] = table.hash();
        json rows = json::array();
        for (const auto& r : result.answers) {
            rows.push_back(json{{"query", hex(r.query)},
                                {"answer", json{{"key", hex(r.answer.key)}, {"value", hex(r.answer.value)}}},
                                {"correct", r.correct},
                                {"exposure", r.exposure},
                                {"fidelity_to_chi0_after_restore", r.fidelity_after_restore}});
        }
        j["rows"] = rows;
        j["all_correct"] = all_correct;
        em.finish_json(j);
        text = j.dump(2) + "\n";
    }
    em.emit(text);
    em.log("query", std::string(engine_name(engine)));
    if (!all_correct) {
        err << "qdb query: an answer was incorrect\n";
        return kInvariantFailure;
    }
    return kOk;
}

// attack ---------------------------------------------------------------

struct AttackOpts {
    Common c;
    std::string query = "0";
    std::string target = "1";
    unsigned stage = 0;
    std::vector<Position> observe;
    std::vector<Position> inaccessible{0};
    std::string strategy = "measure_only";
    std::size_t branch_cap = kDefaultBranchCap;
    bool exhaustive = false;
};

json report_json(const AttackReport& r) {
    json j;
    j["p"] = r.p;
    j["P1"] = r.P1;
    j["P2"] = r.P2;
    j["P_ex"] = r.P_ex;
    j["max_abs_eps"] = r.max_abs_eps;
    j["bound_2_1mp_pow_g"] = r.eps_bound;
    j["max_abs_eps_within_bound"] = r.eps_within_bound;
    j["alpha_hat"] = r.alpha_hat ? json(*r.alpha_hat) : json(nullptr);
    j["identity_residual"] = r.identity_residual;
    j["check_identity"] = r.check_identity;
    j["check_P1_le_eps2"] = r.check_P1_le_eps2;
    j["eps_invariance_residual"] = r.eps_invariance_residual;
    return j;
}

int cmd_attack(const AttackOpts& o, bool n_given, std::ostream& out, std::ostream& err) {
    Emitter em(o.c, out, err);
    const BlockTable table = load_table(o.c, n_given);
    const Engine engine = resolve_engine(o.c.engine, table);
    AttackConfig cfg;
    cfg.query = parse_hex(o.query, "--query-key");
    cfg.target = parse_hex(o.target, "--target-key");
    cfg.stage = o.stage;
    cfg.observed = o.observe;
    cfg.inaccessible = o.inaccessible;
    cfg.strategy = Strategy::parse(o.strategy);
    cfg.seed = o.c.seed;
    cfg.branch_cap = o.branch_cap;
    cfg.use_symmetry = !o.exhaustive;
    const AttackReport r = run_attack(table, engine, cfg);

    std::string text;
    if (o.c.format == "csv") {
        text = "assignment,probability,eps_re,eps_im,abs_eps,spy_learned_b,saw_a,success,exposure_bound\n";
        for (const auto& row : r.rows) {
            text += assignment_text(row.assignment) + "," + num(row.probability) + "," + num(row.epsilon.real()) +
                    "," + num(row.epsilon.imag()) + "," + num(std::abs(row.epsilon)) + "," +
                    (row.spy_learned_b ? "true" : "false") + "," + (row.saw_a ? "true" : "false") + "," +
                    num(row.success) + "," + num(row.exposure_bound) + "\n";
        }
        text += em.csv_footer();
    } else {
        json c = common_config(o.c, table, engine);
        c["query_key"] = hex(cfg.query);
        c["target_key"] = hex(cfg.target);
        c["stage"] = cfg.stage;
        c["observe"] = cfg.observed;
        c["inaccessible"] = cfg.inaccessible;
        c["g"] = cfg.inaccessible.size();
        c["strategy"] = cfg.strategy.to_string();
        c["branch_cap"] = cfg.branch_cap;
        json j = header("attack", o.c, c);
        j["engine"] = engine_name(engine);
        j["table_hash"] = table.hash();
        json rows = json::array();
        for (const auto& row : r.rows) {
            rows.push_back(json{{"assignment", assignment_json(row.assignment)},
                                {"probability", row.probability},
                                {"epsilon", complex_json(row.epsilon)},
                                {"abs_eps", std::abs(row.epsilon)},
                                {"spy_learned_b", row.spy_learned_b},
                                {"saw_a", row.saw_a},
                                {"success", row.success},
                                {"exposure_bound", row.exposure_bound}});
        }
        j["branches"] = rows;
        j["aggregates"] = report_json(r);
        em.finish_json(j);
        text = j.dump(2) + "\n";
    }
    em.emit(text);
    em.log("attack", std::string(engine_name(engine)));
    return kOk;
}

// scan -----------------------------------------------------------------

struct ScanOpts {
    Common c;
    std::vector<std::size_t> sizes{4, 16};
    std::vector<unsigned> stages{0, 1};
    std::vector<std::size_t> observed_counts{1};
    std::vector<std::size_t> gs{1};
    std::vector<std::string> strategies{"measure_only"};
    std::size_t branch_cap = kDefaultBranchCap;
};

int cmd_scan(const ScanOpts& o, std::ostream& out, std::ostream& err) {
    Emitter em(o.c, out, err);
    ScanGrid grid;
    grid.sizes = o.sizes;
    grid.stages = o.stages;
    grid.observed_counts = o.observed_counts;
    grid.gs = o.gs;
    grid.strategies.clear();
    for (const auto& s : o.strategies) grid.strategies.push_back(Strategy::parse(s));
    grid.engine = o.c.engine;
    grid.seed = o.c.seed;
    grid.branch_cap = o.branch_cap;
    const auto rows = theorem_scan(grid);

    bool all_pass = true;
    for (const auto& r : rows) all_pass = all_pass && r.report.check_identity;

    std::string text;
    if (o.c.format == "json") {
        json c;
        c["sizes"] = grid.sizes;
        c["stages"] = grid.stages;
        c["observed_counts"] = grid.observed_counts;
        c["g"] = grid.gs;
        c["strategies"] = o.strategies;
        c["engine"] = grid.engine;
        c["branch_cap"] = grid.branch_cap;
        json j = header("scan", o.c, c);
        j["engine"] = grid.engine;
        json cells = json::array();
        for (const auto& r : rows) {
            json cell{{"N", r.N},
                      {"j", r.j},
                      {"m_observed", r.m_observed},
                      {"g", r.g},
                      {"strategy", r.strategy},
                      {"query_key", hex(r.query)},
                      {"target_key", hex(r.target)},
                      {"table_hash", BlockTable::random(
                                         static_cast<unsigned>(std::countr_zero(r.N)), grid.seed)
                                         .hash()}};
            cell.update(report_json(r.report));
            cells.push_back(cell);
        }
        j["cells"] = cells;
        em.finish_json(j);
        text = j.dump(2) + "\n";
    } else {
        text =
            "N,j,m_observed,g,strategy,p,P1,P2,P_ex,max_abs_eps,bound_2_1mp_pow_g,alpha_hat,check_identity,"
            "check_P1_le_eps2\n";
        for (const auto& r : rows) {
            const auto& a = r.report;
            text += std::to_string(r.N) + "," + std::to_string(r.j) + "," + std::to_string(r.m_observed) + "," +
                    std::to_string(r.g) + "," + r.strategy + "," + num(a.p) + "," + num(a.P1) + "," + num(a.P2) +
                    "," + num(a.P_ex) + "," + num(a.max_abs_eps) + "," + num(a.eps_bound) + "," +
                    (a.alpha_hat ? num(*a.alpha_hat) : "") + "," + (a.check_identity ? "true" : "false") + "," +
                    (a.check_P1_le_eps2 ? "true" : "false") + "\n";
        }
        text += em.csv_footer();
    }
    em.emit(text);
    em.log("scan", grid.engine);
    if (!all_pass) {
        err << "qdb scan: accounting identity failed in some cell\n";
        return kInvariantFailure;
    }
    return kOk;
}

// demo -----------------------------------------------------------------

grover::Vec random_vec(std::size_t K, Rng& rng) {
    std::vector<Complex> amps(K);
    double norm = 0.0;
    for (auto& z : amps) {
        z = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
        norm += std::norm(z);
    }
    for (auto& z : amps) z /= std::sqrt(norm);
    return grover::Vec::from_amplitudes(std::move(amps));
}

std::vector<Check> grover_checks(std::uint64_t seed) {
    std::vector<Check> checks;
    Rng rng(seed);
    for (std::size_t K : {2, 4, 8, 16, 32}) {
        double residual = 0.0;
        double agreement = 0.0;
        const grover::Matrix D = grover::diffusion_matrix(K);
        for (int trial = 0; trial < 100; ++trial) {
            const auto x = random_vec(K, rng);
            residual = std::max(residual, grover::inversion_residual(x));
            Eigen::VectorXcd v(static_cast<Eigen::Index>(K));
            for (std::size_t i = 0; i < K; ++i) v[static_cast<Eigen::Index>(i)] = x[i];
            const Eigen::VectorXcd dv = D * v;
            const auto dx = grover::diffusion(x);
            for (std::size_t i = 0; i < K; ++i) {
                agreement = std::max(agreement, std::abs(dv[static_cast<Eigen::Index>(i)] - dx[i]));
            }
        }
        checks.push_back({"inversion_about_average_K" + std::to_string(K), residual, 1e-12, residual <= 1e-12});
        checks.push_back({"diffusion_matrix_free_vs_WR0W_K" + std::to_string(K), agreement, 1e-12,
                          agreement <= 1e-12});
    }
    for (std::size_t K : {4, 16, 64}) {
        std::vector<std::size_t> T;
        for (std::size_t i = 0; i < K / 4; ++i) T.push_back(rng.below(K));
        std::sort(T.begin(), T.end());
        T.erase(std::unique(T.begin(), T.end()), T.end());
        for (std::size_t i = 0; T.size() < K / 4; ++i) {
            if (!std::binary_search(T.begin(), T.end(), i)) {
                T.push_back(i);
                std::sort(T.begin(), T.end());
            }
        }
        const auto y = grover::grover_step(grover::Vec::uniform(K), T);
        double mass = 0.0;
        for (std::size_t i : T) mass += std::norm(y[i]);
        const double dev = std::abs(mass - 1.0);
        checks.push_back({"quarter_target_one_step_K" + std::to_string(K), dev, 1e-12, dev <= 1e-12});
    }
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t K = std::size_t{1} << (1 + rng.below(6));
        std::vector<std::size_t> C;
        for (std::size_t i = 0; i < K; ++i) {
            if (rng.uniform() < 0.5) C.push_back(i);
        }
        if (C.empty()) C.push_back(rng.below(K));
        const auto M = grover::random_c_mixing(C, K, rng.next());
        const auto diff = (grover::rdt_via_mixing(C, M) - grover::reflection_about(C, K)).cwiseAbs().maxCoeff();
        worst = std::max(worst, diff);
    }
    checks.push_back({"rdt_spectral_form_20_mixings", worst, 1e-10, worst <= 1e-10});
    return checks;
}

std::vector<Check> mixing_checks() {
    std::vector<Check> checks;
    {
        const BlockTable table = BlockTable::identity(2);
        const std::size_t N = table.size();
        const Permutation base = Permutation::identity(N);
        for (unsigned depth = 0; depth <= table.digit_count(); ++depth) {
            const auto cands = candidates(table, 0, depth);
            const auto T = cands.keys.size();
            const auto total = static_cast<std::uint64_t>(tuple_space_size(N, T));
            std::set<Permutation> images;
            std::uint64_t round_trip_failures = 0;
            for (std::uint64_t i = 0; i < total; ++i) {
                const RankTuple r = tuple_at(i, N, T);
                const Permutation p = unrank(r, cands, base);
                if (!(rank(p, cands, base) == r)) ++round_trip_failures;
                images.insert(p);
            }
            const std::string tag = "_N" + std::to_string(N) + "_j" + std::to_string(depth);
            const double missing = static_cast<double>(total - images.size() + round_trip_failures);
            checks.push_back({"bijection" + tag + "_tuples_" + std::to_string(total), missing, 0.0, missing == 0.0});

            const auto dist = mix_distribution(table, 0, depth);
            const auto C = PrefixSet::of(table, 0, depth).perm_set(table);
            const double expected = 1.0 / static_cast<double>(T * static_cast<std::size_t>(factorial(N - 1)));
            double dev = 0.0;
            for (std::size_t r = 0; r < dist.size(); ++r) {
                const auto p = lehmer_unrank(r, N);
                dev = std::max(dev, std::abs(dist[r] - (C.contains(p) ? expected : 0.0)));
            }
            checks.push_back({"uniform_pushforward" + tag, dev, 1e-15, dev <= 1e-15});

            const RankTuple ref = reference_ranks(N, T);
            const RankTuple residue = step3_residue(ref, ref);
            double nonzero = 0.0;
            for (auto v : residue.ranks) nonzero += static_cast<double>(v != 0);
            checks.push_back({"step3_residue_zero_on_reference" + tag, nonzero, 0.0, nonzero == 0.0});
        }
    }
    return checks;
}

std::vector<Check> ecc_checks(std::uint64_t seed) {
    using namespace ecc;
    std::vector<Check> checks;
    const Code h = hamming74();
    const double dh = min_distance(h);
    checks.push_back({"hamming74_min_distance", dh, 3.0, dh == 3.0});

    unsigned failures = 0;
    unsigned trials = 0;
    for (std::uint64_t m = 0; m < 16; ++m) {
        const Word msg{m, 4};
        const Word cw = h.encode(msg);
        for (unsigned i = 0; i < 7; ++i) {
            ++trials;
            const auto got = decode(h, Word{cw.bits ^ (std::uint64_t{1} << i), 7});
            if (!got || !(*got == msg)) ++failures;
        }
    }
    checks.push_back({"hamming74_single_errors_corrected_of_" + std::to_string(trials), static_cast<double>(failures),
                      0.0, failures == 0});

    const Code rep = repetition(3, 4);
    const double dr = min_distance(rep);
    checks.push_back({"repetition3_min_distance", dr, 3.0, dr == 3.0});
    failures = 0;
    for (std::uint64_t m = 0; m < 16; ++m) {
        const Word msg{m, 4};
        const Word cw = rep.encode(msg);
        // One flip or none in each of the four triples: 4^4 patterns.
        for (unsigned pattern = 0; pattern < 256; ++pattern) {
            std::uint64_t flips = 0;
            for (unsigned t = 0; t < 4; ++t) {
                const unsigned choice = (pattern >> (2 * t)) & 3u;
                if (choice != 0) flips |= std::uint64_t{1} << (3 * t + choice - 1);
            }
            const auto got = decode(rep, Word{cw.bits ^ flips, 12});
            if (!got || !(*got == msg)) ++failures;
        }
    }
    checks.push_back({"repetition3_single_error_per_triple", static_cast<double>(failures), 0.0, failures == 0});

    Rng rng(seed);
    failures = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Word msg{rng.below(16), 4};
        const Word cw = h.encode(msg);
        const Word received{cw.bits ^ (std::uint64_t{1} << rng.below(7)), 7};
        const auto d = reversible_decode(h, received);
        if (!d || !(d->message == msg) || !(reversible_encode(h, *d) == received)) ++failures;
    }
    checks.push_back({"reversible_decode_round_trip", static_cast<double>(failures), 0.0, failures == 0});
    return checks;
}

struct DemoOpts {
    Common c;
    std::string which;
};

int cmd_demo(const DemoOpts& o, std::ostream& out, std::ostream& err) {
    Emitter em(o.c, out, err);
    const auto checks = demo_checks(o.which, o.c.seed);
    bool all = true;
    for (const auto& ch : checks) all = all && ch.pass;
    std::string text;
    if (o.c.format == "csv") {
        text = "check,value,threshold,pass\n";
        for (const auto& ch : checks) {
            text += ch.name + "," + num(ch.value) + "," + num(ch.threshold) + "," + (ch.pass ? "PASS" : "FAIL") + "\n";
        }
        text += em.csv_footer();
    } else {
        json j = header("demo", o.c, json{{"suite", o.which}});
        json rows = json::array();
        for (const auto& ch : checks) {
            rows.push_back(
                json{{"check", ch.name}, {"value", ch.value}, {"threshold", ch.threshold}, {"pass", ch.pass}});
        }
        j["checks"] = rows;
        j["all_pass"] = all;
        em.finish_json(j);
        text = j.dump(2) + "\n";
    }
    em.emit(text);
    em.log("demo " + o.which, "none");
    if (!all) {
        for (const auto& ch : checks) {
            if (!ch.pass) err << "qdb demo: FAIL " << ch.name << " value=" << ch.value << "\n";
        }
        return kInvariantFailure;
    }
    return kOk;
}

}  // namespace

std::vector<Check> demo_checks(const std::string& name, unsigned long long seed) {
    if (name == "grover") return grover_checks(seed);
    if (name == "mixing") return mixing_checks();
    if (name == "ecc") return ecc_checks(seed);
    throw DomainError("demo: unknown suite '" + name + "' (expected grover, mixing or ecc)");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spy-detecting quantum database simulator"};
    app.set_version_flag("--version", QDB_VERSION);
    app.require_subcommand(1);

    QueryOpts q;
    auto* query = app.add_subcommand("query", "Serve queries: extract, observe, restore");
    add_common(query, q.c);
    query->add_option("keys", q.keys, "Query keys in hex");

    AttackOpts a;
    auto* attack = app.add_subcommand("attack", "Exact exposure accounting for one spy configuration");
    add_common(attack, a.c);
    attack->add_option("--query-key", a.query, "Key a (hex)");
    attack->add_option("--target-key", a.target, "Key b the spy wants (hex)");
    attack->add_option("--stage", a.stage, "Cascade stage j at which the spy acts");
    attack->add_option("--observe", a.observe, "Observed positions")->delimiter(',');
    attack->add_option("--inaccessible", a.inaccessible, "Inaccessible positions, including 0")->delimiter(',');
    attack->add_option("--strategy", a.strategy, "NAME[:params]");
    attack->add_option("--branch-cap", a.branch_cap, "Maximum number of measurement branches");
    attack->add_flag("--exhaustive", a.exhaustive, "Evaluate every branch instead of one per symmetry orbit");

    ScanOpts s;
    auto* scan = app.add_subcommand("scan", "Exposure accounting over a grid of configurations");
    add_common(scan, s.c);
    scan->add_option("--sizes", s.sizes, "Values of N (powers of 4)")->delimiter(',');
    scan->add_option("--stages", s.stages, "Stages j")->delimiter(',');
    scan->add_option("--observed-counts", s.observed_counts, "Numbers of observed positions")->delimiter(',');
    scan->add_option("--g", s.gs, "Numbers of inaccessible positions")->delimiter(',');
    scan->add_option("--strategies", s.strategies, "Strategies, comma separated")->delimiter(',');
    scan->add_option("--branch-cap", s.branch_cap, "Maximum number of measurement branches per cell");

    DemoOpts d;
    auto* demo = app.add_subcommand("demo", "Invariant suite of one module");
    add_common(demo, d.c);
    demo->add_option("suite", d.which, "grover | mixing | ecc")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kConfigError;
    }

    try {
        if (*query) return cmd_query(q, query->count("--n") > 0, out, err);
        if (*attack) return cmd_attack(a, attack->count("--n") > 0, out, err);
        if (*scan) {
            if (s.c.format.empty()) s.c.format = "csv";
            return cmd_scan(s, out, err);
        }
        return cmd_demo(d, out, err);
    } catch (const StrategyError& e) {
        err << "qdb: strategy error: " << e.what() << "\n";
        return kStrategyError;
    } catch (const UnsupportedOperator& e) {
        err << "qdb: unsupported operator: " << e.what() << "\n";
        return kStrategyError;
    } catch (const SizeError& e) {
        err << "qdb: size cap: " << e.what() << "\n";
        return kResourceCap;
    } catch (const ResourceError& e) {
        err << "qdb: resource cap: " << e.what() << "\n";
        return kResourceCap;
    } catch (const DomainError& e) {
        err << "qdb: invalid configuration: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        err << "qdb: " << e.what() << "\n";
        return kInvariantFailure;
    }
}

}  // namespace qdb::cli
