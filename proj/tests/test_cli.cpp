#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qdb/cli.hpp"

using qdb::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "qdb");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("qdb_cli_test_" + name);
}

}  // namespace

TEST(Cli, QueryRowsAreCorrect) {
    const auto r = call({"query", "--n", "2", "--seed", "4", "0", "1", "2", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["rows"].size(), 4u);
    for (const auto& row : j["rows"]) {
        EXPECT_TRUE(row["correct"].get<bool>());
        EXPECT_NEAR(row["fidelity_to_chi0_after_restore"].get<double>(), 1.0, 1e-9);
    }
    EXPECT_EQ(j["engine"], "dense");
    EXPECT_EQ(j["version"], "0.1.0");
    EXPECT_EQ(j["seed"], 4);
    EXPECT_TRUE(j.contains("table_hash"));
    EXPECT_NE(r.err.find("wall_time_s"), std::string::npos);
}

TEST(Cli, QueryLumpedAndEmpty) {
    const auto r = call({"query", "--n", "6", "--record-timing", "0", "3f", "a"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["engine"], "lumped");
    EXPECT_EQ(j["rows"].size(), 3u);
    EXPECT_TRUE(j.contains("wall_time_s"));
    const auto e = call({"query", "--n", "2"});
    ASSERT_EQ(e.code, 0);
    EXPECT_TRUE(nlohmann::json::parse(e.out)["rows"].empty());
}

TEST(Cli, QueryConfigErrors) {
    EXPECT_EQ(call({"query", "--n", "3", "0"}).code, 2);
    EXPECT_EQ(call({"query", "--n", "2", "9"}).code, 2);
    EXPECT_EQ(call({"query", "--n", "2", "xyz"}).code, 2);
    EXPECT_EQ(call({"query", "--engine", "quantum"}).code, 2);
    EXPECT_EQ(call({"bogus"}).code, 2);
    EXPECT_EQ(call({}).code, 2);
}

TEST(Cli, TableFromFile) {
    const auto path = temp_file("table.hex");
    {
        std::ofstream f(path);
        f << "3\n0\n2\n1\n";
    }
    const auto r = call({"query", "--f-table", path.string(), "0", "1", "2", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    const std::vector<std::string> values{"3", "0", "2", "1"};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(j["rows"][i]["answer"]["value"], values[i]);
    {
        std::ofstream f(path);
        f << "3\n0\n2\n";
    }
    EXPECT_EQ(call({"query", "--f-table", path.string()}).code, 2);
    EXPECT_EQ(call({"query", "--f-table", (path.string() + ".missing")}).code, 2);
    std::filesystem::remove(path);
}

TEST(Cli, AttackCanonicalCase) {
    const auto r = call({"attack", "--n", "2", "--query-key", "0", "--target-key", "1", "--stage", "0",
                         "--observe", "3", "--strategy", "measure_only"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    bool found = false;
    for (const auto& b : j["branches"]) {
        EXPECT_NEAR(b["abs_eps"].get<double>(), 0.5, 1e-12);
        if (b["saw_a"].get<bool>()) {
            found = true;
            EXPECT_NEAR(b["success"].get<double>(), 0.25, 1e-12);
        }
    }
    EXPECT_TRUE(found);
    EXPECT_NEAR(j["aggregates"]["P_ex"].get<double>(), 7.0 / 12.0, 1e-12);
    EXPECT_TRUE(j["aggregates"]["check_identity"].get<bool>());
}

TEST(Cli, AttackWithoutObservationHasNoExposure) {
    const auto r = call({"attack", "--n", "4", "--query-key", "5", "--target-key", "6"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["aggregates"]["P_ex"].get<double>(), 0.0);
    EXPECT_TRUE(j["aggregates"]["alpha_hat"].is_null());
}

TEST(Cli, AttackExitCodes) {
    EXPECT_EQ(call({"attack", "--strategy", "entangle"}).code, 3);
    EXPECT_EQ(call({"attack", "--strategy", "measure_and_phase:0=1"}).code, 3);
    EXPECT_EQ(call({"attack", "--inaccessible", "0,2", "--strategy", "measure_and_phase:2=1"}).code, 3);
    EXPECT_EQ(call({"attack", "--target-key", "0"}).code, 2);
    EXPECT_EQ(call({"attack", "--observe", "0"}).code, 2);
    EXPECT_EQ(call({"attack", "--n", "4", "--engine", "dense"}).code, 4);
    EXPECT_EQ(call({"attack", "--n", "4", "--observe", "1,2,3", "--branch-cap", "10"}).code, 4);
}

TEST(Cli, ScanCsvHeaderAndChecks) {
    const auto r = call({"scan"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line,
              "N,j,m_observed,g,strategy,p,P1,P2,P_ex,max_abs_eps,bound_2_1mp_pow_g,alpha_hat,check_identity,"
              "check_P1_le_eps2");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_NE(line.find(",true,true"), std::string::npos) << line;
    }
    EXPECT_EQ(rows, 4);
}

TEST(Cli, ScanSingleCellAndErrors) {
    const auto r = call({"scan", "--sizes", "16", "--stages", "1", "--observed-counts", "2", "--g", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
    EXPECT_EQ(call({"scan", "--sizes", "x"}).code, 2);
    EXPECT_EQ(call({"scan", "--sizes", "8"}).code, 2);
    EXPECT_EQ(call({"scan", "--strategies", "entangle"}).code, 3);
    EXPECT_EQ(call({"scan", "--sizes", "16", "--observed-counts", "3", "--branch-cap", "50"}).code, 4);
    const auto j = call({"scan", "--format", "json", "--sizes", "4", "--stages", "0"});
    ASSERT_EQ(j.code, 0);
    EXPECT_EQ(nlohmann::json::parse(j.out)["cells"].size(), 1u);
}

TEST(Cli, DemoSuitesPass) {
    for (const std::string suite : {"grover", "mixing", "ecc"}) {
        const auto r = call({"demo", suite});
        ASSERT_EQ(r.code, 0) << suite << r.err;
        const auto j = nlohmann::json::parse(r.out);
        EXPECT_TRUE(j["all_pass"].get<bool>());
    }
    const auto m = nlohmann::json::parse(call({"demo", "mixing"}).out);
    EXPECT_EQ(m["checks"][0]["check"], "bijection_N4_j0_tuples_24");
    EXPECT_EQ(call({"demo", "nope"}).code, 2);
    EXPECT_EQ(call({"demo"}).code, 2);
}

TEST(Cli, ByteIdenticalReruns) {
    const std::vector<std::vector<std::string>> commands{
        {"query", "--n", "4", "--seed", "11", "1", "2", "f"},
        {"attack", "--n", "4", "--seed", "2", "--query-key", "3", "--target-key", "9", "--stage", "1", "--observe",
         "5,6", "--strategy", "measure_and_remix"},
        {"scan", "--seed", "5"},
        {"scan", "--seed", "5", "--format", "json"},
        {"demo", "grover", "--seed", "8"},
        {"demo", "ecc", "--format", "csv"},
    };
    for (const auto& c : commands) {
        const auto a = call(c);
        const auto b = call(c);
        EXPECT_EQ(a.code, 0);
        EXPECT_EQ(a.out, b.out) << c[0];
    }
}

TEST(Cli, OutFileMatchesStdout) {
    const auto path = temp_file("attack.json");
    const auto a = call({"attack", "--observe", "3"});
    ASSERT_EQ(call({"attack", "--observe", "3", "--out", path.string()}).code, 0);
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    EXPECT_EQ(ss.str(), a.out);
    std::filesystem::remove(path);
}
