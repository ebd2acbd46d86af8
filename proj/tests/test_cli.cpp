#include <gtest/gtest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "regweight/graph.hpp"
#include "regweight/weighting.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(REGWEIGHT_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed");
    std::string out;
    std::array<char, 4096> buf{};
    while (const auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string sample(const std::string& name) { return std::string(REGWEIGHT_SAMPLES) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "regweight_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') rows.push_back(line);
    }
    return rows;
}

}  // namespace

TEST(Cli, SolveT2Petersen) {
    const auto r = run("solve --algo t2 " + sample("petersen.g"));
    ASSERT_EQ(r.code, 0);
    const auto g = regweight::parse_graph(slurp(sample("petersen.g")));
    const auto w = regweight::parse_weighting(g, r.out);
    EXPECT_EQ(testing_support::conflicts(g, w.values()), 0u);
    for (auto x : w.values()) EXPECT_TRUE(x >= 1 && x <= 4);
}

TEST(Cli, SolveErrors) {
    EXPECT_EQ(run("solve --algo t2 " + sample("k2.g")).code, 2);
    EXPECT_EQ(run("--seed 1 solve --algo t3 --preset paper " + sample("petersen.g")).code, 2);
    EXPECT_EQ(run("solve --algo t3 --preset desk " + sample("petersen.g")).code, 2);  // no explicit seed
    EXPECT_EQ(run("solve --algo t5 " + sample("petersen.g")).code, 2);
    EXPECT_EQ(run("solve " + sample("broken.g")).code, 2);
    EXPECT_EQ(run("solve /nonexistent/graph.g").code, 2);
    EXPECT_EQ(run("--no-such-flag").code, 2);
    EXPECT_EQ(run("").code, 2);
}

TEST(Cli, Verify) {
    const auto ok = run("verify " + sample("c4.g") + " " + sample("c4.w") + " --k 2");
    EXPECT_EQ(ok.code, 0);
    EXPECT_EQ(ok.out.rfind("ok", 0), 0u);
    const auto bad = run("verify " + sample("c4.g") + " " + sample("c4_flat.w"));
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.out.find("conflicts=4"), std::string::npos);
    EXPECT_EQ(run("verify " + sample("c4.g") + " " + sample("c4.w") + " --k 1").code, 1);
}

TEST(Cli, GenIsSeedDeterministic) {
    const auto a = run("--seed 5 gen random-regular:30:4");
    const auto b = run("--seed 5 gen random-regular:30:4");
    const auto c = run("--seed 6 gen random-regular:30:4");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
    EXPECT_EQ(*regweight::is_regular(regweight::parse_graph(a.out)), 4u);
    EXPECT_EQ(run("gen nosuchfamily:3").code, 2);
}

TEST(Cli, Oracle) {
    const auto r = run("oracle --kmax 3 " + sample("k3.g"));
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema"], "regweight.oracle/1");
    EXPECT_EQ(j["min_k"], 3);
    EXPECT_EQ(j["proven_infeasible_below"], 3);
    const auto k2 = nlohmann::json::parse(run("oracle --kmax 3 " + sample("k2.g")).out);
    EXPECT_EQ(k2["status"], "infeasible");
    EXPECT_TRUE(k2["min_k"].is_null());
}

TEST(Cli, Decompose) {
    const auto r = run("decompose --mode half " + sample("c4.g"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "0 1 0\n1 2 1\n2 3 0\n3 0 1\n");
    EXPECT_EQ(run("decompose --mode 9-16 " + sample("petersen.g")).code, 0);
    EXPECT_EQ(run("decompose --mode thirds " + sample("c4.g")).code, 2);
}

TEST(Cli, Certify) {
    const auto r = run("--json certify --d 100000000");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema"], "regweight.certify/1");
    EXPECT_TRUE(j["all_hold"].get<bool>());
    EXPECT_EQ(run("certify --d 1000").code, 1);
}

TEST(Cli, JsonReportAndOutFile) {
    const auto out = scratch("petersen.w");
    const auto r = run("--json --out " + out.string() + " solve --algo t2 " + sample("petersen.g"));
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema"], "regweight.run/1");
    EXPECT_EQ(j["command"], "solve");
    EXPECT_EQ(j["verdict"]["conflicts"], 0);
    EXPECT_EQ(j["outputs"][0], out.string());
    EXPECT_EQ(j["input_digest"].get<std::string>().rfind("fnv1a64:", 0), 0u);
    EXPECT_TRUE(j.contains("millis"));
    // The written weighting verifies through the CLI as well.
    EXPECT_EQ(run("verify " + sample("petersen.g") + " " + out.string() + " --k 4").code, 0);
}

TEST(Cli, PipelineStateDump) {
    const auto graph = scratch("r50.g");
    ASSERT_EQ(run("--seed 3 --out " + graph.string() + " gen random-regular:600:50").code, 0);
    const auto dump = scratch("state.json");
    const auto r = run("--seed 4 pipeline --preset desk --dump-state " + dump.string() + " " + graph.string());
    EXPECT_TRUE(r.code == 0 || r.code == 1);
    const auto j = nlohmann::json::parse(slurp(dump));
    EXPECT_EQ(j["schema"], "regweight.pipeline-state/1");
    EXPECT_EQ(j["d"], 50);
    EXPECT_EQ(j["success"].get<bool>(), r.code == 0);
    ASSERT_FALSE(j["stages"].empty());
    EXPECT_EQ(j["stages"][0]["stage"], "sample_v0");
    // Same seed, same dump.
    const auto again = scratch("state2.json");
    run("--seed 4 pipeline --preset desk --dump-state " + again.string() + " " + graph.string());
    EXPECT_EQ(slurp(dump), slurp(again));
}

TEST(Cli, BatchCubic) {
    const auto r = run("batch --threads 2 " + sample("cubic50.manifest"));
    ASSERT_EQ(r.code, 0);
    const auto rows = data_rows(r.out);
    ASSERT_EQ(rows.size(), 51u);
    EXPECT_EQ(rows[0], "instance,n,d,algo,conflicts,max_weight,millis,status,message");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].rfind("random-regular:40:3,40,3,t2,0,", 0), 0u) << rows[i];
        EXPECT_NE(rows[i].find(",ok,"), std::string::npos) << rows[i];
    }
    // Instance seeds are derived per row, so thread count does not change the output.
    const auto single = run("batch --threads 1 " + sample("cubic50.manifest"));
    auto strip_millis = [](std::vector<std::string> rs) {
        for (auto& row : rs) {
            std::vector<std::string> f;
            std::stringstream in(row);
            for (std::string x; std::getline(in, x, ',');) f.push_back(x);
            if (f.size() > 6) f[6].clear();
            row.clear();
            for (auto& x : f) row += x + ",";
        }
        return rs;
    };
    EXPECT_EQ(strip_millis(rows), strip_millis(data_rows(single.out)));
}

TEST(Cli, BatchEmptyAndMixed) {
    const auto empty = run("batch " + sample("empty.manifest"));
    EXPECT_EQ(empty.code, 0);
    EXPECT_EQ(data_rows(empty.out).size(), 1u);

    const auto manifest = scratch("mixed.manifest");
    std::ofstream(manifest) << "petersen\n" << sample("broken.g") << "\ncycle:9\n";
    const auto mixed = run("batch " + manifest.string());
    EXPECT_EQ(mixed.code, 0);
    const auto rows = data_rows(mixed.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_NE(rows[1].find(",ok,"), std::string::npos);
    EXPECT_NE(rows[2].find(",error,"), std::string::npos);
    EXPECT_NE(rows[2].find("line"), std::string::npos) << rows[2];
    EXPECT_NE(rows[3].find(",ok,"), std::string::npos);
}
