// regweight: command-line front end for generation, solving, verification, exhaustive search,
// decomposition, the randomized pipeline, the numeric certifier and batch runs.
//
// Exit codes: 0 success, 1 solve/verify failure, 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "regweight/regweight.hpp"

namespace rw = regweight;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;
constexpr const char* kBatchSchema = "regweight.batch/1";

/// Input error: bad file, bad flag combination.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), {}};
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

struct Globals {
    std::uint64_t seed = 1;
    std::string out;
    bool json = false;
    std::string command_line;
};

/// Machine-readable summary of one command.
struct RunReport {
    nlohmann::json body;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    RunReport(const Globals& g, const std::string& command) {
        body = {{"schema", rw::kRunSchema}, {"command", command}, {"argv", g.command_line}, {"seed", g.seed}};
        body["outputs"] = nlohmann::json::array();
    }

    void input(const std::string& path, const std::string& bytes) {
        body["input"] = path;
        body["input_digest"] = "fnv1a64:" + hex64(fnv1a(bytes));
    }

    void output(const std::string& path) {
        if (!path.empty() && path != "-") body["outputs"].push_back(path);
    }

    std::string dump() {
        body["millis"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
        return body.dump(2) + "\n";
    }
};

rw::Graph load_graph(const std::string& path, std::string* bytes = nullptr) {
    std::string text = read_text(path);
    auto g = rw::parse_graph(text);
    if (bytes) *bytes = std::move(text);
    return g;
}

/// Writes `payload` to --out (or stdout), and the report to stdout when --json.
int finish(const Globals& g, RunReport& report, const std::string& payload, int code) {
    if (g.json) {
        if (!g.out.empty()) {
            write_text(g.out, payload);
            report.output(g.out);
        } else if (!payload.empty()) {
            report.body["payload"] = payload;
        }
        report.body["exit_code"] = code;
        std::cout << report.dump();
    } else {
        write_text(g.out, payload);
    }
    return code;
}

// --- gen -------------------------------------------------------------------------------------

int cmd_gen(const Globals& g, const std::string& spec) {
    RunReport report(g, "gen");
    const auto graph = rw::generate(spec, g.seed);
    report.body["family"] = spec;
    report.body["n"] = graph.vertex_count();
    report.body["m"] = graph.edge_count();
    return finish(g, report, rw::serialize_graph(graph), kOk);
}

// --- solve -----------------------------------------------------------------------------------

struct SolveOptions {
    std::string graph;
    std::string algo = "t2";
    std::string preset;
    bool seed_given = false;
    std::string trace;
};

int cmd_solve(const Globals& g, const SolveOptions& o) {
    RunReport report(g, "solve");
    std::string bytes;
    const auto graph = load_graph(o.graph, &bytes);
    report.input(o.graph, bytes);
    report.body["algo"] = o.algo;
    if (o.algo == "t2") {
        const auto r = rw::solve_theorem2_detailed(graph);
        const auto v = rw::verify(graph, r.weighting, rw::weight_set(4));
        report.body["verdict"] = {{"conflicts", v.conflicts.size()}, {"weight_violations", v.weight_violations.size()}};
        if (!o.trace.empty()) {
            write_text(o.trace, rw::to_json(r.trace).dump(2) + "\n");
            report.output(o.trace);
        }
        return finish(g, report, rw::serialize_weighting(graph, r.weighting), v.ok() ? kOk : kFailure);
    }
    if (o.algo == "t3") {
        if (o.preset.empty() || !o.seed_given) throw UsageError("--algo t3 requires --preset and --seed");
        const auto cfg = rw::PipelineConfig::preset(o.preset);
        const auto r = rw::solve_theorem3(graph, cfg, g.seed);
        report.body["preset"] = o.preset;
        report.body["verdict"] = {{"success", r.success},
                                  {"failed_stage", r.failed_stage},
                                  {"message", r.message},
                                  {"conflicts", r.conflicts.total()}};
        if (!o.trace.empty()) {
            write_text(o.trace, rw::to_json(graph, r).dump(2) + "\n");
            report.output(o.trace);
        }
        if (!r.success) {
            std::cerr << "solve: " << r.message << "\n";
            return finish(g, report, "", kFailure);
        }
        return finish(g, report, rw::serialize_weighting(graph, *r.weighting), kOk);
    }
    throw UsageError("unknown --algo '" + o.algo + "' (expected t2 or t3)");
}

// --- verify ----------------------------------------------------------------------------------

int cmd_verify(const Globals& g, const std::string& graph_path, const std::string& weights_path, std::int64_t k) {
    RunReport report(g, "verify");
    std::string bytes;
    const auto graph = load_graph(graph_path, &bytes);
    report.input(graph_path, bytes);
    const auto w = rw::parse_weighting(graph, read_text(weights_path));
    const rw::Weight allowed = k > 0 ? k : w.max_weight();
    const auto v = rw::verify(graph, w, rw::weight_set(allowed));
    std::ostringstream text;
    text << (v.ok() ? "ok" : "conflict") << " conflicts=" << v.conflicts.size()
         << " weight_violations=" << v.weight_violations.size() << " k=" << allowed << "\n";
    for (rw::EdgeId id : v.conflicts) {
        const auto& e = graph.edge(id);
        text << "conflict " << e.u << " " << e.v << " sum " << v.sums[e.u] << "\n";
    }
    report.body["verdict"] = {{"ok", v.ok()},
                              {"conflicts", v.conflicts.size()},
                              {"weight_violations", v.weight_violations.size()},
                              {"k", allowed}};
    return finish(g, report, g.json ? "" : text.str(), v.ok() ? kOk : kFailure);
}

// --- oracle ----------------------------------------------------------------------------------

int cmd_oracle(const Globals& g, const std::string& graph_path, std::int64_t kmax, std::uint64_t budget) {
    RunReport report(g, "oracle");
    std::string bytes;
    const auto graph = load_graph(graph_path, &bytes);
    report.input(graph_path, bytes);
    const auto r = rw::min_weights(graph, kmax, budget);
    auto result = rw::to_json(r);
    report.body["result"] = result;
    if (!g.out.empty() && r.witness) {
        write_text(g.out, rw::serialize_weighting(graph, *r.witness));
        report.output(g.out);
    }
    const int code = r.status == rw::SearchStatus::found ? kOk : kFailure;
    if (g.json) {
        report.body["exit_code"] = code;
        std::cout << report.dump();
    } else {
        std::cout << result.dump(2) << "\n";
    }
    return code;
}

// --- decompose -------------------------------------------------------------------------------

int cmd_decompose(const Globals& g, const std::string& graph_path, const std::string& mode) {
    RunReport report(g, "decompose");
    std::string bytes;
    const auto graph = load_graph(graph_path, &bytes);
    report.input(graph_path, bytes);
    std::vector<std::uint8_t> side(graph.edge_count(), 0);
    if (mode == "half") {
        side = rw::split_half(graph).side;
    } else if (mode == "9-16") {
        for (rw::EdgeId id : rw::nine_sixteenths_subgraph(graph)) side[id] = 1;
    } else {
        throw UsageError("unknown --mode '" + mode + "' (expected half or 9-16)");
    }
    std::ostringstream text;
    for (rw::EdgeId id = 0; id < graph.edge_count(); ++id) {
        text << graph.edge(id).u << ' ' << graph.edge(id).v << ' ' << int(side[id]) << '\n';
    }
    report.body["mode"] = mode;
    return finish(g, report, text.str(), kOk);
}

// --- pipeline --------------------------------------------------------------------------------

int cmd_pipeline(const Globals& g, const std::string& graph_path, const std::string& preset, const std::string& dump) {
    RunReport report(g, "pipeline");
    std::string bytes;
    const auto graph = load_graph(graph_path, &bytes);
    report.input(graph_path, bytes);
    const auto cfg = rw::PipelineConfig::preset(preset);
    const auto r = rw::solve_theorem3(graph, cfg, g.seed);
    if (!dump.empty()) {
        write_text(dump, rw::to_json(graph, r).dump(1) + "\n");
        report.output(dump);
    }
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : r.state.stages) {
        stages.push_back({{"stage", s.stage}, {"accepted", s.accepted}, {"attempts", s.attempts}, {"detail", s.detail}});
    }
    report.body["preset"] = preset;
    report.body["verdict"] = {{"success", r.success}, {"failed_stage", r.failed_stage}, {"message", r.message}};
    report.body["stages"] = stages;
    if (!g.json) {
        for (const auto& s : r.state.stages) {
            std::cerr << (s.accepted ? "ok    " : "FAIL  ") << s.stage << " attempts=" << s.attempts
                      << (s.detail.empty() ? "" : " " + s.detail) << "\n";
        }
    }
    const std::string payload = r.success ? rw::serialize_weighting(graph, *r.weighting) : "";
    return finish(g, report, payload, r.success ? kOk : kFailure);
}

// --- certify ---------------------------------------------------------------------------------

int cmd_certify(const Globals& g, std::int64_t d) {
    const auto r = rw::certify(d);
    std::string text;
    if (g.json) {
        text = rw::to_json(r).dump(2) + "\n";
    } else {
        std::ostringstream out;
        for (const auto& c : r.checks) {
            out << (c.holds ? "holds " : "FAILS ") << c.name << "  " << c.lhs << ' ' << c.relation << ' ' << c.rhs
                << "  margin " << c.margin;
            if (!c.note.empty()) out << "  (" << c.note << ")";
            out << '\n';
        }
        if (!r.in_guaranteed_range) out << "note: d < 10^8 lies outside the guaranteed range\n";
        text = out.str();
    }
    write_text(g.out, text);
    return r.all_hold() ? kOk : kFailure;
}

// --- batch -----------------------------------------------------------------------------------

std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c == '\n' ? ' ' : c;
    }
    return q + "\"";
}

struct BatchRow {
    std::string instance;
    std::string n, d, conflicts, max_weight, millis;
    std::string status = "error";
    std::string message;
};

BatchRow run_instance(const std::string& entry, std::size_t index, const std::string& algo, const std::string& preset,
                      std::uint64_t seed) {
    BatchRow row;
    row.instance = entry;
    const auto start = std::chrono::steady_clock::now();
    try {
        const std::uint64_t s = rw::derive_seed(seed, index);
        const auto colon = entry.find(':');
        const bool family = rw::is_known_family(entry.substr(0, colon));
        const auto graph = family ? rw::generate(entry, s) : load_graph(entry);
        row.n = std::to_string(graph.vertex_count());
        const auto d = rw::is_regular(graph);
        row.d = d ? std::to_string(*d) : "";
        std::optional<rw::EdgeWeighting> w;
        if (algo == "t2") {
            w = rw::solve_theorem2(graph);
        } else {
            const auto r = rw::solve_theorem3(graph, rw::PipelineConfig::preset(preset), s);
            if (!r.success) {
                row.conflicts = std::to_string(r.conflicts.total());
                row.status = "failed";
                row.message = r.message;
            }
            w = r.weighting;
        }
        if (w) {
            const auto v = rw::verify(graph, *w, rw::weight_set(algo == "t2" ? 4 : 3));
            row.conflicts = std::to_string(v.conflicts.size());
            rw::Weight top = 0;
            for (rw::Weight x : w->values()) top = std::max(top, x);
            row.max_weight = std::to_string(top);
            row.status = v.ok() ? "ok" : "failed";
        }
    } catch (const std::exception& e) {
        row.status = "error";
        row.message = e.what();
    }
    row.millis = std::to_string(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
    return row;
}

int cmd_batch(const Globals& g, const std::string& manifest, const std::string& algo, const std::string& preset,
              unsigned threads) {
    if (algo != "t2" && algo != "t3") throw UsageError("unknown --algo '" + algo + "' (expected t2 or t3)");
    if (algo == "t3" && preset.empty()) throw UsageError("--algo t3 requires --preset");
    std::vector<std::string> entries;
    {
        std::istringstream in(read_text(manifest));
        std::string line;
        while (std::getline(in, line)) {
            const auto t = std::string(rw::detail::trim(line));
            if (!t.empty() && t[0] != '#') entries.push_back(t);
        }
    }
    std::vector<BatchRow> rows(entries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < entries.size();) rows[i] = run_instance(entries[i], i, algo, preset, g.seed);
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::min<std::size_t>(threads, entries.size()); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv << "# " << kBatchSchema << "\n";
    csv << "instance,n,d,algo,conflicts,max_weight,millis,status,message\n";
    for (const auto& r : rows) {
        csv << csv_field(r.instance) << ',' << r.n << ',' << r.d << ',' << algo << ',' << r.conflicts << ','
            << r.max_weight << ',' << r.millis << ',' << r.status << ',' << csv_field(r.message) << '\n';
    }
    write_text(g.out, csv.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vertex-colouring edge weightings of regular graphs"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    for (int i = 0; i < argc; ++i) g.command_line += (i ? " " : "") + std::string(argv[i]);
    auto* seed_opt = app.add_option("--seed", g.seed, "Master seed; sub-seeds are derived per stage or instance");
    app.add_option("--out", g.out, "Output file (default stdout)");
    app.add_flag("--json", g.json, "Print a JSON run report");

    std::string spec;
    auto* gen = app.add_subcommand("gen", "Generate a graph family, e.g. random-regular:100:3");
    gen->add_option("spec", spec, "Family spec")->required();

    SolveOptions solve_opts;
    auto* solve = app.add_subcommand("solve", "Compute a weighting");
    solve->add_option("graph", solve_opts.graph, "Graph file")->required();
    solve->add_option("--algo", solve_opts.algo, "t2 (weights 1..4) or t3 (randomized, weights 1..3)");
    solve->add_option("--preset", solve_opts.preset, "Pipeline preset for t3: paper or desk");
    solve->add_option("--trace", solve_opts.trace, "Write the solver trace (t2) or state dump (t3) as JSON");

    std::string graph_path, weights_path;
    std::int64_t verify_k = 0;
    auto* verify = app.add_subcommand("verify", "Check a weighting for sum conflicts");
    verify->add_option("graph", graph_path, "Graph file")->required();
    verify->add_option("weights", weights_path, "Weighting file")->required();
    verify->add_option("--k", verify_k, "Allowed weights 1..k (default: largest weight present)");

    std::int64_t kmax = 3;
    std::uint64_t budget = std::numeric_limits<std::uint64_t>::max();
    auto* oracle = app.add_subcommand("oracle", "Exhaustive minimum-k search");
    oracle->add_option("graph", graph_path, "Graph file")->required();
    oracle->add_option("--kmax", kmax, "Largest k to try");
    oracle->add_option("--budget-nodes", budget, "Search node budget; exhaustion reports unknown");

    std::string mode = "half";
    auto* decompose = app.add_subcommand("decompose", "Eulerian edge splits, output 'u v side'");
    decompose->add_option("graph", graph_path, "Graph file")->required();
    decompose->add_option("--mode", mode, "half or 9-16");

    std::string preset = "desk", dump;
    auto* pipeline = app.add_subcommand("pipeline", "Run the randomized 3-weighting pipeline");
    pipeline->add_option("graph", graph_path, "Graph file")->required();
    pipeline->add_option("--preset", preset, "paper or desk");
    pipeline->add_option("--dump-state", dump, "Write the pipeline state as JSON");

    std::int64_t cert_d = 100000000;
    auto* certify = app.add_subcommand("certify", "Evaluate the numeric bounds of the construction");
    certify->add_option("--d", cert_d, "Degree");

    std::string manifest, batch_algo = "t2", batch_preset;
    unsigned threads = 0;
    auto* batch = app.add_subcommand("batch", "Solve every manifest entry, CSV output");
    batch->add_option("manifest", manifest, "One family spec or graph path per line")->required();
    batch->add_option("--algo", batch_algo, "t2 or t3");
    batch->add_option("--preset", batch_preset, "Preset for t3");
    batch->add_option("--threads", threads, "Worker threads (default: hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) return cmd_gen(g, spec);
        if (*solve) {
            solve_opts.seed_given = seed_opt->count() > 0;
            return cmd_solve(g, solve_opts);
        }
        if (*verify) return cmd_verify(g, graph_path, weights_path, verify_k);
        if (*oracle) return cmd_oracle(g, graph_path, kmax, budget);
        if (*decompose) return cmd_decompose(g, graph_path, mode);
        if (*pipeline) return cmd_pipeline(g, graph_path, preset, dump);
        if (*certify) return cmd_certify(g, cert_d);
        if (*batch) return cmd_batch(g, manifest, batch_algo, batch_preset, threads);
    } catch (const rw::InvariantViolation& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
