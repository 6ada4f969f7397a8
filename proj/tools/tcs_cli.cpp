// Command-line front end. Talks to the library only through the C API.
#include "tcs/tcs.h"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct CliFailure {
    int code;
    std::string message;
};

void check(tcs_status s) {
    if (s != TCS_OK) throw CliFailure{static_cast<int>(s), tcs_last_error()};
}

std::string take(char* s) {
    std::string out = s ? s : "";
    tcs_string_free(s);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliFailure{2, "cannot open '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) throw CliFailure{2, "cannot write '" + path.string() + "'"};
}

Json read_json(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw CliFailure{2, path + ": invalid JSON: " + e.what()};
    }
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw CliFailure{2, "cannot create '" + dir + "': " + ec.message()};
    return fs::path(dir);
}

// Handles are released on scope exit.
struct Dataset {
    tcs_dataset* h = nullptr;
    ~Dataset() { tcs_dataset_free(h); }
};
struct Graph {
    tcs_graph* h = nullptr;
    ~Graph() { tcs_graph_free(h); }
};
struct Run {
    tcs_run* h = nullptr;
    ~Run() { tcs_run_free(h); }
};

struct Globals {
    unsigned threads = 0;
    std::optional<std::uint64_t> seed;
};

// --seed wins, then a seed in the config file, then TCS_SEED.
void apply_seed(Json& cfg, const Globals& g) {
    if (g.seed) {
        cfg["seed"] = *g.seed;
        return;
    }
    if (cfg.contains("seed")) return;
    if (const char* env = std::getenv("TCS_SEED"); env && *env) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (*end != '\0') throw CliFailure{1, "TCS_SEED must be a non-negative integer"};
        cfg["seed"] = static_cast<std::uint64_t>(v);
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// ---------------------------------------------------------------- generate-synthetic

struct GenerateArgs {
    std::string config;
    std::string out_dir;
    std::optional<int> n_vars, n_steps, warmup, min_lag, max_lag, n_edges;
    std::optional<double> edge_probability, noise_scale;
    std::optional<std::string> graph_model, functions, noises, noise_mode;
};

int run_generate(const GenerateArgs& a, const Globals& g) {
    Json cfg = a.config.empty() ? Json::object() : read_json(a.config);
    if (!cfg.is_object()) throw CliFailure{1, a.config + ": expected a JSON object"};
    auto set = [&](const char* key, const auto& v) {
        if (v) cfg[key] = *v;
    };
    set("n_vars", a.n_vars);
    set("n_steps", a.n_steps);
    set("warmup", a.warmup);
    set("min_lag", a.min_lag);
    set("max_lag", a.max_lag);
    set("n_edges", a.n_edges);
    set("edge_probability", a.edge_probability);
    set("noise_scale", a.noise_scale);
    set("graph_model", a.graph_model);
    set("noise_mode", a.noise_mode);
    if (a.functions) cfg["functions"] = split_list(*a.functions);
    if (a.noises) cfg["noises"] = split_list(*a.noises);
    apply_seed(cfg, g);

    Dataset data;
    Graph graph;
    char* echo = nullptr;
    check(tcs_generate_synthetic(cfg.dump().c_str(), &data.h, &graph.h, &echo));
    const std::string echo_text = take(echo);
    const fs::path dir = prepare_dir(a.out_dir);
    check(tcs_dataset_save_csv(data.h, (dir / "data.csv").string().c_str()));
    check(tcs_graph_save(graph.h, (dir / "graph.json").string().c_str()));
    write_file(dir / "config.json", echo_text);
    std::cout << "wrote " << tcs_dataset_rows(data.h) << " rows x " << tcs_dataset_cols(data.h) << " series, "
              << tcs_graph_edge_count(graph.h) << " lagged edges to " << dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------- discover

struct DiscoverArgs {
    std::string input;
    std::string out_dir;
    std::string config;
    bool no_header = false;
    std::optional<std::string> algorithm, oracle_graph;
    std::optional<int> max_lag;
    std::optional<double> alpha, lambda_w, lambda_a, tau;
};

int run_discover(const DiscoverArgs& a, const Globals&) {
    Json cfg = a.config.empty() ? Json::object() : read_json(a.config);
    if (!cfg.is_object()) throw CliFailure{1, a.config + ": expected a JSON object"};
    if (a.algorithm) cfg["algorithm"] = *a.algorithm;
    if (a.max_lag) cfg["max_lag"] = *a.max_lag;
    if (a.alpha) cfg["alpha"] = *a.alpha;
    if (a.lambda_w) cfg["lambda_w"] = *a.lambda_w;
    if (a.lambda_a) cfg["lambda_a"] = *a.lambda_a;
    if (a.tau) cfg["tau_w"] = cfg["tau_a"] = *a.tau;
    if (a.oracle_graph) {
        cfg["oracle_graph"] = read_json(*a.oracle_graph);
        if (!a.algorithm) cfg["algorithm"] = "oracle";
    }

    Dataset data;
    check(tcs_dataset_load_csv(a.input.c_str(), a.no_header ? 0 : 1, &data.h));
    Graph graph;
    char* scores = nullptr;
    char* summary = nullptr;
    check(tcs_discover(data.h, cfg.dump().c_str(), &graph.h, &scores, &summary));
    const std::string scores_text = take(scores);
    const std::string summary_text = take(summary);
    const fs::path dir = prepare_dir(a.out_dir);
    check(tcs_graph_save(graph.h, (dir / "graph.json").string().c_str()));
    write_file(dir / "scores.csv", scores_text);
    write_file(dir / "discovery.json", summary_text);
    std::cout << "found " << tcs_graph_edge_count(graph.h) << " lagged edges; wrote " << dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string input;
    std::string config;
    std::string out_dir;
    bool no_header = false;
    bool timing = false;
    int repeats = 1;
    std::optional<std::string> oracle_graph;
    std::optional<int> sample_length;
};

void simulate_once(const Dataset& data, const Json& cfg, const fs::path& dir, bool timing) {
    Run run;
    check(tcs_simulate(data.h, cfg.dump().c_str(), &run.h));
    Dataset sim;
    check(tcs_run_simulated(run.h, &sim.h));
    Graph graph;
    check(tcs_run_graph(run.h, &graph.h));
    char* report = nullptr;
    check(tcs_run_report_json(run.h, &report));
    const std::string report_text = take(report);
    prepare_dir(dir.string());
    check(tcs_dataset_save_csv(sim.h, (dir / "simulated.csv").string().c_str()));
    check(tcs_graph_save(graph.h, (dir / "graph.json").string().c_str()));
    write_file(dir / "report.json", report_text);
    if (timing) {
        char* t = nullptr;
        check(tcs_run_timing_json(run.h, &t));
        write_file(dir / "timing.json", take(t));
    }
    std::cout << "selected candidate " << tcs_run_selected(run.h) << " (" << tcs_graph_edge_count(graph.h)
              << " edges); wrote " << dir.string() << "\n";
}

int run_simulate(const SimulateArgs& a, const Globals& g) {
    Json cfg = a.config.empty() ? Json::object() : read_json(a.config);
    if (!cfg.is_object()) throw CliFailure{1, a.config + ": expected a JSON object"};
    if (a.oracle_graph) cfg["cd_space"] = Json::array({{{"algorithm", "oracle"}, {"oracle_graph", read_json(*a.oracle_graph)}}});
    if (a.sample_length) cfg["sample_length"] = *a.sample_length;
    apply_seed(cfg, g);
    if (a.repeats < 1) throw CliFailure{1, "--repeats must be at least 1"};

    Dataset data;
    check(tcs_dataset_load_csv(a.input.c_str(), a.no_header ? 0 : 1, &data.h));
    if (a.repeats == 1) {
        simulate_once(data, cfg, a.out_dir, a.timing);
        return 0;
    }
    // Each repeat is a full re-run with seed + k.
    const std::uint64_t base = cfg.value("seed", std::uint64_t{0});
    for (int k = 0; k < a.repeats; ++k) {
        Json rc = cfg;
        rc["seed"] = base + static_cast<std::uint64_t>(k);
        simulate_once(data, rc, fs::path(a.out_dir) / ("repeat_" + std::to_string(k)), a.timing);
    }
    return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string real;
    std::string sim;
    std::string out;
    std::string config;
    bool no_header = false;
    std::optional<std::string> windows;
};

int run_evaluate(const EvaluateArgs& a, const Globals& g) {
    Json opts = a.config.empty() ? Json::object() : read_json(a.config);
    if (!opts.is_object()) throw CliFailure{1, a.config + ": expected a JSON object"};
    if (a.windows) {
        Json w = Json::array();
        for (const auto& s : split_list(*a.windows)) {
            try {
                w.push_back(std::stoi(s));
            } catch (const std::exception&) {
                throw CliFailure{1, "--windows expects a comma-separated list of integers"};
            }
        }
        opts["detector_space"] = {{"default_grid", w}};
    }
    apply_seed(opts, g);
    Dataset real;
    Dataset sim;
    check(tcs_dataset_load_csv(a.real.c_str(), a.no_header ? 0 : 1, &real.h));
    check(tcs_dataset_load_csv(a.sim.c_str(), a.no_header ? 0 : 1, &sim.h));
    char* report = nullptr;
    check(tcs_evaluate(real.h, sim.h, opts.dump().c_str(), &report));
    const std::string text = take(report);
    if (a.out.empty() || a.out == "-") {
        std::cout << text;
    } else {
        const fs::path p(a.out);
        if (p.has_parent_path()) prepare_dir(p.parent_path().string());
        write_file(p, text);
    }
    return 0;
}

// ---------------------------------------------------------------- report

int run_report(const std::vector<std::string>& files) {
    int worst = 0;
    for (const auto& f : files) {
        const std::string text = read_file(f);
        char* kind = nullptr;
        const tcs_status s = tcs_validate_json(text.c_str(), &kind);
        if (s != TCS_OK) {
            // An invalid document is bad input data, whatever the validator's category.
            std::cerr << f << ": INVALID: " << tcs_last_error() << "\n";
            worst = std::max(worst, s == TCS_E_INTERNAL ? 4 : 2);
            continue;
        }
        const std::string k = take(kind);
        std::cout << f << ": valid " << k << "\n";
        if (k == "report") {
            const Json j = Json::parse(text);
            const auto& sel = j["candidates"][j["selected"].get<std::size_t>()];
            std::cout << "  candidates: " << j["candidates"].size() << ", detectors: " << j["detectors"].size()
                      << "\n  min-max winner: " << j["minmax"]["candidate"] << " (worst-case AUC "
                      << j["minmax"]["score"] << ", detector " << j["minmax"]["optimal_detector_label"].get<std::string>()
                      << ")\n  selected: " << j["selected"] << " [" << sel["phases"]["graph_estimation"].get<std::string>()
                      << " / " << sel["phases"]["predictive_modeling"].get<std::string>() << " / "
                      << sel["phases"]["noise_modeling"].get<std::string>() << "], " << sel["edge_count"]
                      << " edges, equivalence set size " << j["sparsity"]["equivalence_set"].size() << "\n";
            for (const auto& w : j["warnings"]) std::cout << "  warning: " << w.get<std::string>() << "\n";
        } else if (k == "evaluation") {
            const Json j = Json::parse(text);
            std::cout << "  min-max AUC " << j["minmax_auc"] << ", MMD " << j["mmd"]["estimate"] << "\n";
        }
    }
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal causal-based simulation: learn a lagged causal model from a time series, simulate from it "
                 "and score the simulation with two-sample detectors."};
    app.require_subcommand(1);
    Globals globals;
    std::uint64_t seed = 0;
    app.add_option("--threads", globals.threads, "Worker threads (0 = all cores)")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "Master seed (default: config file, then TCS_SEED, then 0)");
    app.fallthrough();

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate-synthetic", "Sample a random temporal SCM and write data, graph and config");
    g->add_option("--out-dir", gen.out_dir, "Output directory")->required();
    g->add_option("--config", gen.config, "Generator config JSON; flags override its fields");
    g->add_option("--n-vars", gen.n_vars);
    g->add_option("--n-steps", gen.n_steps, "Total steps T including warmup");
    g->add_option("--warmup", gen.warmup);
    g->add_option("--min-lag", gen.min_lag);
    g->add_option("--max-lag", gen.max_lag);
    g->add_option("--edge-probability", gen.edge_probability);
    g->add_option("--n-edges", gen.n_edges, "Exact edge count (Erdos-Renyi only)");
    g->add_option("--graph-model", gen.graph_model, "erdos-renyi or barabasi-albert");
    g->add_option("--functions", gen.functions, "Comma-separated function kinds");
    g->add_option("--noises", gen.noises, "Comma-separated noise families (normal, uniform)");
    g->add_option("--noise-scale", gen.noise_scale);
    g->add_option("--noise-mode", gen.noise_mode, "additive or multiplicative");

    DiscoverArgs disc;
    auto* d = app.add_subcommand("discover", "Estimate a lagged causal graph");
    d->add_option("--input", disc.input, "Data CSV")->required();
    d->add_option("--out-dir", disc.out_dir, "Output directory")->required();
    d->add_option("--config", disc.config, "CD config JSON; flags override its fields");
    d->add_option("--algorithm", disc.algorithm, "lagged-pc, dynotears or oracle");
    d->add_option("--max-lag", disc.max_lag);
    d->add_option("--alpha", disc.alpha, "lagged-pc significance level");
    d->add_option("--lambda-w", disc.lambda_w);
    d->add_option("--lambda-a", disc.lambda_a);
    d->add_option("--tau", disc.tau, "Weight threshold for both W and A");
    d->add_option("--oracle-graph", disc.oracle_graph, "Graph JSON returned as-is");
    d->add_flag("--no-header", disc.no_header, "The CSV has no header row");

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Search the candidate grid and simulate from the selected model");
    s->add_option("--input", sim.input, "Data CSV")->required();
    s->add_option("--out-dir", sim.out_dir, "Output directory")->required();
    s->add_option("--config", sim.config, "TCS config JSON");
    s->add_option("--oracle-graph", sim.oracle_graph, "Replace graph estimation with this graph");
    s->add_option("--sample-length", sim.sample_length, "Rows to simulate and compare");
    s->add_option("--repeats", sim.repeats, "Full re-runs with seeds seed..seed+k-1, written to repeat_<k>/")
        ->capture_default_str();
    s->add_flag("--timing", sim.timing, "Also write wall-clock timings to timing.json");
    s->add_flag("--no-header", sim.no_header, "The CSV has no header row");

    EvaluateArgs ev;
    auto* e = app.add_subcommand("evaluate", "Compare real and simulated data with detectors, MMD and ADF");
    e->add_option("--real", ev.real, "Real data CSV")->required();
    e->add_option("--sim", ev.sim, "Simulated data CSV")->required();
    e->add_option("--out", ev.out, "Report path (default: stdout)");
    e->add_option("--config", ev.config, "Options JSON: detector_space, seed, adf_lags");
    e->add_option("--windows", ev.windows, "Window lengths for the default detector grid, e.g. 1,10");
    e->add_flag("--no-header", ev.no_header, "The CSVs have no header row");

    std::vector<std::string> report_files;
    auto* r = app.add_subcommand("report", "Validate JSON documents and summarise reports");
    r->add_option("files", report_files, "JSON files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::CallForAllHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        std::cerr << "error: " << ex.what() << "\n\n" << app.help();
        return 1;
    }
    if (*seed_opt) globals.seed = seed;

    try {
        check(tcs_set_threads(globals.threads));
        if (*g) return run_generate(gen, globals);
        if (*d) return run_discover(disc, globals);
        if (*s) return run_simulate(sim, globals);
        if (*e) return run_evaluate(ev, globals);
        if (*r) return run_report(report_files);
    } catch (const CliFailure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 4;
    }
    return 1;
}
