#include "tcs/json_io.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace tcs {

namespace {

// In-memory documents may hold non-negative values as signed integers; parsed
// ones hold them as unsigned.
bool is_non_negative_integer(const Json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::string type_name(const Json& j) { return j.type_name(); }

// Strict object reader: typed optional fields, unknown keys rejected on finish().
class Reader {
public:
    Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j.is_object()) fail("", "expected an object, got " + type_name(j));
    }

    const Json* raw(const std::string& key) {
        used_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void get(const std::string& key, int& out) {
        if (const Json* v = raw(key)) {
            if (!v->is_number_integer()) fail(key, "expected an integer, got " + type_name(*v));
            const auto x = v->get<std::int64_t>();
            if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) fail(key, "out of range");
            out = static_cast<int>(x);
        }
    }
    void get(const std::string& key, long& out) {
        if (const Json* v = raw(key)) {
            if (!v->is_number_integer()) fail(key, "expected an integer, got " + type_name(*v));
            out = static_cast<long>(v->get<std::int64_t>());
        }
    }
    void get(const std::string& key, std::uint64_t& out) {
        if (const Json* v = raw(key)) {
            if (!is_non_negative_integer(*v)) fail(key, "expected a non-negative integer, got " + type_name(*v));
            out = v->get<std::uint64_t>();
        }
    }
    void get(const std::string& key, double& out) {
        if (const Json* v = raw(key)) {
            if (!v->is_number()) fail(key, "expected a number, got " + type_name(*v));
            out = v->get<double>();
        }
    }
    void get(const std::string& key, bool& out) {
        if (const Json* v = raw(key)) {
            if (!v->is_boolean()) fail(key, "expected a boolean, got " + type_name(*v));
            out = v->get<bool>();
        }
    }
    void get(const std::string& key, std::optional<int>& out) {
        if (const Json* v = raw(key)) {
            if (v->is_null()) {
                out.reset();
                return;
            }
            int x = 0;
            get(key, x);
            out = x;
        }
    }
    template <class Parse, class T>
    void get_enum(const std::string& key, T& out, Parse parse) {
        if (const Json* v = raw(key)) {
            if (!v->is_string()) fail(key, "expected a string, got " + type_name(*v));
            try {
                out = parse(v->get<std::string>());
            } catch (const Error& e) {
                fail(key, e.what());
            }
        }
    }
    template <class Parse, class T>
    void get_enum_list(const std::string& key, std::vector<T>& out, Parse parse) {
        if (const Json* v = raw(key)) {
            if (!v->is_array()) fail(key, "expected an array, got " + type_name(*v));
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_string()) fail(key, "expected an array of strings");
                try {
                    out.push_back(parse(e.get<std::string>()));
                } catch (const Error& err) {
                    fail(key, err.what());
                }
            }
        }
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) fail(it.key(), "unknown key");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    // Semantic validation, reported under this reader's path.
    template <class Config>
    void check(const Config& c) const {
        try {
            c.validate();
        } catch (const ArgumentError& e) {
            fail("", e.what());
        }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        const std::string where = key.empty() ? (path_.empty() ? "document" : path_) : at(key);
        throw ArgumentError(where + ": " + msg);
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> used_;
};

std::string to_string(NoiseMode m) { return m == NoiseMode::additive ? "additive" : "multiplicative"; }

NoiseMode noise_mode_from_string(const std::string& s) {
    if (s == "additive") return NoiseMode::additive;
    if (s == "multiplicative") return NoiseMode::multiplicative;
    throw ArgumentError("unknown noise mode '" + s + "' (expected additive or multiplicative)");
}

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

Json adf_to_json(const std::vector<AdfColumn>& cols) {
    Json out = Json::array();
    for (const auto& a : cols) {
        Json c;
        c["column"] = a.column;
        if (a.error.empty()) {
            c["t_statistic"] = a.t_statistic;
            c["critical_value_5pct"] = a.critical_value;
        } else {
            c["error"] = a.error;
        }
        c["stationary"] = a.stationary;
        out.push_back(std::move(c));
    }
    return out;
}

std::string error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::argument: return "argument";
        case ErrorKind::data: return "data";
        case ErrorKind::numeric: return "numeric";
        case ErrorKind::convergence: return "convergence";
    }
    return "?";
}

}  // namespace

// ---------------------------------------------------------------- graphs

Json graph_to_json(const LaggedGraph& g) {
    Json j;
    j["n_vars"] = g.n_vars();
    j["max_lag"] = g.max_lag();
    Json edges = Json::array();
    for (const auto& e : g.edges()) edges.push_back(Json::array({e.lag, e.cause, e.effect}));
    j["edges"] = std::move(edges);
    return j;
}

std::string format_graph_json(const LaggedGraph& g) {
    std::string out = "{\n  \"n_vars\": " + std::to_string(g.n_vars()) + ",\n  \"max_lag\": " +
                      std::to_string(g.max_lag()) + ",\n  \"edges\": [";
    const auto edges = g.edges();
    for (std::size_t k = 0; k < edges.size(); ++k)
        out += std::string(k ? "," : "") + "\n    [" + std::to_string(edges[k].lag) + ", " +
               std::to_string(edges[k].cause) + ", " + std::to_string(edges[k].effect) + "]";
    out += edges.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

LaggedGraph graph_from_json(const Json& j) {
    Reader r(j, "graph");
    int n = 0;
    int lmax = 0;
    r.get("n_vars", n);
    r.get("max_lag", lmax);
    if (n < 1) r.fail("n_vars", "must be a positive integer");
    if (lmax < 1) r.fail("max_lag", "must be a positive integer");
    std::vector<LaggedEdge> edges;
    if (const Json* e = r.raw("edges")) {
        if (!e->is_array()) r.fail("edges", "expected an array");
        for (std::size_t k = 0; k < e->size(); ++k) {
            const Json& t = (*e)[k];
            const std::string where = "edges[" + std::to_string(k) + "]";
            if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
                !t[2].is_number_integer())
                r.fail(where, "expected [tau, i, j]");
            const int lag = t[0].get<int>();
            const int i = t[1].get<int>();
            const int jj = t[2].get<int>();
            if (lag < 1 || lag > lmax) r.fail(where, "lag must be in [1, max_lag]");
            if (i < 0 || i >= n || jj < 0 || jj >= n) r.fail(where, "variable index out of range");
            edges.push_back({lag, i, jj});
        }
    } else {
        r.fail("edges", "missing");
    }
    r.finish();
    return LaggedGraph::from_edges(n, lmax, edges);
}

// ---------------------------------------------------------------- configs

Json to_json(const CDConfig& c) {
    Json j;
    j["algorithm"] = to_string(c.algorithm);
    j["max_lag"] = c.max_lag;
    j["alpha"] = c.alpha;
    j["max_cond_size"] = c.max_cond_size;
    j["max_combinations"] = c.max_combinations;
    j["lambda_w"] = c.lambda_w;
    j["lambda_a"] = c.lambda_a;
    j["tau_w"] = c.tau_w;
    j["tau_a"] = c.tau_a;
    j["max_iterations"] = c.max_iterations;
    if (c.oracle_graph) j["oracle_graph"] = graph_to_json(*c.oracle_graph);
    return j;
}

CDConfig cd_config_from_json(const Json& j, const std::string& path) {
    Reader r(j, path);
    CDConfig c;
    r.get_enum("algorithm", c.algorithm, cd_algorithm_from_string);
    r.get("max_lag", c.max_lag);
    r.get("alpha", c.alpha);
    r.get("max_cond_size", c.max_cond_size);
    r.get("max_combinations", c.max_combinations);
    r.get("lambda_w", c.lambda_w);
    r.get("lambda_a", c.lambda_a);
    r.get("tau_w", c.tau_w);
    r.get("tau_a", c.tau_a);
    r.get("max_iterations", c.max_iterations);
    if (const Json* g = r.raw("oracle_graph")) c.oracle_graph = graph_from_json(*g);
    r.finish();
    r.check(c);
    return c;
}

Json to_json(const ForecasterConfig& c) {
    Json j;
    j["kind"] = to_string(c.kind);
    j["n_trees"] = c.n_trees;
    j["max_depth"] = optional_int(c.max_depth);
    j["bootstrap"] = c.bootstrap;
    j["min_samples_leaf"] = c.min_samples_leaf;
    j["oob_residuals"] = c.oob_residuals;
    return j;
}

ForecasterConfig forecaster_config_from_json(const Json& j, const std::string& path) {
    Reader r(j, path);
    ForecasterConfig c;
    r.get_enum("kind", c.kind, forecaster_kind_from_string);
    r.get("n_trees", c.n_trees);
    r.get("max_depth", c.max_depth);
    r.get("bootstrap", c.bootstrap);
    r.get("min_samples_leaf", c.min_samples_leaf);
    r.get("oob_residuals", c.oob_residuals);
    r.finish();
    r.check(c);
    return c;
}

Json to_json(const NoiseConfig& c) {
    Json j;
    j["kind"] = to_string(c.kind);
    j["min_residuals"] = c.min_residuals;
    return j;
}

NoiseConfig noise_config_from_json(const Json& j, const std::string& path) {
    Reader r(j, path);
    NoiseConfig c;
    r.get_enum("kind", c.kind, noise_fit_from_string);
    r.get("min_residuals", c.min_residuals);
    r.finish();
    return c;
}

Json to_json(const DetectorConfig& c) {
    Json j;
    j["family"] = to_string(c.family);
    j["C"] = c.C;
    j["kernel"] = to_string(c.kernel);
    j["degree"] = c.degree;
    j["gamma"] = to_string(c.gamma);
    j["window_length"] = c.window_length;
    j["train_fraction"] = c.train_fraction;
    j["max_iter"] = c.max_iter;
    return j;
}

DetectorConfig detector_config_from_json(const Json& j, const std::string& path) {
    Reader r(j, path);
    DetectorConfig c;
    r.get_enum("family", c.family, detector_family_from_string);
    r.get("C", c.C);
    r.get_enum("kernel", c.kernel, svc_kernel_from_string);
    r.get("degree", c.degree);
    r.get_enum("gamma", c.gamma, gamma_rule_from_string);
    r.get("window_length", c.window_length);
    r.get("train_fraction", c.train_fraction);
    r.get("max_iter", c.max_iter);
    r.finish();
    r.check(c);
    return c;
}

Json to_json(const GeneratorConfig& c) {
    Json j;
    j["n_vars"] = c.n_vars;
    j["n_steps"] = c.n_steps;
    j["warmup"] = c.warmup;
    j["min_lag"] = c.min_lag;
    j["max_lag"] = c.max_lag;
    j["edge_probability"] = c.edge_probability;
    j["n_edges"] = optional_int(c.n_edges);
    j["graph_model"] = to_string(c.graph_model);
    j["allow_self_lags"] = c.allow_self_lags;
    Json f = Json::array();
    for (auto k : c.functions) f.push_back(to_string(k));
    j["functions"] = std::move(f);
    Json nz = Json::array();
    for (auto k : c.noises) nz.push_back(to_string(k));
    j["noises"] = std::move(nz);
    j["noise_scale"] = c.noise_scale;
    j["coef_min"] = c.coef_min;
    j["coef_max"] = c.coef_max;
    j["noise_mode"] = to_string(c.noise_mode);
    j["seed"] = c.seed;
    return j;
}

GeneratorConfig generator_config_from_json(const Json& j) {
    Reader r(j, "generator");
    GeneratorConfig c;
    r.get("n_vars", c.n_vars);
    r.get("n_steps", c.n_steps);
    r.get("warmup", c.warmup);
    r.get("min_lag", c.min_lag);
    r.get("max_lag", c.max_lag);
    r.get("edge_probability", c.edge_probability);
    r.get("n_edges", c.n_edges);
    r.get_enum("graph_model", c.graph_model, graph_model_from_string);
    r.get("allow_self_lags", c.allow_self_lags);
    r.get_enum_list("functions", c.functions, function_kind_from_string);
    r.get_enum_list("noises", c.noises, noise_kind_from_string);
    r.get("noise_scale", c.noise_scale);
    r.get("coef_min", c.coef_min);
    r.get("coef_max", c.coef_max);
    r.get_enum("noise_mode", c.noise_mode, noise_mode_from_string);
    r.get("seed", c.seed);
    r.finish();
    c.validate();
    return c;
}

Json to_json(const TCSConfig& c) {
    Json j;
    auto list = [](const auto& items) {
        Json a = Json::array();
        for (const auto& x : items) a.push_back(to_json(x));
        return a;
    };
    j["cd_space"] = list(c.cd_space);
    j["forecaster_space"] = list(c.forecaster_space);
    j["noise_space"] = list(c.noise_space);
    j["detector_space"] = list(c.detector_space);
    j["sample_length"] = c.sample_length;
    j["warmup"] = c.warmup;
    j["equivalence_alpha"] = c.equivalence_alpha;
    j["n_permutations"] = c.n_permutations;
    j["seed"] = c.seed;
    j["sparsity_penalty"] = c.sparsity_penalty;
    j["adf_lags"] = c.adf_lags;
    return j;
}

TCSConfig tcs_config_from_json(const Json& j) {
    Reader r(j, "");
    TCSConfig c = TCSConfig::defaults();
    auto list = [&](const std::string& key, auto& out, auto parse) {
        if (const Json* v = r.raw(key)) {
            if (!v->is_array()) r.fail(key, "expected an array");
            out.clear();
            for (std::size_t k = 0; k < v->size(); ++k) out.push_back(parse((*v)[k], r.at(key + "[" + std::to_string(k) + "]")));
        }
    };
    list("cd_space", c.cd_space, cd_config_from_json);
    list("forecaster_space", c.forecaster_space, forecaster_config_from_json);
    list("noise_space", c.noise_space, noise_config_from_json);
    if (const Json* v = r.raw("detector_space"); v && v->is_object()) {
        Reader g(*v, "detector_space");
        std::vector<int> windows{1, 10};
        if (const Json* w = g.raw("default_grid")) {
            if (!w->is_array() || w->empty()) g.fail("default_grid", "expected a non-empty array of window lengths");
            windows.clear();
            for (const auto& x : *w) {
                if (!x.is_number_integer() || x.get<int>() < 1) g.fail("default_grid", "window lengths must be positive");
                windows.push_back(x.get<int>());
            }
        }
        g.finish();
        c.detector_space = default_detector_grid(windows);
    } else {
        list("detector_space", c.detector_space, detector_config_from_json);
    }
    r.get("sample_length", c.sample_length);
    r.get("warmup", c.warmup);
    r.get("equivalence_alpha", c.equivalence_alpha);
    r.get("n_permutations", c.n_permutations);
    r.get("seed", c.seed);
    r.get("sparsity_penalty", c.sparsity_penalty);
    r.get("adf_lags", c.adf_lags);
    r.finish();
    c.validate();
    return c;
}

// ---------------------------------------------------------------- results

Json discovery_to_json(const CDResult& r, const CDConfig& cfg) {
    Json j;
    j["schema"] = kDiscoverySchema;
    j["config"] = to_json(cfg);
    j["graph"] = graph_to_json(r.graph);
    j["edge_count"] = r.graph.edge_count();
    j["converged"] = r.converged;
    if (cfg.algorithm == CDAlgorithm::dynotears) {
        j["acyclicity"] = r.acyclicity;
        j["outer_iterations"] = r.outer_iterations;
    }
    return j;
}

Json report_to_json(const TCSReport& r, const TCSConfig& cfg) {
    Json j;
    j["schema"] = kReportSchema;
    j["columns"] = r.columns;
    j["sample_length"] = r.sample_length;
    j["real_block_offset"] = static_cast<std::int64_t>(r.real_block_offset);
    j["config"] = to_json(cfg);

    Json dets = Json::array();
    for (std::size_t d = 0; d < r.detectors.size(); ++d) {
        Json dj;
        dj["index"] = d;
        dj["label"] = r.detectors[d].label();
        dets.push_back(std::move(dj));
    }
    j["detectors"] = std::move(dets);

    Json cands = Json::array();
    for (const auto& c : r.candidates) {
        Json cj;
        cj["index"] = c.index;
        cj["cd_index"] = c.cd_index;
        cj["forecaster_index"] = c.forecaster_index;
        cj["noise_index"] = c.noise_index;
        cj["phases"] = {{"graph_estimation", to_string(c.cd.algorithm)},
                        {"predictive_modeling", to_string(c.forecaster.kind)},
                        {"noise_modeling", to_string(c.noise.kind)}};
        cj["ok"] = c.ok;
        if (!c.ok) {
            cj["error"] = {{"kind", error_kind_name(c.error_kind)}, {"message", c.error}};
        } else {
            cj["edge_count"] = c.edge_count;
            cj["graph"] = graph_to_json(c.model->discovery.graph);
            cj["discovery"] = {{"converged", c.model->discovery.converged}};
            if (c.cd.algorithm == CDAlgorithm::dynotears) {
                cj["discovery"]["acyclicity"] = c.model->discovery.acyclicity;
                cj["discovery"]["outer_iterations"] = c.model->discovery.outer_iterations;
            }
            cj["detector_aucs"] = c.detector_aucs;
            cj["worst_case_auc"] = c.worst_case_auc;
        }
        cj["warnings"] = c.warnings;
        cands.push_back(std::move(cj));
    }
    j["candidates"] = std::move(cands);

    j["minmax"] = {{"candidate", r.minmax_candidate},
                   {"score", r.minmax_score},
                   {"optimal_detector", r.optimal_detector},
                   {"optimal_detector_label", r.detectors.at(r.optimal_detector).label()}};

    Json sp;
    sp["enabled"] = r.sparsity_penalty;
    Json tests = Json::array();
    for (const auto& t : r.equivalence_tests)
        tests.push_back({{"candidate", t.candidate},
                         {"p_value", t.p_value},
                         {"observed_gap", t.observed_gap},
                         {"equivalent", t.equivalent}});
    sp["tests"] = std::move(tests);
    sp["equivalence_set"] = r.equivalence_set;
    Json counts = Json::array();
    for (std::size_t i : r.equivalence_set)
        counts.push_back({{"candidate", i}, {"edge_count", r.candidates[i].edge_count}});
    sp["edge_counts"] = std::move(counts);
    j["sparsity"] = std::move(sp);

    j["selected"] = r.selected;
    j["adf"] = adf_to_json(r.adf);
    j["warnings"] = r.warnings;
    return j;
}

Json timing_to_json(const TCSReport& r) {
    Json j;
    j["schema"] = "tcs.timing/1";
    j["total_seconds"] = r.total_seconds;
    Json c = Json::array();
    for (const auto& cand : r.candidates)
        c.push_back({{"candidate", cand.index},
                     {"graph_estimation", to_string(cand.cd.algorithm)},
                     {"discovery_seconds", cand.model ? cand.model->discovery_seconds : 0.0}});
    j["candidates"] = std::move(c);
    return j;
}

Json evaluation_to_json(const EvaluationReport& r) {
    Json j;
    j["schema"] = kEvaluationSchema;
    Json dets = Json::array();
    for (std::size_t d = 0; d < r.detectors.size(); ++d)
        dets.push_back({{"index", d},
                        {"label", r.detectors[d].label()},
                        {"auc", r.aucs[d]},
                        {"converged", static_cast<bool>(r.converged[d])}});
    j["detectors"] = std::move(dets);
    j["minmax_auc"] = r.minmax_auc;
    j["optimal_detector"] = r.optimal_detector;
    j["mmd"] = {{"estimate", r.mmd.estimate},
                {"unbiased_raw", r.mmd.unbiased_raw},
                {"biased", r.mmd.biased},
                {"base_bandwidth", r.mmd.base_bandwidth}};
    j["adf"] = {{"real", adf_to_json(r.adf_real)}, {"simulated", adf_to_json(r.adf_sim)}};
    return j;
}

// ---------------------------------------------------------------- validation

namespace {

struct Checker {
    std::string path;

    [[noreturn]] void fail(const std::string& where, const std::string& msg) const {
        throw ArgumentError((where.empty() ? path : path + "." + where) + ": " + msg);
    }
    const Json& need(const Json& obj, const std::string& key) const {
        if (!obj.is_object()) fail("", "expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) fail(key, "missing");
        return *it;
    }
    std::size_t index(const Json& obj, const std::string& key) const {
        const Json& v = need(obj, key);
        if (!is_non_negative_integer(v)) fail(key, "expected a non-negative integer");
        return v.get<std::size_t>();
    }
    double number(const Json& obj, const std::string& key) const {
        const Json& v = need(obj, key);
        if (!v.is_number()) fail(key, "expected a number");
        return v.get<double>();
    }
    bool boolean(const Json& obj, const std::string& key) const {
        const Json& v = need(obj, key);
        if (!v.is_boolean()) fail(key, "expected a boolean");
        return v.get<bool>();
    }
    const Json& array(const Json& obj, const std::string& key) const {
        const Json& v = need(obj, key);
        if (!v.is_array()) fail(key, "expected an array");
        return v;
    }
    void strings(const Json& obj, const std::string& key) const {
        for (const auto& s : array(obj, key))
            if (!s.is_string()) fail(key, "expected an array of strings");
    }
    void unit(const Json& obj, const std::string& key) const {
        const double v = number(obj, key);
        if (v < 0.0 || v > 1.0) fail(key, "must lie in [0, 1]");
    }
};

void check_adf(const Checker& c, const Json& arr) {
    for (std::size_t k = 0; k < arr.size(); ++k) {
        Checker e{c.path + "[" + std::to_string(k) + "]"};
        const Json& a = arr[k];
        if (!e.need(a, "column").is_string()) e.fail("column", "expected a string");
        e.boolean(a, "stationary");
        if (!a.contains("error")) {
            e.number(a, "t_statistic");
            e.number(a, "critical_value_5pct");
        }
    }
}

void validate_report(const Json& j) {
    Checker c{"report"};
    c.strings(j, "columns");
    if (c.index(j, "sample_length") == 0) c.fail("sample_length", "must be positive");
    c.index(j, "real_block_offset");
    tcs_config_from_json(c.need(j, "config"));
    const std::size_t n_det = c.array(j, "detectors").size();
    if (n_det == 0) c.fail("detectors", "empty");
    const Json& cands = c.array(j, "candidates");
    if (cands.empty()) c.fail("candidates", "empty");
    std::vector<std::size_t> edges(cands.size(), 0);
    std::vector<double> worst(cands.size(), 0.0);
    std::vector<bool> ok(cands.size(), false);
    for (std::size_t k = 0; k < cands.size(); ++k) {
        Checker e{"report.candidates[" + std::to_string(k) + "]"};
        const Json& cj = cands[k];
        if (e.index(cj, "index") != k) e.fail("index", "must equal the array position");
        const Json& ph = e.need(cj, "phases");
        for (const char* p : {"graph_estimation", "predictive_modeling", "noise_modeling"})
            if (!e.need(ph, p).is_string()) e.fail(std::string("phases.") + p, "expected a string");
        ok[k] = e.boolean(cj, "ok");
        if (ok[k]) {
            edges[k] = e.index(cj, "edge_count");
            const LaggedGraph g = graph_from_json(e.need(cj, "graph"));
            if (g.edge_count() != edges[k]) e.fail("edge_count", "disagrees with the graph");
            const Json& aucs = e.array(cj, "detector_aucs");
            if (aucs.size() != n_det) e.fail("detector_aucs", "needs one entry per detector");
            double mx = 0.0;
            for (const auto& a : aucs) {
                if (!a.is_number() || a.get<double>() < 0.0 || a.get<double>() > 1.0)
                    e.fail("detector_aucs", "entries must lie in [0, 1]");
                mx = std::max(mx, a.get<double>());
            }
            worst[k] = e.number(cj, "worst_case_auc");
            if (worst[k] != mx) e.fail("worst_case_auc", "must equal the max detector AUC");
        } else {
            const Json& err = e.need(cj, "error");
            if (!e.need(err, "message").is_string()) e.fail("error.message", "expected a string");
        }
        e.strings(cj, "warnings");
    }
    const Json& mm = c.need(j, "minmax");
    Checker m{"report.minmax"};
    const std::size_t winner = m.index(mm, "candidate");
    if (winner >= cands.size() || !ok[winner]) m.fail("candidate", "must name a successful candidate");
    if (m.number(mm, "score") != worst[winner]) m.fail("score", "must equal the winner's worst-case AUC");
    for (std::size_t k = 0; k < cands.size(); ++k)
        if (ok[k] && worst[k] < worst[winner]) m.fail("candidate", "is not the min-max argmin");
    if (m.index(mm, "optimal_detector") >= n_det) m.fail("optimal_detector", "out of range");

    const Json& sp = c.need(j, "sparsity");
    Checker s{"report.sparsity"};
    const bool penalty = s.boolean(sp, "enabled");
    std::vector<std::size_t> set;
    for (const auto& x : s.array(sp, "equivalence_set")) {
        if (!is_non_negative_integer(x) || x.get<std::size_t>() >= cands.size() || !ok[x.get<std::size_t>()])
            s.fail("equivalence_set", "entries must name successful candidates");
        set.push_back(x.get<std::size_t>());
    }
    for (const auto& t : s.array(sp, "tests")) {
        Checker tc{"report.sparsity.tests[]"};
        tc.index(t, "candidate");
        tc.unit(t, "p_value");
        tc.boolean(t, "equivalent");
    }
    const std::size_t selected = c.index(j, "selected");
    if (std::find(set.begin(), set.end(), selected) == set.end()) c.fail("selected", "must be in the equivalence set");
    if (std::find(set.begin(), set.end(), winner) == set.end())
        s.fail("equivalence_set", "must contain the min-max winner");
    if (penalty) {
        for (std::size_t i : set)
            if (edges[i] < edges[selected]) c.fail("selected", "is not the sparsest member of the equivalence set");
    } else if (selected != winner) {
        c.fail("selected", "must be the min-max winner when the sparsity penalty is off");
    }
    check_adf(Checker{"report.adf"}, c.array(j, "adf"));
    c.strings(j, "warnings");
}

void validate_evaluation(const Json& j) {
    Checker c{"evaluation"};
    const Json& dets = c.array(j, "detectors");
    if (dets.empty()) c.fail("detectors", "empty");
    double mx = 0.0;
    for (std::size_t k = 0; k < dets.size(); ++k) {
        Checker e{"evaluation.detectors[" + std::to_string(k) + "]"};
        if (!e.need(dets[k], "label").is_string()) e.fail("label", "expected a string");
        e.unit(dets[k], "auc");
        e.boolean(dets[k], "converged");
        mx = std::max(mx, dets[k]["auc"].get<double>());
    }
    if (c.number(j, "minmax_auc") != mx) c.fail("minmax_auc", "must equal the max detector AUC");
    if (c.index(j, "optimal_detector") >= dets.size()) c.fail("optimal_detector", "out of range");
    const Json& mmd = c.need(j, "mmd");
    Checker m{"evaluation.mmd"};
    if (m.number(mmd, "estimate") < 0.0) m.fail("estimate", "must be non-negative");
    m.number(mmd, "unbiased_raw");
    m.number(mmd, "biased");
    m.number(mmd, "base_bandwidth");
    const Json& adf = c.need(j, "adf");
    check_adf(Checker{"evaluation.adf.real"}, Checker{"evaluation.adf"}.array(adf, "real"));
    check_adf(Checker{"evaluation.adf.simulated"}, Checker{"evaluation.adf"}.array(adf, "simulated"));
}

void validate_discovery(const Json& j) {
    Checker c{"discovery"};
    cd_config_from_json(c.need(j, "config"));
    const LaggedGraph g = graph_from_json(c.need(j, "graph"));
    if (c.index(j, "edge_count") != g.edge_count()) c.fail("edge_count", "disagrees with the graph");
    c.boolean(j, "converged");
}

bool keys_within(const Json& j, const Json& reference) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!reference.contains(it.key())) return false;
    return true;
}

}  // namespace

std::string validate_document(const Json& j) {
    if (!j.is_object()) throw ArgumentError("document: expected a JSON object");
    if (auto it = j.find("schema"); it != j.end()) {
        const std::string s = it->is_string() ? it->get<std::string>() : "";
        if (s == kReportSchema) {
            validate_report(j);
            return "report";
        }
        if (s == kEvaluationSchema) {
            validate_evaluation(j);
            return "evaluation";
        }
        if (s == kDiscoverySchema) {
            validate_discovery(j);
            return "discovery";
        }
        if (s == "tcs.timing/1") {
            Checker c{"timing"};
            c.number(j, "total_seconds");
            c.array(j, "candidates");
            return "timing";
        }
        throw ArgumentError("schema: unknown document schema '" + s + "'");
    }
    if (j.contains("edges")) {
        graph_from_json(j);
        return "graph";
    }
    if (keys_within(j, to_json(TCSConfig::defaults()))) {
        tcs_config_from_json(j);
        return "tcs-config";
    }
    if (keys_within(j, to_json(GeneratorConfig{}))) {
        generator_config_from_json(j);
        return "generator-config";
    }
    // Report the strict-reader error of the closest candidate.
    tcs_config_from_json(j);
    return "tcs-config";
}

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(source + ": invalid JSON: " + e.what());
    }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tcs
