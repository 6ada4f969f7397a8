#include "tcs/tcs.h"

#include "tcs/io.hpp"
#include "tcs/json_io.hpp"
#include "tcs/parallel.hpp"
#include "tcs/pipeline.hpp"

#include <cstring>
#include <new>

struct tcs_dataset {
    tcs::Dataset ds;
};

struct tcs_graph {
    tcs::LaggedGraph g;
};

struct tcs_run {
    tcs::TCSConfig cfg;
    tcs::TCSReport report;
};

namespace {

thread_local std::string t_last_error;

tcs_status fail(tcs_status s, const std::string& msg) {
    t_last_error = msg;
    return s;
}

template <class F>
tcs_status guarded(F&& body) {
    try {
        body();
        return TCS_OK;
    } catch (const tcs::Error& e) {
        switch (e.kind()) {
            case tcs::ErrorKind::argument: return fail(TCS_E_USAGE, e.what());
            case tcs::ErrorKind::data: return fail(TCS_E_DATA, e.what());
            case tcs::ErrorKind::numeric:
            case tcs::ErrorKind::convergence: return fail(TCS_E_NUMERIC, e.what());
        }
        return fail(TCS_E_INTERNAL, e.what());
    } catch (const std::bad_alloc&) {
        return fail(TCS_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(TCS_E_INTERNAL, e.what());
    } catch (...) {
        return fail(TCS_E_INTERNAL, "unknown error");
    }
}

void need(const void* p, const char* what) {
    if (!p) throw tcs::ArgumentError(std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

tcs::Json parse_or_empty(const char* json, const char* what) {
    if (!json || !*json) return tcs::Json::object();
    return tcs::parse_json(json, what);
}

std::string scores_csv(const tcs::LagTensor& s) {
    std::string out = "lag,cause,effect,score\n";
    for (int lag = 1; lag <= s.max_lag(); ++lag)
        for (int i = 0; i < s.n_vars(); ++i)
            for (int j = 0; j < s.n_vars(); ++j)
                out += std::to_string(lag) + "," + std::to_string(i) + "," + std::to_string(j) + "," +
                       tcs::format_double(s.at(lag, i, j)) + "\n";
    return out;
}

}  // namespace

extern "C" {

const char* tcs_version(void) { return "0.1.0"; }

const char* tcs_last_error(void) { return t_last_error.c_str(); }

void tcs_string_free(char* s) { std::free(s); }

tcs_status tcs_set_threads(unsigned n) {
    return guarded([&] { tcs::set_thread_count(n); });
}

tcs_status tcs_dataset_load_csv(const char* path, int has_header, tcs_dataset** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        tcs::CsvOptions opts;
        opts.header = has_header != 0;
        auto* h = new tcs_dataset{tcs::load_csv(path, opts)};
        *out = h;
    });
}

tcs_status tcs_dataset_from_array(const double* values, size_t rows, size_t cols, const char* const* names,
                                  tcs_dataset** out) {
    return guarded([&] {
        need(values, "values");
        need(out, "out");
        if (rows == 0 || cols == 0) throw tcs::ArgumentError("dataset needs at least one row and one column");
        tcs::Dataset ds;
        ds.source = "<array>";
        ds.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            values, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        if (!ds.values.allFinite()) throw tcs::DataError("dataset values must be finite");
        for (size_t j = 0; j < cols; ++j)
            ds.columns.push_back(names && names[j] ? std::string(names[j]) : "V" + std::to_string(j));
        *out = new tcs_dataset{std::move(ds)};
    });
}

tcs_status tcs_dataset_save_csv(const tcs_dataset* ds, const char* path) {
    return guarded([&] {
        need(ds, "dataset");
        need(path, "path");
        tcs::save_csv(path, ds->ds.columns, ds->ds.values);
    });
}

size_t tcs_dataset_rows(const tcs_dataset* ds) { return ds ? static_cast<size_t>(ds->ds.values.rows()) : 0; }
size_t tcs_dataset_cols(const tcs_dataset* ds) { return ds ? static_cast<size_t>(ds->ds.values.cols()) : 0; }
size_t tcs_dataset_imputed(const tcs_dataset* ds) { return ds ? ds->ds.imputed : 0; }

const char* tcs_dataset_column_name(const tcs_dataset* ds, size_t j) {
    if (!ds || j >= ds->ds.columns.size()) return nullptr;
    return ds->ds.columns[j].c_str();
}

tcs_status tcs_dataset_copy_values(const tcs_dataset* ds, double* out, size_t len) {
    return guarded([&] {
        need(ds, "dataset");
        need(out, "out");
        const auto& m = ds->ds.values;
        if (len < static_cast<size_t>(m.size())) throw tcs::ArgumentError("output buffer too small");
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) out[r * m.cols() + c] = m(r, c);
    });
}

void tcs_dataset_free(tcs_dataset* ds) { delete ds; }

tcs_status tcs_graph_from_json(const char* json, tcs_graph** out) {
    return guarded([&] {
        need(json, "json");
        need(out, "out");
        *out = new tcs_graph{tcs::graph_from_json(tcs::parse_json(json, "graph"))};
    });
}

tcs_status tcs_graph_load(const char* path, tcs_graph** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new tcs_graph{tcs::graph_from_json(tcs::parse_json(tcs::read_text_file(path), path))};
    });
}

tcs_status tcs_graph_to_json(const tcs_graph* g, char** out) {
    return guarded([&] {
        need(g, "graph");
        need(out, "out");
        *out = dup_string(tcs::format_graph_json(g->g));
    });
}

tcs_status tcs_graph_save(const tcs_graph* g, const char* path) {
    return guarded([&] {
        need(g, "graph");
        need(path, "path");
        tcs::write_text_file(path, tcs::format_graph_json(g->g));
    });
}

size_t tcs_graph_edge_count(const tcs_graph* g) { return g ? g->g.edge_count() : 0; }

tcs_status tcs_graph_shd(const tcs_graph* a, const tcs_graph* b, size_t* out) {
    return guarded([&] {
        need(a, "a");
        need(b, "b");
        need(out, "out");
        *out = tcs::shd(a->g, b->g);
    });
}

void tcs_graph_free(tcs_graph* g) { delete g; }

tcs_status tcs_generate_synthetic(const char* config_json, tcs_dataset** data, tcs_graph** graph,
                                  char** config_echo) {
    return guarded([&] {
        const tcs::GeneratorConfig cfg = tcs::generator_config_from_json(parse_or_empty(config_json, "config"));
        tcs::Rng rng = tcs::make_rng(tcs::derive_seed(cfg.seed, "generate"));
        const tcs::TemporalSCM scm = tcs::build_random_scm(cfg, rng);
        tcs::Dataset ds;
        ds.source = "<synthetic>";
        ds.values = tcs::ancestral_sample(scm, cfg.n_steps, cfg.warmup, rng);
        for (int j = 0; j < cfg.n_vars; ++j) ds.columns.push_back("V" + std::to_string(j));
        std::unique_ptr<tcs_dataset> d(new tcs_dataset{std::move(ds)});
        std::unique_ptr<tcs_graph> g(new tcs_graph{scm.graph});
        char* echo = config_echo ? dup_string(tcs::dump_json(tcs::to_json(cfg))) : nullptr;
        if (data) *data = d.release();
        if (graph) *graph = g.release();
        if (config_echo) *config_echo = echo;
    });
}

tcs_status tcs_discover(const tcs_dataset* data, const char* cd_config_json, tcs_graph** graph, char** scores,
                        char** summary_json) {
    return guarded([&] {
        need(data, "data");
        const tcs::CDConfig cfg = tcs::cd_config_from_json(parse_or_empty(cd_config_json, "cd config"));
        const tcs::CDResult r = tcs::discover(data->ds.values, cfg);
        if (r.graph.n_vars() != data->ds.values.cols())
            throw tcs::ArgumentError("graph has " + std::to_string(r.graph.n_vars()) + " variables, data has " +
                                     std::to_string(data->ds.values.cols()));
        std::unique_ptr<tcs_graph> g(new tcs_graph{r.graph});
        char* s = scores ? dup_string(scores_csv(r.scores)) : nullptr;
        char* m = summary_json ? dup_string(tcs::dump_json(tcs::discovery_to_json(r, cfg))) : nullptr;
        if (graph) *graph = g.release();
        if (scores) *scores = s;
        if (summary_json) *summary_json = m;
    });
}

tcs_status tcs_simulate(const tcs_dataset* data, const char* tcs_config_json, tcs_run** out) {
    return guarded([&] {
        need(data, "data");
        need(out, "out");
        auto run = std::make_unique<tcs_run>();
        run->cfg = tcs::tcs_config_from_json(parse_or_empty(tcs_config_json, "config"));
        run->report = tcs::run_tcs(data->ds.values, run->cfg, data->ds.columns);
        *out = run.release();
    });
}

size_t tcs_run_selected(const tcs_run* run) { return run ? run->report.selected : 0; }

tcs_status tcs_run_simulated(const tcs_run* run, tcs_dataset** out) {
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        tcs::Dataset ds;
        ds.source = "<simulated>";
        ds.columns = run->report.columns;
        ds.values = run->report.selected_candidate().simulated;
        *out = new tcs_dataset{std::move(ds)};
    });
}

tcs_status tcs_run_graph(const tcs_run* run, tcs_graph** out) {
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        *out = new tcs_graph{run->report.selected_candidate().model->discovery.graph};
    });
}

tcs_status tcs_run_report_json(const tcs_run* run, char** out) {
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        *out = dup_string(tcs::dump_json(tcs::report_to_json(run->report, run->cfg)));
    });
}

tcs_status tcs_run_timing_json(const tcs_run* run, char** out) {
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        *out = dup_string(tcs::dump_json(tcs::timing_to_json(run->report)));
    });
}

void tcs_run_free(tcs_run* run) { delete run; }

tcs_status tcs_evaluate(const tcs_dataset* real, const tcs_dataset* sim, const char* options_json,
                        char** report_json) {
    return guarded([&] {
        need(real, "real");
        need(sim, "sim");
        need(report_json, "report_json");
        const tcs::Json opts = parse_or_empty(options_json, "options");
        if (!opts.is_object()) throw tcs::ArgumentError("options: expected an object");
        tcs::Json as_config = tcs::Json::object();
        for (auto it = opts.begin(); it != opts.end(); ++it) {
            if (it.key() != "detector_space" && it.key() != "seed" && it.key() != "adf_lags")
                throw tcs::ArgumentError("options." + it.key() + ": unknown key");
            as_config[it.key()] = it.value();
        }
        const tcs::TCSConfig cfg = tcs::tcs_config_from_json(as_config);
        const tcs::EvaluationReport rep =
            tcs::evaluate_pair(real->ds.values, sim->ds.values, cfg.detector_space, cfg.seed, real->ds.columns,
                               cfg.adf_lags);
        *report_json = dup_string(tcs::dump_json(tcs::evaluation_to_json(rep)));
    });
}

tcs_status tcs_validate_json(const char* json, char** kind) {
    return guarded([&] {
        need(json, "json");
        const std::string k = tcs::validate_document(tcs::parse_json(json, "document"));
        if (kind) *kind = dup_string(k);
    });
}

}  // extern "C"
