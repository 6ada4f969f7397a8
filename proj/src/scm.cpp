#include "tcs/scm.hpp"

#include "tcs/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tcs {

std::string to_string(FunctionKind kind) {
    switch (kind) {
        case FunctionKind::linear: return "linear";
        case FunctionKind::power: return "power";
        case FunctionKind::exponential: return "exponential";
        case FunctionKind::sigmoid: return "sigmoid";
        case FunctionKind::relu: return "relu";
        case FunctionKind::trigonometric: return "trigonometric";
        case FunctionKind::fitted: return "fitted-forecaster";
    }
    return "?";
}

FunctionKind function_kind_from_string(const std::string& s) {
    if (s == "linear") return FunctionKind::linear;
    if (s == "power") return FunctionKind::power;
    if (s == "exponential") return FunctionKind::exponential;
    if (s == "sigmoid") return FunctionKind::sigmoid;
    if (s == "relu") return FunctionKind::relu;
    if (s == "trigonometric") return FunctionKind::trigonometric;
    if (s == "fitted-forecaster") return FunctionKind::fitted;
    throw ArgumentError("unknown function kind '" + s + "'");
}

std::string to_string(GraphModel m) { return m == GraphModel::erdos_renyi ? "erdos-renyi" : "barabasi-albert"; }

GraphModel graph_model_from_string(const std::string& s) {
    if (s == "erdos-renyi") return GraphModel::erdos_renyi;
    if (s == "barabasi-albert") return GraphModel::barabasi_albert;
    throw ArgumentError("unknown graph model '" + s + "' (expected erdos-renyi or barabasi-albert)");
}

namespace {

double elementwise(FunctionKind kind, double x) {
    switch (kind) {
        case FunctionKind::linear: return x;
        case FunctionKind::power: return x * x;
        case FunctionKind::exponential: return std::exp(x);
        case FunctionKind::sigmoid: return 1.0 / (1.0 + std::exp(-x));
        case FunctionKind::relu: return x > 0.0 ? x : 0.0;
        case FunctionKind::trigonometric: return std::sin(x);
        case FunctionKind::fitted: break;
    }
    return x;
}

}  // namespace

std::size_t FunctionalDependency::arity() const {
    if (kind == FunctionKind::fitted) return predictor ? predictor->arity() : 0;
    return params.size();
}

double FunctionalDependency::evaluate(std::span<const double> parent_values) const {
    require(parent_values.size() == arity(), "function arity mismatch: expected " + std::to_string(arity()) +
                                                 " parent values, got " + std::to_string(parent_values.size()));
    double out = 0.0;
    if (kind == FunctionKind::fitted) {
        require(predictor != nullptr, "fitted function has no predictor");
        out = predictor->predict(parent_values);
    } else {
        for (std::size_t k = 0; k < params.size(); ++k) out += params[k] * elementwise(kind, parent_values[k]);
    }
    return bounded_wrap ? std::tanh(out) : out;
}

void TemporalSCM::validate() const {
    const auto n = static_cast<std::size_t>(graph.n_vars());
    require(n >= 1, "scm: graph is empty");
    require(functions.size() == n, "scm: need one function per variable");
    require(noises.size() == n, "scm: need one noise source per variable");
    for (int j = 0; j < graph.n_vars(); ++j) {
        const auto parents = lagged_parents(graph, j).size();
        const auto& f = functions[static_cast<std::size_t>(j)];
        require(f.arity() == parents, "scm: function of variable " + std::to_string(j) + " takes " +
                                          std::to_string(f.arity()) + " inputs but the variable has " +
                                          std::to_string(parents) + " lagged parents");
    }
}

void GeneratorConfig::validate() const {
    require(n_vars >= 1, "generator: n_vars must be positive");
    require(min_lag >= 1 && min_lag <= max_lag, "generator: need 1 <= min_lag <= max_lag");
    require(edge_probability >= 0.0 && edge_probability <= 1.0, "generator: edge_probability must be in [0, 1]");
    require(warmup >= 0, "generator: warmup must be non-negative");
    require(n_steps > warmup + max_lag, "generator: n_steps must exceed warmup + max_lag");
    require(!functions.empty(), "generator: function family set is empty");
    require(!noises.empty(), "generator: noise family set is empty");
    for (auto k : functions) require(k != FunctionKind::fitted, "generator: fitted-forecaster is not a random family");
    for (auto k : noises)
        require(k == NoiseKind::normal || k == NoiseKind::uniform, "generator: noise families are normal or uniform");
    require(noise_scale > 0.0, "generator: noise_scale must be positive");
    require(coef_min > 0.0 && coef_min <= coef_max, "generator: need 0 < coef_min <= coef_max");
    if (n_edges) require(*n_edges >= 0, "generator: n_edges must be non-negative");
}

namespace {

bool cell_allowed(const GeneratorConfig& cfg, int i, int j) { return cfg.allow_self_lags || i != j; }

LaggedGraph erdos_renyi(const GeneratorConfig& cfg, Rng& rng) {
    LaggedGraph g(cfg.n_vars, cfg.max_lag);
    std::vector<LaggedEdge> cells;
    for (int lag = cfg.min_lag; lag <= cfg.max_lag; ++lag)
        for (int i = 0; i < cfg.n_vars; ++i)
            for (int j = 0; j < cfg.n_vars; ++j)
                if (cell_allowed(cfg, i, j)) cells.push_back({lag, i, j});

    if (cfg.n_edges) {
        const auto k = static_cast<std::size_t>(*cfg.n_edges);
        require(k <= cells.size(), "generator: n_edges exceeds the number of candidate cells (" +
                                       std::to_string(cells.size()) + ")");
        for (std::size_t a = 0; a < k; ++a) {
            std::uniform_int_distribution<std::size_t> pick(a, cells.size() - 1);
            std::swap(cells[a], cells[pick(rng)]);
            g.set_edge(cells[a].lag, cells[a].cause, cells[a].effect);
        }
        return g;
    }
    std::bernoulli_distribution coin(cfg.edge_probability);
    for (const auto& c : cells)
        if (coin(rng)) g.set_edge(c.lag, c.cause, c.effect);
    return g;
}

// Preferential attachment on the summary level: each arriving node links to
// m existing nodes chosen with probability proportional to degree + 1, where
// m = max(1, round(p * (n - 1))). Each link gets a random direction and a
// uniform lag in [min_lag, max_lag]. Self-lags are added independently with
// probability p.
LaggedGraph barabasi_albert(const GeneratorConfig& cfg, Rng& rng) {
    LaggedGraph g(cfg.n_vars, cfg.max_lag);
    const int m = std::max(1, static_cast<int>(std::lround(cfg.edge_probability * (cfg.n_vars - 1))));
    std::vector<double> degree(static_cast<std::size_t>(cfg.n_vars), 0.0);
    std::uniform_int_distribution<int> lag_pick(cfg.min_lag, cfg.max_lag);
    std::bernoulli_distribution coin(0.5);
    for (int node = 1; node < cfg.n_vars; ++node) {
        std::vector<int> pool(static_cast<std::size_t>(node));
        std::iota(pool.begin(), pool.end(), 0);
        const int links = std::min(m, node);
        for (int l = 0; l < links; ++l) {
            std::vector<double> w;
            for (int v : pool) w.push_back(degree[static_cast<std::size_t>(v)] + 1.0);
            std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
            const std::size_t at = pick(rng);
            const int other = pool[at];
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
            const int lag = lag_pick(rng);
            if (coin(rng))
                g.set_edge(lag, other, node);
            else
                g.set_edge(lag, node, other);
            degree[static_cast<std::size_t>(node)] += 1.0;
            degree[static_cast<std::size_t>(other)] += 1.0;
        }
    }
    if (cfg.allow_self_lags) {
        std::bernoulli_distribution self(cfg.edge_probability);
        for (int j = 0; j < cfg.n_vars; ++j)
            if (self(rng)) g.set_edge(lag_pick(rng), j, j);
    }
    return g;
}

}  // namespace

LaggedGraph generate_random_graph(const GeneratorConfig& cfg, Rng& rng) {
    cfg.validate();
    return cfg.graph_model == GraphModel::erdos_renyi ? erdos_renyi(cfg, rng) : barabasi_albert(cfg, rng);
}

TemporalSCM build_random_scm(const GeneratorConfig& cfg, Rng& rng) {
    TemporalSCM scm;
    scm.graph = generate_random_graph(cfg, rng);
    scm.noise_mode = cfg.noise_mode;
    std::uniform_real_distribution<double> magnitude(cfg.coef_min, cfg.coef_max);
    std::bernoulli_distribution negative(0.5);
    std::uniform_int_distribution<std::size_t> pick_fn(0, cfg.functions.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_noise(0, cfg.noises.size() - 1);
    for (int j = 0; j < cfg.n_vars; ++j) {
        const auto parents = lagged_parents(scm.graph, j);
        FunctionalDependency f;
        f.bounded_wrap = true;
        if (!parents.empty()) {
            f.kind = cfg.functions[pick_fn(rng)];
            for (std::size_t k = 0; k < parents.size(); ++k) {
                const double c = magnitude(rng);
                f.params.push_back(negative(rng) ? -c : c);
            }
        }
        scm.functions.push_back(std::move(f));
        const NoiseKind nk = cfg.noises[pick_noise(rng)];
        if (nk == NoiseKind::normal) {
            scm.noises.push_back(NoiseSource::normal(0.0, cfg.noise_scale));
        } else {
            const double half = std::sqrt(3.0) * cfg.noise_scale;
            scm.noises.push_back(NoiseSource::uniform(-half, half));
        }
    }
    return scm;
}

Matrix ancestral_trajectory(const TemporalSCM& scm, int n_steps, Rng& rng) {
    scm.validate();
    const int n = scm.graph.n_vars();
    const int max_lag = scm.graph.max_lag();
    require(n_steps > max_lag, "ancestral sampling: n_steps must exceed max_lag");

    std::vector<std::vector<Parent>> parents(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) parents[static_cast<std::size_t>(j)] = lagged_parents(scm.graph, j);

    Matrix x(n_steps, n);
    for (int t = 0; t < max_lag; ++t)
        for (int j = 0; j < n; ++j) x(t, j) = standard_normal(rng);
    // One noise stream per variable, so a variable's draws never depend on
    // what the other noise sources consume.
    const std::uint64_t base = rng();
    std::vector<Rng> streams;
    for (int j = 0; j < n; ++j) streams.push_back(make_rng(derive_seed(base, static_cast<std::uint64_t>(j))));

    std::vector<double> inputs;
    for (int t = max_lag; t < n_steps; ++t) {
        for (int j = 0; j < n; ++j) {
            const auto& pa = parents[static_cast<std::size_t>(j)];
            inputs.clear();
            for (const auto& p : pa) inputs.push_back(x(t - p.lag, p.var));
            const double f = scm.functions[static_cast<std::size_t>(j)].evaluate(inputs);
            const double eps = scm.noises[static_cast<std::size_t>(j)].draw(streams[static_cast<std::size_t>(j)]);
            const double v = (scm.noise_mode == NoiseMode::multiplicative && !pa.empty()) ? f * eps : f + eps;
            if (!std::isfinite(v)) {
                throw NumericError("numeric instability: variable " + std::to_string(j) +
                                   " produced a non-finite value at timestep " + std::to_string(t));
            }
            x(t, j) = v;
        }
    }
    return x;
}

Matrix ancestral_sample(const TemporalSCM& scm, int n_steps, int warmup, Rng& rng) {
    require(warmup >= 0, "ancestral sampling: warmup must be non-negative");
    const int drop = warmup + scm.graph.max_lag();
    require(n_steps > drop, "ancestral sampling: n_steps must exceed warmup + max_lag");
    Matrix full = ancestral_trajectory(scm, n_steps, rng);
    return full.bottomRows(n_steps - drop);
}

}  // namespace tcs
