#include <doctest.h>

#include "tcs/error.hpp"
#include "tcs/scm.hpp"

#include <cmath>

using namespace tcs;

namespace {

TemporalSCM pure_noise_scm(int n, NoiseSource noise) {
    TemporalSCM scm;
    scm.graph = LaggedGraph(n, 1);
    for (int j = 0; j < n; ++j) {
        scm.functions.push_back({});
        scm.noises.push_back(noise);
    }
    return scm;
}

}  // namespace

TEST_CASE("generator config validation") {
    GeneratorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.min_lag = 2;
    cfg.max_lag = 1;
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);
    cfg = {};
    cfg.edge_probability = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);
    cfg = {};
    cfg.n_steps = cfg.warmup + cfg.max_lag;
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);
    cfg = {};
    cfg.functions = {FunctionKind::fitted};
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);
    CHECK(cfg.output_rows() == cfg.n_steps - cfg.warmup - cfg.max_lag);
}

TEST_CASE("erdos-renyi extremes") {
    GeneratorConfig cfg;
    cfg.n_vars = 2;
    cfg.edge_probability = 0.0;
    Rng rng = make_rng(1);
    CHECK(generate_random_graph(cfg, rng).edge_count() == 0);
    cfg.edge_probability = 1.0;
    const LaggedGraph full = generate_random_graph(cfg, rng);
    CHECK(full.edge_count() == 4);
    CHECK(full == LaggedGraph::fully_connected(2, 1));
}

TEST_CASE("erdos-renyi edge frequency") {
    GeneratorConfig cfg;
    cfg.n_vars = 6;
    cfg.edge_probability = 0.3;
    std::size_t edges = 0;
    std::size_t cells = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Rng rng = make_rng(seed);
        const LaggedGraph g = generate_random_graph(cfg, rng);
        edges += g.edge_count();
        cells += g.cells().size();
    }
    const double freq = static_cast<double>(edges) / static_cast<double>(cells);
    CHECK(std::abs(freq - 0.3) <= 0.05);
}

TEST_CASE("lag range and self-lag switch are honoured") {
    GeneratorConfig cfg;
    cfg.n_vars = 4;
    cfg.min_lag = 2;
    cfg.max_lag = 3;
    cfg.edge_probability = 1.0;
    cfg.allow_self_lags = false;
    cfg.n_steps = 200;
    Rng rng = make_rng(3);
    const LaggedGraph g = generate_random_graph(cfg, rng);
    CHECK(g.max_lag() == 3);
    for (const auto& e : g.edges()) {
        CHECK(e.lag >= 2);
        CHECK(e.cause != e.effect);
    }
    CHECK(g.edge_count() == 2 * 12);
}

TEST_CASE("exact edge count") {
    GeneratorConfig cfg;
    cfg.n_vars = 10;
    for (int k : {0, 3, 17, 30, 100}) {
        cfg.n_edges = k;
        Rng rng = make_rng(static_cast<std::uint64_t>(k));
        CHECK(generate_random_graph(cfg, rng).edge_count() == static_cast<std::size_t>(k));
    }
    cfg.n_edges = 101;
    Rng rng = make_rng(0);
    CHECK_THROWS_AS(generate_random_graph(cfg, rng), ArgumentError);
}

TEST_CASE("barabasi-albert graphs are deterministic and in range") {
    GeneratorConfig cfg;
    cfg.n_vars = 8;
    cfg.max_lag = 2;
    cfg.graph_model = GraphModel::barabasi_albert;
    cfg.edge_probability = 0.3;
    Rng a = make_rng(9);
    Rng b = make_rng(9);
    const LaggedGraph ga = generate_random_graph(cfg, a);
    CHECK(ga == generate_random_graph(cfg, b));
    CHECK(ga.edge_count() > 0);
    CHECK(ga.n_vars() == 8);
}

TEST_CASE("build_random_scm") {
    GeneratorConfig cfg;
    cfg.n_vars = 6;
    cfg.edge_probability = 0.4;
    cfg.functions = {FunctionKind::linear};
    Rng rng = make_rng(4);
    const TemporalSCM scm = build_random_scm(cfg, rng);
    CHECK_NOTHROW(scm.validate());
    for (int j = 0; j < 6; ++j) {
        const auto& f = scm.functions[static_cast<std::size_t>(j)];
        if (lagged_parents(scm.graph, j).empty()) continue;
        CHECK(f.kind == FunctionKind::linear);
        CHECK(f.bounded_wrap);
        for (double c : f.params) {
            CHECK(std::abs(c) >= cfg.coef_min);
            CHECK(std::abs(c) <= cfg.coef_max);
        }
    }

    // bounded wrap keeps every noiseless output inside [-1, 1] (tanh rounds to 1 in double for large inputs)
    cfg.functions = {FunctionKind::linear, FunctionKind::power, FunctionKind::exponential, FunctionKind::sigmoid,
                     FunctionKind::relu, FunctionKind::trigonometric};
    Rng r2 = make_rng(8);
    const TemporalSCM mixed = build_random_scm(cfg, r2);
    Rng probe = make_rng(1);
    for (const auto& f : mixed.functions) {
        if (f.arity() == 0) continue;
        for (int k = 0; k < 200; ++k) {
            std::vector<double> in(f.arity());
            for (auto& v : in) v = 3.0 * standard_normal(probe);
            const double y = f.evaluate(in);
            CHECK(y >= -1.0);
            CHECK(y <= 1.0);
        }
    }

    Rng s1 = make_rng(77);
    Rng s2 = make_rng(77);
    const TemporalSCM x = build_random_scm(cfg, s1);
    const TemporalSCM y = build_random_scm(cfg, s2);
    CHECK(x.graph == y.graph);
    for (std::size_t j = 0; j < x.functions.size(); ++j) {
        CHECK(x.functions[j].kind == y.functions[j].kind);
        CHECK(x.functions[j].params == y.functions[j].params);
        CHECK(x.noises[j].kind() == y.noises[j].kind());
        CHECK(x.noises[j].param_b() == y.noises[j].param_b());
    }
}

TEST_CASE("function kinds evaluate their documented forms") {
    const std::vector<double> x{0.3, -1.2};
    auto eval = [&](FunctionKind k, bool wrap) {
        FunctionalDependency f{k, {2.0, -0.5}, wrap, nullptr};
        return f.evaluate(x);
    };
    CHECK(eval(FunctionKind::linear, false) == doctest::Approx(2.0 * 0.3 - 0.5 * -1.2));
    CHECK(eval(FunctionKind::power, false) == doctest::Approx(2.0 * 0.09 - 0.5 * 1.44));
    CHECK(eval(FunctionKind::exponential, false) == doctest::Approx(2.0 * std::exp(0.3) - 0.5 * std::exp(-1.2)));
    CHECK(eval(FunctionKind::sigmoid, false) ==
          doctest::Approx(2.0 / (1.0 + std::exp(-0.3)) - 0.5 / (1.0 + std::exp(1.2))));
    CHECK(eval(FunctionKind::relu, false) == doctest::Approx(0.6));
    CHECK(eval(FunctionKind::trigonometric, false) == doctest::Approx(2.0 * std::sin(0.3) - 0.5 * std::sin(-1.2)));
    CHECK(eval(FunctionKind::linear, true) == doctest::Approx(std::tanh(1.2)));
    FunctionalDependency f{FunctionKind::linear, {1.0}, false, nullptr};
    CHECK_THROWS_AS(f.evaluate(x), ArgumentError);
    CHECK(function_kind_from_string("fitted-forecaster") == FunctionKind::fitted);
    CHECK_THROWS_AS(function_kind_from_string("cubic"), ArgumentError);
}

TEST_CASE("ancestral sampling of pure noise") {
    const TemporalSCM scm = pure_noise_scm(3, NoiseSource::normal(0.0, 1.0));
    Rng rng = make_rng(12);
    const Matrix x = ancestral_sample(scm, 5000 + 50 + 1, 50, rng);
    CHECK(x.rows() == 5000);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(x.col(j).mean()) < 0.1);
}

TEST_CASE("ancestral sampling follows the recursion exactly") {
    TemporalSCM scm;
    scm.graph = LaggedGraph::from_edges(2, 1, {{1, 0, 1}});
    scm.functions = {FunctionalDependency{}, FunctionalDependency{FunctionKind::linear, {1.0}, true, nullptr}};
    scm.noises = {NoiseSource::normal(0.0, 1.0), NoiseSource::zero()};
    Rng rng = make_rng(5);
    const Matrix full = ancestral_trajectory(scm, 300, rng);
    for (int t = 1; t < 300; ++t) CHECK(full(t, 1) == std::tanh(full(t - 1, 0)));

    Rng a = make_rng(5);
    const Matrix kept = ancestral_sample(scm, 300, 20, a);
    CHECK(kept.rows() == 300 - 20 - 1);
    // warmup output is a suffix of the pre-discard trajectory
    CHECK(kept == full.bottomRows(kept.rows()));

    Rng b = make_rng(5);
    CHECK(ancestral_sample(scm, 300, 20, b) == kept);
}

TEST_CASE("a column depends only on its ancestors") {
    // 0 -> 1 -> 2 chain plus an isolated variable 3 feeding nothing relevant to 1
    TemporalSCM scm;
    scm.graph = LaggedGraph::from_edges(4, 1, {{1, 0, 1}, {1, 1, 2}, {1, 3, 3}});
    FunctionalDependency lin{FunctionKind::linear, {0.8}, true, nullptr};
    scm.functions = {FunctionalDependency{}, lin, lin, lin};
    scm.noises = std::vector<NoiseSource>(4, NoiseSource::normal(0.0, 1.0));
    Rng r1 = make_rng(21);
    const Matrix base = ancestral_sample(scm, 400, 10, r1);

    TemporalSCM muted = scm;
    muted.noises[2] = NoiseSource::zero();
    muted.noises[3] = NoiseSource::zero();
    Rng r2 = make_rng(21);
    const Matrix out = ancestral_sample(muted, 400, 10, r2);
    CHECK(out.col(0) == base.col(0));
    CHECK(out.col(1) == base.col(1));
    CHECK(out.col(2) != base.col(2));
}

TEST_CASE("numeric instability is reported with variable and timestep") {
    TemporalSCM scm;
    scm.graph = LaggedGraph::from_edges(1, 1, {{1, 0, 0}});
    scm.functions = {FunctionalDependency{FunctionKind::exponential, {5.0}, false, nullptr}};
    scm.noises = {NoiseSource::zero()};
    Rng rng = make_rng(0);
    try {
        ancestral_sample(scm, 100, 0, rng);
        FAIL("expected a numeric error");
    } catch (const NumericError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("variable 0") != std::string::npos);
        CHECK(msg.find("timestep") != std::string::npos);
    }
}

TEST_CASE("bounded wrap with bounded noise stays finite") {
    GeneratorConfig cfg;
    cfg.n_vars = 5;
    cfg.edge_probability = 0.6;
    cfg.functions = {FunctionKind::exponential, FunctionKind::power};
    cfg.noises = {NoiseKind::uniform};
    cfg.n_steps = 20000;
    Rng rng = make_rng(2);
    const TemporalSCM scm = build_random_scm(cfg, rng);
    const Matrix x = ancestral_sample(scm, cfg.n_steps, cfg.warmup, rng);
    CHECK(x.allFinite());
    CHECK(x.cwiseAbs().maxCoeff() <= 1.0 + std::sqrt(3.0));
}

TEST_CASE("multiplicative noise applies only to nodes with parents") {
    TemporalSCM scm;
    scm.graph = LaggedGraph::from_edges(2, 1, {{1, 0, 1}});
    scm.functions = {FunctionalDependency{}, FunctionalDependency{FunctionKind::linear, {1.0}, true, nullptr}};
    scm.noises = {NoiseSource::uniform(1.0, 2.0), NoiseSource::uniform(1.0, 2.0)};
    scm.noise_mode = NoiseMode::multiplicative;
    Rng rng = make_rng(6);
    const Matrix x = ancestral_trajectory(scm, 200, rng);
    for (int t = 1; t < 200; ++t) {
        CHECK(x(t, 0) >= 1.0);  // root keeps additive noise around f = 0
        CHECK(x(t, 0) <= 2.0);
        const double ratio = x(t, 1) / std::tanh(x(t - 1, 0));
        CHECK(ratio >= 1.0 - 1e-12);
        CHECK(ratio <= 2.0 + 1e-12);
    }
}
