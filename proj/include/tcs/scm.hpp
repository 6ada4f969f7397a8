#pragma once

#include "tcs/graph.hpp"
#include "tcs/noise.hpp"
#include "tcs/rng.hpp"
#include "tcs/stats.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tcs {

/// Anything that maps an ordered vector of lagged parent values to a
/// prediction. Fitted forecasters implement this to plug into an SCM.
class ParentPredictor {
public:
    virtual ~ParentPredictor() = default;
    virtual std::size_t arity() const = 0;
    virtual double predict(std::span<const double> parent_values) const = 0;
};

enum class FunctionKind { linear, power, exponential, sigmoid, relu, trigonometric, fitted };

std::string to_string(FunctionKind kind);
FunctionKind function_kind_from_string(const std::string& s);

/// f^j of one variable. For the closed-form kinds the output is
/// sum_k params[k] * g(x_k) with g chosen by kind, optionally passed through
/// tanh. The fitted kind delegates to a predictor.
struct FunctionalDependency {
    FunctionKind kind = FunctionKind::linear;
    std::vector<double> params;
    bool bounded_wrap = false;
    std::shared_ptr<const ParentPredictor> predictor;

    std::size_t arity() const;
    double evaluate(std::span<const double> parent_values) const;
};

enum class NoiseMode { additive, multiplicative };

struct TemporalSCM {
    LaggedGraph graph;
    std::vector<FunctionalDependency> functions;
    std::vector<NoiseSource> noises;
    NoiseMode noise_mode = NoiseMode::additive;

    /// Checks sizes and parent arity against the graph; throws ArgumentError.
    void validate() const;
};

enum class GraphModel { erdos_renyi, barabasi_albert };

struct GeneratorConfig {
    int n_vars = 5;
    int n_steps = 1200;  // total simulated steps T, including warmup and initial lags
    int warmup = 100;
    int min_lag = 1;
    int max_lag = 1;
    double edge_probability = 0.2;
    // When set, an Erdos-Renyi graph gets exactly this many edges instead of
    // per-cell Bernoulli draws.
    std::optional<int> n_edges;
    GraphModel graph_model = GraphModel::erdos_renyi;
    bool allow_self_lags = true;
    std::vector<FunctionKind> functions{FunctionKind::linear};
    std::vector<NoiseKind> noises{NoiseKind::normal};
    double noise_scale = 1.0;
    double coef_min = 0.5;
    double coef_max = 2.0;
    NoiseMode noise_mode = NoiseMode::additive;
    std::uint64_t seed = 0;

    void validate() const;
    int output_rows() const { return n_steps - warmup - max_lag; }
};

std::string to_string(GraphModel m);
GraphModel graph_model_from_string(const std::string& s);

LaggedGraph generate_random_graph(const GeneratorConfig& cfg, Rng& rng);

/// Random graph plus, for every variable with parents, a randomly chosen
/// function kind with coefficients uniform in +-[coef_min, coef_max] and tanh
/// wrapping. Noise per variable is drawn from the configured families with
/// unit variance times noise_scale.
TemporalSCM build_random_scm(const GeneratorConfig& cfg, Rng& rng);

/// Full trajectory of T steps: the first max_lag rows are standard normal
/// initial values, every later row is produced by the structural equations.
Matrix ancestral_trajectory(const TemporalSCM& scm, int n_steps, Rng& rng);

/// Trajectory with the first warmup + max_lag rows discarded
/// (T - W - max_lag rows remain).
Matrix ancestral_sample(const TemporalSCM& scm, int n_steps, int warmup, Rng& rng);

}  // namespace tcs
