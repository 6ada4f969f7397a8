#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace tcs {

/// A lagged parent X^var_{t-lag} of some effect variable.
struct Parent {
    int var = 0;
    int lag = 1;
    auto operator<=>(const Parent&) const = default;
};

/// Edge X^cause_{t-lag} -> X^effect_t.
struct LaggedEdge {
    int lag = 1;
    int cause = 0;
    int effect = 0;
    auto operator<=>(const LaggedEdge&) const = default;
};

/// Dense (lag, cause, effect) tensor of reals; lag runs 1..max_lag.
class LagTensor {
public:
    LagTensor() = default;
    LagTensor(int n_vars, int max_lag, double fill = 0.0);

    int n_vars() const { return n_vars_; }
    int max_lag() const { return max_lag_; }
    std::size_t size() const { return values_.size(); }

    double& at(int lag, int cause, int effect);
    double at(int lag, int cause, int effect) const;
    const std::vector<double>& flat() const { return values_; }

private:
    std::size_t index(int lag, int cause, int effect) const;
    int n_vars_ = 0;
    int max_lag_ = 0;
    std::vector<double> values_;
};

/// Window-lagged causal graph. Only lags >= 1 are representable, so the
/// unrolled graph is acyclic by construction. Self-lags (cause == effect) are
/// ordinary autoregressive edges.
class LaggedGraph {
public:
    LaggedGraph() = default;
    LaggedGraph(int n_vars, int max_lag);

    static LaggedGraph from_edges(int n_vars, int max_lag, const std::vector<LaggedEdge>& edges);
    /// Every cell set; the densest candidate graph.
    static LaggedGraph fully_connected(int n_vars, int max_lag);

    int n_vars() const { return n_vars_; }
    int max_lag() const { return max_lag_; }

    bool has_edge(int lag, int cause, int effect) const;
    void set_edge(int lag, int cause, int effect, bool present = true);

    std::size_t edge_count() const;
    /// Edges ordered by (lag, cause, effect).
    std::vector<LaggedEdge> edges() const;
    const std::vector<std::uint8_t>& cells() const { return cells_; }

    bool operator==(const LaggedGraph&) const = default;

private:
    std::size_t index(int lag, int cause, int effect) const;
    int n_vars_ = 0;
    int max_lag_ = 0;
    std::vector<std::uint8_t> cells_;
};

class SummaryGraph {
public:
    explicit SummaryGraph(int n_vars);
    int n_vars() const { return n_vars_; }
    bool has_edge(int cause, int effect) const;
    void set_edge(int cause, int effect, bool present = true);
    std::size_t edge_count() const;
    bool operator==(const SummaryGraph&) const = default;

private:
    int n_vars_;
    std::vector<std::uint8_t> cells_;
};

/// Parents of `effect`, ordered by (var, lag).
std::vector<Parent> lagged_parents(const LaggedGraph& g, int effect);

SummaryGraph to_summary(const LaggedGraph& g);

/// Number of (lag, cause, effect) cells on which the graphs disagree.
std::size_t shd(const LaggedGraph& a, const LaggedGraph& b);

/// ROC-AUC of the flattened score tensor against the flattened edge indicators.
double edge_auc(const LagTensor& scores, const LaggedGraph& truth);

}  // namespace tcs
