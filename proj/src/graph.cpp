#include "tcs/graph.hpp"

#include "tcs/error.hpp"
#include "tcs/stats.hpp"

#include <algorithm>
#include <string>

namespace tcs {

namespace {

void check_shape(int n_vars, int max_lag) {
    require(n_vars >= 1, "graph: n_vars must be positive");
    require(max_lag >= 1, "graph: max_lag must be positive");
}

std::size_t cell_index(int n_vars, int max_lag, int lag, int cause, int effect) {
    if (lag < 1 || lag > max_lag || cause < 0 || cause >= n_vars || effect < 0 || effect >= n_vars) {
        throw ArgumentError("graph: cell (lag=" + std::to_string(lag) + ", cause=" + std::to_string(cause) +
                            ", effect=" + std::to_string(effect) + ") out of range");
    }
    const auto n = static_cast<std::size_t>(n_vars);
    return (static_cast<std::size_t>(lag - 1) * n + static_cast<std::size_t>(cause)) * n +
           static_cast<std::size_t>(effect);
}

}  // namespace

LagTensor::LagTensor(int n_vars, int max_lag, double fill) : n_vars_(n_vars), max_lag_(max_lag) {
    check_shape(n_vars, max_lag);
    values_.assign(static_cast<std::size_t>(max_lag) * n_vars * n_vars, fill);
}

std::size_t LagTensor::index(int lag, int cause, int effect) const {
    return cell_index(n_vars_, max_lag_, lag, cause, effect);
}
double& LagTensor::at(int lag, int cause, int effect) { return values_[index(lag, cause, effect)]; }
double LagTensor::at(int lag, int cause, int effect) const { return values_[index(lag, cause, effect)]; }

LaggedGraph::LaggedGraph(int n_vars, int max_lag) : n_vars_(n_vars), max_lag_(max_lag) {
    check_shape(n_vars, max_lag);
    cells_.assign(static_cast<std::size_t>(max_lag) * n_vars * n_vars, 0);
}

LaggedGraph LaggedGraph::from_edges(int n_vars, int max_lag, const std::vector<LaggedEdge>& edges) {
    LaggedGraph g(n_vars, max_lag);
    for (const auto& e : edges) g.set_edge(e.lag, e.cause, e.effect);
    return g;
}

LaggedGraph LaggedGraph::fully_connected(int n_vars, int max_lag) {
    LaggedGraph g(n_vars, max_lag);
    std::fill(g.cells_.begin(), g.cells_.end(), 1);
    return g;
}

std::size_t LaggedGraph::index(int lag, int cause, int effect) const {
    return cell_index(n_vars_, max_lag_, lag, cause, effect);
}

bool LaggedGraph::has_edge(int lag, int cause, int effect) const { return cells_[index(lag, cause, effect)] != 0; }

void LaggedGraph::set_edge(int lag, int cause, int effect, bool present) {
    cells_[index(lag, cause, effect)] = present ? 1 : 0;
}

std::size_t LaggedGraph::edge_count() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

std::vector<LaggedEdge> LaggedGraph::edges() const {
    std::vector<LaggedEdge> out;
    for (int lag = 1; lag <= max_lag_; ++lag)
        for (int i = 0; i < n_vars_; ++i)
            for (int j = 0; j < n_vars_; ++j)
                if (has_edge(lag, i, j)) out.push_back({lag, i, j});
    return out;
}

SummaryGraph::SummaryGraph(int n_vars) : n_vars_(n_vars) {
    require(n_vars >= 1, "summary graph: n_vars must be positive");
    cells_.assign(static_cast<std::size_t>(n_vars) * n_vars, 0);
}

bool SummaryGraph::has_edge(int cause, int effect) const {
    require(cause >= 0 && cause < n_vars_ && effect >= 0 && effect < n_vars_, "summary graph: index out of range");
    return cells_[static_cast<std::size_t>(cause) * n_vars_ + effect] != 0;
}

void SummaryGraph::set_edge(int cause, int effect, bool present) {
    require(cause >= 0 && cause < n_vars_ && effect >= 0 && effect < n_vars_, "summary graph: index out of range");
    cells_[static_cast<std::size_t>(cause) * n_vars_ + effect] = present ? 1 : 0;
}

std::size_t SummaryGraph::edge_count() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

std::vector<Parent> lagged_parents(const LaggedGraph& g, int effect) {
    require(effect >= 0 && effect < g.n_vars(), "lagged_parents: variable index " + std::to_string(effect) +
                                                    " out of range");
    std::vector<Parent> parents;
    for (int i = 0; i < g.n_vars(); ++i)
        for (int lag = 1; lag <= g.max_lag(); ++lag)
            if (g.has_edge(lag, i, effect)) parents.push_back({i, lag});
    return parents;
}

SummaryGraph to_summary(const LaggedGraph& g) {
    SummaryGraph s(g.n_vars());
    for (const auto& e : g.edges()) s.set_edge(e.cause, e.effect);
    return s;
}

std::size_t shd(const LaggedGraph& a, const LaggedGraph& b) {
    require(a.n_vars() == b.n_vars() && a.max_lag() == b.max_lag(), "shd: graphs differ in shape");
    std::size_t d = 0;
    for (std::size_t k = 0; k < a.cells().size(); ++k) d += a.cells()[k] != b.cells()[k];
    return d;
}

double edge_auc(const LagTensor& scores, const LaggedGraph& truth) {
    require(scores.n_vars() == truth.n_vars() && scores.max_lag() == truth.max_lag(),
            "edge_auc: score tensor and graph differ in shape");
    const std::size_t edges = truth.edge_count();
    if (edges == 0 || edges == truth.cells().size()) {
        throw DataError("edge_auc: undefined AUC, reference graph has " +
                        std::string(edges == 0 ? "no edges" : "every possible edge"));
    }
    std::vector<int> labels(truth.cells().begin(), truth.cells().end());
    return roc_auc(labels, scores.flat());
}

}  // namespace tcs
