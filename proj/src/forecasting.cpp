#include "tcs/forecasting.hpp"

#include "tcs/error.hpp"
#include "tcs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tcs {

std::string to_string(ForecasterKind kind) {
    return kind == ForecasterKind::random_forest ? "random-forest" : "mean-baseline";
}

ForecasterKind forecaster_kind_from_string(const std::string& s) {
    if (s == "random-forest") return ForecasterKind::random_forest;
    if (s == "mean-baseline") return ForecasterKind::mean_baseline;
    throw ArgumentError("unknown forecaster '" + s + "' (expected random-forest or mean-baseline)");
}

void ForecasterConfig::validate() const {
    require(n_trees >= 1, "forecaster: n_trees must be at least 1");
    require(min_samples_leaf >= 1, "forecaster: min_samples_leaf must be at least 1");
    if (max_depth) require(*max_depth >= 0, "forecaster: max_depth must be non-negative");
}

LaggedDesign build_lagged_design(const Matrix& data, int target, std::span<const Parent> parents, int max_lag) {
    require(!parents.empty(), "lagged design: empty parent list, use the mean baseline instead");
    require(max_lag >= 1, "lagged design: max_lag must be positive");
    require(target >= 0 && target < data.cols(), "lagged design: target index out of range");
    if (data.rows() <= max_lag) throw DataError("lagged design: need more than max_lag rows");
    for (const auto& p : parents) {
        require(p.var >= 0 && p.var < data.cols(), "lagged design: parent variable out of range");
        require(p.lag >= 1 && p.lag <= max_lag, "lagged design: parent lag outside [1, max_lag]");
    }
    const Eigen::Index rows = data.rows() - max_lag;
    LaggedDesign d{Matrix(rows, static_cast<Eigen::Index>(parents.size())), Vector(rows)};
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index t = r + max_lag;
        for (std::size_t k = 0; k < parents.size(); ++k)
            d.features(r, static_cast<Eigen::Index>(k)) = data(t - parents[k].lag, parents[k].var);
        d.targets(r) = data(t, target);
    }
    return d;
}

namespace {

struct TreeBuilder {
    const Matrix& x;
    const Vector& y;
    int min_leaf;
    std::optional<int> max_depth;
    std::vector<RegressionTree::Node>& nodes;

    int grow(std::vector<int>& idx, std::size_t begin, std::size_t end, int depth) {
        const std::size_t m = end - begin;
        double sum = 0.0;
        for (std::size_t k = begin; k < end; ++k) sum += y(idx[k]);
        const double value = sum / static_cast<double>(m);

        const int self = static_cast<int>(nodes.size());
        nodes.push_back({-1, 0.0, -1, -1, value});

        bool pure = true;
        for (std::size_t k = begin + 1; k < end && pure; ++k) pure = y(idx[k]) == y(idx[begin]);
        if (pure || m < 2 * static_cast<std::size_t>(min_leaf) || (max_depth && depth >= *max_depth)) return self;

        // Maximise sum_left^2/n_left + sum_right^2/n_right, equivalent to the
        // largest reduction in squared error.
        const double parent_score = sum * sum / static_cast<double>(m);
        double best_score = parent_score;
        int best_feature = -1;
        double best_threshold = 0.0;
        std::vector<int> order(idx.begin() + static_cast<std::ptrdiff_t>(begin),
                               idx.begin() + static_cast<std::ptrdiff_t>(end));
        for (int f = 0; f < x.cols(); ++f) {
            std::sort(order.begin(), order.end(), [&](int a, int b) { return x(a, f) < x(b, f); });
            double left_sum = 0.0;
            for (std::size_t k = 0; k + 1 < m; ++k) {
                left_sum += y(order[k]);
                const double lo = x(order[k], f);
                const double hi = x(order[k + 1], f);
                if (lo == hi) continue;
                const std::size_t n_left = k + 1;
                const std::size_t n_right = m - n_left;
                if (n_left < static_cast<std::size_t>(min_leaf) || n_right < static_cast<std::size_t>(min_leaf))
                    continue;
                const double right_sum = sum - left_sum;
                const double score = left_sum * left_sum / static_cast<double>(n_left) +
                                     right_sum * right_sum / static_cast<double>(n_right);
                if (score > best_score + 1e-12 * std::fabs(best_score)) {
                    best_score = score;
                    best_feature = f;
                    best_threshold = lo + 0.5 * (hi - lo);
                    if (best_threshold == hi) best_threshold = lo;
                }
            }
        }
        if (best_feature < 0) return self;

        const auto mid = std::partition(idx.begin() + static_cast<std::ptrdiff_t>(begin),
                                        idx.begin() + static_cast<std::ptrdiff_t>(end),
                                        [&](int s) { return x(s, best_feature) <= best_threshold; });
        const auto split = static_cast<std::size_t>(mid - idx.begin());
        // Stable layout keeps the tree independent of partition's internal order.
        std::sort(idx.begin() + static_cast<std::ptrdiff_t>(begin), mid);
        std::sort(mid, idx.begin() + static_cast<std::ptrdiff_t>(end));

        nodes[static_cast<std::size_t>(self)].feature = best_feature;
        nodes[static_cast<std::size_t>(self)].threshold = best_threshold;
        const int left = grow(idx, begin, split, depth + 1);
        const int right = grow(idx, split, end, depth + 1);
        nodes[static_cast<std::size_t>(self)].left = left;
        nodes[static_cast<std::size_t>(self)].right = right;
        return self;
    }
};

}  // namespace

RegressionTree RegressionTree::fit(const Matrix& x, const Vector& y, std::vector<int> sample, int min_samples_leaf,
                                   std::optional<int> max_depth) {
    require(!sample.empty(), "regression tree: empty training sample");
    RegressionTree tree;
    std::sort(sample.begin(), sample.end());
    TreeBuilder b{x, y, min_samples_leaf, max_depth, tree.nodes_};
    b.grow(sample, 0, sample.size(), 0);
    return tree;
}

double RegressionTree::predict(std::span<const double> row) const {
    int at = 0;
    for (;;) {
        const Node& n = nodes_[static_cast<std::size_t>(at)];
        if (n.feature < 0) return n.value;
        at = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
}

std::size_t RegressionTree::depth() const {
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    std::size_t deepest = 0;
    while (!stack.empty()) {
        auto [at, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const Node& n = nodes_[static_cast<std::size_t>(at)];
        if (n.feature >= 0) {
            stack.push_back({n.left, d + 1});
            stack.push_back({n.right, d + 1});
        }
    }
    return deepest;
}

double FittedForecaster::predict(std::span<const double> parent_values) const {
    require(parent_values.size() == parents_.size(), "predict: expected " + std::to_string(parents_.size()) +
                                                         " parent values, got " +
                                                         std::to_string(parent_values.size()));
    if (kind_ == ForecasterKind::mean_baseline) return mean_;
    double s = 0.0;
    for (const auto& t : *trees_) s += t.predict(parent_values);
    return s / static_cast<double>(trees_->size());
}

double predict(const FittedForecaster& f, std::span<const double> parent_values) { return f.predict(parent_values); }

std::shared_ptr<const FittedForecaster> fit_forecaster(const Matrix& data, int target,
                                                       std::span<const Parent> parents,
                                                       const ForecasterConfig& cfg, Rng& rng, int max_lag) {
    cfg.validate();
    require(target >= 0 && target < data.cols(), "fit_forecaster: target index out of range");
    if (parents.empty())
        require(cfg.kind == ForecasterKind::mean_baseline,
                "fit_forecaster: variable without parents must use the mean baseline");
    if (max_lag <= 0)
        for (const auto& p : parents) max_lag = std::max(max_lag, p.lag);

    auto out = std::make_shared<FittedForecaster>();
    out->kind_ = cfg.kind;
    out->parents_.assign(parents.begin(), parents.end());
    out->max_lag_ = max_lag;

    if (cfg.kind == ForecasterKind::mean_baseline) {
        const Eigen::Index n = data.rows();
        if (n < 2 * cfg.min_samples_leaf) throw DataError("fit_forecaster: too few rows for the mean baseline");
        std::vector<double> col(data.col(target).data(), data.col(target).data() + n);
        out->mean_ = mean(col);
        out->targets_ = col;
        out->fitted_.assign(col.size(), out->mean_);
        out->residuals_.resize(col.size());
        for (std::size_t k = 0; k < col.size(); ++k) out->residuals_[k] = col[k] - out->mean_;
        return out;
    }

    const LaggedDesign d = build_lagged_design(data, target, parents, max_lag);
    const auto n = static_cast<int>(d.targets.size());
    if (n < 2 * cfg.min_samples_leaf)
        throw DataError("fit_forecaster: " + std::to_string(n) + " usable rows, need at least " +
                        std::to_string(2 * cfg.min_samples_leaf));

    const std::uint64_t base = rng();
    const auto n_trees = static_cast<std::size_t>(cfg.n_trees);
    std::vector<RegressionTree> trees(n_trees);
    std::vector<std::vector<std::uint8_t>> in_bag(cfg.oob_residuals ? n_trees : 0);
    parallel_for(n_trees, [&](std::size_t t) {
        std::vector<int> sample(static_cast<std::size_t>(n));
        if (cfg.bootstrap) {
            Rng tree_rng = make_rng(derive_seed(base, t));
            std::uniform_int_distribution<int> pick(0, n - 1);
            for (auto& s : sample) s = pick(tree_rng);
        } else {
            std::iota(sample.begin(), sample.end(), 0);
        }
        if (cfg.oob_residuals) {
            in_bag[t].assign(static_cast<std::size_t>(n), 0);
            for (int s : sample) in_bag[t][static_cast<std::size_t>(s)] = 1;
        }
        trees[t] = RegressionTree::fit(d.features, d.targets, std::move(sample), cfg.min_samples_leaf, cfg.max_depth);
    });
    out->trees_ = std::make_shared<const std::vector<RegressionTree>>(std::move(trees));

    out->targets_.assign(d.targets.data(), d.targets.data() + n);
    out->fitted_.resize(static_cast<std::size_t>(n));
    out->residuals_.resize(static_cast<std::size_t>(n));
    std::vector<double> row(parents.size());
    for (int r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < parents.size(); ++k) row[k] = d.features(r, static_cast<Eigen::Index>(k));
        double pred = 0.0;
        if (cfg.oob_residuals) {
            double s = 0.0;
            int used = 0;
            for (std::size_t t = 0; t < n_trees; ++t) {
                if (in_bag[t][static_cast<std::size_t>(r)]) continue;
                s += (*out->trees_)[t].predict(row);
                ++used;
            }
            pred = used > 0 ? s / used : out->predict(row);
        } else {
            pred = out->predict(row);
        }
        out->fitted_[static_cast<std::size_t>(r)] = pred;
        out->residuals_[static_cast<std::size_t>(r)] = d.targets(r) - pred;
    }
    return out;
}

}  // namespace tcs
