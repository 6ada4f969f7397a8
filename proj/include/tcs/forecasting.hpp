#pragma once

#include "tcs/graph.hpp"
#include "tcs/rng.hpp"
#include "tcs/scm.hpp"
#include "tcs/stats.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tcs {

enum class ForecasterKind { random_forest, mean_baseline };

std::string to_string(ForecasterKind kind);
ForecasterKind forecaster_kind_from_string(const std::string& s);

struct ForecasterConfig {
    ForecasterKind kind = ForecasterKind::random_forest;
    int n_trees = 1000;
    std::optional<int> max_depth;  // nullopt: grow until leaves are pure or too small
    bool bootstrap = true;
    int min_samples_leaf = 1;
    // Residuals from out-of-bag predictions instead of in-sample ones.
    bool oob_residuals = false;

    void validate() const;
};

struct LaggedDesign {
    Matrix features;  // row r <-> time t = r + max_lag
    Vector targets;
};

/// Row r holds data[r + max_lag - lag][var] for each parent, target
/// data[r + max_lag][target].
LaggedDesign build_lagged_design(const Matrix& data, int target, std::span<const Parent> parents, int max_lag);

/// CART regression tree with exhaustive variance-reduction splits over all
/// features. Candidate thresholds are midpoints between consecutive distinct
/// values; ties go to the lowest feature, then the lowest threshold.
class RegressionTree {
public:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };

    static RegressionTree fit(const Matrix& x, const Vector& y, std::vector<int> sample, int min_samples_leaf,
                              std::optional<int> max_depth);

    double predict(std::span<const double> row) const;
    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::size_t depth() const;

private:
    std::vector<Node> nodes_;
};

class FittedForecaster : public ParentPredictor {
public:
    ForecasterKind kind() const { return kind_; }
    const std::vector<Parent>& parents() const { return parents_; }
    int max_lag() const { return max_lag_; }
    double baseline_mean() const { return mean_; }
    const std::vector<RegressionTree>& trees() const { return *trees_; }
    /// Training residuals (target - prediction), one per usable training row.
    const std::vector<double>& residuals() const { return residuals_; }
    /// The in-sample predictions the residuals were taken against.
    const std::vector<double>& fitted_values() const { return fitted_; }
    /// The aligned training targets.
    const std::vector<double>& targets() const { return targets_; }

    std::size_t arity() const override { return parents_.size(); }
    double predict(std::span<const double> parent_values) const override;

private:
    friend std::shared_ptr<const FittedForecaster> fit_forecaster(const Matrix&, int, std::span<const Parent>,
                                                                  const ForecasterConfig&, Rng&, int);
    ForecasterKind kind_ = ForecasterKind::mean_baseline;
    std::vector<Parent> parents_;
    int max_lag_ = 0;
    double mean_ = 0.0;
    std::shared_ptr<const std::vector<RegressionTree>> trees_ = std::make_shared<std::vector<RegressionTree>>();
    std::vector<double> residuals_;
    std::vector<double> fitted_;
    std::vector<double> targets_;
};

/// Fits column `target` on its lagged parents. With no parents the kind must
/// be mean_baseline. max_lag defaults (when <= 0) to the largest parent lag;
/// it fixes how many leading rows are dropped from the design.
std::shared_ptr<const FittedForecaster> fit_forecaster(const Matrix& data, int target,
                                                       std::span<const Parent> parents,
                                                       const ForecasterConfig& cfg, Rng& rng, int max_lag = 0);

double predict(const FittedForecaster& f, std::span<const double> parent_values);

}  // namespace tcs
