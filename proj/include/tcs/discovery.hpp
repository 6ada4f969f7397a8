#pragma once

#include "tcs/graph.hpp"
#include "tcs/stats.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tcs {

enum class CDAlgorithm { lagged_pc, dynotears, oracle };

std::string to_string(CDAlgorithm a);
CDAlgorithm cd_algorithm_from_string(const std::string& s);

struct CDConfig {
    CDAlgorithm algorithm = CDAlgorithm::dynotears;
    int max_lag = 1;

    // lagged-pc
    double alpha = 0.05;
    int max_cond_size = 2;
    int max_combinations = 10;  // conditioning subsets tried per edge and depth

    // dynotears
    double lambda_w = 0.1;
    double lambda_a = 0.1;
    double tau_w = 0.05;
    double tau_a = 0.05;
    int max_iterations = 100;  // augmented Lagrangian outer rounds

    // oracle
    std::optional<LaggedGraph> oracle_graph;

    void validate() const;
};

struct CDResult {
    LaggedGraph graph;
    /// Per-cell confidence: |A| for dynotears, 1 - max p-value for lagged-pc,
    /// edge indicators for the oracle.
    LagTensor scores;
    std::vector<std::vector<Parent>> parents;
    bool converged = true;
    double acyclicity = 0.0;  // final h(W), dynotears only
    int outer_iterations = 0;
};

struct CiResult {
    double statistic = 0.0;  // partial correlation
    double p_value = 1.0;
};

/// Partial-correlation test of x _||_ y | z: residualise both on [1, z] by least
/// squares, correlate the residuals, and take a two-sided Student t p-value
/// with n - |z| - 2 degrees of freedom.
CiResult parcorr_ci_test(const Vector& x, const Vector& y, const Matrix& z);

/// PC-style skeleton search restricted to lagged candidates. For each target
/// every candidate parent is tested against conditioning subsets of the other
/// retained candidates, depth 0..max_cond_size; an edge survives only if every
/// test rejects independence at alpha.
CDResult lagged_pc_discover(const Matrix& data, const CDConfig& cfg);

/// exp(M) by scaling and squaring with a Taylor kernel.
Matrix matrix_exponential(const Matrix& m);

/// trace(exp(W o W)) - d; zero exactly when W's weighted digraph is acyclic.
double acyclicity_h(const Matrix& w);

struct DynotearsStep {
    int outer = 0;
    int inner = 0;
    double objective = 0.0;  // penalised augmented Lagrangian value after the step
};

using DynotearsMonitor = std::function<void(const DynotearsStep&)>;

/// Linear SVAR fit X = XW + YA + Z with l1 penalties and h(W) = 0 enforced by
/// an augmented Lagrangian. Inner problems use proximal gradient with
/// backtracking. Columns are standardised first. Only the thresholded lagged
/// matrix A becomes the returned graph; W is discarded.
CDResult dynotears_discover(const Matrix& data, const CDConfig& cfg, const DynotearsMonitor& monitor = {});

/// Dispatches on cfg.algorithm. The oracle returns its graph with unit scores.
CDResult discover(const Matrix& data, const CDConfig& cfg);

}  // namespace tcs
