#pragma once

#include "tcs/discovery.hpp"
#include "tcs/error.hpp"
#include "tcs/rng.hpp"
#include "tcs/stats.hpp"

#include <span>
#include <string>
#include <vector>

namespace tcs {

// ---------------------------------------------------------------- MMD

struct MMDConfig {
    std::vector<double> multipliers{0.01, 0.1, 1.0, 10.0, 100.0};
};

struct MMDResult {
    double estimate = 0.0;       // unbiased estimate clamped at zero
    double unbiased_raw = 0.0;   // may be slightly negative
    double biased = 0.0;         // V-statistic, zero for identical samples
    double base_bandwidth = 0.0; // median pairwise distance of the pooled sample
};

/// Squared MMD under a sum of Gaussian kernels with bandwidths
/// multiplier * median pairwise distance.
MMDResult mmd_gaussian(const Matrix& x, const Matrix& y, const MMDConfig& cfg = {});

// ---------------------------------------------------------------- C2ST

enum class DetectorFamily { logistic_regression, svc };
enum class SvcKernel { linear, poly, rbf };
enum class GammaRule { automatic, scale };

struct DetectorConfig {
    DetectorFamily family = DetectorFamily::svc;
    double C = 1.0;
    SvcKernel kernel = SvcKernel::rbf;
    int degree = 3;
    GammaRule gamma = GammaRule::scale;
    int window_length = 1;
    double train_fraction = 0.75;
    long max_iter = 0;  // 0: solver default

    void validate() const;
    std::string label() const;
};

std::string to_string(DetectorFamily f);
std::string to_string(SvcKernel k);
std::string to_string(GammaRule g);
DetectorFamily detector_family_from_string(const std::string& s);
SvcKernel svc_kernel_from_string(const std::string& s);
GammaRule gamma_rule_from_string(const std::string& s);

/// Logistic regression plus the 24-point SVC grid (C x kernel x gamma), for
/// every requested window length.
std::vector<DetectorConfig> default_detector_grid(std::span<const int> window_lengths = std::vector<int>{1, 10});

struct C2stSplit {
    Matrix train_x;
    std::vector<int> train_y;
    Matrix test_x;
    std::vector<int> test_y;
};

/// Flattened sliding windows from both sources (label 1 = real, 0 =
/// simulated), split per class at train_fraction. Samples keep source order
/// within each split: all real windows first, then simulated ones.
C2stSplit build_c2st_dataset(const Matrix& real, const Matrix& sim, const DetectorConfig& cfg, Rng& rng);

struct DetectionResult {
    double auc = 0.5;
    std::vector<int> test_labels;
    std::vector<double> test_probs;
    DetectorConfig config;
    bool converged = true;
};

/// Thrown when a detector's solver hits its iteration cap; carries the result
/// scored with the last iterate.
class DetectorConvergenceError : public ConvergenceError {
public:
    DetectorConvergenceError(const std::string& what, DetectionResult best)
        : ConvergenceError(what), best_(std::move(best)) {}
    const DetectionResult& best() const { return best_; }

private:
    DetectionResult best_;
};

DetectionResult train_and_score_detector(const C2stSplit& split, const DetectorConfig& cfg, Rng& rng);

// ---------------------------------------------------------------- selection

struct MinMaxChoice {
    std::size_t candidate = 0;
    double score = 0.0;
};

/// Row-wise max, then the row with the smallest max (lowest index on ties).
MinMaxChoice minmax_select(const std::vector<std::vector<double>>& score_table);

struct EquivalenceOutcome {
    bool equivalent = true;
    double p_value = 1.0;
    double observed = 0.0;
};

/// Permutation test on whether two classifiers' AUCs on the same test labels
/// are statistically equivalent. Each permutation swaps the two probability
/// vectors at a random half of the indices. A permuted gap counts when it
/// exceeds the observed one; when the observed gap is exactly zero, ties count
/// too.
EquivalenceOutcome auc_equivalence_test(std::span<const int> y_test, std::span<const double> probs_o,
                                        std::span<const double> probs_i, double auc_o, double auc_i, double alpha,
                                        int n_permutations, Rng& rng);

// ---------------------------------------------------------------- ADF

struct AdfResult {
    double t_statistic = 0.0;
    double critical_value = 0.0;  // 5%, constant-only
    bool stationary = false;
    int n_obs = 0;
};

/// 5% critical value of the constant-only Dickey-Fuller distribution,
/// interpolated linearly in 1/n between tabulated sample sizes.
double adf_critical_value_5pct(int n_obs);

AdfResult adf_test(std::span<const double> series, int regression_lags = 1);

// ---------------------------------------------------------------- CD efficacy

/// dynotears, max_lag 1, lambda_w = lambda_a = 0.1.
CDConfig default_efficacy_config();

/// Discovers on both datasets and scores the simulated-data edge scores against
/// the original-data graph by ROC-AUC.
double cd_efficacy(const Matrix& original, const Matrix& simulated, const CDConfig& cfg);

}  // namespace tcs
