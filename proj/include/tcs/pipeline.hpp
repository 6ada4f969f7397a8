#pragma once

#include "tcs/discovery.hpp"
#include "tcs/error.hpp"
#include "tcs/evaluation.hpp"
#include "tcs/forecasting.hpp"
#include "tcs/noise.hpp"
#include "tcs/scm.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tcs {

struct TCSConfig {
    std::vector<CDConfig> cd_space;
    std::vector<ForecasterConfig> forecaster_space;
    std::vector<NoiseConfig> noise_space;
    std::vector<DetectorConfig> detector_space;
    int sample_length = 0;  // 0: min(2000, rows); explicit values above the row count are rejected
    int warmup = 100;
    double equivalence_alpha = 0.05;
    int n_permutations = 1000;
    std::uint64_t seed = 0;
    bool sparsity_penalty = true;
    int adf_lags = 1;

    void validate() const;
    /// lagged-pc and dynotears at max_lag 1; two 1000-tree random forests (20-row
    /// leaves with out-of-bag residuals, then fully grown with in-sample
    /// residuals); all three noise estimators; the default detector grid.
    static TCSConfig defaults();
};

/// A temporal SCM fitted to data, with the artefacts of each phase.
struct FittedModel {
    TemporalSCM scm;
    CDResult discovery;
    std::vector<std::shared_ptr<const FittedForecaster>> forecasters;
    std::vector<FittedNoise> noises;
    double discovery_seconds = 0.0;
};

/// Graph estimation, per-variable forecaster fits (mean baseline for
/// parentless variables) and noise fits on the residuals. Errors are rethrown
/// with the failing phase in the message.
FittedModel fit_candidate(const Matrix& data, const CDConfig& b_cd, const ForecasterConfig& b_pred,
                          const NoiseConfig& b_noise, Rng& rng);

/// Ancestral sampling of exactly n rows after warmup.
Matrix simulate(const FittedModel& model, int n, int warmup, Rng& rng);

struct BlockSample {
    Matrix rows;
    Eigen::Index offset = 0;
};

/// One contiguous block of `length` rows at a uniformly random offset.
BlockSample block_sample(const Matrix& data, Eigen::Index length, Rng& rng);

struct CandidateModel {
    std::size_t index = 0;
    std::size_t cd_index = 0;
    std::size_t forecaster_index = 0;
    std::size_t noise_index = 0;
    CDConfig cd;
    ForecasterConfig forecaster;
    NoiseConfig noise;

    bool ok = false;
    std::string error;  // "<phase>: message" when !ok
    ErrorKind error_kind = ErrorKind::numeric;

    std::shared_ptr<const FittedModel> model;
    Matrix simulated;
    std::vector<DetectionResult> detections;  // one per detector config
    std::vector<double> detector_aucs;
    double worst_case_auc = 0.0;
    std::size_t edge_count = 0;
    std::vector<std::string> warnings;
};

struct EquivalenceRecord {
    std::size_t candidate = 0;
    double p_value = 1.0;
    double observed_gap = 0.0;
    bool equivalent = true;
};

struct AdfColumn {
    std::string column;
    double t_statistic = 0.0;
    double critical_value = 0.0;
    bool stationary = false;
    std::string error;
};

struct TCSReport {
    std::vector<std::string> columns;
    std::vector<CandidateModel> candidates;
    std::vector<DetectorConfig> detectors;
    int sample_length = 0;
    Eigen::Index real_block_offset = 0;

    std::size_t minmax_candidate = 0;
    double minmax_score = 0.0;
    std::size_t optimal_detector = 0;  // argmax of the min-max winner's row

    bool sparsity_penalty = true;
    std::vector<EquivalenceRecord> equivalence_tests;
    std::vector<std::size_t> equivalence_set;
    std::size_t selected = 0;

    std::vector<AdfColumn> adf;
    std::vector<std::string> warnings;
    double total_seconds = 0.0;

    const CandidateModel& selected_candidate() const { return candidates.at(selected); }
};

/// Full grid over cd x forecaster x noise, each simulated and scored by every
/// detector against one shared block of real data, followed by min-max
/// selection and, when enabled, the sparsity penalty. Failed candidates are
/// kept in the report and excluded from selection.
TCSReport run_tcs(const Matrix& data, const TCSConfig& cfg, const std::vector<std::string>& columns = {});

/// Real-versus-simulated comparison outside the search loop.
struct EvaluationReport {
    std::vector<DetectorConfig> detectors;
    std::vector<double> aucs;
    std::vector<bool> converged;
    double minmax_auc = 0.0;  // worst case over detectors
    std::size_t optimal_detector = 0;
    MMDResult mmd;
    std::vector<AdfColumn> adf_real;
    std::vector<AdfColumn> adf_sim;
};

/// Detector splits use the same seed derivation as run_tcs.
EvaluationReport evaluate_pair(const Matrix& real, const Matrix& sim, const std::vector<DetectorConfig>& detectors,
                               std::uint64_t seed, const std::vector<std::string>& columns = {}, int adf_lags = 1);

}  // namespace tcs
