#include "tcs/pipeline.hpp"

#include "tcs/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace tcs {

void TCSConfig::validate() const {
    require(!cd_space.empty(), "tcs config: cd_space is empty");
    require(!forecaster_space.empty(), "tcs config: forecaster_space is empty");
    require(!noise_space.empty(), "tcs config: noise_space is empty");
    require(!detector_space.empty(), "tcs config: detector_space is empty");
    require(sample_length >= 0, "tcs config: sample_length must be non-negative");
    require(warmup >= 0, "tcs config: warmup must be non-negative");
    require(equivalence_alpha > 0.0 && equivalence_alpha < 1.0, "tcs config: equivalence_alpha must be in (0, 1)");
    require(n_permutations >= 100, "tcs config: n_permutations must be at least 100");
    require(adf_lags >= 0, "tcs config: adf_lags must be non-negative");
    for (const auto& c : cd_space) c.validate();
    for (const auto& f : forecaster_space) f.validate();
    for (const auto& d : detector_space) d.validate();
}

TCSConfig TCSConfig::defaults() {
    TCSConfig cfg;
    CDConfig pc;
    pc.algorithm = CDAlgorithm::lagged_pc;
    CDConfig dyno;
    dyno.algorithm = CDAlgorithm::dynotears;
    cfg.cd_space = {pc, dyno};
    // The fully grown forest's in-sample residuals understate the noise, so a
    // coarser forest scored on out-of-bag residuals competes alongside it. It
    // comes first because sparsity ties go to the lowest candidate index.
    ForecasterConfig coarse;
    coarse.min_samples_leaf = 20;
    coarse.oob_residuals = true;
    cfg.forecaster_space = {coarse, ForecasterConfig{}};
    cfg.noise_space = {NoiseConfig{NoiseFit::fit_normal}, NoiseConfig{NoiseFit::fit_uniform},
                       NoiseConfig{NoiseFit::empirical}};
    cfg.detector_space = default_detector_grid();
    return cfg;
}

namespace {

[[noreturn]] void rethrow_tagged(const std::string& phase) {
    try {
        throw;
    } catch (const Error& e) {
        throw_error(e.kind(), phase + ": " + e.what());
    } catch (const std::exception& e) {
        throw NumericError(phase + ": " + e.what());
    }
}

struct DiscoveryOutcome {
    CDResult result;
    double seconds = 0.0;
};

DiscoveryOutcome run_discovery(const Matrix& data, const CDConfig& cfg) {
    try {
        if (cfg.algorithm == CDAlgorithm::oracle) return {discover(data, cfg), 0.0};
        const auto start = std::chrono::steady_clock::now();
        CDResult r = discover(data, cfg);
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        return {std::move(r), took.count()};
    } catch (...) {
        rethrow_tagged("graph estimation");
    }
}

std::vector<std::shared_ptr<const FittedForecaster>> run_forecasting(const Matrix& data, const CDResult& cd,
                                                                     const ForecasterConfig& cfg,
                                                                     std::uint64_t seed) {
    try {
        const int d = static_cast<int>(data.cols());
        std::vector<std::shared_ptr<const FittedForecaster>> out(static_cast<std::size_t>(d));
        parallel_for(static_cast<std::size_t>(d), [&](std::size_t j) {
            const auto& parents = cd.parents[j];
            ForecasterConfig use = cfg;
            if (parents.empty()) use.kind = ForecasterKind::mean_baseline;
            Rng rng = make_rng(derive_seed(seed, j));
            out[j] = fit_forecaster(data, static_cast<int>(j), parents, use, rng, cd.graph.max_lag());
        });
        return out;
    } catch (...) {
        rethrow_tagged("predictive modeling");
    }
}

std::vector<FittedNoise> run_noise(const std::vector<std::shared_ptr<const FittedForecaster>>& forecasters,
                                   const NoiseConfig& cfg) {
    try {
        std::vector<FittedNoise> out;
        for (const auto& f : forecasters) out.push_back(fit_noise(f->residuals(), cfg));
        return out;
    } catch (...) {
        rethrow_tagged("noise modeling");
    }
}

TemporalSCM assemble(const CDResult& cd, const std::vector<std::shared_ptr<const FittedForecaster>>& forecasters,
                     const std::vector<FittedNoise>& noises) {
    TemporalSCM scm;
    scm.graph = cd.graph;
    for (std::size_t j = 0; j < forecasters.size(); ++j) {
        FunctionalDependency f;
        f.kind = FunctionKind::fitted;
        f.bounded_wrap = false;
        f.predictor = forecasters[j];
        scm.functions.push_back(std::move(f));
        scm.noises.push_back(noises[j]);
    }
    scm.validate();
    return scm;
}

std::uint64_t forecast_seed(std::uint64_t master, std::size_t cd, std::size_t pred) {
    return derive_seed(derive_seed(derive_seed(master, "forecast"), cd), pred);
}

std::uint64_t candidate_seed(std::uint64_t master, std::size_t cd, std::size_t pred, std::size_t noise) {
    return derive_seed(derive_seed(derive_seed(derive_seed(master, "simulate"), cd), pred), noise);
}

std::uint64_t detector_seed(std::uint64_t master, std::size_t det) {
    return derive_seed(derive_seed(master, "detector"), det);
}

std::vector<AdfColumn> adf_columns(const Matrix& data, const std::vector<std::string>& names, int lags) {
    std::vector<AdfColumn> out;
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
        AdfColumn a;
        a.column = names.at(static_cast<std::size_t>(j));
        try {
            const Vector col = data.col(j);
            const AdfResult r =
                adf_test(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())), lags);
            a.t_statistic = r.t_statistic;
            a.critical_value = r.critical_value;
            a.stationary = r.stationary;
        } catch (const Error& e) {
            a.error = e.what();
        }
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace

FittedModel fit_candidate(const Matrix& data, const CDConfig& b_cd, const ForecasterConfig& b_pred,
                          const NoiseConfig& b_noise, Rng& rng) {
    if (!data.allFinite()) throw DataError("fit_candidate: data contains non-finite values");
    require(data.cols() >= 1, "fit_candidate: data has no columns");
    FittedModel m;
    DiscoveryOutcome d = run_discovery(data, b_cd);
    m.discovery = std::move(d.result);
    m.discovery_seconds = d.seconds;
    m.forecasters = run_forecasting(data, m.discovery, b_pred, rng());
    m.noises = run_noise(m.forecasters, b_noise);
    m.scm = assemble(m.discovery, m.forecasters, m.noises);
    return m;
}

Matrix simulate(const FittedModel& model, int n, int warmup, Rng& rng) {
    require(n >= 1, "simulate: n must be positive");
    require(warmup >= 0, "simulate: warmup must be non-negative");
    try {
        return ancestral_sample(model.scm, n + warmup + model.scm.graph.max_lag(), warmup, rng);
    } catch (...) {
        rethrow_tagged("ancestral sampling");
    }
}

BlockSample block_sample(const Matrix& data, Eigen::Index length, Rng& rng) {
    require(length >= 1, "block_sample: length must be positive");
    require(length <= data.rows(), "block_sample: length " + std::to_string(length) + " exceeds the " +
                                       std::to_string(data.rows()) + " available rows");
    std::uniform_int_distribution<Eigen::Index> pick(0, data.rows() - length);
    const Eigen::Index offset = pick(rng);
    return {data.middleRows(offset, length), offset};
}

TCSReport run_tcs(const Matrix& data, const TCSConfig& cfg, const std::vector<std::string>& columns) {
    const auto start = std::chrono::steady_clock::now();
    cfg.validate();
    if (!data.allFinite()) throw DataError("run_tcs: data contains non-finite values");
    const int d = static_cast<int>(data.cols());
    require(d >= 1, "run_tcs: data has no columns");
    require(columns.empty() || columns.size() == static_cast<std::size_t>(d), "run_tcs: column names mismatch");

    TCSReport report;
    report.columns = columns;
    if (report.columns.empty())
        for (int j = 0; j < d; ++j) report.columns.push_back("V" + std::to_string(j));
    report.detectors = cfg.detector_space;
    report.sparsity_penalty = cfg.sparsity_penalty;

    report.adf = adf_columns(data, report.columns, cfg.adf_lags);
    std::vector<bool> stationary;
    for (const auto& a : report.adf) {
        stationary.push_back(a.stationary);
        if (!a.stationary)
            report.warnings.push_back("column '" + a.column + "' did not pass the ADF stationarity check" +
                                      (a.error.empty() ? "" : " (" + a.error + ")"));
    }

    const int n = cfg.sample_length > 0 ? cfg.sample_length : static_cast<int>(std::min<Eigen::Index>(2000, data.rows()));
    require(n <= data.rows(), "tcs config: sample_length " + std::to_string(n) + " exceeds the " +
                                  std::to_string(data.rows()) + " rows of input data");
    report.sample_length = n;
    Rng block_rng = make_rng(derive_seed(cfg.seed, "real-block"));
    const BlockSample real = block_sample(data, n, block_rng);
    report.real_block_offset = real.offset;

    const std::size_t n_cd = cfg.cd_space.size();
    const std::size_t n_pred = cfg.forecaster_space.size();
    const std::size_t n_noise = cfg.noise_space.size();
    const std::size_t n_det = cfg.detector_space.size();

    struct Stage {
        std::string error;
        ErrorKind kind = ErrorKind::numeric;
    };
    auto record = [](Stage& s) {
        try {
            throw;
        } catch (const Error& e) {
            s.error = e.what();
            s.kind = e.kind();
        } catch (const std::exception& e) {
            s.error = e.what();
        }
    };

    std::vector<DiscoveryOutcome> discoveries(n_cd);
    std::vector<Stage> cd_stage(n_cd);
    parallel_for(n_cd, [&](std::size_t c) {
        try {
            discoveries[c] = run_discovery(data, cfg.cd_space[c]);
        } catch (...) {
            record(cd_stage[c]);
        }
    });

    std::vector<std::vector<std::shared_ptr<const FittedForecaster>>> fits(n_cd * n_pred);
    std::vector<Stage> fit_stage(n_cd * n_pred);
    parallel_for(n_cd * n_pred, [&](std::size_t k) {
        const std::size_t c = k / n_pred;
        const std::size_t p = k % n_pred;
        if (!cd_stage[c].error.empty()) {
            fit_stage[k] = cd_stage[c];
            return;
        }
        try {
            fits[k] = run_forecasting(data, discoveries[c].result, cfg.forecaster_space[p], forecast_seed(cfg.seed, c, p));
        } catch (...) {
            record(fit_stage[k]);
        }
    });

    report.candidates.resize(n_cd * n_pred * n_noise);
    parallel_for(report.candidates.size(), [&](std::size_t idx) {
        CandidateModel& cand = report.candidates[idx];
        cand.index = idx;
        cand.cd_index = idx / (n_pred * n_noise);
        cand.forecaster_index = (idx / n_noise) % n_pred;
        cand.noise_index = idx % n_noise;
        cand.cd = cfg.cd_space[cand.cd_index];
        cand.forecaster = cfg.forecaster_space[cand.forecaster_index];
        cand.noise = cfg.noise_space[cand.noise_index];
        const std::size_t fit_k = cand.cd_index * n_pred + cand.forecaster_index;
        if (!fit_stage[fit_k].error.empty()) {
            cand.error = fit_stage[fit_k].error;
            cand.error_kind = fit_stage[fit_k].kind;
            return;
        }
        try {
            auto model = std::make_shared<FittedModel>();
            model->discovery = discoveries[cand.cd_index].result;
            model->discovery_seconds = discoveries[cand.cd_index].seconds;
            model->forecasters = fits[fit_k];
            model->noises = run_noise(model->forecasters, cand.noise);
            model->scm = assemble(model->discovery, model->forecasters, model->noises);
            Rng rng = make_rng(candidate_seed(cfg.seed, cand.cd_index, cand.forecaster_index, cand.noise_index));
            cand.simulated = simulate(*model, n, cfg.warmup, rng);
            cand.edge_count = model->discovery.graph.edge_count();
            if (cand.cd.algorithm == CDAlgorithm::dynotears && !model->discovery.converged)
                cand.warnings.push_back("dynotears did not reach h(W) <= 1e-8; using its best iterate");
            for (int j = 0; j < d; ++j)
                if (model->discovery.parents[static_cast<std::size_t>(j)].empty() && !stationary[static_cast<std::size_t>(j)])
                    cand.warnings.push_back("mean baseline for non-stationary column '" +
                                            report.columns[static_cast<std::size_t>(j)] + "'");
            cand.model = std::move(model);
            cand.ok = true;
        } catch (...) {
            Stage s;
            record(s);
            cand.error = s.error;
            cand.error_kind = s.kind;
        }
    });

    for (auto& cand : report.candidates)
        if (cand.ok) {
            cand.detections.resize(n_det);
            cand.detector_aucs.assign(n_det, 0.0);
        }
    std::vector<Stage> det_stage(report.candidates.size() * n_det);
    parallel_for(report.candidates.size() * n_det, [&](std::size_t k) {
        CandidateModel& cand = report.candidates[k / n_det];
        const std::size_t det = k % n_det;
        if (!cand.ok) return;
        const DetectorConfig& dc = cfg.detector_space[det];
        try {
            // Same split seed for every candidate, so all candidates share test labels per detector.
            Rng split_rng = make_rng(detector_seed(cfg.seed, det));
            const C2stSplit split = build_c2st_dataset(real.rows, cand.simulated, dc, split_rng);
            try {
                cand.detections[det] = train_and_score_detector(split, dc, split_rng);
            } catch (const DetectorConvergenceError& e) {
                cand.detections[det] = e.best();
            }
            cand.detector_aucs[det] = cand.detections[det].auc;
        } catch (...) {
            record(det_stage[k]);
        }
    });

    std::vector<std::size_t> ok;
    for (auto& cand : report.candidates) {
        if (!cand.ok) continue;
        for (std::size_t det = 0; det < n_det; ++det) {
            const Stage& s = det_stage[cand.index * n_det + det];
            if (!s.error.empty() && cand.ok) {
                cand.ok = false;
                cand.error = "detection (" + cfg.detector_space[det].label() + "): " + s.error;
                cand.error_kind = s.kind;
            }
            if (cand.ok && !cand.detections[det].converged)
                cand.warnings.push_back("detector " + cfg.detector_space[det].label() +
                                        " hit its iteration cap; scored with the last iterate");
        }
        if (cand.ok) {
            cand.worst_case_auc = *std::max_element(cand.detector_aucs.begin(), cand.detector_aucs.end());
            ok.push_back(cand.index);
        }
    }

    if (ok.empty()) {
        std::string msg = "all " + std::to_string(report.candidates.size()) + " candidates failed:";
        for (const auto& cand : report.candidates)
            msg += (cand.index ? "; [" : " [") + std::to_string(cand.index) + "] " + cand.error;
        throw_error(report.candidates.front().error_kind, msg);
    }

    std::vector<std::vector<double>> table;
    for (std::size_t i : ok) table.push_back(report.candidates[i].detector_aucs);
    const MinMaxChoice choice = minmax_select(table);
    const CandidateModel& winner = report.candidates[ok[choice.candidate]];
    report.minmax_candidate = winner.index;
    report.minmax_score = choice.score;
    report.optimal_detector = static_cast<std::size_t>(
        std::max_element(winner.detector_aucs.begin(), winner.detector_aucs.end()) - winner.detector_aucs.begin());
    report.selected = winner.index;
    report.equivalence_set = {winner.index};

    if (cfg.sparsity_penalty) {
        const DetectionResult& ref = winner.detections[report.optimal_detector];
        std::vector<EquivalenceRecord> tests(ok.size());
        parallel_for(ok.size(), [&](std::size_t k) {
            const CandidateModel& other = report.candidates[ok[k]];
            tests[k].candidate = other.index;
            if (other.index == winner.index) return;
            const DetectionResult& mine = other.detections[report.optimal_detector];
            Rng rng = make_rng(derive_seed(derive_seed(cfg.seed, "equivalence"), other.index));
            const EquivalenceOutcome eq = auc_equivalence_test(ref.test_labels, ref.test_probs, mine.test_probs,
                                                               ref.auc, mine.auc, cfg.equivalence_alpha,
                                                               cfg.n_permutations, rng);
            tests[k].p_value = eq.p_value;
            tests[k].observed_gap = eq.observed;
            tests[k].equivalent = eq.equivalent;
        });
        for (const auto& t : tests) {
            if (t.candidate == winner.index) continue;
            report.equivalence_tests.push_back(t);
            if (t.equivalent) report.equivalence_set.push_back(t.candidate);
        }
        std::sort(report.equivalence_set.begin(), report.equivalence_set.end());
        std::size_t best = report.equivalence_set.front();
        for (std::size_t i : report.equivalence_set)
            if (report.candidates[i].edge_count < report.candidates[best].edge_count) best = i;
        report.selected = best;
    }

    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    report.total_seconds = took.count();
    return report;
}

EvaluationReport evaluate_pair(const Matrix& real, const Matrix& sim, const std::vector<DetectorConfig>& detectors,
                               std::uint64_t seed, const std::vector<std::string>& columns, int adf_lags) {
    require(!detectors.empty(), "evaluate: no detectors");
    require(real.cols() == sim.cols(), "evaluate: real and simulated column counts differ");
    if (!real.allFinite() || !sim.allFinite()) throw DataError("evaluate: data contains non-finite values");
    for (const auto& dc : detectors) dc.validate();
    std::vector<std::string> names = columns;
    if (names.empty())
        for (Eigen::Index j = 0; j < real.cols(); ++j) names.push_back("V" + std::to_string(j));
    require(names.size() == static_cast<std::size_t>(real.cols()), "evaluate: column names mismatch");

    EvaluationReport rep;
    rep.detectors = detectors;
    rep.aucs.assign(detectors.size(), 0.0);
    rep.converged.assign(detectors.size(), true);
    parallel_for(detectors.size(), [&](std::size_t det) {
        Rng rng = make_rng(detector_seed(seed, det));
        const C2stSplit split = build_c2st_dataset(real, sim, detectors[det], rng);
        try {
            rep.aucs[det] = train_and_score_detector(split, detectors[det], rng).auc;
        } catch (const DetectorConvergenceError& e) {
            rep.aucs[det] = e.best().auc;
            rep.converged[det] = false;
        }
    });
    rep.optimal_detector =
        static_cast<std::size_t>(std::max_element(rep.aucs.begin(), rep.aucs.end()) - rep.aucs.begin());
    rep.minmax_auc = rep.aucs[rep.optimal_detector];
    rep.mmd = mmd_gaussian(real, sim);
    rep.adf_real = adf_columns(real, names, adf_lags);
    rep.adf_sim = adf_columns(sim, names, adf_lags);
    return rep;
}

}  // namespace tcs
