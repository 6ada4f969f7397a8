#pragma once

#include "tcs/rng.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace tcs {

enum class NoiseKind { normal, uniform, empirical, zero };

/// Exogenous noise law of one variable. Immutable once built; sampling draws
/// from a caller-owned rng.
class NoiseSource {
public:
    static NoiseSource normal(double mu, double sigma);
    static NoiseSource uniform(double low, double high);
    static NoiseSource empirical(std::vector<double> values);
    static NoiseSource zero();

    NoiseKind kind() const { return kind_; }
    double param_a() const { return a_; }  // mu or low
    double param_b() const { return b_; }  // sigma or high
    std::span<const double> values() const;

    double draw(Rng& rng) const;

private:
    NoiseKind kind_ = NoiseKind::zero;
    double a_ = 0.0;
    double b_ = 0.0;
    std::shared_ptr<const std::vector<double>> values_;
};

using FittedNoise = NoiseSource;

enum class NoiseFit { fit_normal, fit_uniform, empirical };

struct NoiseConfig {
    NoiseFit kind = NoiseFit::fit_normal;
    std::size_t min_residuals = 10;
};

std::string to_string(NoiseFit kind);
NoiseFit noise_fit_from_string(const std::string& s);
std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& s);

/// Fits a noise law to model residuals. Needs at least cfg.min_residuals
/// finite values.
FittedNoise fit_noise(std::span<const double> residuals, const NoiseConfig& cfg);

/// n iid draws. Empirical sources resample with replacement.
std::vector<double> sample_noise(const FittedNoise& f, std::size_t n, Rng& rng);

}  // namespace tcs
