#include "tcs/noise.hpp"

#include "tcs/error.hpp"
#include "tcs/stats.hpp"

#include <algorithm>
#include <cmath>

namespace tcs {

NoiseSource NoiseSource::normal(double mu, double sigma) {
    require(std::isfinite(mu) && std::isfinite(sigma) && sigma > 0, "normal noise: sigma must be positive");
    NoiseSource n;
    n.kind_ = NoiseKind::normal;
    n.a_ = mu;
    n.b_ = sigma;
    return n;
}

NoiseSource NoiseSource::uniform(double low, double high) {
    require(std::isfinite(low) && std::isfinite(high) && low < high, "uniform noise: need low < high");
    NoiseSource n;
    n.kind_ = NoiseKind::uniform;
    n.a_ = low;
    n.b_ = high;
    return n;
}

NoiseSource NoiseSource::empirical(std::vector<double> values) {
    require(!values.empty(), "empirical noise: value vector is empty");
    NoiseSource n;
    n.kind_ = NoiseKind::empirical;
    n.values_ = std::make_shared<const std::vector<double>>(std::move(values));
    return n;
}

NoiseSource NoiseSource::zero() { return NoiseSource{}; }

std::span<const double> NoiseSource::values() const {
    if (!values_) return {};
    return *values_;
}

double NoiseSource::draw(Rng& rng) const {
    switch (kind_) {
        case NoiseKind::normal:
            return std::normal_distribution<double>(a_, b_)(rng);
        case NoiseKind::uniform:
            return std::uniform_real_distribution<double>(a_, b_)(rng);
        case NoiseKind::empirical: {
            std::uniform_int_distribution<std::size_t> pick(0, values_->size() - 1);
            return (*values_)[pick(rng)];
        }
        case NoiseKind::zero:
            return 0.0;
    }
    return 0.0;
}

std::string to_string(NoiseFit kind) {
    switch (kind) {
        case NoiseFit::fit_normal: return "fit-normal";
        case NoiseFit::fit_uniform: return "fit-uniform";
        case NoiseFit::empirical: return "empirical";
    }
    return "?";
}

NoiseFit noise_fit_from_string(const std::string& s) {
    if (s == "fit-normal") return NoiseFit::fit_normal;
    if (s == "fit-uniform") return NoiseFit::fit_uniform;
    if (s == "empirical") return NoiseFit::empirical;
    throw ArgumentError("unknown noise estimator '" + s + "' (expected fit-normal, fit-uniform or empirical)");
}

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::normal: return "normal";
        case NoiseKind::uniform: return "uniform";
        case NoiseKind::empirical: return "empirical";
        case NoiseKind::zero: return "zero";
    }
    return "?";
}

NoiseKind noise_kind_from_string(const std::string& s) {
    if (s == "normal") return NoiseKind::normal;
    if (s == "uniform") return NoiseKind::uniform;
    if (s == "empirical") return NoiseKind::empirical;
    if (s == "zero") return NoiseKind::zero;
    throw ArgumentError("unknown noise family '" + s + "'");
}

FittedNoise fit_noise(std::span<const double> residuals, const NoiseConfig& cfg) {
    if (residuals.size() < std::max<std::size_t>(cfg.min_residuals, 2))
        throw DataError("fit_noise: need at least " + std::to_string(cfg.min_residuals) + " residuals, got " +
                        std::to_string(residuals.size()));
    for (double r : residuals)
        if (!std::isfinite(r)) throw DataError("fit_noise: residuals contain non-finite values");

    switch (cfg.kind) {
        case NoiseFit::fit_normal: {
            const double sd = stddev(residuals);
            if (!(sd > 0.0)) throw NumericError("fit_noise: zero-variance residuals, normal fit is degenerate");
            return NoiseSource::normal(mean(residuals), sd);
        }
        case NoiseFit::fit_uniform: {
            const auto [lo, hi] = std::minmax_element(residuals.begin(), residuals.end());
            if (!(*lo < *hi)) throw NumericError("fit_noise: constant residuals, uniform fit is degenerate");
            return NoiseSource::uniform(*lo, *hi);
        }
        case NoiseFit::empirical:
            return NoiseSource::empirical(std::vector<double>(residuals.begin(), residuals.end()));
    }
    throw ArgumentError("fit_noise: unknown kind");
}

std::vector<double> sample_noise(const FittedNoise& f, std::size_t n, Rng& rng) {
    require(n >= 1, "sample_noise: n must be positive");
    std::vector<double> out(n);
    for (auto& v : out) v = f.draw(rng);
    return out;
}

}  // namespace tcs
