#include <doctest.h>

#include "tcs/error.hpp"
#include "tcs/noise.hpp"
#include "tcs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

using namespace tcs;

namespace {

NoiseConfig cfg_of(NoiseFit kind, std::size_t min_residuals = 10) { return NoiseConfig{kind, min_residuals}; }

double sample_mean(const std::vector<double>& v) { return mean(v); }

}  // namespace

TEST_CASE("hand-computed fits") {
    const std::vector<double> r{-1.0, 0.0, 1.0};
    const FittedNoise n = fit_noise(r, cfg_of(NoiseFit::fit_normal, 3));
    CHECK(n.kind() == NoiseKind::normal);
    CHECK(n.param_a() == 0.0);
    CHECK(n.param_b() == 1.0);

    const FittedNoise u = fit_noise(std::vector<double>{2.0, 5.0, 3.0}, cfg_of(NoiseFit::fit_uniform, 3));
    CHECK(u.kind() == NoiseKind::uniform);
    CHECK(u.param_a() == 2.0);
    CHECK(u.param_b() == 5.0);

    const FittedNoise e = fit_noise(std::vector<double>{4.0, -2.0, 0.5}, cfg_of(NoiseFit::empirical, 3));
    CHECK(std::vector<double>(e.values().begin(), e.values().end()) == std::vector<double>{4.0, -2.0, 0.5});
}

TEST_CASE("fit preconditions") {
    std::vector<double> short_r(9, 1.0);
    short_r[0] = 2.0;
    CHECK_THROWS_AS(fit_noise(short_r, cfg_of(NoiseFit::fit_normal)), DataError);
    std::vector<double> flat(20, 1.5);
    CHECK_THROWS_AS(fit_noise(flat, cfg_of(NoiseFit::fit_normal)), NumericError);
    CHECK_THROWS_AS(fit_noise(flat, cfg_of(NoiseFit::fit_uniform)), NumericError);
    CHECK_NOTHROW(fit_noise(flat, cfg_of(NoiseFit::empirical)));
    std::vector<double> bad(20, 0.0);
    bad[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(fit_noise(bad, cfg_of(NoiseFit::empirical)), DataError);
    CHECK(noise_fit_from_string("fit-uniform") == NoiseFit::fit_uniform);
    CHECK_THROWS_AS(noise_fit_from_string("flow"), ArgumentError);
}

TEST_CASE("normal fit is consistent") {
    Rng rng = make_rng(1);
    std::vector<double> draws(10000);
    std::normal_distribution<double> law(3.0, 2.0);
    for (auto& d : draws) d = law(rng);
    const FittedNoise n = fit_noise(draws, cfg_of(NoiseFit::fit_normal));
    CHECK(std::abs(n.param_a() - 3.0) < 0.1);
    CHECK(std::abs(n.param_b() - 2.0) < 0.1);

    // round trip: error shrinks roughly as 1/sqrt(n)
    double err_small = 0.0;
    double err_large = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        Rng r = make_rng(100 + static_cast<std::uint64_t>(rep));
        const auto small = sample_noise(n, 400, r);
        const auto large = sample_noise(n, 40000, r);
        err_small += std::abs(fit_noise(small, cfg_of(NoiseFit::fit_normal)).param_b() - n.param_b());
        err_large += std::abs(fit_noise(large, cfg_of(NoiseFit::fit_normal)).param_b() - n.param_b());
    }
    CHECK(err_large < err_small / 3.0);
}

TEST_CASE("sampling") {
    Rng rng = make_rng(2);
    const FittedNoise one = fit_noise(std::vector<double>{1.5, 1.5}, cfg_of(NoiseFit::empirical, 2));
    for (double v : sample_noise(one, 100, rng)) CHECK(v == 1.5);

    const std::vector<double> src{-2.0, 0.25, 0.25, 7.0, 3.5, -1.0, 0.0, 2.0, 9.0, -4.0};
    const FittedNoise e = fit_noise(src, cfg_of(NoiseFit::empirical));
    for (double v : sample_noise(e, 500, rng)) CHECK(std::find(src.begin(), src.end(), v) != src.end());

    const auto many = sample_noise(e, 100000, rng);
    const double src_var = stddev(src) * stddev(src) * (src.size() - 1) / src.size();
    const double m = sample_mean(many);
    CHECK(std::abs(m - mean(src)) <= 0.02 * std::abs(mean(src)) + 0.02);
    const double v = stddev(many) * stddev(many);
    CHECK(std::abs(v - src_var) <= 0.02 * src_var);

    const auto std_normal = sample_noise(NoiseSource::normal(0.0, 1.0), 100000, rng);
    CHECK(std::abs(sample_mean(std_normal)) < 0.02);
    CHECK(std::abs(stddev(std_normal) - 1.0) < 0.02);

    const auto uni = sample_noise(NoiseSource::uniform(2.0, 5.0), 1000, rng);
    CHECK(*std::min_element(uni.begin(), uni.end()) >= 2.0);
    CHECK(*std::max_element(uni.begin(), uni.end()) <= 5.0);

    Rng a = make_rng(3);
    Rng b = make_rng(3);
    CHECK(sample_noise(e, 50, a) == sample_noise(e, 50, b));
    CHECK(sample_noise(NoiseSource::zero(), 5, a) == std::vector<double>(5, 0.0));
}

TEST_CASE("noise source invariants") {
    CHECK_THROWS_AS(NoiseSource::normal(0.0, 0.0), ArgumentError);
    CHECK_THROWS_AS(NoiseSource::uniform(1.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(NoiseSource::empirical({}), ArgumentError);
}
