#include <doctest.h>

#include "tcs/error.hpp"
#include "tcs/forecasting.hpp"

#include <algorithm>
#include <cmath>

using namespace tcs;

namespace {

Matrix gaussian_data(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = standard_normal(rng);
    return m;
}

double rms(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s / static_cast<double>(v.size()));
}

std::vector<double> design_row(const LaggedDesign& d, Eigen::Index r) {
    std::vector<double> row(static_cast<std::size_t>(d.features.cols()));
    for (Eigen::Index k = 0; k < d.features.cols(); ++k) row[static_cast<std::size_t>(k)] = d.features(r, k);
    return row;
}

}  // namespace

TEST_CASE("lagged design: shift by one") {
    const Matrix data = gaussian_data(5, 2, 1);
    const std::vector<Parent> pa{{0, 1}};
    const LaggedDesign d = build_lagged_design(data, 1, pa, 1);
    REQUIRE(d.features.rows() == 4);
    REQUIRE(d.features.cols() == 1);
    for (Eigen::Index r = 0; r < 4; ++r) {
        CHECK(d.features(r, 0) == data(r, 0));
        CHECK(d.targets(r) == data(r + 1, 1));
    }
}

TEST_CASE("lagged design: mixed lags against index enumeration") {
    const Matrix data = gaussian_data(12, 3, 2);
    const std::vector<Parent> pa{{2, 1}, {0, 3}, {1, 2}};
    const LaggedDesign d = build_lagged_design(data, 0, pa, 3);
    REQUIRE(d.features.rows() == 12 - 3);
    for (int t = 3; t < 12; ++t) {
        const int r = t - 3;
        CHECK(d.features(r, 0) == data(t - 1, 2));
        CHECK(d.features(r, 1) == data(t - 3, 0));
        CHECK(d.features(r, 2) == data(t - 2, 1));
        CHECK(d.targets(r) == data(t, 0));
    }
    const LaggedDesign one = build_lagged_design(data.topRows(4), 0, pa, 3);
    CHECK(one.features.rows() == 1);
    CHECK_THROWS_AS(build_lagged_design(data.topRows(3), 0, pa, 3), DataError);
    CHECK_THROWS_AS(build_lagged_design(data, 0, std::vector<Parent>{}, 3), ArgumentError);
    CHECK_THROWS_AS(build_lagged_design(data, 0, std::vector<Parent>{{0, 4}}, 3), ArgumentError);
}

TEST_CASE("mean baseline") {
    Matrix col(3, 1);
    col << 1.0, 2.0, 3.0;
    ForecasterConfig cfg;
    cfg.kind = ForecasterKind::mean_baseline;
    Rng rng = make_rng(0);
    const auto f = fit_forecaster(col, 0, {}, cfg, rng);
    CHECK(f->predict({}) == 2.0);
    CHECK(predict(*f, {}) == 2.0);
    CHECK(f->residuals() == std::vector<double>{-1.0, 0.0, 1.0});

    ForecasterConfig rf;
    CHECK_THROWS_AS(fit_forecaster(col, 0, {}, rf, rng), ArgumentError);
}

TEST_CASE("deep trees reproduce an axis-aligned relation") {
    Matrix data = gaussian_data(400, 2, 3);
    for (Eigen::Index t = 1; t < 400; ++t) data(t, 1) = data(t - 1, 0);
    ForecasterConfig cfg;
    cfg.n_trees = 50;
    cfg.bootstrap = false;
    Rng rng = make_rng(4);
    const std::vector<Parent> pa{{0, 1}};
    const auto f = fit_forecaster(data, 1, pa, cfg, rng);
    const double scale = std::sqrt((data.col(1).array() - data.col(1).mean()).square().mean());
    CHECK(rms(f->residuals()) / scale < 0.05);
}

TEST_CASE("a tree with no admissible split predicts the global mean") {
    // The data-size rule (rows >= 2 * min_samples_leaf) keeps min_samples_leaf = n
    // out of reach, so the degenerate stump comes from a constant parent instead.
    Matrix data = gaussian_data(60, 2, 5);
    data.col(0).setConstant(1.5);
    ForecasterConfig cfg;
    cfg.n_trees = 1;
    cfg.bootstrap = false;
    cfg.min_samples_leaf = 29;
    Rng rng = make_rng(6);
    const std::vector<Parent> pa{{0, 1}};
    const auto f = fit_forecaster(data, 1, pa, cfg, rng);
    const double m = data.col(1).tail(59).mean();
    for (double x : {-3.0, 0.0, 2.5}) CHECK(f->predict(std::vector<double>{x}) == doctest::Approx(m).epsilon(1e-14));
    CHECK(f->trees()[0].node_count() == 1);

    cfg.min_samples_leaf = 30;
    CHECK_THROWS_AS(fit_forecaster(data, 1, pa, cfg, rng), DataError);
}

TEST_CASE("forest prediction is the mean of its trees") {
    const Matrix data = gaussian_data(200, 3, 7);
    ForecasterConfig cfg;
    cfg.n_trees = 25;
    Rng rng = make_rng(8);
    const std::vector<Parent> pa{{0, 1}, {2, 2}};
    const auto f = fit_forecaster(data, 1, pa, cfg, rng);
    Rng probe = make_rng(9);
    for (int k = 0; k < 20; ++k) {
        const std::vector<double> row{standard_normal(probe), standard_normal(probe)};
        double fwd = 0.0;
        for (const auto& t : f->trees()) fwd += t.predict(row);
        double rev = 0.0;
        for (auto it = f->trees().rbegin(); it != f->trees().rend(); ++it) rev += it->predict(row);
        CHECK(f->predict(row) == doctest::Approx(fwd / 25.0).epsilon(1e-14));
        CHECK(f->predict(row) == doctest::Approx(rev / 25.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(f->predict(std::vector<double>{1.0}), ArgumentError);
}

TEST_CASE("identical trees average to one tree") {
    const Matrix data = gaussian_data(150, 2, 10);
    ForecasterConfig cfg;
    cfg.bootstrap = false;
    cfg.n_trees = 7;
    Rng r1 = make_rng(11);
    const std::vector<Parent> pa{{0, 1}, {1, 1}};
    const auto forest = fit_forecaster(data, 0, pa, cfg, r1);
    cfg.n_trees = 1;
    Rng r2 = make_rng(12);
    const auto single = fit_forecaster(data, 0, pa, cfg, r2);
    Rng probe = make_rng(13);
    for (int k = 0; k < 20; ++k) {
        const std::vector<double> row{standard_normal(probe), standard_normal(probe)};
        CHECK(forest->predict(row) == doctest::Approx(single->predict(row)).epsilon(1e-14));
    }
}

TEST_CASE("residual identity and determinism") {
    const Matrix data = gaussian_data(300, 3, 14);
    ForecasterConfig cfg;
    cfg.n_trees = 20;
    const std::vector<Parent> pa{{0, 1}, {1, 2}};
    Rng a = make_rng(15);
    Rng b = make_rng(15);
    const auto fa = fit_forecaster(data, 2, pa, cfg, a);
    const auto fb = fit_forecaster(data, 2, pa, cfg, b);
    CHECK(fa->residuals() == fb->residuals());
    REQUIRE(fa->residuals().size() == 298);
    const LaggedDesign d = build_lagged_design(data, 2, pa, 2);
    for (std::size_t k = 0; k < 298; ++k) {
        CHECK(fa->targets()[k] == d.targets(static_cast<Eigen::Index>(k)));
        CHECK(fa->fitted_values()[k] + fa->residuals()[k] ==
              doctest::Approx(fa->targets()[k]).epsilon(1e-15).scale(1.0));
        CHECK(fa->fitted_values()[k] == fa->predict(design_row(d, static_cast<Eigen::Index>(k))));
    }
}

TEST_CASE("in-sample error does not grow as leaves shrink") {
    const Matrix data = gaussian_data(300, 2, 16);
    const std::vector<Parent> pa{{0, 1}, {1, 1}};
    double previous = std::numeric_limits<double>::infinity();
    for (int leaf : {40, 20, 10, 5, 2, 1}) {
        ForecasterConfig cfg;
        cfg.n_trees = 10;
        cfg.min_samples_leaf = leaf;
        Rng rng = make_rng(17);
        const double err = rms(fit_forecaster(data, 0, pa, cfg, rng)->residuals());
        CHECK(err <= previous + 1e-12);
        previous = err;
    }
}

TEST_CASE("split ties go to the lowest feature") {
    Matrix data = gaussian_data(100, 3, 18);
    data.col(1) = data.col(0);  // features 0 and 1 carry identical information
    ForecasterConfig cfg;
    cfg.n_trees = 1;
    cfg.bootstrap = false;
    Rng rng = make_rng(19);
    const std::vector<Parent> pa{{1, 1}, {0, 1}};  // design column 0 is variable 1
    const auto f = fit_forecaster(data, 2, pa, cfg, rng);
    for (const auto& n : f->trees()[0].nodes()) CHECK(n.feature <= 0);
}

TEST_CASE("depth limit, data-size and oob residuals") {
    const Matrix data = gaussian_data(200, 2, 20);
    const std::vector<Parent> pa{{0, 1}};
    ForecasterConfig cfg;
    cfg.n_trees = 5;
    cfg.max_depth = 2;
    Rng rng = make_rng(21);
    const auto shallow = fit_forecaster(data, 1, pa, cfg, rng);
    for (const auto& t : shallow->trees()) CHECK(t.depth() <= 2);

    ForecasterConfig big;
    big.min_samples_leaf = 100;
    CHECK_THROWS_AS(fit_forecaster(data, 1, pa, big, rng), DataError);

    ForecasterConfig oob;
    oob.n_trees = 30;
    oob.oob_residuals = true;
    Rng r1 = make_rng(22);
    const auto fo = fit_forecaster(data, 1, pa, oob, r1);
    oob.oob_residuals = false;
    Rng r2 = make_rng(22);
    const auto fi = fit_forecaster(data, 1, pa, oob, r2);
    CHECK(fo->residuals().size() == 199);
    CHECK(rms(fo->residuals()) > rms(fi->residuals()));

    ForecasterConfig bad;
    bad.n_trees = 0;
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
    CHECK(forecaster_kind_from_string("mean-baseline") == ForecasterKind::mean_baseline);
}
