#include "tcs/stats.hpp"

#include "tcs/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tcs {

double roc_auc(std::span<const int> labels, std::span<const double> scores) {
    require(labels.size() == scores.size(), "roc_auc: labels and scores differ in length");
    const std::size_t n = labels.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double pos_rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + j + 1);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) {
                pos_rank_sum += avg_rank;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DataError("roc_auc: undefined AUC, only one class present");
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double mean(std::span<const double> x) {
    require(!x.empty(), "mean of empty sequence");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
    require(x.size() >= 2, "stddev needs at least two values");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

namespace {

Matrix with_intercept_column(const Matrix& design) {
    Matrix full(design.rows(), design.cols() + 1);
    full.col(0).setOnes();
    full.rightCols(design.cols()) = design;
    return full;
}

}  // namespace

OlsFit ols_fit(const Matrix& design, const Vector& y, bool with_intercept) {
    require(design.rows() == y.size(), "ols: design and response differ in length");
    const Matrix x = with_intercept ? with_intercept_column(design) : design;
    if (x.cols() == 0) {
        return OlsFit{Vector(0), y, Vector(0)};
    }
    if (x.rows() <= x.cols()) throw NumericError("ols: not enough rows for the number of regressors");
    Eigen::ColPivHouseholderQR<Matrix> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < x.cols()) throw NumericError("ols: singular regression (rank-deficient design)");
    OlsFit fit;
    fit.coef = qr.solve(y);
    fit.residuals = y - x * fit.coef;
    const double dof = static_cast<double>(x.rows() - x.cols());
    const double sigma2 = fit.residuals.squaredNorm() / dof;
    const Matrix xtx_inv = (x.transpose() * x).inverse();
    fit.std_errors = (sigma2 * xtx_inv.diagonal()).array().sqrt();
    return fit;
}

Vector ols_residuals(const Matrix& design, const Vector& y) {
    require(design.rows() == y.size(), "ols: design and response differ in length");
    const Matrix x = with_intercept_column(design);
    if (x.rows() <= x.cols()) throw NumericError("ols: not enough rows for the number of regressors");
    Eigen::ColPivHouseholderQR<Matrix> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < x.cols()) throw NumericError("ols: singular regression (rank-deficient design)");
    return y - x * qr.solve(y);
}

double student_t_two_sided_p(double t, double dof) {
    require(dof > 0, "student t: degrees of freedom must be positive");
    if (!std::isfinite(t)) return 0.0;
    boost::math::students_t dist(dof);
    return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))), 0.0, 1.0);
}

}  // namespace tcs
