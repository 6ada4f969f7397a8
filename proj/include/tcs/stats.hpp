#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace tcs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// ROC-AUC in the Mann-Whitney form: P(s+ > s-) + 0.5 P(s+ == s-), computed
/// from average ranks. Labels are 0/1. Throws DataError when a class is absent.
double roc_auc(std::span<const int> labels, std::span<const double> scores);

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator).
double stddev(std::span<const double> x);

/// Residuals of least squares regression of y on [1, design]. Throws
/// NumericError when the design (with intercept) is rank deficient.
Vector ols_residuals(const Matrix& design, const Vector& y);

struct OlsFit {
    Vector coef;       // intercept first when with_intercept
    Vector residuals;
    Vector std_errors;
};

/// Full least squares fit with coefficient standard errors.
OlsFit ols_fit(const Matrix& design, const Vector& y, bool with_intercept);

/// Two-sided p-value of a Student t statistic.
double student_t_two_sided_p(double t, double dof);

}  // namespace tcs
