#include "tcs/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <numeric>
#include <unordered_map>

namespace tcs {

// ---------------------------------------------------------------- MMD

namespace {

double squared_distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        const double d = a(i, c) - b(j, c);
        s += d * d;
    }
    return s;
}

struct BlockSums {
    double all = 0.0;       // every (i, j)
    double off_diag = 0.0;  // i != j
};

BlockSums kernel_block(const Matrix& a, const Matrix& b, std::span<const double> inv_two_sigma2) {
    BlockSums s;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.rows(); ++j) {
            const double d2 = squared_distance(a, i, b, j);
            double k = 0.0;
            for (double c : inv_two_sigma2) k += std::exp(-d2 * c);
            s.all += k;
            if (i != j) s.off_diag += k;
        }
    }
    return s;
}

double median_pairwise_distance(const Matrix& pooled) {
    constexpr Eigen::Index kMaxRows = 2000;
    const Eigen::Index n = pooled.rows();
    const Eigen::Index stride = n > kMaxRows ? (n + kMaxRows - 1) / kMaxRows : 1;
    std::vector<double> d;
    for (Eigen::Index i = 0; i < n; i += stride)
        for (Eigen::Index j = i + stride; j < n; j += stride) d.push_back(std::sqrt(squared_distance(pooled, i, pooled, j)));
    if (d.empty()) return 0.0;
    const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    if (d.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(d.begin(), mid);
    return 0.5 * (lower + upper);
}

}  // namespace

MMDResult mmd_gaussian(const Matrix& x, const Matrix& y, const MMDConfig& cfg) {
    require(x.cols() == y.cols(), "mmd: samples differ in column count");
    require(x.rows() >= 2 && y.rows() >= 2, "mmd: need at least two rows per sample");
    require(!cfg.multipliers.empty(), "mmd: no bandwidth multipliers");
    for (double m : cfg.multipliers) require(m > 0.0, "mmd: bandwidth multipliers must be positive");

    Matrix pooled(x.rows() + y.rows(), x.cols());
    pooled << x, y;
    const double sigma0 = median_pairwise_distance(pooled);
    if (!(sigma0 > 0.0)) throw NumericError("mmd: median pairwise distance is zero, kernel is degenerate");

    std::vector<double> coef;
    for (double m : cfg.multipliers) coef.push_back(1.0 / (2.0 * (m * sigma0) * (m * sigma0)));

    const BlockSums kxx = kernel_block(x, x, coef);
    const BlockSums kyy = kernel_block(y, y, coef);
    const BlockSums kxy = kernel_block(x, y, coef);
    const double m = static_cast<double>(x.rows());
    const double n = static_cast<double>(y.rows());

    MMDResult r;
    r.base_bandwidth = sigma0;
    r.biased = kxx.all / (m * m) + kyy.all / (n * n) - 2.0 * kxy.all / (m * n);
    r.unbiased_raw = kxx.off_diag / (m * (m - 1.0)) + kyy.off_diag / (n * (n - 1.0)) - 2.0 * kxy.all / (m * n);
    r.estimate = std::max(0.0, r.unbiased_raw);
    return r;
}

// ---------------------------------------------------------------- configs

std::string to_string(DetectorFamily f) { return f == DetectorFamily::svc ? "svc" : "logistic-regression"; }

std::string to_string(SvcKernel k) {
    switch (k) {
        case SvcKernel::linear: return "linear";
        case SvcKernel::poly: return "poly";
        case SvcKernel::rbf: return "rbf";
    }
    return "?";
}

std::string to_string(GammaRule g) { return g == GammaRule::automatic ? "auto" : "scale"; }

DetectorFamily detector_family_from_string(const std::string& s) {
    if (s == "svc") return DetectorFamily::svc;
    if (s == "logistic-regression") return DetectorFamily::logistic_regression;
    throw ArgumentError("unknown detector family '" + s + "' (expected svc or logistic-regression)");
}

SvcKernel svc_kernel_from_string(const std::string& s) {
    if (s == "linear") return SvcKernel::linear;
    if (s == "poly") return SvcKernel::poly;
    if (s == "rbf") return SvcKernel::rbf;
    throw ArgumentError("unknown svc kernel '" + s + "' (expected linear, poly or rbf)");
}

GammaRule gamma_rule_from_string(const std::string& s) {
    if (s == "auto") return GammaRule::automatic;
    if (s == "scale") return GammaRule::scale;
    throw ArgumentError("unknown gamma rule '" + s + "' (expected auto or scale)");
}

void DetectorConfig::validate() const {
    require(C > 0.0, "detector: C must be positive");
    require(train_fraction > 0.0 && train_fraction < 1.0, "detector: train_fraction must be in (0, 1)");
    require(window_length >= 1, "detector: window_length must be positive");
    require(degree >= 1, "detector: degree must be positive");
    require(max_iter >= 0, "detector: max_iter must be non-negative");
}

std::string DetectorConfig::label() const {
    std::string s = to_string(family);
    if (family == DetectorFamily::svc) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "(C=%g,kernel=%s", C, to_string(kernel).c_str());
        s += buf;
        if (kernel == SvcKernel::poly) s += ",degree=" + std::to_string(degree);
        s += ",gamma=" + to_string(gamma);
        s += ")";
    }
    return s + "/w" + std::to_string(window_length);
}

std::vector<DetectorConfig> default_detector_grid(std::span<const int> window_lengths) {
    std::vector<DetectorConfig> grid;
    for (int w : window_lengths) {
        DetectorConfig lr;
        lr.family = DetectorFamily::logistic_regression;
        lr.window_length = w;
        grid.push_back(lr);
        for (double c : {1.0, 0.75, 0.5, 0.25})
            for (SvcKernel k : {SvcKernel::linear, SvcKernel::poly, SvcKernel::rbf})
                for (GammaRule g : {GammaRule::automatic, GammaRule::scale}) {
                    DetectorConfig d;
                    d.family = DetectorFamily::svc;
                    d.C = c;
                    d.kernel = k;
                    d.degree = 3;
                    d.gamma = g;
                    d.window_length = w;
                    grid.push_back(d);
                }
    }
    return grid;
}

// ---------------------------------------------------------------- dataset

namespace {

Matrix windows_of(const Matrix& src, int w) {
    const Eigen::Index n = src.rows() - w + 1;
    const Eigen::Index d = src.cols();
    Matrix out(n, d * w);
    for (Eigen::Index t = 0; t < n; ++t)
        for (int k = 0; k < w; ++k) out.row(t).segment(k * d, d) = src.row(t + k);
    return out;
}

}  // namespace

C2stSplit build_c2st_dataset(const Matrix& real, const Matrix& sim, const DetectorConfig& cfg, Rng& rng) {
    cfg.validate();
    require(real.cols() == sim.cols(), "c2st: real and simulated data differ in column count");
    if (real.rows() < cfg.window_length || sim.rows() < cfg.window_length)
        throw DataError("c2st: fewer rows than window_length " + std::to_string(cfg.window_length));

    const Matrix sources[2] = {windows_of(real, cfg.window_length), windows_of(sim, cfg.window_length)};
    const int labels[2] = {1, 0};

    std::vector<std::pair<int, Eigen::Index>> train;
    std::vector<std::pair<int, Eigen::Index>> test;
    for (int s = 0; s < 2; ++s) {
        const Eigen::Index n = sources[s].rows();
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        auto n_train = static_cast<Eigen::Index>(std::llround(cfg.train_fraction * static_cast<double>(n)));
        n_train = std::clamp<Eigen::Index>(n_train, 1, n - 1);
        if (n < 2) throw DataError("c2st: each source needs at least two windows");
        std::sort(idx.begin(), idx.begin() + n_train);
        std::sort(idx.begin() + n_train, idx.end());
        for (Eigen::Index k = 0; k < n; ++k) (k < n_train ? train : test).push_back({s, idx[static_cast<std::size_t>(k)]});
    }

    auto fill = [&](const std::vector<std::pair<int, Eigen::Index>>& rows, Matrix& x, std::vector<int>& y) {
        x.resize(static_cast<Eigen::Index>(rows.size()), sources[0].cols());
        y.resize(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            x.row(static_cast<Eigen::Index>(r)) = sources[rows[r].first].row(rows[r].second);
            y[r] = labels[rows[r].first];
        }
    };
    C2stSplit out;
    fill(train, out.train_x, out.train_y);
    fill(test, out.test_x, out.test_y);
    return out;
}

// ---------------------------------------------------------------- detectors

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

struct Standardizer {
    Vector mu;
    Vector sd;
    explicit Standardizer(const Matrix& x) {
        mu = x.colwise().mean();
        sd = ((x.rowwise() - mu.transpose()).array().square().colwise().sum() / std::max<double>(1.0, x.rows() - 1.0))
                 .sqrt();
        for (Eigen::Index c = 0; c < sd.size(); ++c)
            if (!(sd(c) > 0.0)) sd(c) = 1.0;
    }
    Matrix apply(const Matrix& x) const {
        return ((x.rowwise() - mu.transpose()).array().rowwise() / sd.transpose().array()).matrix();
    }
};

// L2-regularised logistic regression, objective
//   sum_i logloss_i + ||w||^2 / (2C), intercept unpenalised,
// minimised by damped Newton steps until the mean gradient is below 1e-6.
DetectionResult logistic_detector(const C2stSplit& split, const DetectorConfig& cfg) {
    const Standardizer st(split.train_x);
    const Matrix x = st.apply(split.train_x);
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    Matrix xa(n, d + 1);
    xa.col(0).setOnes();
    xa.rightCols(d) = x;
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = split.train_y[static_cast<std::size_t>(i)];

    Vector reg = Vector::Constant(d + 1, 1.0 / cfg.C);
    reg(0) = 0.0;
    auto objective = [&](const Vector& w) {
        const Vector z = xa * w;
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double zi = z(i);
            // log(1 + exp(-s z)) with s = 2y - 1, numerically stable
            const double m = (2.0 * y(i) - 1.0) * zi;
            s += m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
        }
        return s + 0.5 * w.cwiseProduct(reg).dot(w);
    };

    const long max_iter = cfg.max_iter > 0 ? cfg.max_iter : 100;
    Vector w = Vector::Zero(d + 1);
    double f = objective(w);
    bool converged = false;
    for (long it = 0; it < max_iter; ++it) {
        const Vector z = xa * w;
        Vector p(n);
        Vector s(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            p(i) = sigmoid(z(i));
            s(i) = p(i) * (1.0 - p(i));
        }
        const Vector g = xa.transpose() * (p - y) + reg.cwiseProduct(w);
        if (g.cwiseAbs().maxCoeff() / static_cast<double>(n) < 1e-6) {
            converged = true;
            break;
        }
        Matrix h = xa.transpose() * s.asDiagonal() * xa;
        h.diagonal() += reg + Vector::Constant(d + 1, 1e-10);
        const Vector step = h.ldlt().solve(g);
        double t = 1.0;
        Vector next = w - step;
        double fn = objective(next);
        while (fn > f && t > 1e-10) {
            t *= 0.5;
            next = w - t * step;
            fn = objective(next);
        }
        if (fn > f) break;
        w = next;
        f = fn;
    }

    const Matrix tx = st.apply(split.test_x);
    DetectionResult r;
    r.config = cfg;
    r.test_labels = split.test_y;
    r.test_probs.resize(static_cast<std::size_t>(tx.rows()));
    for (Eigen::Index i = 0; i < tx.rows(); ++i)
        r.test_probs[static_cast<std::size_t>(i)] = sigmoid(w(0) + tx.row(i).dot(w.tail(d)));
    r.auc = roc_auc(r.test_labels, r.test_probs);
    r.converged = converged;
    if (!converged) throw DetectorConvergenceError("logistic regression did not converge", r);
    return r;
}

class KernelFn {
public:
    KernelFn(SvcKernel kind, int degree, double gamma) : kind_(kind), degree_(degree), gamma_(gamma) {}

    double operator()(double dot, double sq_a, double sq_b) const {
        switch (kind_) {
            case SvcKernel::linear: return dot;
            case SvcKernel::poly: return std::pow(gamma_ * dot, degree_);
            case SvcKernel::rbf: return std::exp(-gamma_ * std::max(0.0, sq_a + sq_b - 2.0 * dot));
        }
        return dot;
    }

private:
    SvcKernel kind_;
    int degree_;
    double gamma_;
};

// Kernel rows of the training set. Small sets get the whole Gram matrix up
// front; larger ones fall back to a bounded FIFO row cache. Rows are shared so
// an evicted row stays valid for callers still holding it.
class KernelRows {
public:
    using Row = std::shared_ptr<const std::vector<float>>;

    KernelRows(const Matrix& x, const KernelFn& k) : x_(x), k_(k), sq_(x.rowwise().squaredNorm()) {
        const std::size_t budget_bytes = std::size_t{256} << 20;
        const auto n = static_cast<std::size_t>(x.rows());
        capacity_ = std::max<std::size_t>(2, budget_bytes / (sizeof(float) * n + 1));
        if (capacity_ >= n) {
            const Matrix gram = x * x.transpose();
            dense_.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                auto r = std::make_shared<std::vector<float>>(n);
                const auto ii = static_cast<Eigen::Index>(i);
                for (std::size_t t = 0; t < n; ++t) {
                    const auto ti = static_cast<Eigen::Index>(t);
                    (*r)[t] = static_cast<float>(k_(gram(ti, ii), sq_(ii), sq_(ti)));
                }
                dense_[i] = std::move(r);
            }
        }
    }

    Row row(Eigen::Index i) {
        if (!dense_.empty()) return dense_[static_cast<std::size_t>(i)];
        auto it = cache_.find(i);
        if (it != cache_.end()) return it->second;
        if (cache_.size() >= capacity_) {
            cache_.erase(fifo_.front());
            fifo_.pop_front();
        }
        const Vector dots = x_ * x_.row(i).transpose();
        auto r = std::make_shared<std::vector<float>>(static_cast<std::size_t>(x_.rows()));
        for (Eigen::Index t = 0; t < x_.rows(); ++t)
            (*r)[static_cast<std::size_t>(t)] = static_cast<float>(k_(dots(t), sq_(i), sq_(t)));
        fifo_.push_back(i);
        cache_.emplace(i, r);
        return r;
    }

    double diag(Eigen::Index i) const { return k_(sq_(i), sq_(i), sq_(i)); }

private:
    const Matrix& x_;
    KernelFn k_;
    Vector sq_;
    std::size_t capacity_;
    std::vector<Row> dense_;
    std::unordered_map<Eigen::Index, Row> cache_;
    std::deque<Eigen::Index> fifo_;
};

// C-SVC dual solved by SMO with second-order working set selection.
DetectionResult svc_detector(const C2stSplit& split, const DetectorConfig& cfg) {
    const Matrix& x = split.train_x;
    const Eigen::Index n = x.rows();
    const double d = static_cast<double>(x.cols());
    double gamma = 1.0 / d;
    if (cfg.gamma == GammaRule::scale) {
        const double mu = x.mean();
        const double var = (x.array() - mu).square().mean();
        gamma = var > 0.0 ? 1.0 / (d * var) : 1.0;
    }
    const KernelFn kfn(cfg.kernel, cfg.degree, gamma);
    KernelRows rows(x, kfn);

    std::vector<double> y(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = split.train_y[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
    std::vector<double> qd(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) qd[static_cast<std::size_t>(i)] = rows.diag(i);

    const double C = cfg.C;
    constexpr double kEps = 1e-3;
    constexpr double kTau = 1e-12;
    std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
    std::vector<double> grad(static_cast<std::size_t>(n), -1.0);
    auto upper = [&](std::size_t t) { return alpha[t] >= C; };
    auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    const long max_iter = cfg.max_iter > 0 ? cfg.max_iter : std::max<long>(100000, 100 * static_cast<long>(n));
    bool converged = false;
    const auto un = static_cast<std::size_t>(n);
    // Candidate i for the next step; refreshed inside the gradient update pass.
    double gmax = -std::numeric_limits<double>::infinity();
    long i_sel = -1;
    auto consider_i = [&](std::size_t t) {
        if (y[t] > 0) {
            if (!upper(t) && -grad[t] >= gmax) { gmax = -grad[t]; i_sel = static_cast<long>(t); }
        } else {
            if (!lower(t) && grad[t] >= gmax) { gmax = grad[t]; i_sel = static_cast<long>(t); }
        }
    };
    for (std::size_t t = 0; t < un; ++t) consider_i(t);
    for (long iter = 0; iter < max_iter; ++iter) {
        if (i_sel < 0) { converged = true; break; }
        const auto i = static_cast<std::size_t>(i_sel);
        const KernelRows::Row ki_row = rows.row(i_sel);
        const std::vector<float>& ki = *ki_row;

        double gmax2 = -std::numeric_limits<double>::infinity();
        long j_sel = -1;
        double best_obj = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < un; ++t) {
            double grad_diff = 0.0;
            if (y[t] > 0) {
                if (lower(t)) continue;
                grad_diff = gmax + grad[t];
                gmax2 = std::max(gmax2, grad[t]);
            } else {
                if (upper(t)) continue;
                grad_diff = gmax - grad[t];
                gmax2 = std::max(gmax2, -grad[t]);
            }
            if (grad_diff > 0.0) {
                double quad = qd[i] + qd[t] - 2.0 * static_cast<double>(ki[t]);
                if (quad <= 0.0) quad = kTau;
                const double obj = -(grad_diff * grad_diff) / quad;
                if (obj <= best_obj) { best_obj = obj; j_sel = static_cast<long>(t); }
            }
        }
        if (gmax + gmax2 < kEps || j_sel < 0) { converged = true; break; }
        const auto j = static_cast<std::size_t>(j_sel);
        const KernelRows::Row kj_row = rows.row(j_sel);
        const std::vector<float>& kj = *kj_row;
        const double kij = ki[j];

        const double old_ai = alpha[i];
        const double old_aj = alpha[j];
        double quad = qd[i] + qd[j] - 2.0 * kij;
        if (quad <= 0.0) quad = kTau;
        if (y[i] != y[j]) {
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
            } else {
                if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
            }
            if (diff > 0) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
            } else {
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = C + diff; }
            }
        } else {
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
            } else {
                if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
            }
            if (sum > C) {
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
            } else {
                if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
            }
        }
        const double dai = (alpha[i] - old_ai) * y[i];
        const double daj = (alpha[j] - old_aj) * y[j];
        gmax = -std::numeric_limits<double>::infinity();
        i_sel = -1;
        for (std::size_t t = 0; t < un; ++t) {
            grad[t] += y[t] * (static_cast<double>(ki[t]) * dai + static_cast<double>(kj[t]) * daj);
            consider_i(t);
        }
    }

    // Offset from free support vectors, or the midpoint of the feasible range.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    int n_free = 0;
    for (std::size_t t = 0; t < un; ++t) {
        const double yg = y[t] * grad[t];
        if (upper(t)) {
            if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else if (lower(t)) {
            if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / n_free : 0.5 * (ub + lb);

    const Matrix& tx = split.test_x;
    const Vector sq_train = x.rowwise().squaredNorm();
    DetectionResult r;
    r.config = cfg;
    r.test_labels = split.test_y;
    r.test_probs.resize(static_cast<std::size_t>(tx.rows()));
    std::vector<std::size_t> sv;
    for (std::size_t t = 0; t < un; ++t)
        if (alpha[t] > 0.0) sv.push_back(t);
    Matrix sv_x(static_cast<Eigen::Index>(sv.size()), x.cols());
    for (std::size_t k = 0; k < sv.size(); ++k) sv_x.row(static_cast<Eigen::Index>(k)) = x.row(static_cast<Eigen::Index>(sv[k]));
    const Matrix cross = tx * sv_x.transpose();
    for (Eigen::Index q = 0; q < tx.rows(); ++q) {
        const double sq_q = tx.row(q).squaredNorm();
        double f = -rho;
        for (std::size_t k = 0; k < sv.size(); ++k) {
            const std::size_t t = sv[k];
            f += alpha[t] * y[t] * kfn(cross(q, static_cast<Eigen::Index>(k)), sq_train(static_cast<Eigen::Index>(t)), sq_q);
        }
        r.test_probs[static_cast<std::size_t>(q)] = sigmoid(f);
    }
    r.auc = roc_auc(r.test_labels, r.test_probs);
    r.converged = converged;
    if (!converged) throw DetectorConvergenceError("svc solver hit its iteration cap", r);
    return r;
}

}  // namespace

DetectionResult train_and_score_detector(const C2stSplit& split, const DetectorConfig& cfg, Rng& rng) {
    (void)rng;  // both solvers are deterministic given the split
    cfg.validate();
    require(split.train_x.rows() == static_cast<Eigen::Index>(split.train_y.size()), "detector: train split misaligned");
    require(split.test_x.rows() == static_cast<Eigen::Index>(split.test_y.size()), "detector: test split misaligned");
    require(split.train_x.cols() == split.test_x.cols(), "detector: train and test widths differ");
    auto has_both = [](const std::vector<int>& v) {
        return std::find(v.begin(), v.end(), 0) != v.end() && std::find(v.begin(), v.end(), 1) != v.end();
    };
    if (!has_both(split.train_y) || !has_both(split.test_y))
        throw DataError("detector: each split needs both real and simulated samples");
    return cfg.family == DetectorFamily::logistic_regression ? logistic_detector(split, cfg) : svc_detector(split, cfg);
}

// ---------------------------------------------------------------- selection

MinMaxChoice minmax_select(const std::vector<std::vector<double>>& score_table) {
    require(!score_table.empty(), "minmax_select: empty score table");
    MinMaxChoice best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t c = 0; c < score_table.size(); ++c) {
        require(!score_table[c].empty(), "minmax_select: candidate row has no detector scores");
        const double worst = *std::max_element(score_table[c].begin(), score_table[c].end());
        if (worst < best.score) best = {c, worst};
    }
    return best;
}

EquivalenceOutcome auc_equivalence_test(std::span<const int> y_test, std::span<const double> probs_o,
                                        std::span<const double> probs_i, double auc_o, double auc_i, double alpha,
                                        int n_permutations, Rng& rng) {
    require(probs_o.size() == y_test.size() && probs_i.size() == y_test.size(),
            "auc_equivalence_test: probability vectors misaligned with labels");
    require(n_permutations >= 100, "auc_equivalence_test: need at least 100 permutations");
    require(alpha > 0.0 && alpha < 1.0, "auc_equivalence_test: alpha must be in (0, 1)");

    const double observed = std::fabs(auc_o - auc_i);
    std::vector<double> po(probs_o.begin(), probs_o.end());
    std::vector<double> pi(probs_i.begin(), probs_i.end());
    std::bernoulli_distribution coin(0.5);
    int count = 0;
    for (int p = 0; p < n_permutations; ++p) {
        for (std::size_t k = 0; k < po.size(); ++k) {
            const bool swap = coin(rng);
            po[k] = swap ? probs_i[k] : probs_o[k];
            pi[k] = swap ? probs_o[k] : probs_i[k];
        }
        const double t = std::fabs(roc_auc(y_test, po) - roc_auc(y_test, pi));
        if (t > observed || (observed == 0.0 && t >= observed)) ++count;
    }
    EquivalenceOutcome out;
    out.observed = observed;
    out.p_value = static_cast<double>(count) / n_permutations;
    out.equivalent = out.p_value >= alpha;
    return out;
}

// ---------------------------------------------------------------- ADF

double adf_critical_value_5pct(int n_obs) {
    // Constant, no trend; sample sizes 25, 50, 100, 250, 500, infinity.
    static constexpr double kSizes[] = {25, 50, 100, 250, 500};
    static constexpr double kValues[] = {-3.00, -2.93, -2.89, -2.88, -2.87, -2.86};
    require(n_obs >= 1, "adf: n_obs must be positive");
    const double inv = 1.0 / n_obs;
    if (n_obs <= 25) return kValues[0];
    for (int k = 0; k < 5; ++k) {
        const double hi_inv = 1.0 / kSizes[k];
        const double lo_inv = k + 1 < 5 ? 1.0 / kSizes[k + 1] : 0.0;
        if (inv <= hi_inv && inv >= lo_inv) {
            const double w = (inv - lo_inv) / (hi_inv - lo_inv);
            return w * kValues[k] + (1.0 - w) * kValues[k + 1];
        }
    }
    return kValues[5];
}

AdfResult adf_test(std::span<const double> series, int regression_lags) {
    require(regression_lags >= 0, "adf: regression_lags must be non-negative");
    const auto n = static_cast<int>(series.size());
    if (n <= regression_lags + 10)
        throw DataError("adf: series too short for " + std::to_string(regression_lags) + " lagged differences");
    for (double v : series)
        if (!std::isfinite(v)) throw DataError("adf: series contains non-finite values");

    const int p = regression_lags;
    const int n_obs = n - 1 - p;
    Matrix design(n_obs, 1 + p);
    Vector dy(n_obs);
    for (int r = 0; r < n_obs; ++r) {
        const int t = r + 1 + p;
        dy(r) = series[static_cast<std::size_t>(t)] - series[static_cast<std::size_t>(t - 1)];
        design(r, 0) = series[static_cast<std::size_t>(t - 1)];
        for (int k = 1; k <= p; ++k)
            design(r, k) = series[static_cast<std::size_t>(t - k)] - series[static_cast<std::size_t>(t - k - 1)];
    }
    const OlsFit fit = ols_fit(design, dy, true);
    const double se = fit.std_errors(1);
    if (!(se > 0.0) || !std::isfinite(se)) throw NumericError("adf: degenerate regression, zero standard error");

    AdfResult out;
    out.n_obs = n_obs;
    out.t_statistic = fit.coef(1) / se;
    out.critical_value = adf_critical_value_5pct(n_obs);
    out.stationary = out.t_statistic < out.critical_value;
    return out;
}

// ---------------------------------------------------------------- CD efficacy

CDConfig default_efficacy_config() {
    CDConfig c;
    c.algorithm = CDAlgorithm::dynotears;
    c.max_lag = 1;
    c.lambda_w = 0.1;
    c.lambda_a = 0.1;
    return c;
}

double cd_efficacy(const Matrix& original, const Matrix& simulated, const CDConfig& cfg) {
    require(original.cols() == simulated.cols(), "cd_efficacy: datasets differ in column count");
    const CDResult on_original = discover(original, cfg);
    const CDResult on_simulated = discover(simulated, cfg);
    const std::size_t e = on_original.graph.edge_count();
    if (e == 0 || e == on_original.graph.cells().size())
        throw DataError("cd_efficacy: the graph discovered on the original data has " +
                        std::string(e == 0 ? "no edges" : "every possible edge") +
                        ", so edge AUC is undefined; try a different discovery configuration");
    return edge_auc(on_simulated.scores, on_original.graph);
}

}  // namespace tcs
