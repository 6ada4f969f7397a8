#include "tcs/discovery.hpp"

#include "tcs/error.hpp"
#include "tcs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tcs {

std::string to_string(CDAlgorithm a) {
    switch (a) {
        case CDAlgorithm::lagged_pc: return "lagged-pc";
        case CDAlgorithm::dynotears: return "dynotears";
        case CDAlgorithm::oracle: return "oracle";
    }
    return "?";
}

CDAlgorithm cd_algorithm_from_string(const std::string& s) {
    if (s == "lagged-pc") return CDAlgorithm::lagged_pc;
    if (s == "dynotears") return CDAlgorithm::dynotears;
    if (s == "oracle") return CDAlgorithm::oracle;
    throw ArgumentError("unknown causal discovery algorithm '" + s + "' (expected lagged-pc, dynotears or oracle)");
}

void CDConfig::validate() const {
    require(max_lag >= 1, "cd config: max_lag must be at least 1");
    require(alpha > 0.0 && alpha < 1.0, "cd config: alpha must be in (0, 1)");
    require(max_cond_size >= 0, "cd config: max_cond_size must be non-negative");
    require(max_combinations >= 1, "cd config: max_combinations must be positive");
    require(lambda_w >= 0 && lambda_a >= 0, "cd config: lambdas must be non-negative");
    require(tau_w >= 0 && tau_a >= 0, "cd config: thresholds must be non-negative");
    require(max_iterations >= 1, "cd config: max_iterations must be positive");
    if (algorithm == CDAlgorithm::oracle) require(oracle_graph.has_value(), "cd config: oracle needs a graph");
}

namespace {

void check_finite(const Matrix& data) {
    if (!data.allFinite()) throw DataError("causal discovery: data contains non-finite values");
}

std::vector<std::vector<Parent>> parents_of(const LaggedGraph& g) {
    std::vector<std::vector<Parent>> out;
    for (int j = 0; j < g.n_vars(); ++j) out.push_back(lagged_parents(g, j));
    return out;
}

double pearson(const Vector& a, const Vector& b) {
    const Vector ca = a.array() - a.mean();
    const Vector cb = b.array() - b.mean();
    const double na = ca.norm();
    const double nb = cb.norm();
    const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
    const double tiny = 1e-12 * scale * std::sqrt(static_cast<double>(a.size()));
    if (na <= tiny || nb <= tiny) throw NumericError("parcorr: constant residuals, correlation undefined");
    return std::clamp(ca.dot(cb) / (na * nb), -1.0, 1.0);
}

}  // namespace

CiResult parcorr_ci_test(const Vector& x, const Vector& y, const Matrix& z) {
    const Eigen::Index n = x.size();
    require(y.size() == n && (z.cols() == 0 || z.rows() == n), "parcorr: series differ in length");
    if (n <= z.cols() + 3)
        throw DataError("parcorr: need more than |z| + 3 samples, got " + std::to_string(n));
    Vector rx;
    Vector ry;
    if (z.cols() == 0) {
        rx = x.array() - x.mean();
        ry = y.array() - y.mean();
    } else {
        rx = ols_residuals(z, x);
        ry = ols_residuals(z, y);
    }
    const double r = pearson(rx, ry);
    const double dof = static_cast<double>(n - z.cols() - 2);
    CiResult out;
    out.statistic = r;
    if (std::fabs(r) >= 1.0) {
        out.p_value = 0.0;
    } else {
        const double t = r * std::sqrt(dof / (1.0 - r * r));
        out.p_value = student_t_two_sided_p(t, dof);
    }
    return out;
}

CDResult lagged_pc_discover(const Matrix& data, const CDConfig& cfg) {
    cfg.validate();
    check_finite(data);
    const int d = static_cast<int>(data.cols());
    const int L = cfg.max_lag;
    require(d >= 1, "lagged-pc: data has no columns");
    const Eigen::Index need = static_cast<Eigen::Index>(L + 1) * d + 10;
    if (data.rows() < need)
        throw DataError("lagged-pc: need at least " + std::to_string(need) + " rows, got " +
                        std::to_string(data.rows()));

    const Eigen::Index m = data.rows() - L;
    // Column (lag - 1) * d + i holds X^i_{t - lag} for t = L .. rows - 1.
    Matrix lagged(m, static_cast<Eigen::Index>(L) * d);
    for (int lag = 1; lag <= L; ++lag)
        for (int i = 0; i < d; ++i)
            lagged.col((lag - 1) * d + i) = data.col(i).segment(L - lag, m);

    std::vector<Parent> candidates;
    for (int i = 0; i < d; ++i)
        for (int lag = 1; lag <= L; ++lag) candidates.push_back({i, lag});
    auto column_of = [&](const Parent& p) { return static_cast<Eigen::Index>((p.lag - 1) * d + p.var); };

    CDResult res{LaggedGraph(d, L), LagTensor(d, L), {}, true, 0.0, 0};
    std::vector<std::vector<double>> score_rows(static_cast<std::size_t>(d));
    std::vector<std::vector<std::size_t>> kept(static_cast<std::size_t>(d));

    parallel_for(static_cast<std::size_t>(d), [&](std::size_t target) {
        const Vector y = data.col(static_cast<Eigen::Index>(target)).tail(m);
        const std::size_t nc = candidates.size();
        std::vector<double> worst_p(nc, 0.0);
        std::vector<double> strength(nc, std::numeric_limits<double>::infinity());
        std::vector<std::size_t> retained(nc);
        std::iota(retained.begin(), retained.end(), 0);

        for (int depth = 0; depth <= cfg.max_cond_size; ++depth) {
            if (depth > 0 && retained.size() < static_cast<std::size_t>(depth) + 1) break;
            const std::vector<double> ranking = strength;  // snapshot from the previous depth
            std::vector<std::uint8_t> remove(nc, 0);
            for (std::size_t c : retained) {
                std::vector<std::size_t> others;
                for (std::size_t o : retained)
                    if (o != c) others.push_back(o);
                std::stable_sort(others.begin(), others.end(),
                                 [&](std::size_t a, std::size_t b) { return ranking[a] > ranking[b]; });
                if (others.size() < static_cast<std::size_t>(depth)) continue;

                // Lexicographic subsets of `others` (strongest first) of size `depth`.
                std::vector<std::size_t> pick(static_cast<std::size_t>(depth));
                std::iota(pick.begin(), pick.end(), 0);
                const Vector x = lagged.col(column_of(candidates[c]));
                for (int tried = 0; tried < cfg.max_combinations; ++tried) {
                    Matrix z(m, depth);
                    for (int k = 0; k < depth; ++k)
                        z.col(k) = lagged.col(column_of(candidates[others[pick[static_cast<std::size_t>(k)]]]));
                    const CiResult ci = parcorr_ci_test(x, y, z);
                    worst_p[c] = std::max(worst_p[c], ci.p_value);
                    strength[c] = std::min(strength[c], std::fabs(ci.statistic));
                    if (ci.p_value > cfg.alpha) {
                        remove[c] = 1;
                        break;
                    }
                    // next combination
                    int k = depth - 1;
                    while (k >= 0 && pick[static_cast<std::size_t>(k)] == others.size() - depth + k) --k;
                    if (k < 0) break;
                    ++pick[static_cast<std::size_t>(k)];
                    for (int q = k + 1; q < depth; ++q)
                        pick[static_cast<std::size_t>(q)] = pick[static_cast<std::size_t>(q - 1)] + 1;
                }
            }
            std::erase_if(retained, [&](std::size_t c) { return remove[c] != 0; });
        }
        std::vector<double> scores(nc);
        for (std::size_t c = 0; c < nc; ++c) scores[c] = 1.0 - worst_p[c];
        score_rows[target] = std::move(scores);
        kept[target] = std::move(retained);
    });

    for (int j = 0; j < d; ++j) {
        const auto& s = score_rows[static_cast<std::size_t>(j)];
        for (std::size_t c = 0; c < candidates.size(); ++c)
            res.scores.at(candidates[c].lag, candidates[c].var, j) = s[c];
        for (std::size_t c : kept[static_cast<std::size_t>(j)])
            res.graph.set_edge(candidates[c].lag, candidates[c].var, j);
    }
    res.parents = parents_of(res.graph);
    return res;
}

Matrix matrix_exponential(const Matrix& m) {
    require(m.rows() == m.cols(), "matrix_exponential: matrix must be square");
    const Eigen::Index n = m.rows();
    if (!m.allFinite()) throw NumericError("matrix_exponential: non-finite input");
    const double norm = n == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Matrix a = m / std::ldexp(1.0, squarings);
    Matrix result = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k <= 40; ++k) {
        term = term * a / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() <= 1e-17 * result.cwiseAbs().maxCoeff()) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

double acyclicity_h(const Matrix& w) {
    require(w.rows() == w.cols(), "acyclicity_h: matrix must be square");
    const Matrix e = matrix_exponential(w.cwiseProduct(w));
    return std::max(0.0, e.trace() - static_cast<double>(w.rows()));
}

namespace {

struct SvarProblem {
    Matrix x;  // current slice, m x d
    Matrix y;  // lagged slices, m x (L d)
    double lambda_w;
    double lambda_a;
    double alpha = 0.0;
    double rho = 1.0;

    struct Eval {
        double smooth = 0.0;
        double h = 0.0;
        Matrix grad_w;
        Matrix grad_a;
    };

    double l1(const Matrix& w, const Matrix& a) const {
        return lambda_w * w.cwiseAbs().sum() + lambda_a * a.cwiseAbs().sum();
    }

    Eval evaluate(const Matrix& w, const Matrix& a, bool with_grad) const {
        const double m = static_cast<double>(x.rows());
        const Matrix r = x - x * w - y * a;
        Eval e;
        const Matrix ww = w.cwiseProduct(w);
        const Matrix ex = matrix_exponential(ww);
        e.h = std::max(0.0, ex.trace() - static_cast<double>(w.rows()));
        e.smooth = 0.5 / m * r.squaredNorm() + alpha * e.h + 0.5 * rho * e.h * e.h;
        if (with_grad) {
            e.grad_w = -(x.transpose() * r) / m + (alpha + rho * e.h) * ex.transpose().cwiseProduct(2.0 * w);
            e.grad_w.diagonal().setZero();
            e.grad_a = -(y.transpose() * r) / m;
        }
        return e;
    }
};

Matrix soft_threshold(const Matrix& v, double t) {
    return v.unaryExpr([t](double z) { return z > t ? z - t : (z < -t ? z + t : 0.0); });
}

// Proximal gradient with backtracking and Barzilai-Borwein step proposals.
// Each accepted step satisfies the sufficient-decrease condition, so the
// penalised objective never increases.
void solve_inner(const SvarProblem& p, Matrix& w, Matrix& a, int outer, const DynotearsMonitor& monitor) {
    constexpr int kMaxInner = 1000;
    double step = 1.0;
    auto cur = p.evaluate(w, a, true);
    double objective = cur.smooth + p.l1(w, a);
    if (!std::isfinite(objective)) throw NumericError("dynotears: loss is not finite");
    for (int it = 0; it < kMaxInner; ++it) {
        Matrix nw;
        Matrix na;
        SvarProblem::Eval next;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            nw = soft_threshold(w - step * cur.grad_w, step * p.lambda_w);
            nw.diagonal().setZero();
            na = soft_threshold(a - step * cur.grad_a, step * p.lambda_a);
            next = p.evaluate(nw, na, false);
            const Matrix dw = nw - w;
            const Matrix da = na - a;
            const double lin = cur.grad_w.cwiseProduct(dw).sum() + cur.grad_a.cwiseProduct(da).sum();
            const double quad = (dw.squaredNorm() + da.squaredNorm()) / (2.0 * step);
            if (std::isfinite(next.smooth) && next.smooth <= cur.smooth + lin + quad + 1e-15 * std::fabs(cur.smooth)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) return;
        const double next_objective = next.smooth + p.l1(nw, na);
        if (!std::isfinite(next_objective)) throw NumericError("dynotears: loss is not finite");
        if (monitor) monitor({outer, it, next_objective});

        const Matrix dw = nw - w;
        const Matrix da = na - a;
        const double moved = std::max(dw.cwiseAbs().maxCoeff(), da.cwiseAbs().maxCoeff());
        const double gain = objective - next_objective;
        w = std::move(nw);
        a = std::move(na);
        objective = next_objective;
        auto fresh = p.evaluate(w, a, true);
        if (moved < 1e-8 || gain <= 1e-12 * std::max(1.0, std::fabs(objective))) return;

        const double sy = dw.cwiseProduct(fresh.grad_w - cur.grad_w).sum() + da.cwiseProduct(fresh.grad_a - cur.grad_a).sum();
        const double ss = dw.squaredNorm() + da.squaredNorm();
        step = sy > 0.0 ? std::clamp(ss / sy, 1e-10, 1e4) : std::min(step * 2.0, 1e4);
        cur = std::move(fresh);
    }
}

}  // namespace

CDResult dynotears_discover(const Matrix& data, const CDConfig& cfg, const DynotearsMonitor& monitor) {
    cfg.validate();
    check_finite(data);
    const int d = static_cast<int>(data.cols());
    const int L = cfg.max_lag;
    require(d >= 1, "dynotears: data has no columns");
    if (data.rows() < L + 20)
        throw DataError("dynotears: need at least max_lag + 20 rows, got " + std::to_string(data.rows()));

    Matrix z = data;
    for (int j = 0; j < d; ++j) {
        const double mu = z.col(j).mean();
        z.col(j).array() -= mu;
        const double sd = std::sqrt(z.col(j).squaredNorm() / static_cast<double>(z.rows() - 1));
        if (!(sd > 0.0)) throw DataError("dynotears: column " + std::to_string(j) + " is constant");
        z.col(j) /= sd;
    }

    const Eigen::Index m = z.rows() - L;
    SvarProblem p;
    p.x = z.bottomRows(m);
    p.y.resize(m, static_cast<Eigen::Index>(L) * d);
    for (int lag = 1; lag <= L; ++lag) p.y.middleCols((lag - 1) * d, d) = z.middleRows(L - lag, m);
    p.lambda_w = cfg.lambda_w;
    p.lambda_a = cfg.lambda_a;

    constexpr double kHTol = 1e-8;
    constexpr double kRhoMax = 1e16;
    Matrix w = Matrix::Zero(d, d);
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(L) * d, d);
    double h = std::numeric_limits<double>::infinity();
    int outer = 0;
    for (; outer < cfg.max_iterations; ++outer) {
        Matrix nw = w;
        Matrix na = a;
        double nh = h;
        while (p.rho < kRhoMax) {
            nw = w;
            na = a;
            solve_inner(p, nw, na, outer, monitor);
            nh = acyclicity_h(nw);
            if (nh > 0.25 * h) {
                p.rho *= 10.0;
            } else {
                break;
            }
        }
        w = std::move(nw);
        a = std::move(na);
        h = nh;
        p.alpha += p.rho * h;
        if (h <= kHTol || p.rho >= kRhoMax) {
            ++outer;
            break;
        }
    }

    CDResult res{LaggedGraph(d, L), LagTensor(d, L), {}, h <= kHTol, h, outer};
    for (int lag = 1; lag <= L; ++lag)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const double v = std::fabs(a((lag - 1) * d + i, j));
                res.scores.at(lag, i, j) = v;
                if (v >= cfg.tau_a && v > 0.0) res.graph.set_edge(lag, i, j);
            }
    res.parents = parents_of(res.graph);
    return res;
}

CDResult discover(const Matrix& data, const CDConfig& cfg) {
    cfg.validate();
    switch (cfg.algorithm) {
        case CDAlgorithm::lagged_pc:
            return lagged_pc_discover(data, cfg);
        case CDAlgorithm::dynotears:
            return dynotears_discover(data, cfg);
        case CDAlgorithm::oracle: {
            const LaggedGraph& g = *cfg.oracle_graph;
            require(g.n_vars() == data.cols(), "oracle graph has " + std::to_string(g.n_vars()) +
                                                   " variables but the data has " + std::to_string(data.cols()));
            CDResult res{g, LagTensor(g.n_vars(), g.max_lag()), parents_of(g), true, 0.0, 0};
            for (const auto& e : g.edges()) res.scores.at(e.lag, e.cause, e.effect) = 1.0;
            return res;
        }
    }
    throw ArgumentError("discover: unknown algorithm");
}

}  // namespace tcs
