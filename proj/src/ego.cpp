#include <sbo/ego.hpp>

#include <sbo/rbfopt.hpp>
#include <sbo/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace sbo {

namespace {

constexpr double kJitterStart = 1e-8;  // relative to signal variance
constexpr double kJitterCap = 1e-4;
constexpr int kAcquisitionProbes = 500;      // dense scan backing the EI search
constexpr std::size_t kAcquisitionStarts = 5;  // probe anchors refined locally
constexpr double kLogEllLo = -6.907755278982137;  // log 1e-3
constexpr double kLogEllHi = 2.302585092994046;   // log 10
constexpr double kLogVarLo = -9.210340371976182;  // log 1e-4
constexpr double kLogVarHi = 9.210340371976182;   // log 1e4

// Correlation matrix of the squared-exponential kernel on normalized inputs.
Matrix correlation(const Matrix& x, const Vector& lengthscales) {
    const Eigen::Index n = x.rows();
    Matrix r = Matrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double q =
                ((x.row(i) - x.row(j)).transpose().cwiseQuotient(lengthscales)).squaredNorm();
            r(i, j) = r(j, i) = std::exp(-0.5 * q);
        }
    }
    return r;
}

double negative_log_marginal_likelihood(const Matrix& x, const Vector& y,
                                        const Vector& lengthscales, double signal_variance,
                                        double jitter_rel) {
    const Eigen::Index n = x.rows();
    Matrix k = signal_variance * correlation(x, lengthscales);
    k.diagonal().array() += jitter_rel * signal_variance;
    const Eigen::LLT<Matrix> llt(k);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const Vector alpha = llt.solve(y);
    const double log_det = llt.matrixLLT().diagonal().array().log().sum();
    return 0.5 * y.dot(alpha) + log_det +
           0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

Matrix rows_to_matrix(const std::vector<Vector>& rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : rows.front().size());
    for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) = rows[static_cast<std::size_t>(i)];
    return m;
}

}  // namespace

void EgoConfig::validate() const {
    if (initial_points < 1) throw std::invalid_argument("EgoConfig: initial_points >= 1 required");
    if (max_iterations < 1)
        throw std::invalid_argument("EgoConfig: max_iterations >= 1 required");
}

Vector GpModel::kernel_column(const Vector& u) const {
    const Eigen::Index n = x_.rows();
    Vector k(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double q =
            ((u.transpose() - x_.row(i)).transpose().cwiseQuotient(lengthscales_)).squaredNorm();
        k[i] = signal_variance_ * std::exp(-0.5 * q);
    }
    return k;
}

std::pair<double, double> GpModel::predict(const Vector& x) const {
    if (x.size() != shift_.size())
        throw std::invalid_argument("GpModel::predict: dimension mismatch");
    if (zero_signal_) return {y_mean_, 0.0};

    const Vector u = (x - shift_).cwiseQuotient(scale_);
    const Vector k = kernel_column(u);
    const double mean_std = k.dot(alpha_);
    const double reduction = k.dot(llt_.solve(k));
    const double var_std = std::clamp(signal_variance_ - reduction, 0.0, signal_variance_);
    return {y_mean_ + y_std_ * mean_std, y_std_ * y_std_ * var_std};
}

GpModel gp_fit(const Matrix& points, const Vector& values, SeededRng& rng,
               const std::optional<Bounds>& normalization) {
    const Eigen::Index n = points.rows();
    const Eigen::Index d = points.cols();
    if (n < 2) throw std::invalid_argument("gp_fit: at least two points required");
    if (values.size() != n) throw std::invalid_argument("gp_fit: points/values size mismatch");
    if (!points.allFinite() || !values.allFinite())
        throw std::invalid_argument("gp_fit: non-finite input");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if ((points.row(i) - points.row(j)).norm() == 0.0)
                throw std::invalid_argument("gp_fit: duplicate points");

    GpModel model;
    if (normalization) {
        if (normalization->dimension() != d)
            throw std::invalid_argument("gp_fit: normalization dimension mismatch");
        model.shift_ = normalization->lower();
        model.scale_ = normalization->width();
    } else {
        model.shift_ = points.colwise().minCoeff().transpose();
        Vector width = points.colwise().maxCoeff().transpose() - model.shift_;
        for (Eigen::Index j = 0; j < d; ++j) {
            if (width[j] <= 0.0) {  // flat dimension: center it in the unit box
                model.shift_[j] -= 0.5;
                width[j] = 1.0;
            }
        }
        model.scale_ = width;
    }
    model.x_.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        model.x_.row(i) =
            (points.row(i).transpose() - model.shift_).cwiseQuotient(model.scale_).transpose();

    model.y_mean_ = values.mean();
    const double y_var = (values.array() - model.y_mean_).square().mean();
    const double y_std = std::sqrt(y_var);
    if (y_std <= 1e-15 * std::max(1.0, std::abs(model.y_mean_))) {
        model.zero_signal_ = true;
        model.y_std_ = 1.0;
        model.y_ = Vector::Zero(n);
        model.lengthscales_ = Vector::Ones(d);
        model.signal_variance_ = 0.0;
        return model;
    }
    model.y_std_ = y_std;
    model.y_ = (values.array() - model.y_mean_) / y_std;

    // Maximize the marginal likelihood over log hyperparameters
    // (d lengthscales, then the signal variance).
    const Bounds theta_bounds(
        (Vector(d + 1) << Vector::Constant(d, kLogEllLo), kLogVarLo).finished(),
        (Vector(d + 1) << Vector::Constant(d, kLogEllHi), kLogVarHi).finished());
    const Objective nll = [&](const Vector& theta) {
        const Vector ell = theta.head(d).array().exp();
        return negative_log_marginal_likelihood(model.x_, model.y_, ell,
                                                std::exp(theta[d]), kJitterStart);
    };

    std::vector<Vector> starts;
    starts.push_back((Vector(d + 1) << Vector::Constant(d, std::log(0.5)), 0.0).finished());
    for (int s = 0; s < 5; ++s) {
        Vector theta(d + 1);
        for (Eigen::Index j = 0; j < d; ++j) theta[j] = rng.uniform(kLogEllLo, kLogEllHi);
        theta[d] = rng.uniform(kLogVarLo, kLogVarHi);
        starts.push_back(theta);
    }

    Vector best_theta = starts.front();
    double best_nll = std::numeric_limits<double>::infinity();
    for (const Vector& start : starts) {
        model.start_objectives_.push_back(nll(start));
        const LocalResult local = bfgs_minimize(nll, start, theta_bounds, BfgsOptions{60, 1e-5});
        if (local.f_final < best_nll) {
            best_nll = local.f_final;
            best_theta = local.x_final;
        }
    }
    model.final_objective_ = best_nll;
    model.lengthscales_ = best_theta.head(d).array().exp();
    model.signal_variance_ = std::exp(best_theta[d]);

    Matrix k_base = model.signal_variance_ * correlation(model.x_, model.lengthscales_);
    for (double jitter = kJitterStart;; jitter *= 2.0) {
        Matrix k = k_base;
        k.diagonal().array() += jitter * model.signal_variance_;
        model.llt_.compute(k);
        if (model.llt_.info() == Eigen::Success) {
            model.jitter_rel_ = jitter;
            break;
        }
        if (jitter > kJitterCap)
            throw std::runtime_error("gp_fit: covariance factorization failed");
    }
    model.alpha_ = model.llt_.solve(model.y_);
    return model;
}

double expected_improvement(double mean, double stddev, double f_best) {
    if (!(stddev > 0.0)) return std::max(f_best - mean, 0.0);
    const double z = (f_best - mean) / stddev;
    const double cdf = 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0);
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return std::max((f_best - mean) * cdf + stddev * pdf, 0.0);
}

double expected_improvement(const GpModel& model, const Vector& x, double f_best) {
    const auto [mean, variance] = model.predict(x);
    return expected_improvement(mean, std::sqrt(std::max(variance, 0.0)), f_best);
}

RunResult ego_minimize(const Objective& objective, const Bounds& bounds, const EgoConfig& config,
                       SeededRng& rng) {
    config.validate();

    RunResult run;
    run.seed = rng.seed();

    std::vector<Vector> history;
    std::vector<double> values;
    Vector best_x;
    double best_f = std::numeric_limits<double>::infinity();
    bool objective_failed = false;

    const auto evaluate = [&](const Vector& x, Phase phase) {
        const double f = objective(x);
        run.log.push_back(LogEntry{phase, x, f});
        if (!std::isfinite(f)) {
            objective_failed = true;
            return;
        }
        history.push_back(x);
        values.push_back(f);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    };

    const Design design = latin_hypercube(config.initial_points, bounds, rng);
    for (Eigen::Index i = 0; i < design.points.rows() && !objective_failed; ++i)
        evaluate(design.points.row(i).transpose(), Phase::initial);

    run.termination = RunTermination::max_iterations;
    for (int iteration = 0; iteration < config.max_iterations && !objective_failed; ++iteration) {
        GpModel model;
        try {
            model = gp_fit(rows_to_matrix(history),
                           Eigen::Map<const Vector>(values.data(),
                                                    static_cast<Eigen::Index>(values.size())),
                           rng, bounds);
        } catch (const std::exception&) {
            run.termination = RunTermination::stagnation;
            break;
        }

        Vector x_next;
        Phase phase = Phase::adaptive;
        bool fall_back = model.zero_signal();
        if (!fall_back) {
            const Objective negative_ei = [&](const Vector& x) {
                return -expected_improvement(model, x, best_f);
            };
            // Anchor the local searches at the most promising of a dense
            // random scan; EI peaks are narrow and blind restarts miss them.
            std::vector<Vector> probes;
            std::vector<double> scores;
            probes.reserve(kAcquisitionProbes);
            scores.reserve(kAcquisitionProbes);
            for (int s = 0; s < kAcquisitionProbes; ++s) {
                probes.push_back(uniform_point(bounds, rng));
                scores.push_back(-negative_ei(probes.back()));
            }
            std::vector<std::size_t> order(probes.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

            std::vector<Vector> starts{best_x};
            for (std::size_t k = 0; k < kAcquisitionStarts && k < order.size(); ++k)
                starts.push_back(probes[order[k]]);
            x_next = probes[order.front()];
            double best_acquisition = scores[order.front()];
            for (const Vector& start : starts) {
                const LocalResult local =
                    bfgs_minimize(negative_ei, start, bounds, BfgsOptions{100, 1e-8});
                if (-local.f_final > best_acquisition) {
                    best_acquisition = -local.f_final;
                    x_next = local.x_final;
                }
            }
            double nearest = std::numeric_limits<double>::infinity();
            for (const Vector& p : history)
                nearest = std::min(nearest, normalized_distance(bounds, x_next, p));
            fall_back = best_acquisition <= 1e-16 || nearest <= 1e-9;
        }
        if (fall_back) {
            x_next = exploration_point(history, bounds, rng);
            phase = Phase::exploration;
            double nearest = std::numeric_limits<double>::infinity();
            for (const Vector& p : history)
                nearest = std::min(nearest, normalized_distance(bounds, x_next, p));
            if (nearest <= 1e-12) {  // even exploration cannot separate: stop
                run.termination = RunTermination::stagnation;
                break;
            }
        }
        evaluate(x_next, phase);
    }

    run.finalize_from_log();
    if (objective_failed) {
        run.termination = RunTermination::numerical_failure;
        return run;
    }
    if (config.polish && run.termination != RunTermination::stagnation) {
        run = polish(objective, std::move(run), bounds);
        run.termination = RunTermination::polish_complete;
    }
    return run;
}

}  // namespace sbo
