#include <sbo/rbfopt.hpp>

#include <sbo/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sbo {

namespace {

constexpr double kImprovementFloor = 1e-12;  // smaller deltas count as stagnation
constexpr int kExplorationProbes = 1000;     // uniform probes backing the maximin search

Matrix rows_to_matrix(const std::vector<Vector>& rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : rows.front().size());
    for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) = rows[static_cast<std::size_t>(i)];
    return m;
}

double min_normalized_distance(const Bounds& bounds, const Vector& x,
                               const std::vector<Vector>& points) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& p : points) best = std::min(best, normalized_distance(bounds, x, p));
    return best;
}

}  // namespace

void RbfOptConfig::validate() const {
    if (initial_design_ndata < 1)
        throw std::invalid_argument("RbfOptConfig: initial_design_ndata >= 1 required");
    if (n_local_optimize < 1)
        throw std::invalid_argument("RbfOptConfig: n_local_optimize >= 1 required");
    if (!(eps > 0.0)) throw std::invalid_argument("RbfOptConfig: eps > 0 required");
    if (max_iter < 1) throw std::invalid_argument("RbfOptConfig: max_iter >= 1 required");
    if (n_same_best < 1) throw std::invalid_argument("RbfOptConfig: n_same_best >= 1 required");
    if (!(smooth >= 0.0)) throw std::invalid_argument("RbfOptConfig: smooth >= 0 required");
    if (strategy != "all_local")
        throw std::invalid_argument("RbfOptConfig: unsupported strategy '" + strategy + "'");
    if (exploration != "distance")
        throw std::invalid_argument("RbfOptConfig: unsupported exploration '" + exploration + "'");
}

RbfOptConfig half_budget_config(int total_budget) {
    if (total_budget < 2) throw std::invalid_argument("half_budget_config: budget >= 2 required");
    RbfOptConfig config;
    config.initial_design_ndata = total_budget / 2;
    config.max_iter = total_budget - config.initial_design_ndata;
    return config;
}

std::vector<Vector> propose_candidates(const RbfModel& model, const Vector& best_point,
                                       const Bounds& bounds, int n_local_optimize,
                                       SeededRng& rng) {
    if (n_local_optimize < 1)
        throw std::invalid_argument("propose_candidates: n_local_optimize >= 1 required");
    const Objective surrogate = [&model](const Vector& x) { return model(x); };
    const BfgsOptions options{100, 1e-7};

    std::vector<Vector> candidates;
    candidates.reserve(static_cast<std::size_t>(n_local_optimize));
    for (int k = 0; k < n_local_optimize; ++k) {
        const Vector start = (k == 0) ? best_point : uniform_point(bounds, rng);
        candidates.push_back(bfgs_minimize(surrogate, start, bounds, options).x_final);
    }
    return candidates;
}

std::vector<Vector> distance_filter(const std::vector<Vector>& candidates,
                                    const std::vector<Vector>& history, const Bounds& bounds,
                                    double eps) {
    std::vector<Vector> kept;
    kept.reserve(candidates.size());
    for (const Vector& c : candidates) {
        if (min_normalized_distance(bounds, c, history) >= eps &&
            min_normalized_distance(bounds, c, kept) >= eps)
            kept.push_back(c);
    }
    return kept;
}

Vector exploration_point(const std::vector<Vector>& history, const Bounds& bounds,
                         SeededRng& rng, int n_starts) {
    if (history.empty()) throw std::invalid_argument("exploration_point: history is empty");
    if (n_starts < 1) throw std::invalid_argument("exploration_point: n_starts >= 1 required");

    std::vector<Vector> normalized;
    normalized.reserve(history.size());
    for (const Vector& p : history) normalized.push_back(bounds.normalize(p));

    const auto min_distance = [&](const Vector& x) {
        return min_normalized_distance(bounds, x, history);
    };

    // Smooth stand-in for -min_i d_i so local descent has a gradient:
    // -softmin_beta(d) = -d_min + log(sum exp(-beta (d_i - d_min))) / beta.
    const double beta = 100.0;
    const Objective negative_softmin = [&](const Vector& x) {
        const Vector u = bounds.normalize(x);
        double d_min = std::numeric_limits<double>::infinity();
        for (const Vector& p : normalized) d_min = std::min(d_min, (u - p).norm());
        double acc = 0.0;
        for (const Vector& p : normalized) acc += std::exp(-beta * ((u - p).norm() - d_min));
        return -d_min + std::log(acc) / beta;
    };

    std::vector<Vector> probes;
    std::vector<double> probe_distance;
    probes.reserve(kExplorationProbes);
    probe_distance.reserve(kExplorationProbes);
    for (int i = 0; i < kExplorationProbes; ++i) {
        probes.push_back(uniform_point(bounds, rng));
        probe_distance.push_back(min_distance(probes.back()));
    }
    std::vector<std::size_t> order(probes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return probe_distance[a] > probe_distance[b];
    });

    Vector best = probes[order.front()];
    double best_distance = probe_distance[order.front()];
    const int starts = std::min<int>(n_starts, static_cast<int>(probes.size()));
    for (int k = 0; k < starts; ++k) {
        const Vector endpoint =
            bfgs_minimize(negative_softmin, probes[order[static_cast<std::size_t>(k)]], bounds,
                          BfgsOptions{100, 1e-7})
                .x_final;
        const double d = min_distance(endpoint);
        if (d > best_distance) {
            best = endpoint;
            best_distance = d;
        }
    }
    return best;
}

RunResult rbfopt_minimize(const Objective& objective, const Bounds& bounds,
                          const RbfOptConfig& config, SeededRng& rng) {
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

    const Design design = latin_hypercube(config.initial_design_ndata, bounds, rng);
    for (Eigen::Index i = 0; i < design.points.rows() && !objective_failed; ++i)
        evaluate(design.points.row(i).transpose(), Phase::initial);

    run.termination = RunTermination::max_iterations;
    int improvement_free = 0;
    for (int iteration = 0; iteration < config.max_iter && !objective_failed; ++iteration) {
        RbfModel model;
        try {
            model = rbf_fit(rows_to_matrix(history), Eigen::Map<const Vector>(
                                                         values.data(),
                                                         static_cast<Eigen::Index>(values.size())),
                            std::nullopt, config.smooth);
        } catch (const singular_system_error&) {
            try {  // one retry with a ridge before giving up on the surrogate
                model = rbf_fit(rows_to_matrix(history),
                                Eigen::Map<const Vector>(values.data(),
                                                         static_cast<Eigen::Index>(values.size())),
                                std::nullopt, std::max(config.smooth, 1e-8));
            } catch (const singular_system_error&) {
                run.termination = RunTermination::stagnation;
                break;
            }
        }

        const double best_before = best_f;
        const std::vector<Vector> proposals =
            propose_candidates(model, best_x, bounds, config.n_local_optimize, rng);
        const std::vector<Vector> accepted =
            distance_filter(proposals, history, bounds, config.eps);
        if (!accepted.empty()) {
            for (const Vector& x : accepted) {
                evaluate(x, Phase::adaptive);
                if (objective_failed) break;
            }
        } else {
            const Vector x = exploration_point(history, bounds, rng, config.n_local_optimize);
            if (min_normalized_distance(bounds, x, history) < config.eps) {
                run.termination = RunTermination::stagnation;  // space is saturated
                break;
            }
            evaluate(x, Phase::exploration);
        }
        if (objective_failed) break;

        if (best_before - best_f > kImprovementFloor) {
            improvement_free = 0;
        } else if (++improvement_free >= config.n_same_best) {
            run.termination = RunTermination::stagnation;
            break;
        }
    }

    run.finalize_from_log();
    if (objective_failed) {
        run.termination = RunTermination::numerical_failure;
        return run;
    }
    if (config.polish) {
        run = polish(objective, std::move(run), bounds);
        run.termination = RunTermination::polish_complete;
    }
    return run;
}

}  // namespace sbo
