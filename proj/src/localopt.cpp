#include <sbo/localopt.hpp>

#include <cmath>
#include <limits>

namespace sbo {

namespace {

struct NonFiniteValue {};  // unwinds to the numerical-failure exit

constexpr double kArmijoC1 = 1e-4;
constexpr int kMaxHalvings = 40;

// Forward differences, switching to backward at the upper bound so every
// probe stays inside the box.
template <typename Eval>
Vector fd_gradient(Eval&& eval, const Vector& x, double fx, const Bounds& bounds) {
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    Vector g(x.size());
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = sqrt_eps * (1.0 + std::abs(x[i]));
        if (x[i] + h <= bounds.upper()[i]) {
            probe[i] = x[i] + h;
            g[i] = (eval(probe) - fx) / h;
        } else {
            probe[i] = x[i] - h;
            g[i] = (fx - eval(probe)) / h;
        }
        probe[i] = x[i];
    }
    return g;
}

}  // namespace

const char* to_string(LocalTermination termination) {
    switch (termination) {
        case LocalTermination::gradient_tolerance: return "gradient-tolerance";
        case LocalTermination::max_iterations: return "max-iterations";
        case LocalTermination::line_search_failure: return "line-search-failure";
        case LocalTermination::numerical_failure: return "numerical-failure";
    }
    return "?";
}

LocalResult bfgs_minimize(const Objective& objective, const Vector& x0, const Bounds& bounds,
                          const BfgsOptions& options) {
    if (!bounds.contains(x0))
        throw std::invalid_argument("bfgs_minimize: start point outside bounds");

    const int d = bounds.dimension();
    const Vector active_tol = 1e-10 * bounds.width();

    LocalResult result;
    result.x_final = x0;
    result.f_final = std::numeric_limits<double>::infinity();

    int n_eval = 0;
    Vector best_x = x0;
    double best_f = std::numeric_limits<double>::infinity();

    auto eval = [&](const Vector& x) {
        const double v = objective(x);
        ++n_eval;
        if (!std::isfinite(v)) throw NonFiniteValue{};
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
        return v;
    };

    auto gradient = [&](const Vector& x, double fx) { return fd_gradient(eval, x, fx, bounds); };

    auto project_gradient = [&](const Vector& x, Vector g) {
        for (int i = 0; i < d; ++i) {
            if (x[i] <= bounds.lower()[i] + active_tol[i] && g[i] > 0.0) g[i] = 0.0;
            if (x[i] >= bounds.upper()[i] - active_tol[i] && g[i] < 0.0) g[i] = 0.0;
        }
        return g;
    };

    try {
        Vector x = x0;
        double fx = eval(x);
        Vector g = gradient(x, fx);
        Matrix hessian_inv = Matrix::Identity(d, d);
        bool hessian_is_identity = true;
        bool first_update = true;

        result.termination = LocalTermination::max_iterations;
        for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
            const Vector pg = project_gradient(x, g);
            if (pg.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) {
                result.converged = true;
                result.termination = LocalTermination::gradient_tolerance;
                break;
            }

            Vector direction = -(hessian_inv * pg);
            if (direction.dot(pg) >= 0.0) {  // not a descent direction
                hessian_inv.setIdentity();
                hessian_is_identity = true;
                direction = -pg;
            }

            double alpha = 1.0;
            bool accepted = false;
            Vector x_trial(d);
            double f_trial = 0.0;
            for (int halving = 0; halving < kMaxHalvings; ++halving) {
                x_trial = bounds.clamp(x + alpha * direction);
                const Vector step = x_trial - x;
                if (step.isZero(0.0)) break;  // fully blocked by the bounds
                f_trial = eval(x_trial);
                // Strict decrease: once the Armijo margin underflows into fx,
                // zero-progress steps must fail rather than loop forever.
                if (f_trial < fx + kArmijoC1 * std::min(g.dot(step), 0.0)) {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) {
                if (!hessian_is_identity) {  // curvature info went stale; retry steepest
                    hessian_inv.setIdentity();
                    hessian_is_identity = true;
                    first_update = true;
                    continue;
                }
                result.termination = LocalTermination::line_search_failure;
                break;
            }

            const Vector g_new = gradient(x_trial, f_trial);
            const Vector s = x_trial - x;
            const Vector y = g_new - g;
            const double sy = s.dot(y);
            if (sy > 1e-10 * s.norm() * y.norm()) {
                if (first_update) {
                    hessian_inv = (sy / y.squaredNorm()) * Matrix::Identity(d, d);
                    first_update = false;
                }
                const double rho = 1.0 / sy;
                const Matrix left = Matrix::Identity(d, d) - rho * s * y.transpose();
                hessian_inv = left * hessian_inv * left.transpose() + rho * s * s.transpose();
                hessian_is_identity = false;
            }
            x = x_trial;
            fx = f_trial;
            g = g_new;
        }
    } catch (const NonFiniteValue&) {
        result.termination = LocalTermination::numerical_failure;
    }

    result.x_final = best_x;
    result.f_final = best_f;
    result.n_evaluations = n_eval;
    return result;
}

Vector finite_difference_gradient(const Objective& objective, const Vector& x,
                                  const Bounds& bounds) {
    if (!bounds.contains(x))
        throw std::invalid_argument("finite_difference_gradient: point outside bounds");
    return fd_gradient(objective, x, objective(x), bounds);
}

RunResult polish(const Objective& objective, RunResult run, const Bounds& bounds,
                 const BfgsOptions& options) {
    if (!bounds.contains(run.x_final))
        throw std::invalid_argument("polish: run's final point is infeasible");

    auto logged = [&](const Vector& x) {
        const double v = objective(x);
        run.log.push_back(LogEntry{Phase::polish, x, v});
        return v;
    };
    const LocalResult local = bfgs_minimize(logged, run.x_final, bounds, options);
    if (local.f_final < run.f_final) {
        run.x_final = local.x_final;
        run.f_final = local.f_final;
    }
    run.n_evaluations = static_cast<int>(run.log.size());
    return run;
}

}  // namespace sbo
