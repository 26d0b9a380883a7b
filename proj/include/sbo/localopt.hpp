#pragma once

#include <sbo/bounds.hpp>
#include <sbo/run.hpp>

#include <functional>

namespace sbo {

enum class LocalTermination {
    gradient_tolerance,
    max_iterations,
    line_search_failure,
    numerical_failure,
};

const char* to_string(LocalTermination termination);

struct LocalResult {
    Vector x_final;
    double f_final = 0.0;
    int n_evaluations = 0;  // objective calls, finite-difference probes included
    bool converged = false;
    LocalTermination termination = LocalTermination::max_iterations;
};

struct BfgsOptions {
    int max_iterations = 200;
    double gradient_tolerance = 1e-6;  // infinity norm of the projected gradient
};

using Objective = std::function<double(const Vector&)>;

/// Bound-constrained BFGS with forward finite-difference gradients
/// (step sqrt(machine epsilon) * (1 + |x_i|), flipped to a backward
/// difference at the upper bound so probes stay feasible) and backtracking
/// Armijo line search (c1 = 1e-4, halving). Bounds are handled by projecting
/// trial points into the box and zeroing gradient components that push
/// outward at active bounds. Every objective evaluation lies within bounds;
/// accepted iterates are non-increasing in objective value; the returned
/// point is the best evaluation seen.
LocalResult bfgs_minimize(const Objective& objective, const Vector& x0, const Bounds& bounds,
                          const BfgsOptions& options = {});

/// The gradient estimate bfgs_minimize works from: forward differences with
/// step sqrt(machine epsilon) * (1 + |x_i|) per component, flipped to a
/// backward difference where the forward probe would leave the box.
Vector finite_difference_gradient(const Objective& objective, const Vector& x,
                                  const Bounds& bounds);

/// Follow-up local descent on the true objective from a run's final point.
/// Replaces x_final/f_final when the local search improves them (never
/// worsens) and appends every objective call to the log as a polish-phase
/// entry.
RunResult polish(const Objective& objective, RunResult run, const Bounds& bounds,
                 const BfgsOptions& options = {});

}  // namespace sbo
