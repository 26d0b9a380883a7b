#pragma once

#include <sbo/bounds.hpp>
#include <sbo/localopt.hpp>
#include <sbo/rbf.hpp>
#include <sbo/rng.hpp>
#include <sbo/run.hpp>

#include <string>
#include <vector>

namespace sbo {

/// Knobs of the RBF adaptive-sampling optimizer. Defaults follow the usual
/// published settings for this method; only initial_design_ndata and
/// max_iter have no sensible universal default and must be set per problem.
struct RbfOptConfig {
    int initial_design_ndata = 10;  // LHS points evaluated before any modeling
    int n_local_optimize = 5;       // surrogate searches per iteration
    double eps = 0.002;  // min normalized distance of a new point to all others
    int max_iter = 100;  // adaptive-sampling iterations after the initial design
    int n_same_best = 20;           // improvement-free iterations before stopping
    bool polish = false;            // finish with local descent on the true objective
    std::string strategy = "all_local";
    std::string exploration = "distance";
    double smooth = 0.0;  // ridge added to the interpolation system

    /// Throws std::invalid_argument when any field is out of range or an
    /// unsupported strategy/exploration identifier is set.
    void validate() const;
};

/// Budget split putting about half the evaluations into the initial design,
/// which is close to optimal for this optimizer family: initial design
/// total_budget/2, the rest as adaptive iterations.
RbfOptConfig half_budget_config(int total_budget);

/// Minimize each of `n_local_optimize` local searches on the surrogate: one
/// started from best_point, the rest from uniform random points. Returns the
/// search endpoints (each search's best feasible iterate), at most one per
/// start.
std::vector<Vector> propose_candidates(const RbfModel& model, const Vector& best_point,
                                       const Bounds& bounds, int n_local_optimize,
                                       SeededRng& rng);

/// Keep a candidate iff its normalized Euclidean distance to every history
/// point and every already-kept candidate is >= eps. Order-preserving.
std::vector<Vector> distance_filter(const std::vector<Vector>& candidates,
                                    const std::vector<Vector>& history, const Bounds& bounds,
                                    double eps);

/// Feasible point (approximately) maximizing the minimum normalized distance
/// to `history`: n_starts local searches on a log-sum-exp smoothed min
/// distance, started from the best of 1000 uniform probes, with the final
/// pick made by the exact criterion over all searched endpoints and probes.
/// The result is therefore never worse than the best random probe.
Vector exploration_point(const std::vector<Vector>& history, const Bounds& bounds,
                         SeededRng& rng, int n_starts = 5);

/// Adaptive-sampling global minimization: LHS initial design, then per
/// iteration fit a multiquadric RBF to all data, locally minimize it from
/// multiple starts, evaluate the objective at every proposal passing the eps
/// distance filter (or at the maximin exploration point when none pass),
/// until max_iter iterations or n_same_best improvement-free iterations.
/// With config.polish, ends with local descent on the true objective from
/// the best point. Identical (objective, bounds, config, seed) reproduce an
/// identical evaluation log.
RunResult rbfopt_minimize(const Objective& objective, const Bounds& bounds,
                          const RbfOptConfig& config, SeededRng& rng);

}  // namespace sbo
