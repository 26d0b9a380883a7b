#pragma once

#include <sbo/bounds.hpp>
#include <sbo/run.hpp>
#include <sbo/testfuncs.hpp>

#include <string>
#include <vector>

namespace sbo {

/// Standard deviation of the failure count of n Bernoulli(p) runs, in the
/// form p*sqrt(p*n*(1-p)) used by the replication-count derivation this
/// library follows. Note this differs from the textbook binomial deviation
/// sqrt(n*p*(1-p)) (see binomial_stddev); the derived run counts
/// (required_runs) are consistent with this form, so it is kept as primary.
double sigma_fail(double p, long long n);

/// Textbook binomial standard deviation sqrt(n*p*(1-p)), provided alongside
/// sigma_fail for comparison.
double binomial_stddev(double p, long long n);

/// Replicates needed to resolve a failure probability p to about 1% of the
/// run count: ceil(10000 * p^3 * (1-p)). Maximal at p = 0.75, giving 1055.
long long required_runs(double p);

/// Probability that two independent runs both fail: p^2.
double p_double(double p);

struct ClassificationRule {
    double success_tolerance = 0.01;  // absolute gap to the global optimum value
    std::string basin_rule = "nearest-optimum";
};

/// No-basin label for runs ending farther from every catalog optimum than
/// half the minimum inter-optimum distance (normalized coordinates).
inline const std::string kNoBasinLabel = "none";

struct RunClassification {
    std::string basin_label;     // catalog label, or kNoBasinLabel
    bool success = false;        // in a global basin and within tolerance
    double objective_gap = 0.0;  // max(0, f_final - global optimum value)
};

/// Score one run against an optimum catalog: basin = nearest optimum in
/// normalized coordinates (ties break to the lower catalog index; farther
/// than half the minimum inter-optimum distance from everything = no basin);
/// gap = f_final above the catalog's global value; success requires the gap
/// within tolerance AND a global-optimum basin.
RunClassification classify_run(const RunResult& result,
                               const std::vector<OptimumRecord>& catalog,
                               const ClassificationRule& rule, const Bounds& bounds);

}  // namespace sbo
