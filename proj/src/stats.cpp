#include <sbo/stats.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sbo {

namespace {

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("probability must lie in [0, 1]");
}

}  // namespace

double sigma_fail(double p, long long n) {
    check_probability(p);
    if (n < 1) throw std::invalid_argument("sigma_fail: n >= 1 required");
    return p * std::sqrt(p * static_cast<double>(n) * (1.0 - p));
}

double binomial_stddev(double p, long long n) {
    check_probability(p);
    if (n < 1) throw std::invalid_argument("binomial_stddev: n >= 1 required");
    return std::sqrt(static_cast<double>(n) * p * (1.0 - p));
}

long long required_runs(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("required_runs: p strictly inside (0, 1) required");
    const double v = 1e4 * p * p * p * (1.0 - p);
    const double whole = std::floor(v);
    // Absorb float noise so analytically-integer products stay integral.
    if (v - whole < 1e-9) return static_cast<long long>(whole);
    return static_cast<long long>(std::ceil(v));
}

double p_double(double p) {
    check_probability(p);
    return p * p;
}

RunClassification classify_run(const RunResult& result,
                               const std::vector<OptimumRecord>& catalog,
                               const ClassificationRule& rule, const Bounds& bounds) {
    if (catalog.empty()) throw std::invalid_argument("classify_run: empty catalog");
    if (!(rule.success_tolerance > 0.0))
        throw std::invalid_argument("classify_run: success_tolerance > 0 required");
    if (rule.basin_rule != "nearest-optimum")
        throw std::invalid_argument("classify_run: unsupported basin rule '" + rule.basin_rule +
                                    "'");

    double global_value = std::numeric_limits<double>::infinity();
    for (const OptimumRecord& record : catalog) global_value = std::min(global_value, record.value);

    std::size_t nearest = 0;
    double nearest_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        const double d = normalized_distance(bounds, result.x_final, catalog[i].location);
        if (d < nearest_distance) {  // strict: ties keep the lower catalog index
            nearest_distance = d;
            nearest = i;
        }
    }

    double min_separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < catalog.size(); ++i)
        for (std::size_t j = i + 1; j < catalog.size(); ++j)
            min_separation =
                std::min(min_separation,
                         normalized_distance(bounds, catalog[i].location, catalog[j].location));

    RunClassification out;
    out.objective_gap = std::max(0.0, result.f_final - global_value);
    const bool in_some_basin = nearest_distance <= 0.5 * min_separation;
    out.basin_label = in_some_basin ? catalog[nearest].label : kNoBasinLabel;
    out.success =
        in_some_basin && catalog[nearest].is_global && out.objective_gap <= rule.success_tolerance;
    return out;
}

}  // namespace sbo
