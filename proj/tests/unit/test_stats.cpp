#include <doctest.h>

#include <sbo/rng.hpp>
#include <sbo/stats.hpp>
#include <sbo/testfuncs.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace sbo;

namespace {

constexpr double kPi = 3.14159265358979323846;

RunResult run_ending_at(Vector x, double f) {
    RunResult run;
    run.x_final = std::move(x);
    run.f_final = f;
    run.log.push_back(LogEntry{Phase::adaptive, run.x_final, run.f_final});
    run.n_evaluations = 1;
    return run;
}

}  // namespace

TEST_CASE("sigma_fail follows its printed form") {
    CHECK(std::abs(sigma_fail(0.75, 1055) - 10.55) <= 0.01);
    CHECK(sigma_fail(0.0, 100) == 0.0);
    CHECK(sigma_fail(0.5, 100) == doctest::Approx(2.5));
    CHECK_THROWS_AS(sigma_fail(-0.1, 10), std::invalid_argument);
    CHECK_THROWS_AS(sigma_fail(1.1, 10), std::invalid_argument);

    // The textbook binomial deviation is provided alongside and differs.
    CHECK(binomial_stddev(0.5, 100) == doctest::Approx(5.0));
    CHECK(binomial_stddev(0.5, 100) != sigma_fail(0.5, 100));
}

TEST_CASE("required_runs reproduces the replication-count derivation") {
    CHECK(required_runs(0.75) == 1055);
    CHECK(required_runs(0.1) == 9);
    CHECK_THROWS_AS(required_runs(0.0), std::invalid_argument);
    CHECK_THROWS_AS(required_runs(1.0), std::invalid_argument);

    // The underlying curve 10000 p^3 (1-p) peaks at exactly p = 0.75 on a
    // 1e-4 grid, and no grid point needs more runs than p = 0.75 does.
    double best_p = 0.0, best_value = -1.0;
    const long long max_runs = required_runs(0.75);
    for (int i = 1; i < 10000; ++i) {
        const double p = i * 1e-4;
        const double value = 10000.0 * p * p * p * (1.0 - p);
        if (value > best_value) {
            best_value = value;
            best_p = p;
        }
        CHECK(required_runs(p) <= max_runs);
    }
    CHECK(std::abs(best_p - 0.75) <= 1e-4);
}

TEST_CASE("sigma_fail and required_runs are mutually consistent") {
    for (double p : {0.25, 0.5, 0.75}) {
        const long long n = required_runs(p);
        CHECK(std::abs(sigma_fail(p, n) / static_cast<double>(n) - 0.01) <= 1e-3);
    }
}

TEST_CASE("p_double squares the failure probability") {
    CHECK(p_double(0.1) == doctest::Approx(0.01));
    CHECK(p_double(0.0) == 0.0);
    CHECK(p_double(1.0) == 1.0);
}

TEST_CASE("classification on the fortified 2D catalog") {
    const TestFunction f = make_function("branin2-fortified");
    const ClassificationRule rule;

    const RunClassification at_global =
        classify_run(run_ending_at(Vector{{-kPi, 12.275}}, -3.280907), f.optima(), rule,
                     f.bounds());
    CHECK(at_global.basin_label == "b1");
    CHECK(at_global.success);
    CHECK(at_global.objective_gap <= 1e-5);

    const RunClassification at_b2 =
        classify_run(run_ending_at(Vector{{kPi, 2.275}}, 0.397887), f.optima(), rule,
                     f.bounds());
    CHECK(at_b2.basin_label == "b2");
    CHECK_FALSE(at_b2.success);
    CHECK(std::abs(at_b2.objective_gap - 3.678794) <= 1e-5);
}

TEST_CASE("unfortified runs succeed in any catalog basin") {
    const TestFunction f = make_branin2();
    const ClassificationRule rule;
    for (const auto& record : f.optima()) {
        const RunClassification c =
            classify_run(run_ending_at(record.location, record.value), f.optima(), rule,
                         f.bounds());
        CHECK(c.basin_label == record.label);
        CHECK(c.success);
    }
}

TEST_CASE("ties break toward the lower catalog index") {
    // Two optima placed so a midpoint query is equidistant to the bit.
    const Bounds box(Vector{{0.0, 0.0}}, Vector{{1.0, 1.0}});
    const std::vector<OptimumRecord> catalog = {
        OptimumRecord{"first", Vector{{0.0, 0.0}}, 0.0, true},
        OptimumRecord{"second", Vector{{1.0, 0.0}}, 0.0, true},
    };
    const RunClassification c = classify_run(run_ending_at(Vector{{0.5, 0.0}}, 0.0),
                                             catalog, ClassificationRule{}, box);
    CHECK(c.basin_label == "first");
    CHECK(c.success);
}

TEST_CASE("runs far from every optimum get no basin") {
    const TestFunction f = make_branin2();
    // (-5, 0) is a domain corner far from all three optima.
    const RunClassification c = classify_run(run_ending_at(Vector{{-5.0, 0.0}}, 100.0),
                                             f.optima(), ClassificationRule{}, f.bounds());
    CHECK(c.basin_label == kNoBasinLabel);
    CHECK_FALSE(c.success);
}

TEST_CASE("classification gap never goes negative") {
    const TestFunction f = make_branin2();
    const RunClassification c =
        classify_run(run_ending_at(f.optima()[0].location, 0.39), f.optima(),
                     ClassificationRule{}, f.bounds());
    CHECK(c.objective_gap == 0.0);
    CHECK(c.success);
}

TEST_CASE("bernoulli batches match the binomial deviation") {
    const double p = 0.3;
    const int n = 200;
    const int batches = 2000;
    SeededRng rng(55);
    double sum = 0.0, sum_sq = 0.0;
    for (int b = 0; b < batches; ++b) {
        int failures = 0;
        for (int i = 0; i < n; ++i)
            if (rng.next_double() < p) ++failures;
        sum += failures;
        sum_sq += static_cast<double>(failures) * failures;
    }
    const double mean = sum / batches;
    const double observed = std::sqrt(sum_sq / batches - mean * mean);
    CHECK(std::abs(observed - binomial_stddev(p, n)) <= 0.05 * binomial_stddev(p, n));
}
