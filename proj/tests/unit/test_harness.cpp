#include <doctest.h>

#include <sbo/harness.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace sbo;

namespace {

CampaignConfig small_campaign() {
    CampaignConfig config;
    config.function_name = "branin2";
    config.algorithm = "rbfopt";
    config.rbfopt.initial_design_ndata = 10;
    config.rbfopt.max_iter = 10;
    config.n_replicates = 16;
    config.master_seed = 77;
    return config;
}

bool summaries_identical(const CampaignSummary& a, const CampaignSummary& b) {
    if (a.percent_failures != b.percent_failures) return false;
    if (a.mean_evaluations != b.mean_evaluations) return false;
    if (a.basin_percentages != b.basin_percentages) return false;
    if (a.per_run.size() != b.per_run.size()) return false;
    for (std::size_t i = 0; i < a.per_run.size(); ++i) {
        const RunResult& run_a = a.per_run[i].run;
        const RunResult& run_b = b.per_run[i].run;
        if (run_a.log.size() != run_b.log.size()) return false;
        for (std::size_t j = 0; j < run_a.log.size(); ++j) {
            if (run_a.log[j].f != run_b.log[j].f) return false;
            if ((run_a.log[j].x.array() != run_b.log[j].x.array()).any()) return false;
        }
        if (a.per_run[i].classification.basin_label != b.per_run[i].classification.basin_label)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("an easy single-replicate campaign succeeds outright") {
    CampaignConfig config;
    config.function_name = "branin2";
    config.algorithm = "rbfopt";
    config.rbfopt.initial_design_ndata = 25;
    config.rbfopt.max_iter = 25;
    config.polish = true;
    config.n_replicates = 1;
    config.master_seed = 5;
    const CampaignSummary summary = run_campaign(config);
    CHECK(summary.percent_failures == 0.0);
    CHECK(summary.n_replicates == 1);
    CHECK(summary.n_numerical_failures == 0);
}

TEST_CASE("campaign summaries are identical at every parallelism level") {
    CampaignConfig config = small_campaign();
    config.parallelism = 1;
    const CampaignSummary serial = run_campaign(config);
    config.parallelism = 8;
    const CampaignSummary parallel = run_campaign(config);
    CHECK(summaries_identical(serial, parallel));
}

TEST_CASE("each replicate is reproducible standalone from its sub-seed") {
    const CampaignConfig config = small_campaign();
    const CampaignSummary summary = run_campaign(config);
    REQUIRE(summary.per_run.size() == 16);

    const TestFunction f = make_function(config.function_name);
    const Objective objective = [&f](const Vector& x) { return f(x); };
    SeededRng rng(sub_seed(config.master_seed, 3));
    const RunResult solo = rbfopt_minimize(objective, f.bounds(), config.rbfopt, rng);

    const RunResult& replicate = summary.per_run[3].run;
    REQUIRE(solo.log.size() == replicate.log.size());
    for (std::size_t i = 0; i < solo.log.size(); ++i) {
        CHECK(solo.log[i].f == replicate.log[i].f);
        CHECK((solo.log[i].x.array() == replicate.log[i].x.array()).all());
    }
    CHECK(replicate.seed == sub_seed(config.master_seed, 3));
}

TEST_CASE("mean evaluations is the mean of the log lengths") {
    const CampaignSummary summary = run_campaign(small_campaign());
    double total = 0.0;
    for (const auto& outcome : summary.per_run) total += outcome.run.log.size();
    CHECK(summary.mean_evaluations ==
          doctest::Approx(total / summary.per_run.size()).epsilon(1e-12));
}

TEST_CASE("double-run failure squares the observed rate") {
    CampaignSummary summary;
    summary.n_replicates = 100;
    summary.percent_failures = 10.0;
    CHECK(double_run_failure(summary) == doctest::Approx(0.01));
    summary.percent_failures = 0.0;
    CHECK(double_run_failure(summary) == 0.0);
    summary.percent_failures = 1.0;
    CHECK(double_run_failure(summary) == doctest::Approx(1e-4));
}

TEST_CASE("tables render in both formats and round-trip through CSV") {
    const CampaignSummary summary = run_campaign(small_campaign());

    const std::string csv = render_table({summary}, "csv");
    std::istringstream lines(csv);
    std::string header, row, extra;
    REQUIRE(std::getline(lines, header));
    REQUIRE(std::getline(lines, row));
    CHECK_FALSE(std::getline(lines, extra));
    CHECK(header ==
          "function,algorithm,initial_points,max_iterations,n_replicates,"
          "percent_failures,mean_evaluations,b1,b2,b3");

    std::istringstream csv_in(csv);
    const CampaignSummary parsed = parse_summary_csv(csv_in);
    CHECK(parsed.function_name == summary.function_name);
    CHECK(parsed.algorithm_label == summary.algorithm_label);
    CHECK(parsed.n_replicates == summary.n_replicates);
    CHECK(std::abs(parsed.percent_failures - summary.percent_failures) <= 0.0501);
    CHECK(std::abs(parsed.mean_evaluations - summary.mean_evaluations) <= 0.0501);
    REQUIRE(parsed.basin_percentages.size() == summary.basin_percentages.size());
    for (std::size_t i = 0; i < parsed.basin_percentages.size(); ++i) {
        CHECK(parsed.basin_percentages[i].first == summary.basin_percentages[i].first);
        CHECK(std::abs(parsed.basin_percentages[i].second -
                       summary.basin_percentages[i].second) <= 0.0501);
    }

    const std::string markdown = render_table({summary}, "markdown");
    CHECK(markdown.find('|') != std::string::npos);
    CHECK(markdown.find("branin2") != std::string::npos);
    CHECK(render_table({summary}, "md") == markdown);

    CHECK_THROWS_AS(render_table({summary}, "html"), std::invalid_argument);
    CHECK_THROWS_AS(render_table({}, "csv"), std::invalid_argument);
}

TEST_CASE("4D campaigns report nine basin columns in label order") {
    CampaignConfig config;
    config.function_name = "branin4-fortified-b11";
    config.algorithm = "rbfopt";
    config.rbfopt.initial_design_ndata = 8;
    config.rbfopt.max_iter = 4;
    config.n_replicates = 3;
    config.master_seed = 9;
    const CampaignSummary summary = run_campaign(config);
    const std::string csv = render_table({summary}, "csv");
    CHECK(csv.find(",b11,b12,b13,b21,b22,b23,b31,b32,b33") != std::string::npos);

    double basin_total = 0.0;
    for (const auto& [label, percent] : summary.basin_percentages) basin_total += percent;
    CHECK(basin_total <= 100.0 + 0.5);
}

TEST_CASE("tables refuse to mix functions") {
    CampaignConfig config = small_campaign();
    config.n_replicates = 2;
    const CampaignSummary a = run_campaign(config);
    config.function_name = "branin2-fortified";
    const CampaignSummary b = run_campaign(config);
    CHECK_THROWS_AS(render_table({a, b}, "csv"), std::invalid_argument);
}

TEST_CASE("campaign config files parse, validate and report bad keys") {
    std::istringstream good(
        "# a smoke campaign\n"
        "function = branin2-fortified\n"
        "algorithm = ego\n"
        "polish = true\n"
        "initial_points = 12\n"
        "max_iterations = 9\n"
        "n_replicates = 4\n"
        "master_seed = 123\n"
        "parallelism = 2\n"
        "success_tolerance = 0.02\n");
    const CampaignConfig config = parse_campaign_config(good);
    CHECK(config.function_name == "branin2-fortified");
    CHECK(config.algorithm == "ego");
    CHECK(config.polish);
    CHECK(config.ego.initial_points == 12);
    CHECK(config.ego.max_iterations == 9);
    CHECK(config.n_replicates == 4);
    CHECK(config.master_seed == 123);
    CHECK(config.parallelism == 2);
    CHECK(config.classification.success_tolerance == 0.02);
    CHECK(config.algorithm_label() == "ego/bfgs");
    CHECK(config.initial_points() == 12);
    CHECK(config.max_iterations() == 9);

    std::istringstream unknown("function = branin2\nn_riplicates = 10\n");
    try {
        parse_campaign_config(unknown);
        FAIL("expected an argument error");
    } catch (const std::invalid_argument& error) {
        CHECK(std::string(error.what()).find("n_riplicates") != std::string::npos);
    }

    std::istringstream malformed("function = branin2\nn_replicates = ten\n");
    CHECK_THROWS_AS(parse_campaign_config(malformed), std::invalid_argument);

    std::istringstream no_equals("function branin2\n");
    CHECK_THROWS_AS(parse_campaign_config(no_equals), std::invalid_argument);
}

TEST_CASE("the environment supplies the default parallelism") {
    setenv("SBO_PARALLELISM", "6", 1);
    std::istringstream plain("function = branin2\n");
    CHECK(parse_campaign_config(plain).parallelism == 6);

    // An explicit key still wins.
    std::istringstream explicit_key("function = branin2\nparallelism = 2\n");
    CHECK(parse_campaign_config(explicit_key).parallelism == 2);

    // Unusable values fall back to the built-in default.
    setenv("SBO_PARALLELISM", "zippy", 1);
    std::istringstream fallback("function = branin2\n");
    CHECK(parse_campaign_config(fallback).parallelism == 1);

    unsetenv("SBO_PARALLELISM");
    std::istringstream unset("function = branin2\n");
    CHECK(parse_campaign_config(unset).parallelism == 1);
}
