#pragma once

#include <sbo/ego.hpp>
#include <sbo/rbfopt.hpp>
#include <sbo/stats.hpp>
#include <sbo/testfuncs.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace sbo {

/// A replicate-campaign request: which registry function, which optimizer
/// (with its knobs), how many independent runs, and how they are seeded,
/// parallelized and scored.
struct CampaignConfig {
    std::string function_name;
    std::string algorithm = "rbfopt";  // "rbfopt" | "ego"
    RbfOptConfig rbfopt;
    EgoConfig ego;
    bool polish = false;  // applied to whichever algorithm runs
    int n_replicates = 1;
    std::uint64_t master_seed = 0;
    int parallelism = 1;
    ClassificationRule classification;

    void validate() const;
    /// Design-size and iteration-count table columns for either algorithm.
    int initial_points() const;
    int max_iterations() const;
    /// "rbfopt", "rbfopt/bfgs", "ego" or "ego/bfgs".
    std::string algorithm_label() const;
};

struct ReplicateOutcome {
    RunResult run;
    RunClassification classification;
};

struct CampaignSummary {
    std::string function_name;
    std::string algorithm_label;
    int initial_points = 0;
    int max_iterations = 0;
    int n_replicates = 0;
    double percent_failures = 0.0;   // runs not classified as successes
    double mean_evaluations = 0.0;   // arithmetic mean of log lengths, polish probes included
    std::vector<std::pair<std::string, double>> basin_percentages;  // catalog label order
    int n_numerical_failures = 0;    // replicates that crashed or hit non-finite values
    std::vector<ReplicateOutcome> per_run;  // replicate index order
};

/// Run n_replicates independent optimizations, replicate i seeded
/// sub_seed(master_seed, i), fanned over a bounded worker pool. Aggregation
/// happens in replicate-index order after all workers finish, so the summary
/// is identical for every parallelism level. Numerical failures of single
/// replicates are recorded and counted as failures, never aborting the
/// campaign.
CampaignSummary run_campaign(const CampaignConfig& config);

/// Predicted probability that two independent runs both fail:
/// (percent_failures / 100)^2.
double double_run_failure(const CampaignSummary& summary);

/// Render summaries as one table, format "csv" or "markdown": columns
/// function, algorithm, initial points, max iterations, replicates, percent
/// failures, mean evaluations, then one column per basin label in catalog
/// order. All summaries must describe the same function.
std::string render_table(const std::vector<CampaignSummary>& summaries,
                         const std::string& format);

/// Single-summary CSV (same layout as render_table).
void write_summary_csv(std::ostream& out, const CampaignSummary& summary);

/// Parse one summary back from its CSV form. Only the table-level fields are
/// recoverable (per-run data is not part of the format).
CampaignSummary parse_summary_csv(std::istream& in);

/// Campaign config from a flat key-value file ("key = value", '#' comments).
/// Recognized keys: function, algorithm, polish, n_replicates, master_seed,
/// parallelism, success_tolerance, plus the optimizer knobs
/// initial_design_ndata, n_local_optimize, eps, max_iter, n_same_best,
/// smooth, strategy, exploration (rbfopt) and initial_points, max_iterations
/// (ego). Unknown keys and malformed values are argument errors naming the
/// offending key. The SBO_PARALLELISM environment variable supplies the
/// default worker count when the file has no `parallelism` key.
CampaignConfig parse_campaign_config(std::istream& in);
CampaignConfig load_campaign_config(const std::string& path);

}  // namespace sbo
