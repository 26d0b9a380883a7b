// Command-line front end: evaluate registry functions, dump plot grids, run
// single optimizations, execute replicate campaigns from config files, and
// merge summary CSVs into report tables.
//
// Exit codes: 0 success, 1 runtime/I-O failure, 2 usage error.

#include <sbo/ego.hpp>
#include <sbo/harness.hpp>
#include <sbo/rbfopt.hpp>
#include <sbo/testfuncs.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RuntimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string registry_listing() {
    std::string out = "known functions:";
    for (const std::string& name : sbo::registry_names()) out += " " + name;
    return out;
}

sbo::TestFunction lookup_function(const std::string& name) {
    try {
        return sbo::make_function(name);
    } catch (const std::invalid_argument&) {
        throw UsageError("unknown function '" + name + "'; " + registry_listing());
    }
}

// --- eval ---------------------------------------------------------------

struct EvalArgs {
    std::string function;
    std::vector<double> coordinates;
};

int cmd_eval(const EvalArgs& args) {
    const sbo::TestFunction f = lookup_function(args.function);
    if (static_cast<int>(args.coordinates.size()) != f.dimension())
        throw UsageError("function '" + args.function + "' expects " +
                         std::to_string(f.dimension()) + " coordinates, got " +
                         std::to_string(args.coordinates.size()));
    sbo::Vector x(f.dimension());
    for (int i = 0; i < f.dimension(); ++i) x[i] = args.coordinates[static_cast<std::size_t>(i)];
    std::printf("%.6f\n", f(x));
    return kExitOk;
}

// --- grid ---------------------------------------------------------------

struct GridArgs {
    std::string function;
    int resolution = 0;
    std::string output;
    std::vector<std::string> slices;  // "x1=-3.14" style
};

int cmd_grid(const GridArgs& args) {
    const sbo::TestFunction f = lookup_function(args.function);
    if (args.resolution < 2) throw UsageError("--resolution must be >= 2");

    std::map<int, double> fixed;
    for (const std::string& spec : args.slices) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || spec.size() < 4 || spec[0] != 'x')
            throw UsageError("--slice expects x<k>=<value>, got '" + spec + "'");
        int dim = 0;
        double value = 0;
        try {
            dim = std::stoi(spec.substr(1, eq - 1));
            std::size_t used = 0;
            const std::string tail = spec.substr(eq + 1);
            value = std::stod(tail, &used);
            if (used != tail.size()) throw std::invalid_argument(tail);
        } catch (const std::exception&) {
            throw UsageError("--slice expects x<k>=<value>, got '" + spec + "'");
        }
        if (dim < 1 || dim > f.dimension())
            throw UsageError("--slice dimension x" + std::to_string(dim) +
                             " out of range for '" + args.function + "'");
        fixed[dim - 1] = value;
    }

    std::ofstream out(args.output);
    if (!out) throw RuntimeError("cannot open '" + args.output + "' for writing");
    sbo::write_grid_csv(f, args.resolution, out, fixed);
    out.flush();
    if (!out) throw RuntimeError("failed while writing '" + args.output + "'");
    return kExitOk;
}

// --- optimize -----------------------------------------------------------

struct OptimizeArgs {
    std::string function;
    std::string algorithm = "rbfopt";
    std::uint64_t seed = 0;
    bool polish = false;
    std::string log_path = "run_log.csv";
    // rbfopt knobs (Figure-style keyword names)
    sbo::RbfOptConfig rbfopt;
    // ego knobs
    sbo::EgoConfig ego;
};

int cmd_optimize(const OptimizeArgs& args) {
    const sbo::TestFunction f = lookup_function(args.function);
    const sbo::Objective objective = [&f](const sbo::Vector& x) { return f(x); };
    sbo::SeededRng rng(args.seed);

    sbo::RunResult run;
    try {
        if (args.algorithm == "rbfopt") {
            sbo::RbfOptConfig config = args.rbfopt;
            config.polish = args.polish;
            config.validate();
            run = sbo::rbfopt_minimize(objective, f.bounds(), config, rng);
        } else if (args.algorithm == "ego") {
            sbo::EgoConfig config = args.ego;
            config.polish = args.polish;
            config.validate();
            run = sbo::ego_minimize(objective, f.bounds(), config, rng);
        } else {
            throw UsageError("unknown algorithm '" + args.algorithm + "' (rbfopt | ego)");
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    std::ofstream log(args.log_path);
    if (!log) throw RuntimeError("cannot open '" + args.log_path + "' for writing");
    sbo::write_run_log_csv(log, run, 0);

    std::ostringstream x_text;
    for (Eigen::Index i = 0; i < run.x_final.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", run.x_final[i]);
        x_text << (i ? " " : "") << buf;
    }
    std::printf("x_final: %s\n", x_text.str().c_str());
    std::printf("f_final: %.10g\n", run.f_final);
    std::printf("n_evaluations: %d\n", run.n_evaluations);
    std::printf("termination: %s\n", sbo::to_string(run.termination));
    return run.termination == sbo::RunTermination::numerical_failure ? kExitRuntime : kExitOk;
}

// --- campaign -----------------------------------------------------------

struct CampaignArgs {
    std::string config_path;
    std::string output_dir = ".";
};

int cmd_campaign(const CampaignArgs& args) {
    sbo::CampaignConfig config;
    try {
        config = sbo::load_campaign_config(args.config_path);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(e.what()) + " (in '" + args.config_path + "')");
    } catch (const std::runtime_error& e) {
        throw RuntimeError(e.what());
    }

    const sbo::CampaignSummary summary = sbo::run_campaign(config);

    const std::string prefix = args.output_dir + "/";
    {
        std::ofstream out(prefix + "summary.csv");
        if (!out) throw RuntimeError("cannot write '" + prefix + "summary.csv'");
        sbo::write_summary_csv(out, summary);
    }
    {
        std::ofstream out(prefix + "summary.md");
        if (!out) throw RuntimeError("cannot write '" + prefix + "summary.md'");
        out << sbo::render_table({summary}, "markdown");
    }
    {
        std::ofstream out(prefix + "runs.csv");
        if (!out) throw RuntimeError("cannot write '" + prefix + "runs.csv'");
        for (std::size_t i = 0; i < summary.per_run.size(); ++i)
            sbo::write_run_log_csv(out, summary.per_run[i].run, static_cast<int>(i), i == 0);
    }

    const std::string table = sbo::render_table({summary}, "csv");
    std::fputs(table.c_str(), stdout);
    return summary.n_numerical_failures > 0 ? kExitRuntime : kExitOk;
}

// --- table --------------------------------------------------------------

struct TableArgs {
    std::vector<std::string> summary_paths;
    std::string format = "markdown";
};

int cmd_table(const TableArgs& args) {
    std::vector<sbo::CampaignSummary> summaries;
    for (const std::string& path : args.summary_paths) {
        std::ifstream in(path);
        if (!in) throw RuntimeError("cannot open '" + path + "'");
        try {
            summaries.push_back(sbo::parse_summary_csv(in));
        } catch (const std::invalid_argument& e) {
            throw RuntimeError(std::string(e.what()) + " (in '" + path + "')");
        }
    }
    try {
        std::fputs(sbo::render_table(summaries, args.format).c_str(), stdout);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surrogate-based global optimization toolkit"};
    app.require_subcommand(1);

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate a registry function at a point");
    eval->add_option("function", eval_args.function, "registry function name")->required();
    eval->add_option("coordinates", eval_args.coordinates, "point coordinates")->required();

    GridArgs grid_args;
    CLI::App* grid = app.add_subcommand("grid", "Write a CSV evaluation grid over the domain");
    grid->add_option("function", grid_args.function, "registry function name")->required();
    grid->add_option("--resolution", grid_args.resolution, "points per free axis (>= 2)")
        ->required();
    grid->add_option("--output", grid_args.output, "output CSV path")->required();
    grid->add_option("--slice", grid_args.slices,
                     "fix a coordinate, e.g. --slice x1=-3.14159265 (repeatable)");

    OptimizeArgs opt_args;
    CLI::App* optimize = app.add_subcommand("optimize", "Run one optimization");
    optimize->add_option("function", opt_args.function, "registry function name")->required();
    optimize->add_option("--algorithm", opt_args.algorithm, "rbfopt | ego")
        ->default_val("rbfopt");
    optimize->add_option("--seed", opt_args.seed, "run seed")->default_val("0");
    optimize->add_flag("--polish", opt_args.polish, "finish with local descent");
    optimize->add_option("--log", opt_args.log_path, "evaluation log CSV path")
        ->default_val("run_log.csv");
    optimize->add_option("--initial-design-ndata", opt_args.rbfopt.initial_design_ndata,
                         "rbfopt: initial design size");
    optimize->add_option("--n-local-optimize", opt_args.rbfopt.n_local_optimize,
                         "rbfopt: surrogate searches per iteration");
    optimize->add_option("--eps", opt_args.rbfopt.eps, "rbfopt: distance filter threshold");
    optimize->add_option("--max-iter", opt_args.rbfopt.max_iter, "rbfopt: iteration budget");
    optimize->add_option("--n-same-best", opt_args.rbfopt.n_same_best,
                         "rbfopt: stagnation window");
    optimize->add_option("--smooth", opt_args.rbfopt.smooth, "rbfopt: interpolation ridge");
    optimize->add_option("--initial-points", opt_args.ego.initial_points,
                         "ego: initial design size");
    optimize->add_option("--max-iterations", opt_args.ego.max_iterations,
                         "ego: adaptive evaluations");

    CampaignArgs campaign_args;
    CLI::App* campaign = app.add_subcommand("campaign", "Run a replicate campaign from a config");
    campaign->add_option("config", campaign_args.config_path, "key-value config file")
        ->required();
    campaign->add_option("--output-dir", campaign_args.output_dir,
                         "directory for summary.csv / summary.md / runs.csv")
        ->default_val(".");

    TableArgs table_args;
    CLI::App* table = app.add_subcommand("table", "Merge summary CSVs into one report table");
    table->add_option("summaries", table_args.summary_paths, "summary.csv files")->required();
    table->add_option("--format", table_args.format, "markdown | csv")->default_val("markdown");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (eval->parsed()) return cmd_eval(eval_args);
        if (grid->parsed()) return cmd_grid(grid_args);
        if (optimize->parsed()) return cmd_optimize(opt_args);
        if (campaign->parsed()) return cmd_campaign(campaign_args);
        if (table->parsed()) return cmd_table(table_args);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}
