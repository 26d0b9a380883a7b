#include <sbo/harness.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sbo {

namespace {

std::string format_number(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

void CampaignConfig::validate() const {
    const auto& names = registry_names();
    if (std::find(names.begin(), names.end(), function_name) == names.end())
        throw std::invalid_argument("campaign: unknown function '" + function_name + "'");
    if (algorithm != "rbfopt" && algorithm != "ego")
        throw std::invalid_argument("campaign: unknown algorithm '" + algorithm + "'");
    if (n_replicates < 1) throw std::invalid_argument("campaign: n_replicates >= 1 required");
    if (parallelism < 1) throw std::invalid_argument("campaign: parallelism >= 1 required");
    if (!(classification.success_tolerance > 0.0))
        throw std::invalid_argument("campaign: success_tolerance > 0 required");
    if (algorithm == "rbfopt")
        rbfopt.validate();
    else
        ego.validate();
}

int CampaignConfig::initial_points() const {
    return algorithm == "rbfopt" ? rbfopt.initial_design_ndata : ego.initial_points;
}

int CampaignConfig::max_iterations() const {
    return algorithm == "rbfopt" ? rbfopt.max_iter : ego.max_iterations;
}

std::string CampaignConfig::algorithm_label() const {
    return polish ? algorithm + "/bfgs" : algorithm;
}

CampaignSummary run_campaign(const CampaignConfig& config) {
    config.validate();
    const TestFunction function = make_function(config.function_name);
    const Bounds& bounds = function.bounds();
    const std::vector<OptimumRecord>& catalog = function.optima();
    const Objective objective = [&function](const Vector& x) { return function(x); };

    const int n = config.n_replicates;
    std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(n));
    std::atomic<int> next{0};

    const auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            const std::uint64_t seed = sub_seed(config.master_seed, static_cast<std::uint64_t>(i));
            SeededRng rng(seed);
            RunResult run;
            try {
                if (config.algorithm == "rbfopt") {
                    RbfOptConfig algo = config.rbfopt;
                    algo.polish = config.polish;
                    run = rbfopt_minimize(objective, bounds, algo, rng);
                } else {
                    EgoConfig algo = config.ego;
                    algo.polish = config.polish;
                    run = ego_minimize(objective, bounds, algo, rng);
                }
            } catch (const std::exception&) {
                // A crashed replicate scores as a failure but must not sink
                // the campaign.
                run = RunResult{};
                run.seed = seed;
                run.x_final = 0.5 * (bounds.lower() + bounds.upper());
                run.f_final = std::numeric_limits<double>::infinity();
                run.termination = RunTermination::numerical_failure;
            }
            auto& slot = outcomes[static_cast<std::size_t>(i)];
            slot.run = std::move(run);
            slot.classification =
                classify_run(slot.run, catalog, config.classification, bounds);
        }
    };

    const int n_workers = std::min(config.parallelism, n);
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    CampaignSummary summary;
    summary.function_name = config.function_name;
    summary.algorithm_label = config.algorithm_label();
    summary.initial_points = config.initial_points();
    summary.max_iterations = config.max_iterations();
    summary.n_replicates = n;

    long long failures = 0;
    long long total_evaluations = 0;
    std::vector<long long> basin_counts(catalog.size(), 0);
    for (const ReplicateOutcome& outcome : outcomes) {
        if (!outcome.classification.success) ++failures;
        total_evaluations += outcome.run.n_evaluations;
        if (outcome.run.termination == RunTermination::numerical_failure)
            ++summary.n_numerical_failures;
        for (std::size_t k = 0; k < catalog.size(); ++k)
            if (outcome.classification.basin_label == catalog[k].label) ++basin_counts[k];
    }
    summary.percent_failures = 100.0 * static_cast<double>(failures) / n;
    summary.mean_evaluations = static_cast<double>(total_evaluations) / n;
    for (std::size_t k = 0; k < catalog.size(); ++k)
        summary.basin_percentages.emplace_back(
            catalog[k].label, 100.0 * static_cast<double>(basin_counts[k]) / n);
    summary.per_run = std::move(outcomes);
    return summary;
}

double double_run_failure(const CampaignSummary& summary) {
    if (summary.n_replicates < 1)
        throw std::invalid_argument("double_run_failure: empty campaign");
    const double p = summary.percent_failures / 100.0;
    return p * p;
}

std::string render_table(const std::vector<CampaignSummary>& summaries,
                         const std::string& format) {
    if (summaries.empty()) throw std::invalid_argument("render_table: no summaries");
    const bool markdown = format == "markdown" || format == "md";
    if (!markdown && format != "csv")
        throw std::invalid_argument("render_table: unknown format '" + format + "'");
    for (const CampaignSummary& s : summaries) {
        if (s.function_name != summaries.front().function_name)
            throw std::invalid_argument("render_table: summaries mix functions '" +
                                        summaries.front().function_name + "' and '" +
                                        s.function_name + "'");
        if (s.basin_percentages.size() != summaries.front().basin_percentages.size())
            throw std::invalid_argument("render_table: summaries disagree on basin labels");
    }

    std::vector<std::string> header = {"function",     "algorithm",        "initial_points",
                                       "max_iterations", "n_replicates",
                                       "percent_failures", "mean_evaluations"};
    for (const auto& [label, pct] : summaries.front().basin_percentages) header.push_back(label);

    std::vector<std::vector<std::string>> rows;
    for (const CampaignSummary& s : summaries) {
        std::vector<std::string> row = {s.function_name,
                                        s.algorithm_label,
                                        std::to_string(s.initial_points),
                                        std::to_string(s.max_iterations),
                                        std::to_string(s.n_replicates),
                                        format_number(s.percent_failures, 1),
                                        format_number(s.mean_evaluations, 1)};
        for (const auto& [label, pct] : s.basin_percentages) row.push_back(format_number(pct, 1));
        rows.push_back(std::move(row));
    }

    std::ostringstream out;
    if (markdown) {
        out << "|";
        for (const std::string& h : header) out << " " << h << " |";
        out << "\n|";
        for (std::size_t i = 0; i < header.size(); ++i) out << " --- |";
        out << "\n";
        for (const auto& row : rows) {
            out << "|";
            for (const std::string& cell : row) out << " " << cell << " |";
            out << "\n";
        }
    } else {
        for (std::size_t i = 0; i < header.size(); ++i)
            out << header[i] << (i + 1 < header.size() ? "," : "\n");
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i)
                out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
    return out.str();
}

void write_summary_csv(std::ostream& out, const CampaignSummary& summary) {
    out << render_table({summary}, "csv");
}

CampaignSummary parse_summary_csv(std::istream& in) {
    std::string header_line, row_line;
    if (!std::getline(in, header_line) || !std::getline(in, row_line))
        throw std::invalid_argument("summary csv: expected a header and one data row");
    const std::vector<std::string> header = split_csv_line(header_line);
    const std::vector<std::string> row = split_csv_line(row_line);
    constexpr std::size_t kFixed = 7;  // columns before the basin percentages
    if (header.size() != row.size() || header.size() < kFixed)
        throw std::invalid_argument("summary csv: malformed table");

    CampaignSummary s;
    s.function_name = row[0];
    s.algorithm_label = row[1];
    try {
        s.initial_points = std::stoi(row[2]);
        s.max_iterations = std::stoi(row[3]);
        s.n_replicates = std::stoi(row[4]);
        s.percent_failures = std::stod(row[5]);
        s.mean_evaluations = std::stod(row[6]);
        for (std::size_t i = kFixed; i < header.size(); ++i)
            s.basin_percentages.emplace_back(header[i], std::stod(row[i]));
    } catch (const std::exception&) {
        throw std::invalid_argument("summary csv: malformed numeric field");
    }
    return s;
}

namespace {

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("config key '" + key + "': expected a boolean, got '" + value +
                                "'");
}

long long parse_integer(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    long long parsed = 0;
    try {
        parsed = std::stoll(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || value.empty())
        throw std::invalid_argument("config key '" + key + "': expected an integer, got '" +
                                    value + "'");
    return parsed;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    std::uint64_t parsed = 0;
    try {
        parsed = std::stoull(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || value.empty())
        throw std::invalid_argument("config key '" + key + "': expected an unsigned integer, got '" +
                                    value + "'");
    return parsed;
}

double parse_real(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double parsed = 0;
    try {
        parsed = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || value.empty())
        throw std::invalid_argument("config key '" + key + "': expected a number, got '" + value +
                                    "'");
    return parsed;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

CampaignConfig parse_campaign_config(std::istream& in) {
    CampaignConfig config;
    // SBO_PARALLELISM seeds the default worker count; an explicit
    // `parallelism` key in the file still wins. Results are identical at
    // every level, so this only affects wall-clock time.
    if (const char* env = std::getenv("SBO_PARALLELISM")) {
        try {
            const int workers = std::stoi(env);
            if (workers >= 1) config.parallelism = workers;
        } catch (const std::exception&) {
            // Unusable value: keep the built-in default.
        }
    }
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_number) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line " + std::to_string(line_number) +
                                        ": expected 'key = value'");

        if (key == "function") config.function_name = value;
        else if (key == "algorithm") config.algorithm = value;
        else if (key == "polish") config.polish = parse_bool(key, value);
        else if (key == "n_replicates")
            config.n_replicates = static_cast<int>(parse_integer(key, value));
        else if (key == "master_seed") config.master_seed = parse_seed(key, value);
        else if (key == "parallelism")
            config.parallelism = static_cast<int>(parse_integer(key, value));
        else if (key == "success_tolerance")
            config.classification.success_tolerance = parse_real(key, value);
        else if (key == "initial_design_ndata")
            config.rbfopt.initial_design_ndata = static_cast<int>(parse_integer(key, value));
        else if (key == "n_local_optimize")
            config.rbfopt.n_local_optimize = static_cast<int>(parse_integer(key, value));
        else if (key == "eps") config.rbfopt.eps = parse_real(key, value);
        else if (key == "max_iter")
            config.rbfopt.max_iter = static_cast<int>(parse_integer(key, value));
        else if (key == "n_same_best")
            config.rbfopt.n_same_best = static_cast<int>(parse_integer(key, value));
        else if (key == "smooth") config.rbfopt.smooth = parse_real(key, value);
        else if (key == "strategy") config.rbfopt.strategy = value;
        else if (key == "exploration") config.rbfopt.exploration = value;
        else if (key == "initial_points")
            config.ego.initial_points = static_cast<int>(parse_integer(key, value));
        else if (key == "max_iterations")
            config.ego.max_iterations = static_cast<int>(parse_integer(key, value));
        else
            throw std::invalid_argument("unknown config key '" + key + "'");
    }
    config.validate();
    return config;
}

CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    return parse_campaign_config(in);
}

}  // namespace sbo
