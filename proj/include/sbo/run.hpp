#pragma once

#include <sbo/bounds.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sbo {

/// Which stage of an optimization run paid for an objective evaluation.
enum class Phase { initial, adaptive, exploration, polish };

const char* to_string(Phase phase);
Phase phase_from_string(const std::string& s);

struct LogEntry {
    Phase phase;
    Vector x;
    double f;
};

using EvaluationLog = std::vector<LogEntry>;

enum class RunTermination {
    max_iterations,
    stagnation,
    polish_complete,
    numerical_failure,
};

const char* to_string(RunTermination termination);

/// One optimization run: every true-objective evaluation in order, the best
/// point found, and why the run stopped.
struct RunResult {
    Vector x_final;
    double f_final = 0.0;
    EvaluationLog log;
    int n_evaluations = 0;
    RunTermination termination = RunTermination::max_iterations;
    std::uint64_t seed = 0;

    /// Recompute x_final/f_final as the argmin of the log and sync the
    /// evaluation count. Call after the log stops growing.
    void finalize_from_log();
};

/// CSV rows `replicate,phase,x1..xd,f` (with header when `header` is true).
void write_run_log_csv(std::ostream& out, const RunResult& run, int replicate,
                       bool header = true);

}  // namespace sbo
