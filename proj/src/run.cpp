#include <sbo/run.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace sbo {

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::initial: return "initial";
        case Phase::adaptive: return "adaptive";
        case Phase::exploration: return "exploration";
        case Phase::polish: return "polish";
    }
    return "?";
}

Phase phase_from_string(const std::string& s) {
    if (s == "initial") return Phase::initial;
    if (s == "adaptive") return Phase::adaptive;
    if (s == "exploration") return Phase::exploration;
    if (s == "polish") return Phase::polish;
    throw std::invalid_argument("unknown phase '" + s + "'");
}

const char* to_string(RunTermination termination) {
    switch (termination) {
        case RunTermination::max_iterations: return "max-iterations";
        case RunTermination::stagnation: return "stagnation";
        case RunTermination::polish_complete: return "polish-complete";
        case RunTermination::numerical_failure: return "numerical-failure";
    }
    return "?";
}

void RunResult::finalize_from_log() {
    n_evaluations = static_cast<int>(log.size());
    if (log.empty()) return;
    const auto key = [](double f) {  // non-finite values never win the argmin
        return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < log.size(); ++i)
        if (key(log[i].f) < key(log[best].f)) best = i;
    x_final = log[best].x;
    f_final = log[best].f;
}

void write_run_log_csv(std::ostream& out, const RunResult& run, int replicate, bool header) {
    const int d = run.log.empty() ? static_cast<int>(run.x_final.size())
                                  : static_cast<int>(run.log.front().x.size());
    if (header) {
        out << "replicate,phase";
        for (int j = 0; j < d; ++j) out << ",x" << (j + 1);
        out << ",f\n";
    }
    char buf[64];
    for (const auto& entry : run.log) {
        out << replicate << "," << to_string(entry.phase);
        for (int j = 0; j < d; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", entry.x[j]);
            out << "," << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g", entry.f);
        out << "," << buf << "\n";
    }
}

}  // namespace sbo
