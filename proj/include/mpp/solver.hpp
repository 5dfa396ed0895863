#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mpp/ilp.hpp"

namespace mpp {

enum class SolveStatus { optimal, feasible, infeasible, no_incumbent };

const char* status_name(SolveStatus status);

enum class Backend { embedded, external };
Backend backend_from_name(const std::string& name);
const char* backend_name(Backend backend);

struct SolveOutcome {
    SolveStatus status = SolveStatus::no_incumbent;
    std::vector<long long> assignment;  // meaningful for optimal/feasible
    long long objective = 0;
    long long best_bound = 0;
    double wall_seconds = 0.0;
    long long nodes = 0;
};

struct SolveLimits {
    double time_limit_s = 0.0;  // 0: unlimited
    double gap = 0.0;           // relative gap at which the search may stop
    std::function<void(long long incumbent, long long bound)> on_incumbent;
};

// Dispatches to the embedded branch and bound or the executable named by
// MPP_ILP_SOLVER. Returned assignments always satisfy the model; external
// output is re-validated in integer arithmetic before being accepted.
SolveOutcome solve(const IlpModel& model, Backend backend, const SolveLimits& limits = {});

// Depth-first branch and bound: bounds-consistency propagation over the
// rows, an objective bound from best-case per-variable contributions
// (maintained as an incumbent cut row), branching on the variable occurring
// in the most rows, value order 1-then-0 for maximize and 0-then-1 for
// minimize. Complete; deterministic given identical inputs.
SolveOutcome embedded_branch_and_bound(const IlpModel& model, const SolveLimits& limits = {});

// File protocol: <exe> <lp-file> <solution-file> <time-limit-seconds>.
// Solution file: 'status <optimal|feasible|infeasible>', 'objective <v>',
// then '<name> <value>' lines (omitted variables default to 0).
SolveOutcome external_solve(const IlpModel& model, const std::string& executable,
                            double time_limit_s);

struct ExternalSolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mpp
