#pragma once

#include <vector>

#include "mpp/instance.hpp"
#include "mpp/plan.hpp"
#include "mpp/solver.hpp"
#include "mpp/timex.hpp"

namespace mpp {

struct PlannerOptions {
    Encoding encoding = Encoding::compact;
    Backend backend = Backend::embedded;
    double time_limit_s = 0.0;  // 0: unlimited
    double gap = 0.0;           // anytime slack for the total-time/dist solves
    long long t_cap = 0;        // horizon cap for the makespan search; 0: |V|^3
    int split_k = 4;            // split factor used to seed the total-time horizon
    int horizon_override = 0;   // >0: force the expansion horizon (optimality
                                // then holds relative to that horizon only)
};

struct SolveReport {
    ObjectiveKind objective = ObjectiveKind::makespan;
    SolveStatus status = SolveStatus::no_incumbent;
    long long achieved = 0;
    long long lower_bound = 0;
    double ratio = 1.0;  // achieved / lower bound, 0/0 -> 1
    int horizon = 0;
    int split_k = 1;
    std::vector<double> stage_seconds;
    std::vector<SolveStatus> stage_statuses;
};

struct PlanResult {
    Plan plan;
    SolveReport report;

    bool ok() const {
        return report.status == SolveStatus::optimal || report.status == SolveStatus::feasible;
    }
};

// Max over robots of the single-robot shortest path length.
int makespan_lower_bound(const Instance& inst);
// Same maximum, shared by the max-distance objective.
int distance_lower_bound_max(const Instance& inst);
// Sum of single-robot shortest path lengths (total time and total distance).
long long distance_lower_bound_sum(const Instance& inst);

// Incremental-horizon search: the first T whose flow model routes all
// robots is the optimal makespan. Declares infeasibility past the cap.
PlanResult min_makespan(const Instance& inst, const PlannerOptions& opts = {});

// Exact solves at the sufficient horizon n * t_min (or the override).
PlanResult min_max_dist(const Instance& inst, const PlannerOptions& opts = {});
PlanResult min_total_dist(const Instance& inst, const PlannerOptions& opts = {});

// Seeds the horizon from a split makespan (or the exact one when cheap),
// then enlarges it until the horizon provably contains a global optimum.
PlanResult min_total_time(const Instance& inst, const PlannerOptions& opts = {});

// Splits the instance into k sequential sub-instances via intermediate
// goals on the robots' shortest paths; stage m's configuration is stage
// m+1's start, and every stage configuration is injective.
std::vector<Instance> k_way_split(const Instance& inst, int k);

// Solves the k sub-instances independently and concatenates the plans.
// Total time is rejected (not additive over the split).
PlanResult solve_with_split(const Instance& inst, int k, ObjectiveKind objective,
                            const PlannerOptions& opts = {});

}  // namespace mpp
