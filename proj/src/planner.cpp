#include "mpp/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mpp/ilp.hpp"
#include "mpp/validate.hpp"

namespace mpp {

namespace {

struct Deadline {
    bool active = false;
    std::chrono::steady_clock::time_point at;

    explicit Deadline(double seconds) {
        if (seconds > 0) {
            active = true;
            at = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(seconds));
        }
    }
    double remaining() const {
        if (!active) {
            return 0.0;
        }
        return std::chrono::duration<double>(at - std::chrono::steady_clock::now()).count();
    }
    bool expired() const { return active && remaining() <= 0; }
};

double ratio_of(long long achieved, long long lower_bound) {
    if (lower_bound == 0) {
        return achieved == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(achieved) / static_cast<double>(lower_bound);
}

std::vector<int> robot_distances(const Instance& inst) {
    std::vector<int> out(inst.robot_count());
    for (int i = 0; i < inst.robot_count(); ++i) {
        out[i] = static_cast<int>(shortest_path(inst.graph, inst.starts[i], inst.goals[i]).size()) -
                 1;
    }
    return out;
}

struct BuiltModel {
    TimeExpandedNetwork net;
    UsableArcs usable;
    IlpModel model;
    bool robot_blocked = false;
};

BuiltModel build_for(const Instance& inst, int horizon, ObjectiveKind objective,
                     const PlannerOptions& opts) {
    BuiltModel built;
    built.net = build_network(inst, horizon, opts.encoding);
    built.usable = reachability_prune(built.net, inst);
    for (const auto& row : built.usable) {
        if (std::find(row.begin(), row.end(), 1) == row.end()) {
            built.robot_blocked = true;
        }
    }
    if (built.robot_blocked && inst.robot_count() > 0) {
        return built;
    }
    switch (objective) {
        case ObjectiveKind::makespan:
            built.model = build_makespan_model(built.net, built.usable, inst);
            break;
        case ObjectiveKind::max_dist:
            built.model = build_maxdist_model(built.net, built.usable, inst);
            break;
        case ObjectiveKind::total_time:
            built.model = build_totaltime_model(built.net, built.usable, inst);
            break;
        case ObjectiveKind::total_dist:
            built.model = build_totaldist_model(built.net, built.usable, inst);
            break;
    }
    if (opts.encoding == Encoding::compact) {
        add_compact_collision_constraints(built.model, built.net, inst);
    }
    return built;
}

Plan extract_plan(const BuiltModel& built, const SolveOutcome& outcome, const Instance& inst) {
    const FlowAssignment flow = flow_from_assignment(built.model, outcome.assignment);
    return flow_to_paths(built.net, flow, inst);
}

SolveLimits stage_limits(const Deadline& deadline, double gap) {
    SolveLimits limits;
    limits.gap = gap;
    if (deadline.active) {
        limits.time_limit_s = std::max(1e-3, deadline.remaining());
    }
    return limits;
}

}  // namespace

int makespan_lower_bound(const Instance& inst) {
    int bound = 0;
    for (int d : robot_distances(inst)) {
        bound = std::max(bound, d);
    }
    return bound;
}

int distance_lower_bound_max(const Instance& inst) { return makespan_lower_bound(inst); }

long long distance_lower_bound_sum(const Instance& inst) {
    long long sum = 0;
    for (int d : robot_distances(inst)) {
        sum += d;
    }
    return sum;
}

PlanResult min_makespan(const Instance& inst, const PlannerOptions& opts) {
    inst.check();
    const int n = inst.robot_count();
    const Deadline deadline(opts.time_limit_s);
    PlanResult result;
    result.report.objective = ObjectiveKind::makespan;
    result.report.lower_bound = makespan_lower_bound(inst);
    result.report.split_k = 1;

    const long long vertices = inst.graph.vertex_count();
    const long long t_cap = opts.t_cap > 0 ? opts.t_cap : vertices * vertices * vertices;
    bool every_lower_horizon_proved = true;

    for (long long horizon = result.report.lower_bound; horizon <= t_cap; ++horizon) {
        result.report.horizon = static_cast<int>(horizon);
        if (deadline.expired()) {
            result.report.status = SolveStatus::no_incumbent;
            return result;
        }
        const BuiltModel built = build_for(inst, static_cast<int>(horizon),
                                           ObjectiveKind::makespan, opts);
        if (built.robot_blocked || built.model.trivially_infeasible) {
            result.report.stage_statuses.push_back(SolveStatus::infeasible);
            result.report.stage_seconds.push_back(0.0);
            continue;
        }
        const SolveOutcome outcome =
            solve(built.model, opts.backend, stage_limits(deadline, 0.0));
        result.report.stage_statuses.push_back(outcome.status);
        result.report.stage_seconds.push_back(outcome.wall_seconds);
        const bool routed_all =
            (outcome.status == SolveStatus::optimal || outcome.status == SolveStatus::feasible) &&
            outcome.objective == n;
        if (routed_all) {
            result.plan = extract_plan(built, outcome, inst);
            result.report.achieved = horizon;
            result.report.ratio = ratio_of(horizon, result.report.lower_bound);
            result.report.status =
                every_lower_horizon_proved ? SolveStatus::optimal : SolveStatus::feasible;
            return result;
        }
        if (outcome.status == SolveStatus::optimal ||
            outcome.status == SolveStatus::infeasible) {
            continue;  // horizon proved infeasible, grow it
        }
        // Timed out without routing everyone: report how far we got.
        every_lower_horizon_proved = false;
        if (deadline.expired()) {
            result.report.status = SolveStatus::no_incumbent;
            return result;
        }
    }
    result.report.status = SolveStatus::infeasible;
    return result;
}

namespace {

// Shared tail of the max-distance / total-distance / total-time drivers:
// build at the given horizon, escalating while the forced flow is
// infeasible, then extract.
PlanResult solve_distance_like(const Instance& inst, ObjectiveKind objective, int horizon,
                               int horizon_cap, long long lower_bound,
                               const PlannerOptions& opts, const Deadline& deadline,
                               SolveReport base_report) {
    PlanResult result;
    result.report = std::move(base_report);
    result.report.objective = objective;
    result.report.lower_bound = lower_bound;
    for (; horizon <= horizon_cap; ++horizon) {
        result.report.horizon = horizon;
        if (deadline.expired()) {
            result.report.status = SolveStatus::no_incumbent;
            return result;
        }
        const BuiltModel built = build_for(inst, horizon, objective, opts);
        if (built.robot_blocked || built.model.trivially_infeasible) {
            result.report.stage_statuses.push_back(SolveStatus::infeasible);
            result.report.stage_seconds.push_back(0.0);
            continue;
        }
        const SolveOutcome outcome =
            solve(built.model, opts.backend, stage_limits(deadline, opts.gap));
        result.report.stage_statuses.push_back(outcome.status);
        result.report.stage_seconds.push_back(outcome.wall_seconds);
        if (outcome.status == SolveStatus::infeasible) {
            continue;
        }
        if (outcome.status == SolveStatus::no_incumbent) {
            result.report.status = SolveStatus::no_incumbent;
            return result;
        }
        result.plan = extract_plan(built, outcome, inst);
        result.report.achieved = outcome.objective;
        result.report.ratio = ratio_of(outcome.objective, lower_bound);
        result.report.status = outcome.status;
        return result;
    }
    result.report.status = SolveStatus::infeasible;
    return result;
}

}  // namespace

PlanResult min_max_dist(const Instance& inst, const PlannerOptions& opts) {
    inst.check();
    const Deadline deadline(opts.time_limit_s);
    PlannerOptions makespan_opts = opts;
    makespan_opts.time_limit_s = 0;  // shared deadline handled below
    if (deadline.active) {
        makespan_opts.time_limit_s = std::max(1e-3, deadline.remaining());
    }
    const PlanResult makespan = min_makespan(inst, makespan_opts);
    if (!makespan.ok()) {
        PlanResult failed;
        failed.report = makespan.report;
        failed.report.objective = ObjectiveKind::max_dist;
        return failed;
    }
    const long long t_min = makespan.report.achieved;
    const int sufficient = static_cast<int>(t_min * inst.robot_count());
    const int horizon = opts.horizon_override > 0 ? opts.horizon_override : sufficient;
    return solve_distance_like(inst, ObjectiveKind::max_dist, horizon,
                               std::max(horizon, sufficient), distance_lower_bound_max(inst),
                               opts, deadline, {});
}

PlanResult min_total_dist(const Instance& inst, const PlannerOptions& opts) {
    inst.check();
    const Deadline deadline(opts.time_limit_s);
    PlannerOptions makespan_opts = opts;
    makespan_opts.time_limit_s = deadline.active ? std::max(1e-3, deadline.remaining()) : 0;
    const PlanResult makespan = min_makespan(inst, makespan_opts);
    if (!makespan.ok()) {
        PlanResult failed;
        failed.report = makespan.report;
        failed.report.objective = ObjectiveKind::total_dist;
        return failed;
    }
    const long long t_min = makespan.report.achieved;
    const int sufficient = static_cast<int>(t_min * inst.robot_count());
    const int horizon = opts.horizon_override > 0 ? opts.horizon_override : sufficient;
    return solve_distance_like(inst, ObjectiveKind::total_dist, horizon,
                               std::max(horizon, sufficient), distance_lower_bound_sum(inst),
                               opts, deadline, {});
}

PlanResult min_total_time(const Instance& inst, const PlannerOptions& opts) {
    inst.check();
    const Deadline deadline(opts.time_limit_s);
    const int n = inst.robot_count();
    const long long sum_d = distance_lower_bound_sum(inst);
    const int max_d = makespan_lower_bound(inst);

    // Initial horizon: exact minimum makespan when the instance is small,
    // otherwise a feasible makespan from the split heuristic.
    int initial = 0;
    const bool cheap = inst.graph.vertex_count() <= 64 && n <= 12;
    if (opts.horizon_override > 0) {
        initial = opts.horizon_override;
    } else {
        PlannerOptions seed_opts = opts;
        seed_opts.time_limit_s = deadline.active ? std::max(1e-3, deadline.remaining()) : 0;
        PlanResult seed;
        if (cheap) {
            seed = min_makespan(inst, seed_opts);
        } else {
            seed = solve_with_split(inst, std::max(1, opts.split_k), ObjectiveKind::makespan,
                                    seed_opts);
        }
        if (!seed.ok()) {
            PlanResult failed;
            failed.report = seed.report;
            failed.report.objective = ObjectiveKind::total_time;
            return failed;
        }
        initial = static_cast<int>(seed.report.achieved);
    }

    PlanResult result;
    int horizon = initial;
    const int hard_cap = std::max(initial, static_cast<int>(std::max<long long>(
                                               1, static_cast<long long>(n) * initial)));
    while (true) {
        result = solve_distance_like(inst, ObjectiveKind::total_time, horizon, hard_cap, sum_d,
                                     opts, deadline, result.report);
        if (!result.ok() || opts.horizon_override > 0) {
            return result;
        }
        // Any total-time optimum keeps each arrival below the incumbent sum
        // minus the other robots' shortest path lengths; once the horizon
        // covers that, the optimum is horizon-independent.
        const long long sufficient = result.report.achieved - sum_d + max_d;
        if (result.report.horizon >= sufficient) {
            return result;
        }
        horizon = static_cast<int>(sufficient);
    }
}

std::vector<Instance> k_way_split(const Instance& inst, int k) {
    inst.check();
    if (k < 1) {
        throw std::invalid_argument("k_way_split: k must be >= 1");
    }
    const int n = inst.robot_count();
    std::vector<std::vector<int>> paths(n);
    for (int i = 0; i < n; ++i) {
        paths[i] = shortest_path(inst.graph, inst.starts[i], inst.goals[i]);
    }

    std::vector<std::vector<int>> configs;
    configs.push_back(inst.starts);
    for (int m = 1; m < k; ++m) {
        std::vector<char> claimed(inst.graph.vertex_count(), 0);
        std::vector<int> config(n);
        for (int i = 0; i < n; ++i) {
            const long long len = static_cast<long long>(paths[i].size()) - 1;
            const size_t index =
                static_cast<size_t>((2 * static_cast<long long>(m) * len + k) / (2 * k));
            int desired = paths[i][index];
            if (claimed[desired]) {
                // Nearest unclaimed vertex, ties by smallest index.
                const std::vector<int> dist = bfs_distances(inst.graph, desired);
                int best = -1;
                for (int v = 0; v < inst.graph.vertex_count(); ++v) {
                    if (claimed[v] || dist[v] < 0) {
                        continue;
                    }
                    if (best < 0 || dist[v] < dist[best]) {
                        best = v;
                    }
                }
                if (best < 0) {
                    throw std::logic_error("k_way_split: no unclaimed vertex left");
                }
                desired = best;
            }
            claimed[desired] = 1;
            config[i] = desired;
        }
        configs.push_back(std::move(config));
    }
    configs.push_back(inst.goals);

    std::vector<Instance> stages;
    stages.reserve(static_cast<size_t>(k));
    for (int m = 0; m < k; ++m) {
        Instance stage;
        stage.graph = inst.graph;
        stage.starts = configs[m];
        stage.goals = configs[m + 1];
        stage.check();
        stages.push_back(std::move(stage));
    }
    return stages;
}

namespace {

void trim_to_makespan(Plan& plan) {
    const int makespan = metrics(plan).makespan;
    plan.horizon = makespan;
    for (auto& path : plan.paths) {
        path.resize(static_cast<size_t>(makespan) + 1);
    }
}

}  // namespace

PlanResult solve_with_split(const Instance& inst, int k, ObjectiveKind objective,
                            const PlannerOptions& opts) {
    if (objective == ObjectiveKind::total_time) {
        throw std::invalid_argument(
            "solve_with_split: total time is not additive over split stages; "
            "min_total_time uses the split internally for horizon estimation only");
    }
    const Deadline deadline(opts.time_limit_s);
    const std::vector<Instance> stages = k_way_split(inst, k);

    PlanResult result;
    result.report.objective = objective;
    result.report.split_k = k;
    result.report.lower_bound = objective == ObjectiveKind::total_dist
                                    ? distance_lower_bound_sum(inst)
                                    : distance_lower_bound_max(inst);

    Plan combined;
    combined.horizon = 0;
    combined.paths.assign(inst.robot_count(), {});
    for (int i = 0; i < inst.robot_count(); ++i) {
        combined.paths[i] = {inst.starts[i]};
    }

    bool all_optimal = true;
    for (size_t m = 0; m < stages.size(); ++m) {
        PlannerOptions stage_opts = opts;
        stage_opts.time_limit_s = deadline.active ? std::max(1e-3, deadline.remaining()) : 0;
        PlanResult stage;
        switch (objective) {
            case ObjectiveKind::makespan:
                stage = min_makespan(stages[m], stage_opts);
                break;
            case ObjectiveKind::max_dist:
                stage = min_max_dist(stages[m], stage_opts);
                break;
            default:
                stage = min_total_dist(stages[m], stage_opts);
                break;
        }
        result.report.stage_statuses.push_back(stage.report.status);
        result.report.stage_seconds.insert(result.report.stage_seconds.end(),
                                           stage.report.stage_seconds.begin(),
                                           stage.report.stage_seconds.end());
        if (!stage.ok()) {
            // Overall failure; the failing stage is the last entry of
            // stage_statuses.
            result.report.status = stage.report.status;
            return result;
        }
        all_optimal = all_optimal && stage.report.status == SolveStatus::optimal;
        trim_to_makespan(stage.plan);
        for (int i = 0; i < inst.robot_count(); ++i) {
            combined.paths[i].insert(combined.paths[i].end(), stage.plan.paths[i].begin() + 1,
                                     stage.plan.paths[i].end());
        }
        combined.horizon += stage.plan.horizon;
    }

    result.plan = std::move(combined);
    const Metrics m = metrics(result.plan);
    switch (objective) {
        case ObjectiveKind::makespan:
            result.report.achieved = m.makespan;
            break;
        case ObjectiveKind::max_dist:
            result.report.achieved = m.max_distance;
            break;
        default:
            result.report.achieved = m.total_distance;
            break;
    }
    result.report.horizon = result.plan.horizon;
    result.report.ratio = ratio_of(result.report.achieved, result.report.lower_bound);
    result.report.status =
        k == 1 && all_optimal ? SolveStatus::optimal : SolveStatus::feasible;
    return result;
}

}  // namespace mpp
