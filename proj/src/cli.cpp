#include "mpp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mpp/instance.hpp"
#include "mpp/oracle.hpp"
#include "mpp/planner.hpp"
#include "mpp/validate.hpp"

namespace mpp {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitExternal = 4;

std::string format_ratio(double ratio) {
    if (std::isinf(ratio)) {
        return "inf";
    }
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(4);
    out << ratio;
    return out.str();
}

// Deterministic report body; wall times go to stderr, never in here.
std::string format_report(const SolveReport& report) {
    std::ostringstream out;
    out << "objective " << objective_name(report.objective) << "\n";
    out << "status " << status_name(report.status) << "\n";
    out << "achieved " << report.achieved << "\n";
    out << "lower_bound " << report.lower_bound << "\n";
    out << "ratio " << format_ratio(report.ratio) << "\n";
    out << "T " << report.horizon << "\n";
    out << "k " << report.split_k << "\n";
    return out.str();
}

void print_times(const SolveReport& report) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(3);
    out << "stages";
    for (size_t i = 0; i < report.stage_seconds.size(); ++i) {
        out << " " << status_name(report.stage_statuses[i]) << ":" << report.stage_seconds[i]
            << "s";
    }
    std::cerr << out.str() << "\n";
}

int exit_code_for(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal:
        case SolveStatus::feasible:
            return kExitOk;
        case SolveStatus::infeasible:
            return kExitInfeasible;
        case SolveStatus::no_incumbent:
            return kExitTimeout;
    }
    return kExitInvalid;
}

std::vector<int> parse_int_list(const std::string& text) {
    // Either "a,b,c" or "a..b[:step]" (step defaults to 10).
    std::vector<int> values;
    const size_t dots = text.find("..");
    if (dots != std::string::npos) {
        const int from = std::stoi(text.substr(0, dots));
        std::string rest = text.substr(dots + 2);
        int step = 10;
        const size_t colon = rest.find(':');
        if (colon != std::string::npos) {
            step = std::stoi(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        const int to = std::stoi(rest);
        if (step <= 0 || to < from) {
            throw std::invalid_argument("bad range: " + text);
        }
        for (int v = from; v <= to; v += step) {
            values.push_back(v);
        }
        return values;
    }
    std::istringstream in(text);
    std::string field;
    while (std::getline(in, field, ',')) {
        if (!field.empty()) {
            values.push_back(std::stoi(field));
        }
    }
    if (values.empty()) {
        throw std::invalid_argument("empty list: " + text);
    }
    return values;
}

std::pair<int, int> parse_grid_spec(const std::string& text) {
    const size_t x = text.find('x');
    if (x == std::string::npos) {
        throw std::invalid_argument("grid spec must look like 24x18");
    }
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
}

struct SolveFlags {
    std::string instance_path;
    std::string objective = "makespan";
    int split = 1;
    std::string encoding = "compact";
    std::string backend = "embedded";
    double time_limit = 0.0;
    double gap = 0.0;
    long long tmax = 0;
    std::string out_path;
    std::string report_path;
};

PlanResult run_solver(const Instance& inst, const SolveFlags& flags) {
    PlannerOptions opts;
    opts.encoding = encoding_from_name(flags.encoding);
    opts.backend = backend_from_name(flags.backend);
    opts.time_limit_s = flags.time_limit;
    opts.gap = flags.gap;
    const ObjectiveKind objective = objective_from_name(flags.objective);
    if (flags.tmax > 0) {
        if (objective == ObjectiveKind::makespan) {
            opts.t_cap = flags.tmax;
        } else {
            opts.horizon_override = static_cast<int>(flags.tmax);
            std::cerr << "note: fixed horizon " << flags.tmax
                      << ", optimality is relative to it\n";
        }
    }
    if (flags.split > 1) {
        if (objective == ObjectiveKind::total_time) {
            throw CLI::ValidationError(
                "--split",
                "total time is not additive over split stages; drop --split "
                "(min_total_time already uses the split to pick its horizon)");
        }
        return solve_with_split(inst, flags.split, objective, opts);
    }
    switch (objective) {
        case ObjectiveKind::makespan:
            return min_makespan(inst, opts);
        case ObjectiveKind::max_dist:
            return min_max_dist(inst, opts);
        case ObjectiveKind::total_time:
            return min_total_time(inst, opts);
        case ObjectiveKind::total_dist:
            return min_total_dist(inst, opts);
    }
    throw std::logic_error("unreachable");
}

struct BenchRow {
    int obstacles;
    int robots;
    int rep;
    uint64_t seed;
    SolveReport report;
    bool solved;
    double seconds;
};

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Optimal multi-robot path planning on graphs via integer programming"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Create a random instance file");
    int gen_rows = 0;
    int gen_cols = 0;
    double gen_obstacles = 0.0;
    int gen_robots = 0;
    uint64_t gen_seed = 0;
    std::string gen_out;
    generate->add_option("--rows", gen_rows, "grid rows")->required();
    generate->add_option("--cols", gen_cols, "grid cols")->required();
    generate->add_option("--obstacles", gen_obstacles, "percent of vertices to remove");
    generate->add_option("--robots", gen_robots, "robot count")->required();
    generate->add_option("--seed", gen_seed, "rng seed")->required();
    generate->add_option("-o,--output", gen_out, "instance file")->required();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve an instance to a solution file");
    SolveFlags flags;
    solve_cmd->add_option("-i,--instance", flags.instance_path, "instance file")->required();
    solve_cmd->add_option("--objective", flags.objective)
        ->check(CLI::IsMember({"makespan", "maxdist", "totaltime", "totaldist"}));
    solve_cmd->add_option("--split", flags.split, "k-way time split (1 = exact)");
    solve_cmd->add_option("--encoding", flags.encoding)
        ->check(CLI::IsMember({"compact", "full"}));
    solve_cmd->add_option("--backend", flags.backend)
        ->check(CLI::IsMember({"embedded", "external"}));
    solve_cmd->add_option("--time-limit", flags.time_limit, "seconds");
    solve_cmd->add_option("--gap", flags.gap, "relative optimality gap");
    solve_cmd->add_option("--tmax", flags.tmax, "horizon cap / override");
    solve_cmd->add_option("-o,--output", flags.out_path, "solution file");
    solve_cmd->add_option("--report", flags.report_path, "report file");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Check a solution against an instance");
    std::string val_instance;
    std::string val_solution;
    validate_cmd->add_option("-i,--instance", val_instance)->required();
    validate_cmd->add_option("-s,--solution", val_solution)->required();

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Ground-truth engines");
    std::string ora_instance;
    std::string ora_method = "bfs";
    std::string ora_objective = "makespan";
    long long ora_cap = 20000000;
    long long ora_tmax = 0;
    std::string ora_out;
    oracle_cmd->add_option("-i,--instance", ora_instance)->required();
    oracle_cmd->add_option("--method", ora_method)
        ->check(CLI::IsMember({"bfs", "exhaustive", "puzzle"}));
    oracle_cmd->add_option("--objective", ora_objective)
        ->check(CLI::IsMember({"makespan", "maxdist", "totaltime", "totaldist"}));
    oracle_cmd->add_option("--node-cap", ora_cap, "bfs visited-configuration cap");
    oracle_cmd->add_option("--tmax", ora_tmax, "exhaustive search horizon");
    oracle_cmd->add_option("-o,--output", ora_out, "witness solution file");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Seeded benchmark sweep");
    std::string bench_grid = "24x18";
    std::string bench_obstacles = "0";
    std::string bench_robots = "10..100";
    int bench_per_point = 10;
    double bench_time_limit = 600.0;
    std::string bench_objective = "makespan";
    int bench_split = 1;
    std::string bench_encoding = "compact";
    std::string bench_backend = "embedded";
    uint64_t bench_seed = 1;
    int bench_jobs = 1;
    std::string bench_out;
    bench_cmd->add_option("--grid", bench_grid, "RxC grid");
    bench_cmd->add_option("--obstacles", bench_obstacles, "percent list, e.g. 0,10,25");
    bench_cmd->add_option("--robots", bench_robots, "list or range a..b[:step]");
    bench_cmd->add_option("--per-point", bench_per_point, "instances per data point");
    bench_cmd->add_option("--time-limit", bench_time_limit, "per-instance seconds");
    bench_cmd->add_option("--objective", bench_objective)
        ->check(CLI::IsMember({"makespan", "maxdist", "totaltime", "totaldist"}));
    bench_cmd->add_option("--split", bench_split, "k-way split");
    bench_cmd->add_option("--encoding", bench_encoding)
        ->check(CLI::IsMember({"compact", "full"}));
    bench_cmd->add_option("--backend", bench_backend)
        ->check(CLI::IsMember({"embedded", "external"}));
    bench_cmd->add_option("--seed", bench_seed, "base seed");
    bench_cmd->add_option("--jobs", bench_jobs, "parallel instances per point");
    bench_cmd->add_option("-o,--output", bench_out, "CSV file (default stdout)");

    // render
    auto* render_cmd = app.add_subcommand("render", "Static depiction of a solution");
    std::string ren_instance;
    std::string ren_solution;
    std::string ren_format = "ascii";
    std::string ren_out;
    render_cmd->add_option("-i,--instance", ren_instance)->required();
    render_cmd->add_option("-s,--solution", ren_solution)->required();
    render_cmd->add_option("--format", ren_format)->check(CLI::IsMember({"ascii", "svg"}));
    render_cmd->add_option("-o,--output", ren_out, "output directory")->required();

    try {
        app.parse(argc, argv);

        if (generate->parsed()) {
            Graph g = make_grid(gen_rows, gen_cols);
            if (gen_obstacles > 0) {
                g = remove_obstacles(g, gen_obstacles / 100.0, gen_seed);
            }
            const Instance inst = generate_instance(g, gen_robots, gen_seed + 1);
            save_instance(inst, gen_out);
            std::cout << "instance " << gen_out << " vertices " << g.vertex_count() << " robots "
                      << gen_robots << "\n";
            return kExitOk;
        }

        if (solve_cmd->parsed()) {
            const Instance inst = load_instance(flags.instance_path);
            PlanResult result;
            try {
                result = run_solver(inst, flags);
            } catch (const ExternalSolverError& e) {
                std::cerr << "external solver: " << e.what() << "\n";
                return kExitExternal;
            }
            const std::string report = format_report(result.report);
            std::cout << report;
            print_times(result.report);
            if (!flags.report_path.empty()) {
                std::ofstream out(flags.report_path, std::ios::binary);
                out << report;
            }
            if (result.ok() && !flags.out_path.empty()) {
                save_plan(result.plan, flags.out_path);
            }
            return exit_code_for(result.report.status);
        }

        if (validate_cmd->parsed()) {
            const Instance inst = load_instance(val_instance);
            const Plan plan = load_plan(val_solution);
            const std::vector<Violation> violations = validate(plan, inst);
            for (const auto& v : violations) {
                std::cout << violation_name(v.kind) << " t=" << v.time << " " << v.detail << "\n";
            }
            if (violations.empty()) {
                const Metrics m = metrics(plan);
                std::cout << "valid makespan " << m.makespan << " max_dist " << m.max_distance
                          << " total_time " << m.total_time << " total_dist " << m.total_distance
                          << "\n";
                return kExitOk;
            }
            return kExitInvalid;
        }

        if (oracle_cmd->parsed()) {
            const Instance inst = load_instance(ora_instance);
            if (ora_method == "bfs") {
                const BfsOracleResult result = bfs_min_makespan(inst, ora_cap);
                if (result.status == BfsOracleResult::Status::solved) {
                    std::cout << "makespan " << result.makespan << "\n";
                    if (!ora_out.empty()) {
                        save_plan(result.plan, ora_out);
                    }
                    return kExitOk;
                }
                if (result.status == BfsOracleResult::Status::unsolvable) {
                    std::cout << "unsolvable\n";
                    return kExitInfeasible;
                }
                std::cout << "unknown (node cap exhausted)\n";
                return kExitTimeout;
            }
            if (ora_method == "exhaustive") {
                const ObjectiveKind objective = objective_from_name(ora_objective);
                const int cap = ora_tmax > 0
                                    ? static_cast<int>(ora_tmax)
                                    : 2 * inst.graph.vertex_count();
                const OracleValue result = exhaustive_optimal(inst, objective, cap);
                if (!result.known) {
                    std::cout << "unknown within horizon " << cap << "\n";
                    return kExitInfeasible;
                }
                std::cout << objective_name(objective) << " " << result.value << "\n";
                if (!ora_out.empty()) {
                    save_plan(result.plan, ora_out);
                }
                return kExitOk;
            }
            const Plan plan = solve_puzzle_constructive(inst);
            std::cout << "steps " << plan.horizon << "\n";
            if (!ora_out.empty()) {
                save_plan(plan, ora_out);
            }
            return kExitOk;
        }

        if (bench_cmd->parsed()) {
            const auto [rows, cols] = parse_grid_spec(bench_grid);
            const std::vector<int> obstacle_list = parse_int_list(bench_obstacles);
            const std::vector<int> robot_list = parse_int_list(bench_robots);
            std::ostringstream csv;
            csv << "grid,obstacles_pct,robots,rep,seed,objective,k,encoding,status,achieved,"
                   "lower_bound,ratio,T,time_ms\n";
            uint64_t seed_counter = bench_seed;
            for (int obstacles : obstacle_list) {
                bool series_alive = true;
                for (int robots : robot_list) {
                    if (!series_alive) {
                        break;
                    }
                    std::vector<BenchRow> rows_out(static_cast<size_t>(bench_per_point));
                    std::vector<uint64_t> seeds(static_cast<size_t>(bench_per_point));
                    for (int rep = 0; rep < bench_per_point; ++rep) {
                        seeds[rep] = seed_counter++;
                    }
                    auto run_one = [&](int rep) {
                        BenchRow row;
                        row.obstacles = obstacles;
                        row.robots = robots;
                        row.rep = rep;
                        row.seed = seeds[rep];
                        const auto begin = std::chrono::steady_clock::now();
                        try {
                            Graph g = make_grid(rows, cols);
                            if (obstacles > 0) {
                                g = remove_obstacles(g, obstacles / 100.0, seeds[rep]);
                            }
                            const Instance inst = generate_instance(g, robots, seeds[rep] + 1);
                            SolveFlags bench_flags;
                            bench_flags.objective = bench_objective;
                            bench_flags.split = bench_split;
                            bench_flags.encoding = bench_encoding;
                            bench_flags.backend = bench_backend;
                            bench_flags.time_limit = bench_time_limit;
                            const PlanResult result = run_solver(inst, bench_flags);
                            row.report = result.report;
                            row.solved = result.ok();
                        } catch (const std::exception&) {
                            row.solved = false;
                            row.report.status = SolveStatus::infeasible;
                        }
                        row.seconds =
                            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                          begin)
                                .count();
                        return row;
                    };
                    if (bench_jobs > 1) {
                        std::vector<std::future<BenchRow>> futures;
                        for (int rep = 0; rep < bench_per_point; ++rep) {
                            futures.push_back(
                                std::async(std::launch::async, run_one, rep));
                        }
                        for (int rep = 0; rep < bench_per_point; ++rep) {
                            rows_out[rep] = futures[rep].get();
                        }
                    } else {
                        for (int rep = 0; rep < bench_per_point; ++rep) {
                            rows_out[rep] = run_one(rep);
                        }
                    }
                    double total_time = 0;
                    double total_ratio = 0;
                    int solved = 0;
                    for (const auto& row : rows_out) {
                        csv << rows << "x" << cols << "," << obstacles << "," << robots << ","
                            << row.rep << "," << row.seed << "," << bench_objective << ","
                            << bench_split << "," << bench_encoding << ","
                            << status_name(row.report.status) << "," << row.report.achieved
                            << "," << row.report.lower_bound << ","
                            << format_ratio(row.report.ratio) << "," << row.report.horizon
                            << "," << static_cast<long long>(row.seconds * 1000) << "\n";
                        total_time += row.seconds;
                        if (row.solved) {
                            ++solved;
                            total_ratio += row.report.ratio;
                        }
                        if (!row.solved || row.seconds > bench_time_limit) {
                            series_alive = false;
                        }
                    }
                    std::ostringstream summary;
                    summary.setf(std::ios::fixed);
                    summary.precision(2);
                    summary << "obstacles " << obstacles << "% robots " << robots << ": "
                            << solved << "/" << bench_per_point << " solved, mean time "
                            << total_time / bench_per_point << "s";
                    if (solved > 0) {
                        summary << ", mean ratio " << total_ratio / solved;
                    }
                    std::cerr << summary.str() << "\n";
                    if (!series_alive) {
                        std::cerr << "series stopped, moving to next obstacle percentage\n";
                    }
                }
            }
            if (bench_out.empty()) {
                std::cout << csv.str();
            } else {
                std::ofstream out(bench_out, std::ios::binary);
                out << csv.str();
            }
            return kExitOk;
        }

        if (render_cmd->parsed()) {
            const Instance inst = load_instance(ren_instance);
            const Plan plan = load_plan(ren_solution);
            if (!validate(plan, inst).empty()) {
                std::cerr << "render: plan is invalid for this instance\n";
                return kExitInvalid;
            }
            std::filesystem::create_directories(ren_out);
            if (ren_format == "ascii") {
                std::ofstream out(std::filesystem::path(ren_out) / "frames.txt",
                                  std::ios::binary);
                out << render_ascii(plan, inst);
                std::cout << "wrote frames.txt (" << plan.horizon + 1 << " frames)\n";
            } else {
                const std::vector<std::string> frames = render_svg_frames(plan, inst);
                for (size_t t = 0; t < frames.size(); ++t) {
                    std::ostringstream name;
                    name << "frame_" << (t < 10 ? "00" : t < 100 ? "0" : "") << t << ".svg";
                    std::ofstream out(std::filesystem::path(ren_out) / name.str(),
                                      std::ios::binary);
                    out << frames[t];
                }
                std::cout << "wrote " << frames.size() << " svg frames\n";
            }
            return kExitOk;
        }

        return kExitInvalid;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInvalid;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const ExternalSolverError& e) {
        std::cerr << "external solver: " << e.what() << "\n";
        return kExitExternal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}

}  // namespace mpp
