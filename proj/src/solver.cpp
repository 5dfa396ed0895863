#include "mpp/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace mpp {

const char* status_name(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal:
            return "optimal";
        case SolveStatus::feasible:
            return "feasible";
        case SolveStatus::infeasible:
            return "infeasible";
        case SolveStatus::no_incumbent:
            return "no-incumbent";
    }
    return "unknown";
}

Backend backend_from_name(const std::string& name) {
    if (name == "embedded") {
        return Backend::embedded;
    }
    if (name == "external") {
        return Backend::external;
    }
    throw std::invalid_argument("unknown backend: " + name);
}

const char* backend_name(Backend backend) {
    return backend == Backend::embedded ? "embedded" : "external";
}

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

// Internal minimize-form search state. Rows are stored in CSR form with
// incrementally maintained activity bounds; the objective participates as a
// final row whose right-hand side tightens with each incumbent.
class BranchAndBound {
public:
    BranchAndBound(const IlpModel& model, const SolveLimits& limits)
        : model_(model), limits_(limits), maximize_(model.objective_sense == ObjSense::maximize) {
        build();
    }

    SolveOutcome run() {
        const auto start = std::chrono::steady_clock::now();
        SolveOutcome out;
        if (model_.trivially_infeasible) {
            out.status = SolveStatus::infeasible;
            return out;
        }
        search();
        out.nodes = nodes_;
        out.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (have_incumbent_) {
            out.assignment = incumbent_;
            out.objective = external_objective(incumbent_value_);
            out.best_bound = external_objective(exhausted_ ? incumbent_value_ : root_bound_);
            const bool proved = exhausted_ || incumbent_value_ <= root_bound_;
            out.status = proved ? SolveStatus::optimal : SolveStatus::feasible;
        } else if (exhausted_) {
            out.status = SolveStatus::infeasible;
        } else {
            out.status = SolveStatus::no_incumbent;
        }
        return out;
    }

private:
    struct Trail {
        int var;
        bool upper;
        long long old_value;
    };
    struct Frame {
        int var;
        size_t trail_mark;
        std::vector<long long> values;
        size_t next = 0;
    };

    const IlpModel& model_;
    const SolveLimits& limits_;
    bool maximize_;

    int nvars_ = 0;
    std::vector<long long> lo_, hi_;
    // CSR rows; row nrows_-1 is the objective cut.
    int nrows_ = 0;
    std::vector<int> row_start_;
    std::vector<int> row_var_;
    std::vector<long long> row_coef_;
    std::vector<RowSense> row_sense_;
    std::vector<long long> row_rhs_;
    std::vector<long long> min_act_, max_act_;
    // var -> (row, coef) incidence
    std::vector<int> var_start_;
    std::vector<int> var_row_;
    std::vector<long long> var_coef_;

    std::vector<int> branch_order_;
    std::vector<Trail> trail_;
    std::vector<int> queue_;
    std::vector<char> in_queue_;
    size_t queue_head_ = 0;

    long long obj_offset_internal_ = 0;
    long long root_bound_ = -kInf;
    bool have_incumbent_ = false;
    bool exhausted_ = false;
    std::vector<long long> incumbent_;
    long long incumbent_value_ = kInf;
    long long nodes_ = 0;
    std::chrono::steady_clock::time_point deadline_;
    bool has_deadline_ = false;
    bool timed_out_ = false;

    long long external_objective(long long internal) const {
        const long long with_offset = internal + obj_offset_internal_;
        return maximize_ ? -with_offset : with_offset;
    }

    void build() {
        nvars_ = static_cast<int>(model_.variables.size());
        lo_.resize(nvars_);
        hi_.resize(nvars_);
        for (int v = 0; v < nvars_; ++v) {
            lo_[v] = model_.variables[v].lower;
            hi_[v] = model_.variables[v].upper;
        }
        nrows_ = static_cast<int>(model_.constraints.size()) + 1;
        row_start_.reserve(nrows_ + 1);
        row_start_.push_back(0);
        for (const auto& row : model_.constraints) {
            for (const auto& [var, coef] : row.terms) {
                row_var_.push_back(var);
                row_coef_.push_back(coef);
            }
            row_start_.push_back(static_cast<int>(row_var_.size()));
            row_sense_.push_back(row.sense);
            row_rhs_.push_back(row.rhs);
        }
        // Objective cut row (internal minimize orientation).
        for (const auto& [var, coef] : model_.objective) {
            row_var_.push_back(var);
            row_coef_.push_back(maximize_ ? -coef : coef);
        }
        obj_offset_internal_ = maximize_ ? -model_.objective_offset : model_.objective_offset;
        row_start_.push_back(static_cast<int>(row_var_.size()));
        row_sense_.push_back(RowSense::le);
        row_rhs_.push_back(kInf);

        std::vector<int> counts(nvars_, 0);
        for (int v : row_var_) {
            ++counts[v];
        }
        var_start_.assign(nvars_ + 1, 0);
        for (int v = 0; v < nvars_; ++v) {
            var_start_[v + 1] = var_start_[v] + counts[v];
        }
        var_row_.resize(row_var_.size());
        var_coef_.resize(row_var_.size());
        std::vector<int> cursor(var_start_.begin(), var_start_.end() - 1);
        for (int r = 0; r < nrows_; ++r) {
            for (int k = row_start_[r]; k < row_start_[r + 1]; ++k) {
                const int v = row_var_[k];
                var_row_[cursor[v]] = r;
                var_coef_[cursor[v]] = row_coef_[k];
                ++cursor[v];
            }
        }

        min_act_.assign(nrows_, 0);
        max_act_.assign(nrows_, 0);
        for (int r = 0; r < nrows_; ++r) {
            for (int k = row_start_[r]; k < row_start_[r + 1]; ++k) {
                const long long c = row_coef_[k];
                const int v = row_var_[k];
                min_act_[r] += c * (c > 0 ? lo_[v] : hi_[v]);
                max_act_[r] += c * (c > 0 ? hi_[v] : lo_[v]);
            }
        }

        // Branch order. Flow variables carry (robot, arc) origins and arc ids
        // grow with the time layer, so ordering by origin walks one robot's
        // path at a time; a purely static most-constrained order interleaves
        // robots and thrashes. Variables without an origin fall back to
        // most-occurrences-first.
        std::vector<int> occ(nvars_, 0);
        for (int r = 0; r + 1 < nrows_; ++r) {
            for (int k = row_start_[r]; k < row_start_[r + 1]; ++k) {
                ++occ[row_var_[k]];
            }
        }
        branch_order_.resize(nvars_);
        for (int v = 0; v < nvars_; ++v) {
            branch_order_[v] = v;
        }
        const bool has_origins =
            model_.var_origin.size() == static_cast<size_t>(nvars_) &&
            std::any_of(model_.var_origin.begin(), model_.var_origin.end(),
                        [](const auto& o) { return o.first >= 0; });
        if (has_origins) {
            std::stable_sort(branch_order_.begin(), branch_order_.end(), [this](int a, int b) {
                const auto& oa = model_.var_origin[a];
                const auto& ob = model_.var_origin[b];
                if ((oa.first >= 0) != (ob.first >= 0)) {
                    return oa.first >= 0;
                }
                return oa < ob;
            });
        } else {
            std::stable_sort(branch_order_.begin(), branch_order_.end(),
                             [&occ](int a, int b) { return occ[a] > occ[b]; });
        }

        in_queue_.assign(nrows_, 0);
    }

    void enqueue(int row) {
        if (!in_queue_[row]) {
            in_queue_[row] = 1;
            queue_.push_back(row);
        }
    }

    void enqueue_all() {
        for (int r = 0; r < nrows_; ++r) {
            enqueue(r);
        }
    }

    // Domain and activity updates stay atomic so restore() can rewind them
    // even when the change empties the domain.
    void set_lower(int v, long long value, bool& conflict) {
        if (value <= lo_[v]) {
            return;
        }
        trail_.push_back({v, false, lo_[v]});
        const long long delta = value - lo_[v];
        lo_[v] = value;
        for (int k = var_start_[v]; k < var_start_[v + 1]; ++k) {
            const long long c = var_coef_[k];
            if (c > 0) {
                min_act_[var_row_[k]] += c * delta;
            } else {
                max_act_[var_row_[k]] += c * delta;
            }
            enqueue(var_row_[k]);
        }
        if (lo_[v] > hi_[v]) {
            conflict = true;
        }
    }

    void set_upper(int v, long long value, bool& conflict) {
        if (value >= hi_[v]) {
            return;
        }
        trail_.push_back({v, true, hi_[v]});
        const long long delta = value - hi_[v];
        hi_[v] = value;
        for (int k = var_start_[v]; k < var_start_[v + 1]; ++k) {
            const long long c = var_coef_[k];
            if (c > 0) {
                max_act_[var_row_[k]] += c * delta;
            } else {
                min_act_[var_row_[k]] += c * delta;
            }
            enqueue(var_row_[k]);
        }
        if (lo_[v] > hi_[v]) {
            conflict = true;
        }
    }

    // Bounds-consistency filtering of one row; returns false on conflict.
    bool filter_row(int r) {
        const bool need_le = row_sense_[r] != RowSense::ge;
        const bool need_ge = row_sense_[r] != RowSense::le;
        if (need_le) {
            const long long slack = row_rhs_[r] - min_act_[r];
            if (slack < 0) {
                return false;
            }
            for (int k = row_start_[r]; k < row_start_[r + 1]; ++k) {
                const int v = row_var_[k];
                const long long c = row_coef_[k];
                bool conflict = false;
                if (c > 0) {
                    if (c * (hi_[v] - lo_[v]) > slack) {
                        set_upper(v, lo_[v] + slack / c, conflict);
                    }
                } else if (c < 0) {
                    if (-c * (hi_[v] - lo_[v]) > slack) {
                        set_lower(v, hi_[v] - slack / (-c), conflict);
                    }
                }
                if (conflict) {
                    return false;
                }
            }
        }
        if (need_ge) {
            const long long surplus = max_act_[r] - row_rhs_[r];
            if (surplus < 0) {
                return false;
            }
            for (int k = row_start_[r]; k < row_start_[r + 1]; ++k) {
                const int v = row_var_[k];
                const long long c = row_coef_[k];
                bool conflict = false;
                if (c > 0) {
                    if (c * (hi_[v] - lo_[v]) > surplus) {
                        set_lower(v, hi_[v] - surplus / c, conflict);
                    }
                } else if (c < 0) {
                    if (-c * (hi_[v] - lo_[v]) > surplus) {
                        set_upper(v, lo_[v] + surplus / (-c), conflict);
                    }
                }
                if (conflict) {
                    return false;
                }
            }
        }
        return true;
    }

    bool propagate() {
        while (queue_head_ < queue_.size()) {
            const int r = queue_[queue_head_++];
            in_queue_[r] = 0;
            if (!filter_row(r)) {
                clear_queue();
                return false;
            }
        }
        queue_.clear();
        queue_head_ = 0;
        return true;
    }

    void clear_queue() {
        for (size_t k = queue_head_; k < queue_.size(); ++k) {
            in_queue_[queue_[k]] = 0;
        }
        queue_.clear();
        queue_head_ = 0;
    }

    void restore(size_t mark) {
        while (trail_.size() > mark) {
            const Trail& entry = trail_.back();
            const int v = entry.var;
            if (entry.upper) {
                const long long delta = entry.old_value - hi_[v];
                hi_[v] = entry.old_value;
                for (int k = var_start_[v]; k < var_start_[v + 1]; ++k) {
                    const long long c = var_coef_[k];
                    if (c > 0) {
                        max_act_[var_row_[k]] += c * delta;
                    } else {
                        min_act_[var_row_[k]] += c * delta;
                    }
                }
            } else {
                const long long delta = entry.old_value - lo_[v];
                lo_[v] = entry.old_value;
                for (int k = var_start_[v]; k < var_start_[v + 1]; ++k) {
                    const long long c = var_coef_[k];
                    if (c > 0) {
                        min_act_[var_row_[k]] += c * delta;
                    } else {
                        max_act_[var_row_[k]] += c * delta;
                    }
                }
            }
            trail_.pop_back();
        }
    }

    int pick_branch_var() const {
        for (int v : branch_order_) {
            if (lo_[v] < hi_[v]) {
                return v;
            }
        }
        return -1;
    }

    std::vector<long long> value_order(int var) const {
        std::vector<long long> values;
        values.reserve(static_cast<size_t>(hi_[var] - lo_[var]) + 1);
        if (maximize_) {
            for (long long x = hi_[var]; x >= lo_[var]; --x) {
                values.push_back(x);
            }
        } else {
            for (long long x = lo_[var]; x <= hi_[var]; ++x) {
                values.push_back(x);
            }
        }
        return values;
    }

    bool out_of_time() {
        if (!has_deadline_) {
            return false;
        }
        if ((nodes_ & 255) == 0 && std::chrono::steady_clock::now() >= deadline_) {
            timed_out_ = true;
        }
        return timed_out_;
    }

    // Objective bound is the cut row's min activity.
    long long node_bound() const { return min_act_[nrows_ - 1]; }

    bool gap_reached() const {
        if (!have_incumbent_) {
            return false;
        }
        const long long diff = incumbent_value_ - root_bound_;
        const long long scale = std::max(1LL, std::llabs(incumbent_value_));
        return static_cast<double>(diff) <= limits_.gap * static_cast<double>(scale);
    }

    void record_incumbent() {
        // The incumbent cut is only re-propagated lazily, so a leaf on a
        // stale branch can tie the current best; keep the first one.
        const long long value = node_bound();
        if (have_incumbent_ && value >= incumbent_value_) {
            return;
        }
        incumbent_.assign(nvars_, 0);
        for (int v = 0; v < nvars_; ++v) {
            incumbent_[v] = lo_[v];
        }
        incumbent_value_ = value;
        have_incumbent_ = true;
        // Future solutions must improve strictly.
        row_rhs_[nrows_ - 1] = incumbent_value_ - 1;
        if (limits_.on_incumbent) {
            limits_.on_incumbent(external_objective(incumbent_value_),
                                 external_objective(root_bound_));
        }
    }

    void search() {
        if (limits_.time_limit_s > 0) {
            has_deadline_ = true;
            deadline_ = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(limits_.time_limit_s));
        }
        enqueue_all();
        if (!propagate()) {
            exhausted_ = true;
            return;
        }
        root_bound_ = node_bound();

        std::vector<Frame> stack;
        const int root_var = pick_branch_var();
        if (root_var < 0) {
            record_incumbent();
            exhausted_ = true;
            return;
        }
        stack.push_back({root_var, trail_.size(), value_order(root_var)});

        while (!stack.empty()) {
            Frame& frame = stack.back();
            if (frame.next >= frame.values.size()) {
                restore(frame.trail_mark);
                stack.pop_back();
                continue;
            }
            if (out_of_time() || gap_reached()) {
                for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                    restore(it->trail_mark);
                }
                return;
            }
            restore(frame.trail_mark);
            const long long value = frame.values[frame.next++];
            ++nodes_;
            bool conflict = false;
            set_lower(frame.var, value, conflict);
            if (!conflict) {
                set_upper(frame.var, value, conflict);
            }
            // The incumbent cut tightens globally; re-check it at every node
            // so stale branches die immediately.
            enqueue(nrows_ - 1);
            if (conflict || !propagate()) {
                clear_queue();
                continue;
            }
            const int next_var = pick_branch_var();
            if (next_var < 0) {
                record_incumbent();
                continue;
            }
            stack.push_back({next_var, trail_.size(), value_order(next_var)});
        }
        exhausted_ = !timed_out_;
    }
};

}  // namespace

SolveOutcome embedded_branch_and_bound(const IlpModel& model, const SolveLimits& limits) {
    BranchAndBound engine(model, limits);
    SolveOutcome out = engine.run();
    if ((out.status == SolveStatus::optimal || out.status == SolveStatus::feasible) &&
        !model.satisfies(out.assignment)) {
        throw std::logic_error("embedded solver produced an invalid assignment");
    }
    return out;
}

namespace {

std::filesystem::path unique_temp_path(const char* suffix) {
    static std::atomic<unsigned> counter{0};
    std::ostringstream name;
    name << "mpp_" << std::chrono::steady_clock::now().time_since_epoch().count() << "_"
         << counter.fetch_add(1) << suffix;
    return std::filesystem::temp_directory_path() / name.str();
}

}  // namespace

SolveOutcome external_solve(const IlpModel& model, const std::string& executable,
                            double time_limit_s) {
    if (model.trivially_infeasible) {
        SolveOutcome out;
        out.status = SolveStatus::infeasible;
        return out;
    }
    const auto start = std::chrono::steady_clock::now();
    const std::filesystem::path lp_path = unique_temp_path(".lp");
    const std::filesystem::path sol_path = unique_temp_path(".sol");
    struct Cleanup {
        const std::filesystem::path& a;
        const std::filesystem::path& b;
        ~Cleanup() {
            std::error_code ec;
            std::filesystem::remove(a, ec);
            std::filesystem::remove(b, ec);
        }
    } cleanup{lp_path, sol_path};

    {
        std::ofstream lp(lp_path);
        if (!lp) {
            throw ExternalSolverError("cannot write LP file " + lp_path.string());
        }
        lp << export_lp(model);
    }
    std::ostringstream command;
    command << "\"" << executable << "\" \"" << lp_path.string() << "\" \"" << sol_path.string()
            << "\" " << (time_limit_s > 0 ? time_limit_s : 0.0);
    const int rc = std::system(command.str().c_str());
    if (rc != 0) {
        throw ExternalSolverError("external solver exited with status " + std::to_string(rc));
    }
    std::ifstream sol(sol_path);
    if (!sol) {
        throw ExternalSolverError("external solver produced no solution file");
    }

    SolveOutcome out;
    std::string keyword;
    std::string status;
    if (!(sol >> keyword >> status) || keyword != "status") {
        throw ExternalSolverError("solution file must start with 'status <value>'");
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (status == "infeasible") {
        out.status = SolveStatus::infeasible;
        return out;
    }
    if (status != "optimal" && status != "feasible") {
        throw ExternalSolverError("unknown external status: " + status);
    }
    long long reported = 0;
    if (!(sol >> keyword >> reported) || keyword != "objective") {
        throw ExternalSolverError("solution file lacks an objective line");
    }
    out.assignment.assign(model.variables.size(), 0);
    std::string name;
    long long value;
    std::unordered_map<std::string, int> index;
    for (size_t v = 0; v < model.variables.size(); ++v) {
        index[model.variables[v].name] = static_cast<int>(v);
    }
    while (sol >> name >> value) {
        const auto it = index.find(name);
        if (it == index.end()) {
            throw ExternalSolverError("solution references unknown variable " + name);
        }
        out.assignment[it->second] = value;
    }
    if (!model.satisfies(out.assignment)) {
        throw ExternalSolverError("external assignment violates the model");
    }
    out.objective = model.eval_objective(out.assignment);
    out.best_bound = out.objective;
    out.status = status == "optimal" ? SolveStatus::optimal : SolveStatus::feasible;
    return out;
}

SolveOutcome solve(const IlpModel& model, Backend backend, const SolveLimits& limits) {
    if (model.trivially_infeasible) {
        SolveOutcome out;
        out.status = SolveStatus::infeasible;
        return out;
    }
    if (backend == Backend::embedded) {
        return embedded_branch_and_bound(model, limits);
    }
    const char* exe = std::getenv("MPP_ILP_SOLVER");
    if (exe == nullptr || *exe == '\0') {
        throw ExternalSolverError("MPP_ILP_SOLVER is not set");
    }
    return external_solve(model, exe, limits.time_limit_s);
}

}  // namespace mpp
