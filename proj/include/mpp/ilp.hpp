#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mpp/instance.hpp"
#include "mpp/timex.hpp"

namespace mpp {

enum class VarKind { binary, bounded_integer };
enum class RowSense { le, eq, ge };
enum class ObjSense { minimize, maximize };

struct IlpVariable {
    std::string name;
    VarKind kind = VarKind::binary;
    long long lower = 0;
    long long upper = 1;
};

struct IlpConstraint {
    std::string name;
    std::vector<std::pair<int, long long>> terms;  // (variable index, coefficient)
    RowSense sense = RowSense::le;
    long long rhs = 0;
};

// 0/1-and-bounded-integer linear program plus the variable<->arc bookkeeping
// used to turn assignments back into flows.
struct IlpModel {
    std::vector<IlpVariable> variables;
    std::vector<IlpConstraint> constraints;
    ObjSense objective_sense = ObjSense::minimize;
    std::vector<std::pair<int, long long>> objective;
    long long objective_offset = 0;

    // Set when some robot has an empty usable arc set; such a model cannot
    // route every robot and solvers are not consulted.
    bool trivially_infeasible = false;

    std::vector<std::vector<int>> var_of_arc;    // robot -> arc -> var or -1
    std::vector<std::pair<int, int>> var_origin; // var -> (robot, arc) or (-1,-1)
    std::vector<std::vector<int>> goal_hold_var; // robot -> t in 1..T -> var or -1
    std::vector<std::vector<int>> stay_var;      // robot -> t in 1..T -> y var or -1
    int max_var = -1;

    int add_variable(std::string name, VarKind kind, long long lower, long long upper);
    void add_constraint(std::string name, std::vector<std::pair<int, long long>> terms,
                        RowSense sense, long long rhs);

    long long eval_objective(const std::vector<long long>& assignment) const;
    bool satisfies(const std::vector<long long>& assignment) const;
};

// The four objective-specific models over a (pruned) time-expanded network.
// Capacity rows are emitted only when two or more robots share an arc; a
// single binary never violates a unit capacity on its own. Compact-encoding
// models additionally need add_compact_collision_constraints before solving.
IlpModel build_makespan_model(const TimeExpandedNetwork& net, const UsableArcs& usable,
                              const Instance& inst);
IlpModel build_maxdist_model(const TimeExpandedNetwork& net, const UsableArcs& usable,
                             const Instance& inst);
IlpModel build_totaltime_model(const TimeExpandedNetwork& net, const UsableArcs& usable,
                               const Instance& inst);
IlpModel build_totaldist_model(const TimeExpandedNetwork& net, const UsableArcs& usable,
                               const Instance& inst);

// Head-on rows per (edge, step) and meet rows per (node, step) for the
// compact encoding, replacing the full encoding's structural enforcement.
void add_compact_collision_constraints(IlpModel& model, const TimeExpandedNetwork& net,
                                       const Instance& inst);

// Textual LP form: objective section, named rows, Bounds for bounded
// integers, Binary/General sections, End. Deterministic ordering.
std::string export_lp(const IlpModel& model);

// Reads the subset of the LP format produced by export_lp; every variable
// must be declared in a Binary or General section.
IlpModel parse_lp(const std::string& text);

// Extracts the per-robot unit flows encoded by a satisfying assignment.
FlowAssignment flow_from_assignment(const IlpModel& model,
                                    const std::vector<long long>& assignment);

}  // namespace mpp
