// Reference external solver speaking the documented file protocol:
//   mpp-lpsolve <lp-file> <solution-file> <time-limit-seconds>
// Reads the LP, solves it with the embedded branch and bound, and writes
// 'status', 'objective' and one '<name> <value>' line per variable.

#include <fstream>
#include <iostream>
#include <sstream>

#include "mpp/ilp.hpp"
#include "mpp/solver.hpp"

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: mpp-lpsolve <lp-file> <solution-file> [time-limit-seconds]\n";
        return 1;
    }
    try {
        std::ifstream in(argv[1], std::ios::binary);
        if (!in) {
            std::cerr << "cannot open " << argv[1] << "\n";
            return 1;
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        const mpp::IlpModel model = mpp::parse_lp(buffer.str());

        mpp::SolveLimits limits;
        if (argc > 3) {
            limits.time_limit_s = std::stod(argv[3]);
        }
        const mpp::SolveOutcome outcome = mpp::embedded_branch_and_bound(model, limits);

        std::ofstream out(argv[2], std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << argv[2] << "\n";
            return 1;
        }
        switch (outcome.status) {
            case mpp::SolveStatus::optimal:
                out << "status optimal\n";
                break;
            case mpp::SolveStatus::feasible:
                out << "status feasible\n";
                break;
            case mpp::SolveStatus::infeasible:
                out << "status infeasible\n";
                return 0;
            case mpp::SolveStatus::no_incumbent:
                out << "status infeasible\n";
                std::cerr << "time limit hit with no incumbent\n";
                return 1;
        }
        out << "objective " << outcome.objective << "\n";
        for (size_t v = 0; v < model.variables.size(); ++v) {
            if (outcome.assignment[v] != 0) {
                out << model.variables[v].name << " " << outcome.assignment[v] << "\n";
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
