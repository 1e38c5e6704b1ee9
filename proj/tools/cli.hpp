#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "shishkin/analysis.hpp"
#include "shishkin/mesh.hpp"
#include "shishkin/solver.hpp"

namespace shishkin::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kParseError = 2,
    kValidationFailure = 3,
    kMeshError = 4,
    kBandViolation = 5,
};

/// Runs one subcommand. args excludes the program name. Diagnostics go to err
/// as single lines; artifacts go to out unless --out is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

void write_mesh_csv(std::ostream& os, const ShishkinMesh& mesh);
/// Columns j, t, U1..Un and, when parts is non-null, V1..Vn, W1..Wn.
void write_solution_csv(std::ostream& os, const SolutionGrid& grid,
                        const DecomposedSolution* parts = nullptr);
/// Columns eps_label, N, D, p, C_fit followed by a "# uniform" block.
void write_report_csv(std::ostream& os, const SweepReport& report);
std::string report_json(const SweepReport& report);

}  // namespace shishkin::cli
