#pragma once

#include <string>
#include <vector>

namespace vdflow {

// Driver configuration, loadable from a JSON file (// comments allowed).
// Negative numeric values mean "use the case default".
struct RunConfig {
    std::string case_name = "taylor_green";
    double mu = -1.0;
    double tau = -1.0;
    double T = -1.0;
    int level = 0;    // manufactured-disk refinement
    int nx = 64;      // taylor_green mesh
    int ny = 64;

    std::string output_dir = "out";
    int snapshot_stride = 0;
    bool subdivide_vtk = false;
    std::string assertion_mode = "strict"; // "strict" aborts on violations, "log" records

    int quadrature_degree = 9;
    double solver_residual_bound = 1e-12;
    double eps_den = -1.0;
    int debug_break_gamma_step = -1; // test hook

    std::vector<int> levels = {0, 1, 2, 3}; // convergence ladder
    double convergence_T = 1.0;

    bool strict() const { return assertion_mode == "strict"; }
};

RunConfig load_run_config(const std::string& path);

} // namespace vdflow
