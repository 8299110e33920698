// Command-line driver: run benchmark cases, drive the convergence study, and
// list the available cases. Exit codes: 0 success, 2 configuration error,
// 3 linear solver failure, 4 property violation in strict mode.

#include "vdflow/driver.hpp"
#include "vdflow/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace vdflow;

namespace {

void add_common_options(CLI::App* cmd, std::string& config_path, RunConfig& cfg) {
    cmd->add_option("-c,--config", config_path, "JSON config file (// comments allowed)");
    cmd->add_option("--case", cfg.case_name,
                    "case name (manufactured_disk, taylor_green, backstep, cylinder)");
    cmd->add_option("--mu", cfg.mu, "viscosity override");
    cmd->add_option("--tau", cfg.tau, "time step override");
    cmd->add_option("--T", cfg.T, "final time override");
    cmd->add_option("--level", cfg.level, "manufactured-disk refinement level");
    cmd->add_option("--nx", cfg.nx, "taylor_green cells in x");
    cmd->add_option("--ny", cfg.ny, "taylor_green cells in y");
    cmd->add_option("-o,--out", cfg.output_dir, "output directory");
    cmd->add_option("--stride", cfg.snapshot_stride, "VTK snapshot stride (0 = off)");
    cmd->add_flag("--subdivide", cfg.subdivide_vtk, "export P2 fields on split triangles");
    cmd->add_option("--mode", cfg.assertion_mode, "assertion mode: strict or log");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vdflow: property-preserving variable-density incompressible flow solver"};
    app.require_subcommand(1);

    std::string run_config_path, conv_config_path;
    RunConfig run_cfg, conv_cfg;
    std::vector<int> conv_levels;

    CLI::App* run = app.add_subcommand("run", "run a case and emit diagnostics + snapshots");
    add_common_options(run, run_config_path, run_cfg);

    CLI::App* conv = app.add_subcommand("convergence", "manufactured-solution convergence study");
    add_common_options(conv, conv_config_path, conv_cfg);
    conv->add_option("--levels", conv_levels, "refinement levels, e.g. --levels 0 1 2 3");

    app.add_subcommand("list-cases", "list available cases and their defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    try {
        if (app.got_subcommand("list-cases")) return cmd_list_cases();

        if (app.got_subcommand("run")) {
            RunConfig cfg = run_config_path.empty() ? RunConfig{} : load_run_config(run_config_path);
            // Flags override file values.
            RunConfig defaults;
            auto take = [](auto flag_value, auto default_value, auto file_value) {
                return flag_value != default_value ? flag_value : file_value;
            };
            cfg.case_name = take(run_cfg.case_name, defaults.case_name, cfg.case_name);
            cfg.mu = take(run_cfg.mu, defaults.mu, cfg.mu);
            cfg.tau = take(run_cfg.tau, defaults.tau, cfg.tau);
            cfg.T = take(run_cfg.T, defaults.T, cfg.T);
            cfg.level = take(run_cfg.level, defaults.level, cfg.level);
            cfg.nx = take(run_cfg.nx, defaults.nx, cfg.nx);
            cfg.ny = take(run_cfg.ny, defaults.ny, cfg.ny);
            cfg.output_dir = take(run_cfg.output_dir, defaults.output_dir, cfg.output_dir);
            cfg.snapshot_stride =
                take(run_cfg.snapshot_stride, defaults.snapshot_stride, cfg.snapshot_stride);
            cfg.subdivide_vtk = run_cfg.subdivide_vtk || cfg.subdivide_vtk;
            cfg.assertion_mode = take(run_cfg.assertion_mode, defaults.assertion_mode, cfg.assertion_mode);
            if (cfg.assertion_mode != "strict" && cfg.assertion_mode != "log")
                throw ConfigError("assertion mode must be 'strict' or 'log'");
            return cmd_run(cfg);
        }

        if (app.got_subcommand("convergence")) {
            RunConfig cfg =
                conv_config_path.empty() ? RunConfig{} : load_run_config(conv_config_path);
            if (!conv_levels.empty()) cfg.levels = conv_levels;
            if (conv_cfg.T > 0.0) cfg.convergence_T = conv_cfg.T;
            if (conv_cfg.output_dir != RunConfig{}.output_dir) cfg.output_dir = conv_cfg.output_dir;
            return cmd_convergence(cfg);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const SolverError& e) {
        std::cerr << "solver failure";
        if (e.step_index >= 0) std::cerr << " at step " << e.step_index;
        std::cerr << ": " << e.what() << "\n";
        return kExitSolverFailure;
    } catch (const PropertyViolation& e) {
        std::cerr << "property violation";
        if (e.step_index >= 0) std::cerr << " at step " << e.step_index;
        std::cerr << ": " << e.what() << "\n";
        return kExitPropertyViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
