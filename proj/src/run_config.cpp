#include "vdflow/run_config.hpp"

#include "vdflow/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace vdflow {

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/true,
                                  /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config parse error in '" + path + "': " + e.what());
    }

    RunConfig cfg;
    try {
        cfg.case_name = j.value("case", cfg.case_name);
        cfg.mu = j.value("mu", cfg.mu);
        cfg.tau = j.value("tau", cfg.tau);
        cfg.T = j.value("T", cfg.T);
        cfg.level = j.value("level", cfg.level);
        if (j.contains("mesh")) {
            cfg.nx = j["mesh"].value("nx", cfg.nx);
            cfg.ny = j["mesh"].value("ny", cfg.ny);
        }
        cfg.output_dir = j.value("output_dir", cfg.output_dir);
        cfg.snapshot_stride = j.value("snapshot_stride", cfg.snapshot_stride);
        cfg.subdivide_vtk = j.value("subdivide_vtk", cfg.subdivide_vtk);
        cfg.assertion_mode = j.value("assertion_mode", cfg.assertion_mode);
        cfg.quadrature_degree = j.value("quadrature_degree", cfg.quadrature_degree);
        cfg.solver_residual_bound = j.value("solver_residual_bound", cfg.solver_residual_bound);
        cfg.eps_den = j.value("eps_den", cfg.eps_den);
        cfg.debug_break_gamma_step = j.value("debug_break_gamma_step", cfg.debug_break_gamma_step);
        if (j.contains("convergence")) {
            const auto& c = j["convergence"];
            if (c.contains("levels")) cfg.levels = c["levels"].get<std::vector<int>>();
            cfg.convergence_T = c.value("T", cfg.convergence_T);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config type error in '" + path + "': " + e.what());
    }

    if (cfg.assertion_mode != "strict" && cfg.assertion_mode != "log")
        throw ConfigError("assertion_mode must be 'strict' or 'log', got '" +
                          cfg.assertion_mode + "'");
    if (cfg.tau == 0.0 || cfg.T == 0.0)
        throw ConfigError("tau and T must be positive when given");
    return cfg;
}

} // namespace vdflow
