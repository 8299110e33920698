#include "vdflow/driver.hpp"

#include "vdflow/diagnostics.hpp"
#include "vdflow/errors.hpp"
#include "vdflow/vtk_writer.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace vdflow {

std::string format_csv_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

SchemeConfig scheme_config_from(const RunConfig& cfg, const CaseSetup& setup) {
    SchemeConfig sc;
    sc.mu = cfg.mu > 0.0 ? cfg.mu : setup.mu;
    sc.tau = cfg.tau > 0.0 ? cfg.tau : setup.default_tau;
    sc.T = cfg.T > 0.0 ? cfg.T : setup.default_T;
    sc.quadrature_degree = cfg.quadrature_degree;
    sc.solver_residual_bound = cfg.solver_residual_bound;
    sc.eps_den = cfg.eps_den;
    sc.snapshot_stride = cfg.snapshot_stride;
    sc.strict = cfg.strict();
    sc.debug_break_gamma_step = cfg.debug_break_gamma_step;
    return sc;
}

namespace {

void ensure_output_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ResourceError("cannot create output directory '" + dir + "': " + ec.message());
}

} // namespace

int cmd_run(const RunConfig& cfg) {
    CaseSetup setup = make_case(cfg.case_name, cfg.mu, cfg.level, cfg.nx, cfg.ny);
    SchemeConfig sc = scheme_config_from(cfg, setup);
    setup.mu = sc.mu;

    ensure_output_dir(cfg.output_dir);
    const std::string csv_path = cfg.output_dir + "/diagnostics.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw ResourceError("cmd_run: cannot open '" + csv_path + "' for writing");
    csv << "# vdflow diagnostics schema v1\n";
    csv << "step,t,mass,energy,min_density,gamma,lambda,energy_residual,grad_norm\n";

    Simulation sim(setup, sc);

    int snapshot_counter = 0;
    Simulation::Sinks sinks;
    sinks.on_diagnostics = [&](const StepDiagnostics& d) {
        csv << d.step << "," << format_csv_value(d.t) << "," << format_csv_value(d.mass) << ","
            << format_csv_value(d.energy) << "," << format_csv_value(d.min_density) << ","
            << format_csv_value(d.gamma) << "," << format_csv_value(d.lambda) << ","
            << format_csv_value(d.energy_residual) << "," << format_csv_value(d.grad_norm)
            << "\n";
        for (const auto& v : d.violations)
            std::cerr << "property violation at step " << d.step << ": " << v << "\n";
    };
    sinks.on_snapshot = [&](const SchemeState& s) {
        char name[64];
        std::snprintf(name, sizeof name, "/snapshot_%04d.vtk", snapshot_counter++);
        write_vtk(cfg.output_dir + name, sim.mesh(), s.sigma, s.lambda, s.u, s.p,
                  cfg.subdivide_vtk);
    };

    const RunResult result = sim.run(sinks);
    std::cout << "completed " << result.series.back().step << " steps to t = "
              << result.series.back().t << "; diagnostics in " << csv_path << "\n";
    if (result.property_violation)
        std::cout << "property violations were recorded (log mode)\n";
    return kExitOk;
}

int cmd_convergence(const RunConfig& cfg) {
    ensure_output_dir(cfg.output_dir);
    const std::string csv_path = cfg.output_dir + "/errors.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw ResourceError("cmd_convergence: cannot open '" + csv_path + "'");
    csv << "# vdflow errors schema v1\n";
    csv << "tau,h,err_u,err_rho,err_p,order_u,order_rho,order_p\n";

    std::vector<ErrorRecord> records;
    for (int level : cfg.levels) {
        CaseSetup setup = case_manufactured_disk(level);
        RunConfig level_cfg = cfg;
        level_cfg.tau = manufactured_tau(level);
        level_cfg.T = cfg.convergence_T;
        SchemeConfig sc = scheme_config_from(level_cfg, setup);
        setup.mu = sc.mu;

        Simulation sim(setup, sc);
        const RunResult result = sim.run();
        const double t_final = result.series.back().t;

        const auto& exact = *setup.exact;
        ExactFields at_final{
            [&exact, t_final](Vec2 x) { return exact.rho(x, t_final); },
            [&exact, t_final](Vec2 x) { return exact.u(x, t_final); },
            [&exact, t_final](Vec2 x) { return exact.p(x, t_final); },
        };
        const SchemeState& s = sim.state();
        ErrorRecord rec = error_norms(s.lambda, s.sigma, s.u, s.p, at_final,
                                      sim.mesh().max_circumdiameter(), sc.tau, sim.rule());
        records.push_back(rec);
        std::cout << "level " << level << ": tau = " << rec.tau << ", h = " << rec.h
                  << ", err_u = " << rec.err_u << ", err_rho = " << rec.err_rho
                  << ", err_p = " << rec.err_p << "\n";
    }

    ConvergenceOrders orders;
    if (records.size() >= 2) orders = convergence_orders(records);
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        csv << format_csv_value(r.tau) << "," << format_csv_value(r.h) << ","
            << format_csv_value(r.err_u) << "," << format_csv_value(r.err_rho) << ","
            << format_csv_value(r.err_p);
        if (i == 0) {
            csv << ",,,";
        } else {
            csv << "," << format_csv_value(orders.order_u[i - 1]) << ","
                << format_csv_value(orders.order_rho[i - 1]) << ","
                << format_csv_value(orders.order_p[i - 1]);
        }
        csv << "\n";
    }
    std::cout << "errors written to " << csv_path << "\n";
    return kExitOk;
}

int cmd_list_cases() {
    for (const auto& name : list_case_names()) {
        const CaseSetup c = make_case(name);
        std::printf("%-18s %s\n", c.name.c_str(), c.description.c_str());
        std::printf("%-18s   defaults: mu = %g, tau = %g, T = %g\n", "", c.mu, c.default_tau,
                    c.default_T);
    }
    return kExitOk;
}

} // namespace vdflow
