#include "vdflow/cases.hpp"

#include "vdflow/errors.hpp"
#include "vdflow/msh_io.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <set>

#ifndef VDFLOW_DATA_DIR
#define VDFLOW_DATA_DIR "data"
#endif

namespace vdflow {

std::string data_directory() {
    if (const char* env = std::getenv("VDFLOW_DATA_DIR")) return env;
    return VDFLOW_DATA_DIR;
}

double manufactured_tau(int level) { return 0.125 / static_cast<double>(1 << level); }

std::vector<std::string> CaseSetup::self_check(const Mesh& mesh) const {
    std::vector<std::string> problems;

    std::set<int> mesh_tags;
    for (const auto& tag : mesh.tags) mesh_tags.insert(tag.id);
    for (int id : mesh_tags)
        if (!bcs.count(id))
            problems.push_back("mesh tag " + std::to_string(id) + " has no boundary condition");
    for (const auto& [id, bc] : bcs)
        if (!mesh_tags.count(id))
            problems.push_back("boundary condition for tag " + std::to_string(id) +
                               " matches no mesh tag");

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto random_point = [&]() {
        const int e = static_cast<int>(rng() % mesh.element_count());
        double a = unit(rng), b = unit(rng);
        if (a + b > 1.0) { a = 1.0 - a; b = 1.0 - b; }
        const auto& t = mesh.triangles[e];
        const Vec2 v0 = mesh.vertices[t[0]], v1 = mesh.vertices[t[1]], v2 = mesh.vertices[t[2]];
        return Vec2{v0.x + a * (v1.x - v0.x) + b * (v2.x - v0.x),
                    v0.y + a * (v1.y - v0.y) + b * (v2.y - v0.y)};
    };

    for (int i = 0; i < 1000; ++i) {
        const Vec2 x = random_point();
        if (!(rho0(x) > 0.0)) {
            problems.push_back("initial density not strictly positive at sampled point");
            break;
        }
    }
    for (int i = 0; i < 1000; ++i) {
        const Vec2 x = random_point();
        const double t = default_T * unit(rng);
        const Vec2 f = forcing(x, t);
        if (!std::isfinite(f.x) || !std::isfinite(f.y)) {
            problems.push_back("forcing not finite at sampled point");
            break;
        }
    }
    return problems;
}

CaseSetup case_manufactured_disk(int level) {
    if (level < 0) throw InputError("case_manufactured_disk: level must be >= 0");

    CaseSetup c;
    c.name = "manufactured_disk";
    c.description = "rotating-density manufactured solution on the unit disk";
    c.mu = 0.1;
    c.default_tau = manufactured_tau(level);
    c.default_T = 1.0;

    // Mesh sized so the maximum circumdiameter tracks sqrt(tau).
    const double h_target = std::sqrt(c.default_tau);
    const int n_rings = std::max(2, static_cast<int>(std::lround(1.45 / h_target)));
    const int n_sectors = 2 * std::max(6, static_cast<int>(std::lround(M_PI * n_rings)));
    c.make_mesh = [n_rings, n_sectors]() { return generate_disk_mesh(1.0, n_rings, n_sectors); };

    auto rho = [](Vec2 x, double t) {
        return 2.0 + x.x * std::cos(std::sin(t)) + x.y * std::sin(std::sin(t));
    };
    auto u = [](Vec2 x, double t) { return Vec2{-x.y * std::cos(t), x.x * std::cos(t)}; };
    auto p = [](Vec2 x, double t) { return std::sin(x.x) * std::sin(x.y) * std::sin(t); };

    c.rho0 = [rho](Vec2 x) { return rho(x, 0.0); };
    c.u0 = [u](Vec2 x) { return u(x, 0.0); };
    c.u0_grad = [](Vec2) {
        Mat2 g;
        g(0, 0) = 0.0; g(0, 1) = -1.0;
        g(1, 0) = 1.0; g(1, 1) = 0.0;
        return g;
    };
    c.p0 = [p](Vec2 x) { return p(x, 0.0); };

    // f = rho u_t + rho (u.grad)u + grad p, with Delta u = 0 for the rigid
    // rotation: u_t = (y sin t, -x sin t), (u.grad)u = -cos^2(t) (x, y).
    c.forcing = [rho](Vec2 x, double t) {
        const double c2 = std::cos(t) * std::cos(t);
        const double st = std::sin(t);
        const double r = rho(x, t);
        return Vec2{r * (x.y * st - x.x * c2) + std::cos(x.x) * std::sin(x.y) * st,
                    r * (-x.x * st - x.y * c2) + std::sin(x.x) * std::cos(x.y) * st};
    };

    BoundaryCondition wall;
    wall.kind = BcKind::Dirichlet;
    wall.velocity = u;
    c.bcs[1] = wall;

    c.exact = ExactSolution{rho, u, p};
    return c;
}

CaseSetup case_taylor_green_square(double mu, int nx, int ny) {
    if (mu <= 0.0) throw InputError("case_taylor_green_square: mu must be positive");

    CaseSetup c;
    c.name = "taylor_green";
    c.description = "Taylor-Green vortex on (-1,1)^2, constant density, no forcing";
    c.mu = mu;
    c.default_tau = 0.01;
    c.default_T = 10.0;
    c.make_mesh = [nx, ny]() { return generate_rectangle_mesh(-1.0, -1.0, 1.0, 1.0, nx, ny); };

    c.rho0 = [](Vec2) { return 1.0; };
    c.u0 = [](Vec2 x) {
        return Vec2{std::sin(M_PI * x.x) * std::cos(M_PI * x.y),
                    -std::cos(M_PI * x.x) * std::sin(M_PI * x.y)};
    };
    c.u0_grad = [](Vec2 x) {
        Mat2 g;
        g(0, 0) = M_PI * std::cos(M_PI * x.x) * std::cos(M_PI * x.y);
        g(0, 1) = -M_PI * std::sin(M_PI * x.x) * std::sin(M_PI * x.y);
        g(1, 0) = M_PI * std::sin(M_PI * x.x) * std::sin(M_PI * x.y);
        g(1, 1) = -M_PI * std::cos(M_PI * x.x) * std::cos(M_PI * x.y);
        return g;
    };
    c.p0 = [](Vec2 x) {
        return (3.0 / 16.0) * std::cos(2.0 * M_PI * x.x) * std::cos(2.0 * M_PI * x.y);
    };
    c.forcing = [](Vec2, double) { return Vec2{0.0, 0.0}; };
    c.zero_forcing = true;
    c.homogeneous_velocity_bc = true;

    BoundaryCondition noslip;
    noslip.kind = BcKind::Dirichlet;
    noslip.velocity = [](Vec2, double) { return Vec2{0.0, 0.0}; };
    for (int tag = 1; tag <= 4; ++tag) c.bcs[tag] = noslip;
    return c;
}

CaseSetup case_backstep() {
    CaseSetup c;
    c.name = "backstep";
    c.description = "backward-facing step channel, parabolic inflow, impulsive start";
    c.mu = 0.01;
    c.default_tau = 0.01;
    c.default_T = 7.0;
    c.zero_initial_velocity_bc = true;

    const std::string path = data_directory() + "/meshes/backstep.msh";
    c.make_mesh = [path]() { return import_gmsh(path); };

    c.rho0 = [](Vec2) { return 1.0; };
    c.u0 = [](Vec2) { return Vec2{0.0, 0.0}; };
    c.u0_grad = [](Vec2) { return Mat2{}; };
    c.p0 = [](Vec2) { return 0.0; };
    c.forcing = [](Vec2, double) { return Vec2{0.0, 0.0}; };
    c.zero_forcing = true;

    BoundaryCondition inflow;
    inflow.kind = BcKind::Dirichlet;
    inflow.velocity = [](Vec2 x, double) { return Vec2{24.0 * (x.y - 0.5) * (1.0 - x.y), 0.0}; };
    inflow.sigma = [](Vec2, double) { return 1.0; };
    c.bcs[1] = inflow;

    BoundaryCondition wall;
    wall.kind = BcKind::Dirichlet;
    wall.velocity = [](Vec2, double) { return Vec2{0.0, 0.0}; };
    c.bcs[2] = wall;

    BoundaryCondition outflow;
    outflow.kind = BcKind::DoNothing;
    c.bcs[3] = outflow;
    return c;
}

CaseSetup case_cylinder() {
    CaseSetup c;
    c.name = "cylinder";
    c.description = "channel flow past a circular cylinder, do-nothing outlet";
    c.mu = 1.0 / 300.0;
    c.default_tau = 0.01;
    c.default_T = 7.0;
    c.zero_initial_velocity_bc = true;

    const std::string path = data_directory() + "/meshes/cylinder.msh";
    c.make_mesh = [path]() { return import_gmsh(path); };

    c.rho0 = [](Vec2) { return 1.0; };
    c.u0 = [](Vec2) { return Vec2{0.0, 0.0}; };
    c.u0_grad = [](Vec2) { return Mat2{}; };
    c.p0 = [](Vec2) { return 0.0; };
    c.forcing = [](Vec2, double) { return Vec2{0.0, 0.0}; };
    c.zero_forcing = true;

    BoundaryCondition inflow;
    inflow.kind = BcKind::Dirichlet;
    inflow.velocity = [](Vec2 x, double) { return Vec2{6.0 * x.y * (1.0 - x.y), 0.0}; };
    inflow.sigma = [](Vec2, double) { return 1.0; };
    c.bcs[1] = inflow;

    BoundaryCondition wall;
    wall.kind = BcKind::Dirichlet;
    wall.velocity = [](Vec2, double) { return Vec2{0.0, 0.0}; };
    c.bcs[2] = wall; // channel walls
    c.bcs[4] = wall; // cylinder surface

    BoundaryCondition outflow;
    outflow.kind = BcKind::DoNothing;
    c.bcs[3] = outflow;
    return c;
}

std::vector<std::string> list_case_names() {
    return {"manufactured_disk", "taylor_green", "backstep", "cylinder"};
}

CaseSetup make_case(const std::string& name, double mu_override, int level, int nx, int ny) {
    CaseSetup c;
    if (name == "manufactured_disk") c = case_manufactured_disk(level);
    else if (name == "taylor_green") c = case_taylor_green_square(mu_override > 0.0 ? mu_override : 0.01, nx, ny);
    else if (name == "backstep") c = case_backstep();
    else if (name == "cylinder") c = case_cylinder();
    else throw ConfigError("unknown case '" + name + "'");
    if (mu_override > 0.0) c.mu = mu_override;
    return c;
}

} // namespace vdflow
