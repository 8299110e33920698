#pragma once

#include "vdflow/geometry.hpp"
#include "vdflow/mesh.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vdflow {

enum class BcKind { Dirichlet, DoNothing };

struct BoundaryCondition {
    BcKind kind = BcKind::Dirichlet;
    std::function<Vec2(Vec2, double)> velocity;    // Dirichlet data g(x, t)
    std::function<double(Vec2, double)> sigma;     // inflow value sqrt(rho), optional
    bool has_sigma() const { return static_cast<bool>(sigma); }
};

struct ExactSolution {
    std::function<double(Vec2, double)> rho;
    std::function<Vec2(Vec2, double)> u;
    std::function<double(Vec2, double)> p;
};

// Everything a simulation needs: mesh source, tagged boundary conditions,
// initial fields, forcing, viscosity, defaults, and (when known) the exact
// solution for error measurement.
struct CaseSetup {
    std::string name;
    std::string description;

    std::function<Mesh()> make_mesh;

    std::map<int, BoundaryCondition> bcs; // every mesh tag gets exactly one entry

    std::function<double(Vec2)> rho0;
    std::function<Vec2(Vec2)> u0;
    std::function<Mat2(Vec2)> u0_grad;
    std::function<double(Vec2)> p0;

    std::function<Vec2(Vec2, double)> forcing; // f(x, t)
    bool zero_forcing = false;

    double mu = 1.0;
    double default_tau = 0.01;
    double default_T = 1.0;

    // True when every velocity condition is homogeneous Dirichlet; the
    // per-step energy identity is asserted at runtime only in that case.
    bool homogeneous_velocity_bc = false;
    // Initialize the velocity projection with zero boundary data instead of
    // the t=0 boundary-condition values (impulsive-start channel flows).
    bool zero_initial_velocity_bc = false;

    std::optional<ExactSolution> exact;

    // Checks the BC table against the mesh tags, samples rho0 > 0, and
    // verifies the forcing is finite at random space-time samples. Returns
    // the list of problems (empty when the setup is consistent).
    std::vector<std::string> self_check(const Mesh& mesh) const;
};

// Unit-disk manufactured-solution setup with a closed-form forcing; level
// picks the mesh so that h is close to sqrt(tau) of the convergence ladder
// tau = 1/8 / 2^level.
CaseSetup case_manufactured_disk(int level);

// Taylor-Green-type vortex on (-1,1)^2 with constant initial density, zero
// forcing, and no-slip walls; the property-preservation workhorse.
CaseSetup case_taylor_green_square(double mu, int nx = 64, int ny = 64);

// Backward-facing step channel, parabolic inflow, impulsive start.
CaseSetup case_backstep();

// Channel flow past a circular cylinder with a do-nothing outlet.
CaseSetup case_cylinder();

// Default time-step ladder for the manufactured convergence study.
double manufactured_tau(int level);

// Directory holding the bundled benchmark meshes; honors VDFLOW_DATA_DIR.
std::string data_directory();

std::vector<std::string> list_case_names();
CaseSetup make_case(const std::string& name, double mu_override = -1.0, int level = 0,
                    int nx = 64, int ny = 64);

} // namespace vdflow
