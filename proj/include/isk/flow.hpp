#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "isk/classes.hpp"
#include "isk/potential.hpp"
#include "isk/stationary.hpp"

namespace isk::flow {

struct Grid {
    double x_lo = 0;
    double x_hi = 1;
    int points = 16;

    double spacing() const { return (x_hi - x_lo) / (points - 1); }
    double x(int i) const { return i == points - 1 ? x_hi : x_lo + i * spacing(); }
    void validate() const;
};

enum class Exec { Serial, Parallel };

/// The variable actually time-stepped: f itself, or its k-th power for the
/// general-degree reduction on the blown-up projective space.
enum class Variable { F, G };

struct FlowProblem {
    std::variant<classes::PnProblem, classes::XmnProblem> manifold;
    potential::FluxFunction flux = potential::FluxFunction::neg_identity();

    bool is_pn() const { return std::holds_alternative<classes::PnProblem>(manifold); }
    const classes::PnProblem& pn() const { return std::get<classes::PnProblem>(manifold); }
    const classes::XmnProblem& xmn() const { return std::get<classes::XmnProblem>(manifold); }

    Variable variable() const;
    /// Boundary values in the evolution variable.
    double boundary_lo() const;
    double boundary_hi() const;
    double flat_value() const;  // obstacle height in the evolution variable
    Grid default_grid(int points) const;
    std::unique_ptr<potential::Potential> make_potential() const;
    stationary::StationaryProfile analytic_limit() const;
};

struct FlowState {
    double t = 0;
    Variable variable = Variable::F;
    std::vector<double> values;

    /// Nodal values converted to the f-variable.
    std::vector<double> f_values(int k) const;
};

struct SchemeConfig {
    double cfl = 0.8;
    double steady_tol = 1e-8;
    double max_time = 1e4;
    double theta = 0.0;       // 0 = explicit Euler (contract); >0 semi-implicit
    int steady_hold = 100;    // consecutive steps below tol before declaring steady
    int snapshot_stride = 500;
    Exec exec = Exec::Parallel;

    void validate() const;
};

struct Snapshot {
    double t = 0;
    double sup_dist_analytic = 0;
    double sigma_min = 0;
    double sigma_max = 0;
    double min_fx = 0;
    double max_rhs = 0;
};

struct EvolveResult {
    FlowState state;
    std::vector<Snapshot> series;
    bool converged = false;
    long steps = 0;
    double dt = 0;
    int dt_halvings = 0;
    double final_residual = 0;
    double wall_seconds = 0;
};

enum class InitialData { Chord, AnalyticLimit, Custom };

struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SchemeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Degenerate diffusion right-hand sides; `out` matches the grid, endpoints
/// are zero. All three check state integrity before evaluating.
void rhs_jflow(const classes::PnProblem& p, const potential::Potential& u,
               const potential::FluxFunction& flux, const Grid& grid,
               std::span<const double> f, std::span<double> out, Exec exec);

void rhs_general_k(const classes::PnProblem& p, const potential::Potential& u,
                   const potential::FluxFunction& flux, const Grid& grid,
                   std::span<const double> g, std::span<double> out, Exec exec);

void rhs_xmn(const classes::XmnProblem& p, const potential::Potential& u,
             const potential::FluxFunction& flux, const Grid& grid,
             std::span<const double> f, std::span<double> out, Exec exec);

/// Dispatch to the reduction the problem calls for.
void rhs(const FlowProblem& problem, const potential::Potential& u, const Grid& grid,
         std::span<const double> w, std::span<double> out, Exec exec);

/// sigma_k of the reduced eigenvalue tuple at every node (central differences
/// inside, one-sided at the ends).
std::vector<double> sigma_profile(const FlowProblem& problem, const Grid& grid,
                                  const FlowState& state);

/// Derivative in x of the sigma_k profile computed through the conserved
/// polynomial ratio rather than the eigenvalue chain rule; consistency
/// diagnostic for the bundle reduction.
std::vector<double> sigma_derivative_gform(const classes::XmnProblem& p, const Grid& grid,
                                           std::span<const double> f);

std::vector<double> make_initial(const FlowProblem& problem, const Grid& grid,
                                 InitialData init);

EvolveResult evolve(const FlowProblem& problem, const Grid& grid,
                    const SchemeConfig& scheme, InitialData init = InitialData::Chord,
                    const std::vector<double>* custom_initial = nullptr);

}  // namespace isk::flow
