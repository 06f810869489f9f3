#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace isk::obstacle {

/// Constrained minimization problem whose solution reproduces the flow limit
/// in the current-blowup case. For k > 1 the operator acts on the k-th power
/// of the profile; this extension beyond the first-degree case is validated
/// only against the analytic profiles.
struct ObstacleProblem {
    int n = 2;
    int k = 1;
    double x_lo = 1.0;
    double x_hi = 2.0;
    double boundary_lo = 1.0;
    double boundary_hi = 1.0;
    double obstacle = 1.0;

    double p_coeff() const { return n + 1 - 2 * k; }
    double q_coeff() const { return -double(k) * (n - k); }
    void validate() const;
};

struct RelaxationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dirichlet energy of the self-adjoint form of the operator,
/// E(w) = 1/2 * integral of x^p w'^2 - q x^(p-2) w^2, by trapezoidal
/// quadrature with central-difference derivatives.
double energy(const ObstacleProblem& p, std::span<const double> w);

struct PsorResult {
    std::vector<double> values;
    std::vector<double> x;
    int sweeps = 0;
    double final_update = 0;
};

/// Projected SOR on the central-difference discretization, projecting onto
/// w >= obstacle after each update. Stops when the sup distance between
/// successive sweeps drops below tol. Throws RelaxationError if the energy
/// increases over a 100-sweep window.
PsorResult solve_psor(const ObstacleProblem& p, int points, double omega_relax = 1.8,
                      double tol = 1e-12, int max_sweeps = 4000000);

struct Complementarity {
    double max_violation = 0;       // of w >= obstacle
    double max_residual_free = 0;   // |Lw| where w > obstacle + 1e-6
    double max_positive_contact = 0;  // positive part of Lw on the contact set
};

Complementarity complementarity_residual(const ObstacleProblem& p,
                                         std::span<const double> x,
                                         std::span<const double> w);

/// Contact point: last node still at the obstacle, refined by extrapolating
/// sqrt(w - obstacle) back to zero, which is linear near a quadratic contact.
/// Returns x_lo when the solution leaves the obstacle immediately.
double contact_point(const ObstacleProblem& p, std::span<const double> x,
                     std::span<const double> w, double tol = 1e-10);

/// CSV rows (x, w, Lw, contact flag).
void export_csv(const ObstacleProblem& p, std::span<const double> x,
                std::span<const double> w, const std::string& path);

}  // namespace isk::obstacle
