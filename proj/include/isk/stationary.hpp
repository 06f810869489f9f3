#pragma once

#include <span>
#include <string>
#include <vector>

#include "isk/classes.hpp"
#include "isk/gpoly.hpp"

namespace isk::stationary {

/// Piecewise analytic limit profile: constant at the flat value on
/// [x_lo, lambda], strictly increasing branch on [lambda, x_hi].
struct StationaryProfile {
    enum class Family { Pn, Xmn };
    Family family = Family::Pn;
    int n = 0, k = 0, m = 0;
    double x_lo = 0, x_hi = 0;
    double lambda = 0;       // equals x_lo when there is no flat part
    double flat_value = 0;   // 1 for Pn, 0 for Xmn

    // Pn branch: f = (a x^k + b x^{k-n})^{1/k}.
    double a = 0, b = 0;
    // Xmn branch: implicit level set gk(f, x) = alpha * g1(x) + beta.
    double alpha = 0, beta = 0;
    double branch_hint = 1.0;  // initial upper bracket for the implicit solve
    gpoly::BivariatePoly gk, gk_df, gk_dx, g1, g1_dx;

    /// Value of sigma_k along the increasing branch at the critical profile.
    double sigma_constant = 0;

    double eval(double x) const;
    double deriv(double x) const;
    /// sigma_k of the reduced eigenvalue tuple at x (defined off the flat part).
    double sigma(double x) const;
};

StationaryProfile stationary_pn(const classes::PnProblem& p);

/// Unique root in (1, beta) of the contact-point equation
/// (n-k)(beta/l)^k + k(l/beta)^{n-k} = n alpha^k; the left side is strictly
/// decreasing. Boundary (ConicBoundary) inputs return 1 by convention.
double solve_lambda_pn(const classes::PnProblem& p);

struct XmnSystem {
    double alpha = 0;
    double beta = 0;
    double lambda = 0;
    /// Set if the scalar residual shows more than one sign change over the
    /// sampling scan; the first root is still returned.
    bool multiple_brackets = false;
};

/// Solves the three contact conditions for (alpha, beta, lambda). Smooth and
/// boundary cases degenerate to (c_k, 0, 0).
XmnSystem solve_xmn_system(const classes::XmnProblem& p);

StationaryProfile stationary_xmn(const classes::XmnProblem& p);

/// Sup over the sample points of |sigma_k - sigma_constant|; points on the
/// flat part are skipped.
double stationary_residual(const StationaryProfile& s, std::span<const double> xs);

/// CSV rows (x, f, f') on a uniform grid of `points` nodes.
void export_csv(const StationaryProfile& s, int points, const std::string& path);

}  // namespace isk::stationary
