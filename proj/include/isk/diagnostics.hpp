#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "isk/potential.hpp"

namespace isk::diagnostics {

/// Graph of the inverse profile in the radial coordinate: vprime[i] is the
/// x solving f(x) = u'(rho[i]). Values of u' outside the range of f are
/// clipped to the nearest endpoint and flagged.
struct RadialCurve {
    std::vector<double> rho;
    std::vector<double> vprime;
    bool clipped = false;
};

struct ConeFit {
    double exponent = 0;
    double coefficient = 0;
    double r2 = 0;
    int samples = 0;
};

struct InsufficientResolution : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ClassMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> uniform_rho_grid(double r, int points);

/// Monotone inversion of nodal profile values by linear interpolation.
RadialCurve reconstruct_vprime(std::span<const double> x, std::span<const double> f,
                               const potential::Potential& u,
                               std::span<const double> rho);

/// Same inversion against a continuous monotone profile, bisected to near
/// machine precision; used for asymptotic fits where nodal resolution is
/// insufficient.
RadialCurve reconstruct_vprime(const std::function<double(double)>& f, double x_lo,
                               double x_hi, const potential::Potential& u,
                               std::span<const double> rho);

/// Least-squares fit of log(vprime - lambda) against rho over the window
/// vprime - lambda in (1e-8, 1e-2). The slope is the cone exponent (1/2 at a
/// quadratic contact, about 1 for profiles with positive endpoint slope).
ConeFit fit_cone_exponent(const RadialCurve& curve, double lambda);

struct OscPole {
    double osc = 0;
    double pole_coeff = 0;
};

/// Oscillation and pole coefficient of the reduced potential difference.
/// Both curves must share the rho grid. The difference of the two vprime
/// profiles is integrated cumulatively; osc is its total variation range and
/// pole_coeff the fitted slope of the integral toward rho -> -infinity.
OscPole oscillation_and_pole(const RadialCurve& limit, const RadialCurve& initial);

struct TraceProfile {
    std::vector<double> values;
    std::vector<char> blown_up;  // slope below 1e-12, value not meaningful
};

/// Trace of the reference metric against the evolving one along the curve:
/// (n-1) x/f + 1/f' for the blown-up projective space, and
/// n (1+x)/(1+f) + m x/f + 1/f' for the bundle reduction (pass m >= 0 and
/// bundle=true).
TraceProfile trace_profile(std::span<const double> x, std::span<const double> f,
                           const potential::Potential& u, std::span<const double> rho,
                           int n, int m, bool bundle);

/// Contact-point estimate from a limit curve: value of vprime at the lowest
/// rho sample.
double lambda_estimate(const RadialCurve& curve);

/// Sup over samples of |f(vprime(rho)) - u'(rho)|, the inversion defect.
double inversion_defect(const RadialCurve& curve, std::span<const double> x,
                        std::span<const double> f, const potential::Potential& u);

}  // namespace isk::diagnostics
