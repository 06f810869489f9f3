#pragma once

#include <string>
#include <vector>

#include "isk/rational.hpp"

namespace isk::classes {

/// Normalized classes on the one-point blow-up of projective space:
/// omega in alpha*[E_inf] - [E_0], chi in beta*[E_inf] - [E_0].
struct PnProblem {
    int n = 2;
    int k = 1;
    double alpha = 2.0;
    double beta = 2.0;

    void validate() const;
};

/// Normalized classes on the projective bundle X_{m,n}:
/// omega in [D_H] + b*[D_inf], chi in [D_H] + b'*[D_inf].
struct XmnProblem {
    int m = 0;
    int n = 1;
    int k = 1;
    double b = 1.0;
    double b_prime = 1.0;

    void validate() const;
};

enum class Variant { Smooth, ConicBoundary, CurrentBlowup };

/// Sub-case tag for the blown-up projective space family.
enum class PnDetail { None, Concave, ConvexInterior, ConvexTangent, Obstacle };

struct CaseLabel {
    Variant variant = Variant::Smooth;
    PnDetail detail = PnDetail::None;
};

std::string to_string(Variant v);
std::string to_string(PnDetail d);

/// Float inputs within this distance of the class-cone threshold are treated
/// as sitting exactly on the boundary.
inline constexpr double kBoundaryTol = 1e-12;

/// Intersection-number ratio (alpha^k beta^{n-k} - 1) / (beta^n - 1).
double ratio_pn(const PnProblem& p);
Rational ratio_pn_exact(int n, int k, const Rational& alpha, const Rational& beta);

CaseLabel classify_pn(const PnProblem& p);
CaseLabel classify_pn_exact(int n, int k, const Rational& alpha, const Rational& beta);

/// True iff the chi-class lies in the interior of the cone admitting a smooth
/// critical metric; the boundary does not count as membership.
bool cone_membership_pn(const PnProblem& p);

/// ck is the topological constant from gpoly::topological_constant_xmn.
CaseLabel classify_xmn(const XmnProblem& p, double ck);

struct ClassVector {
    std::vector<std::string> basis;
    std::vector<double> coeffs;
    double current_coefficient = 0.0;  // delta-mass along the exceptional locus
};

/// Class of the singular flow limit for a given contact point.
ClassVector limit_class(const PnProblem& p, double lambda);
ClassVector limit_class(const XmnProblem& p, double lambda);

}  // namespace isk::classes
