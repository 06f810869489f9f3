#include "isk/classes.hpp"

#include <cmath>
#include <stdexcept>

namespace isk::classes {

void PnProblem::validate() const {
    if (n < 2) throw std::invalid_argument("PnProblem: n must be >= 2");
    if (k < 1 || k > n) throw std::invalid_argument("PnProblem: k must lie in [1, n]");
    if (!(alpha > 1.0)) throw std::invalid_argument("PnProblem: alpha must be > 1");
    if (!(beta > 1.0)) throw std::invalid_argument("PnProblem: beta must be > 1");
}

void XmnProblem::validate() const {
    if (m < 0) throw std::invalid_argument("XmnProblem: m must be >= 0");
    if (n < 1) throw std::invalid_argument("XmnProblem: n must be >= 1");
    if (k < 1 || k > m + n + 1)
        throw std::invalid_argument("XmnProblem: k must lie in [1, m+n+1]");
    if (!(b > 0.0)) throw std::invalid_argument("XmnProblem: b must be > 0");
    if (!(b_prime > 0.0)) throw std::invalid_argument("XmnProblem: b' must be > 0");
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Smooth: return "Smooth";
        case Variant::ConicBoundary: return "ConicBoundary";
        case Variant::CurrentBlowup: return "CurrentBlowup";
    }
    return "?";
}

std::string to_string(PnDetail d) {
    switch (d) {
        case PnDetail::None: return "None";
        case PnDetail::Concave: return "Concave";
        case PnDetail::ConvexInterior: return "ConvexInterior";
        case PnDetail::ConvexTangent: return "ConvexTangent";
        case PnDetail::Obstacle: return "Obstacle";
    }
    return "?";
}

double ratio_pn(const PnProblem& p) {
    p.validate();
    double num = std::pow(p.alpha, p.k) * std::pow(p.beta, p.n - p.k) - 1.0;
    double den = std::pow(p.beta, p.n) - 1.0;
    return num / den;
}

Rational ratio_pn_exact(int n, int k, const Rational& alpha, const Rational& beta) {
    if (n < 2 || k < 1 || k > n || alpha <= 1 || beta <= 1)
        throw std::invalid_argument("ratio_pn_exact: invalid parameters");
    auto pow = [](const Rational& x, int e) {
        Rational r = 1;
        for (int i = 0; i < e; ++i) r *= x;
        return r;
    };
    return (pow(alpha, k) * pow(beta, n - k) - 1) / (pow(beta, n) - 1);
}

namespace {

// Tag the convex sub-cases; the alpha == beta tie is reported as interior.
PnDetail pn_detail(const PnProblem& p, Variant v) {
    if (p.alpha > p.beta) return PnDetail::Concave;
    switch (v) {
        case Variant::Smooth: return PnDetail::ConvexInterior;
        case Variant::ConicBoundary: return PnDetail::ConvexTangent;
        case Variant::CurrentBlowup: return PnDetail::Obstacle;
    }
    return PnDetail::None;
}

}  // namespace

CaseLabel classify_pn(const PnProblem& p) {
    double r = ratio_pn(p);
    double threshold = double(p.n - p.k) / p.n;
    Variant v;
    if (std::abs(r - threshold) <= kBoundaryTol)
        v = Variant::ConicBoundary;
    else
        v = r > threshold ? Variant::Smooth : Variant::CurrentBlowup;
    return {v, pn_detail(p, v)};
}

CaseLabel classify_pn_exact(int n, int k, const Rational& alpha, const Rational& beta) {
    Rational r = ratio_pn_exact(n, k, alpha, beta);
    Rational threshold(n - k, n);
    Variant v;
    if (r == threshold)
        v = Variant::ConicBoundary;
    else
        v = r > threshold ? Variant::Smooth : Variant::CurrentBlowup;
    PnProblem p{n, k, to_double(alpha), to_double(beta)};
    return {v, pn_detail(p, v)};
}

bool cone_membership_pn(const PnProblem& p) {
    return classify_pn(p).variant == Variant::Smooth;
}

CaseLabel classify_xmn(const XmnProblem& p, double ck) {
    p.validate();
    if (p.k > p.n) return {Variant::Smooth, PnDetail::None};
    double threshold = to_double(Rational(binomial(p.n, p.k)));
    if (std::abs(ck - threshold) <= kBoundaryTol)
        return {Variant::ConicBoundary, PnDetail::None};
    return {ck > threshold ? Variant::Smooth : Variant::CurrentBlowup, PnDetail::None};
}

ClassVector limit_class(const PnProblem& p, double lambda) {
    p.validate();
    if (lambda < 1.0 || lambda >= p.beta)
        throw std::invalid_argument("limit_class: lambda must lie in [1, beta)");
    ClassVector v;
    v.basis = {"E_inf", "E_0"};
    v.coeffs = {p.beta, -lambda};
    v.current_coefficient = lambda - 1.0;
    return v;
}

ClassVector limit_class(const XmnProblem& p, double lambda) {
    p.validate();
    if (lambda < 0.0 || lambda >= p.b_prime)
        throw std::invalid_argument("limit_class: lambda must lie in [0, b')");
    ClassVector v;
    v.basis = {"D_H", "D_inf", "E"};
    v.coeffs = {1.0, p.b_prime, -lambda};
    v.current_coefficient = lambda;
    return v;
}

}  // namespace isk::classes
