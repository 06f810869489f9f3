#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "isk/rational.hpp"

namespace isk::gpoly {

/// Sparse bivariate polynomial sum c_{ij} f^i x^j with exact rational
/// coefficients. Zero coefficients are never stored.
class BivariatePoly {
  public:
    using Key = std::pair<int, int>;  // (f exponent, x exponent)

    BivariatePoly() = default;

    void add_term(int i, int j, const Rational& c);
    const std::map<Key, Rational>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    int degree_f() const;
    int degree_x() const;

    BivariatePoly operator+(const BivariatePoly& o) const;
    BivariatePoly operator-(const BivariatePoly& o) const;
    BivariatePoly operator*(const BivariatePoly& o) const;
    BivariatePoly operator*(const Rational& c) const;
    bool operator==(const BivariatePoly& o) const { return terms_ == o.terms_; }

    /// Partial derivatives.
    BivariatePoly d_df() const;
    BivariatePoly d_dx() const;

    /// Coefficient of f^i as a polynomial in x alone.
    BivariatePoly coeff_of_f(int i) const;

    Rational eval(const Rational& f, const Rational& x) const;
    double eval(double f, double x) const;

    /// Canonical text form "c * f^i * x^j + ..." with exponents sorted
    /// ascending, for golden-file comparison.
    std::string to_string() const;

  private:
    std::map<Key, Rational> terms_;
};

struct GSpec {
    int m = 0;
    int n = 0;
    int k = 0;
};

/// Antiderivative polynomial of x^m (1+x)^n vanishing at 0; univariate in x.
BivariatePoly g_mn(int m, int n);

/// k-th Taylor coefficient in t of the one-parameter family obtained by
/// shifting both the offset (1 -> 1+t) and the argument (x -> x+tf) of g_mn.
BivariatePoly g_mnk(int m, int n, int k);

/// Split a g_mnk output by powers of f: returns a_0..a_k with
/// P = sum_i f^i a_i(x). Cross-checks the closed form of a_0 and the
/// positivity of every coefficient; a failure signals an algebra bug.
std::vector<BivariatePoly> a_coefficients(const BivariatePoly& p, const GSpec& spec);

/// Ratio g_mnk(m,n,k)(b,b') / g_mn(m,n)(b'), evaluated in exact arithmetic.
Rational topological_constant_xmn_exact(int m, int n, int k, const Rational& b,
                                        const Rational& b_prime);

double topological_constant_xmn(int m, int n, int k, double b, double b_prime);

}  // namespace isk::gpoly
