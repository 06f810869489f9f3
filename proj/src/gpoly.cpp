#include "isk/gpoly.hpp"

#include <algorithm>
#include <sstream>

namespace isk::gpoly {

void BivariatePoly::add_term(int i, int j, const Rational& c) {
    if (c == 0) return;
    auto key = Key{i, j};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

int BivariatePoly::degree_f() const {
    int d = 0;
    for (const auto& [key, c] : terms_) d = std::max(d, key.first);
    return d;
}

int BivariatePoly::degree_x() const {
    int d = 0;
    for (const auto& [key, c] : terms_) d = std::max(d, key.second);
    return d;
}

BivariatePoly BivariatePoly::operator+(const BivariatePoly& o) const {
    BivariatePoly r = *this;
    for (const auto& [key, c] : o.terms_) r.add_term(key.first, key.second, c);
    return r;
}

BivariatePoly BivariatePoly::operator-(const BivariatePoly& o) const {
    BivariatePoly r = *this;
    for (const auto& [key, c] : o.terms_) r.add_term(key.first, key.second, -c);
    return r;
}

BivariatePoly BivariatePoly::operator*(const BivariatePoly& o) const {
    BivariatePoly r;
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_)
            r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return r;
}

BivariatePoly BivariatePoly::operator*(const Rational& c) const {
    BivariatePoly r;
    for (const auto& [key, ct] : terms_) r.add_term(key.first, key.second, ct * c);
    return r;
}

BivariatePoly BivariatePoly::d_df() const {
    BivariatePoly r;
    for (const auto& [key, c] : terms_)
        if (key.first > 0) r.add_term(key.first - 1, key.second, c * key.first);
    return r;
}

BivariatePoly BivariatePoly::d_dx() const {
    BivariatePoly r;
    for (const auto& [key, c] : terms_)
        if (key.second > 0) r.add_term(key.first, key.second - 1, c * key.second);
    return r;
}

BivariatePoly BivariatePoly::coeff_of_f(int i) const {
    BivariatePoly r;
    for (const auto& [key, c] : terms_)
        if (key.first == i) r.add_term(0, key.second, c);
    return r;
}

Rational BivariatePoly::eval(const Rational& f, const Rational& x) const {
    Rational acc = 0;
    for (const auto& [key, c] : terms_) {
        Rational t = c;
        for (int p = 0; p < key.first; ++p) t *= f;
        for (int p = 0; p < key.second; ++p) t *= x;
        acc += t;
    }
    return acc;
}

double BivariatePoly::eval(double f, double x) const {
    double acc = 0;
    for (const auto& [key, c] : terms_) {
        double t = to_double(c);
        for (int p = 0; p < key.first; ++p) t *= f;
        for (int p = 0; p < key.second; ++p) t *= x;
        acc += t;
    }
    return acc;
}

std::string BivariatePoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        if (key.first > 0) os << " * f^" << key.first;
        if (key.second > 0) os << " * x^" << key.second;
    }
    return os.str();
}

BivariatePoly g_mn(int m, int n) {
    if (m < 0 || n < 0) throw std::invalid_argument("g_mn: m, n must be nonnegative");
    BivariatePoly p;
    for (int j = 0; j <= n; ++j) {
        int e = m + j + 1;
        p.add_term(0, e, Rational(binomial(n, j), e));
    }
    return p;
}

BivariatePoly g_mnk(int m, int n, int k) {
    if (m < 0 || n < 0) throw std::invalid_argument("g_mnk: m, n must be nonnegative");
    if (k < 0 || k > m + n + 1)
        throw std::invalid_argument("g_mnk: k out of range [0, m+n+1]");
    // Expand sum_j C(n,j) (1+t)^{n-j} (x+tf)^{m+j+1} / (m+j+1) and collect the
    // t^k coefficient: with q powers of t from the argument and k-q from the
    // offset, the term is C(n,j) C(n-j,k-q) C(m+j+1,q) f^q x^{m+j+1-q} / (m+j+1).
    BivariatePoly p;
    for (int j = 0; j <= n; ++j) {
        int e = m + j + 1;
        for (int q = 0; q <= k; ++q) {
            if (q > e || k - q > n - j) continue;
            Rational c(binomial(n, j) * binomial(n - j, k - q) * binomial(e, q), e);
            p.add_term(q, e - q, c);
        }
    }
    return p;
}

std::vector<BivariatePoly> a_coefficients(const BivariatePoly& p, const GSpec& spec) {
    const int k = spec.k;
    std::vector<BivariatePoly> a(k + 1);
    for (int i = 0; i <= k; ++i) a[i] = p.coeff_of_f(i);
    if (p.degree_f() > k)
        throw std::logic_error("a_coefficients: degree in f exceeds k");
    for (const auto& [key, c] : p.terms())
        if (c < 0) throw std::logic_error("a_coefficients: negative coefficient");
    // a_0 closed form: binom(n,k) * g_mn(m, n-k) for k <= n, zero otherwise.
    BivariatePoly expected;
    if (k <= spec.n) expected = g_mn(spec.m, spec.n - k) * Rational(binomial(spec.n, k));
    if (!(a[0] == expected))
        throw std::logic_error("a_coefficients: a_0 identity failed for m=" +
                               std::to_string(spec.m) + " n=" + std::to_string(spec.n) +
                               " k=" + std::to_string(k));
    return a;
}

Rational topological_constant_xmn_exact(int m, int n, int k, const Rational& b,
                                        const Rational& b_prime) {
    if (b_prime == 0) throw std::invalid_argument("topological constant: b' must be nonzero");
    Rational num = g_mnk(m, n, k).eval(b, b_prime);
    Rational den = g_mn(m, n).eval(Rational(0), b_prime);
    return num / den;
}

double topological_constant_xmn(int m, int n, int k, double b, double b_prime) {
    if (b_prime == 0) throw std::invalid_argument("topological constant: b' must be nonzero");
    return g_mnk(m, n, k).eval(b, b_prime) / g_mn(m, n).eval(0.0, b_prime);
}

}  // namespace isk::gpoly
