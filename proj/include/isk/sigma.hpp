#pragma once

#include <cmath>
#include <vector>

#include "isk/rational.hpp"

namespace isk {

inline double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

/// g^{1/k} with cheap paths for the small k used by the reductions.
inline double kroot(double g, int k) {
    switch (k) {
        case 1: return g;
        case 2: return std::sqrt(g);
        case 3: return std::cbrt(g);
        case 4: return std::sqrt(std::sqrt(g));
        default: return std::pow(g, 1.0 / k);
    }
}

struct SigmaPartials {
    double value = 0;
    double d_mu1 = 0;
    double d_mu2 = 0;
    double d_mu3 = 0;
};

/// Elementary symmetric polynomial of degree k of the multiset
/// {mu1 x n, mu2 x m, mu3}, with the term table precomputed so per-node
/// evaluation in kernels stays cheap.
class SigmaTable {
  public:
    SigmaTable() = default;
    SigmaTable(int n, int m, int k) {
        for (int l = 0; l <= 1; ++l) {
            for (int i = 0; i <= n && i + l <= k; ++i) {
                int j = k - i - l;
                if (j < 0 || j > m) continue;
                terms_.push_back({i, j, l, to_double(Rational(binomial(n, i) * binomial(m, j)))});
            }
        }
    }

    double value(double mu1, double mu2, double mu3) const {
        double acc = 0.0;
        for (const auto& t : terms_)
            acc += t.c * ipow(mu1, t.i) * ipow(mu2, t.j) * (t.l ? mu3 : 1.0);
        return acc;
    }

    SigmaPartials partials(double mu1, double mu2, double mu3) const {
        SigmaPartials s;
        for (const auto& t : terms_) {
            double p1 = ipow(mu1, t.i), p2 = ipow(mu2, t.j), p3 = t.l ? mu3 : 1.0;
            s.value += t.c * p1 * p2 * p3;
            if (t.i > 0) s.d_mu1 += t.c * t.i * ipow(mu1, t.i - 1) * p2 * p3;
            if (t.j > 0) s.d_mu2 += t.c * p1 * t.j * ipow(mu2, t.j - 1) * p3;
            if (t.l > 0) s.d_mu3 += t.c * p1 * p2;
        }
        return s;
    }

  private:
    struct Term {
        int i, j, l;
        double c;
    };
    std::vector<Term> terms_;
};

inline double sigma_grouped(int n, double mu1, int m, double mu2, double mu3, int k) {
    return SigmaTable(n, m, k).value(mu1, mu2, mu3);
}

}  // namespace isk
