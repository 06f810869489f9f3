#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace isk {

// Arbitrary-precision rational scalar used by the exact polynomial layer.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Integer binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Integer r = 1;
    for (int i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace isk
