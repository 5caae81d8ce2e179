#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "mdset/error.hpp"

namespace mdset {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt ipow(BigInt base, unsigned exp) {
    BigInt r = 1;
    while (exp) {
        if (exp & 1u) r *= base;
        base *= base;
        exp >>= 1u;
    }
    return r;
}

inline Rational rpow(const Rational& base, unsigned exp) {
    Rational r = 1;
    Rational b = base;
    while (exp) {
        if (exp & 1u) r *= b;
        b *= b;
        exp >>= 1u;
    }
    return r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

} // namespace mdset
