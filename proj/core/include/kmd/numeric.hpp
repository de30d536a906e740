#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

namespace kmd {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::rational<BigInt>;

inline BigInt big_gcd(BigInt a, BigInt b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        BigInt t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// floor of a rational, as an integer
inline BigInt rat_floor(const Rat& r) {
    BigInt q = r.numerator() / r.denominator();
    if (r.numerator() < 0 && q * r.denominator() != r.numerator()) --q;
    return q;
}

inline bool rat_is_integer(const Rat& r) { return r.denominator() == 1; }

}  // namespace kmd
