#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "latbound/errors.hpp"

namespace latbound {

// All lattice arithmetic is exact.  Integers are arbitrary precision and
// rationals are normalized fractions over them; nothing in the library
// touches floating point.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

// Largest r with r*r <= a.  Requires a >= 0.
inline Int isqrt(const Int& a) {
    if (a < 0) throw BadInput("isqrt of negative value");
    if (a == 0) return 0;
    Int x = Int(1) << (unsigned)((boost::multiprecision::msb(a) / 2) + 1);
    for (;;) {
        Int y = (x + a / x) / 2;
        if (y >= x) break;
        x = y;
    }
    return x;
}

inline bool is_perfect_square(const Int& a, Int& root) {
    if (a < 0) return false;
    root = isqrt(a);
    return root * root == a;
}

// Smallest integer r with r^m >= a.  Requires a >= 0, m >= 1.
inline Int iroot_ceil(const Int& a, unsigned m) {
    if (a <= 0) return 0;
    if (m == 1) return a;
    Int lo = 0, hi = 1;
    auto pw = [&](const Int& v) {
        Int r = 1;
        for (unsigned i = 0; i < m; ++i) r *= v;
        return r;
    };
    while (pw(hi) < a) hi <<= 1;
    while (lo + 1 < hi) {
        Int mid = (lo + hi) / 2;
        if (pw(mid) >= a) hi = mid; else lo = mid;
    }
    return hi;
}

inline Int floor_rat(const Rat& q) {
    Int n = num(q), d = den(q);
    Int f = n / d;
    if (f * d > n) f -= 1;
    return f;
}

inline Int ceil_rat(const Rat& q) {
    Int n = num(q), d = den(q);
    Int c = n / d;
    if (c * d < n) c += 1;
    return c;
}

namespace detail {

inline bool is_prime_int(const Int& p) {
    if (p < 2) return false;
    for (Int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

} // namespace detail

// Canonical text form: "n" for integers, "p/q" otherwise (q > 0, reduced).
inline std::string rat_to_string(const Rat& q) {
    if (den(q) == 1) return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int p(s.substr(0, slash));
        Int q(s.substr(slash + 1));
        if (q == 0) throw BadInput("zero denominator in \"" + s + "\"");
        return Rat(p, q);
    } catch (const std::exception&) {
        throw BadInput("cannot parse rational \"" + s + "\"");
    }
}

} // namespace latbound
