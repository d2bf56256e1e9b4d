#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rankmet {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Rat make_rat(const Int& n, const Int& d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    return Rat(n) / Rat(d);
}

inline Rat rat_of(long n, long d = 1) { return make_rat(Int(n), Int(d)); }

inline Int pow2(unsigned long k) {
    Int r = 1;
    r <<= k;
    return r;
}

/// 2-adic valuation of a nonzero integer.
inline unsigned long val2(const Int& x) {
    if (x == 0) throw std::invalid_argument("val2(0)");
    Int a = abs(x);
    unsigned long v = 0;
    while ((a & 1) == 0) {
        a >>= 1;
        ++v;
    }
    return v;
}

inline Int int_from_string(const std::string& s) { return Int(s); }

inline std::string to_string(const Int& x) { return x.str(); }
inline std::string to_string(const Rat& r) {
    return num(r).str() + "/" + den(r).str();
}

/// Parses "a/b" or "a" into an exact rational.
inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    return make_rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

inline Int floor_div(const Int& a, const Int& b) {
    Int q, r;
    boost::multiprecision::divide_qr(a, b, q, r);
    if (r != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Largest integer strictly below a/b.
inline Int floor_strict(const Rat& x) {
    Int f = floor_div(num(x), den(x));
    if (Rat(f) == x) --f;
    return f;
}

inline Int floor_rat(const Rat& x) { return floor_div(num(x), den(x)); }

}  // namespace rankmet
