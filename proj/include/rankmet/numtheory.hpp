#pragma once

#include <boost/multiprecision/miller_rabin.hpp>
#include <map>
#include <optional>
#include <utility>

#include "rankmet/report.hpp"

namespace rankmet {

/// Trial division up to a fixed bound, then a primality check on the
/// remainder. Throws Infeasible when the leftover cofactor is composite and
/// too large to factor at desk scale.
inline std::map<Int, unsigned> factorize(Int n, unsigned long trial_bound = 1000000) {
    if (n <= 0) throw std::invalid_argument("factorize needs a positive integer");
    std::map<Int, unsigned> out;
    for (Int d = 2; d * d <= n && d <= trial_bound; d == 2 ? d = 3 : d += 2) {
        while (n % d == 0) {
            ++out[d];
            n /= d;
        }
    }
    if (n > 1) {
        if (n <= Int(trial_bound) * Int(trial_bound) ||
            boost::multiprecision::miller_rabin_test(n, 40)) {
            ++out[n];
        } else {
            throw Infeasible("factorization budget exceeded");
        }
    }
    return out;
}

namespace detail {

struct GaussInt {
    Int re, im;
    GaussInt operator*(const GaussInt& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussInt conj() const { return {re, -im}; }
    Int norm() const { return re * re + im * im; }
};

/// Rounded Gaussian division for the Euclidean algorithm.
inline GaussInt gauss_div_round(const GaussInt& a, const GaussInt& b) {
    Int n = b.norm();
    Int xr = a.re * b.re + a.im * b.im;
    Int xi = a.im * b.re - a.re * b.im;
    auto round_div = [](const Int& u, const Int& v) {
        Int q = floor_div(2 * u + v, 2 * v);
        return q;
    };
    return {round_div(xr, n), round_div(xi, n)};
}

inline GaussInt gauss_gcd(GaussInt a, GaussInt b) {
    while (b.norm() != 0) {
        GaussInt q = gauss_div_round(a, b);
        GaussInt r{a.re - (q.re * b.re - q.im * b.im), a.im - (q.re * b.im + q.im * b.re)};
        a = b;
        b = r;
    }
    return a;
}

inline Int powmod(Int a, Int e, const Int& m) {
    Int r = 1;
    a %= m;
    while (e > 0) {
        if ((e & 1) != 0) r = r * a % m;
        a = a * a % m;
        e >>= 1;
    }
    return r;
}

/// c with c^2 = -1 mod p, for prime p = 1 (mod 4): c = a^((p-1)/4) for the
/// first quadratic non-residue a.
inline Int sqrt_minus_one_mod(const Int& p) {
    for (Int a = 2;; ++a) {
        Int leg = powmod(a, (p - 1) / 2, p);
        if (leg == p - 1) return powmod(a, (p - 1) / 4, p);
        if (a > 1000000) throw Infeasible("no quadratic non-residue found in budget");
    }
}

}  // namespace detail

/// Writes a positive integer as a^2 + b^2 when possible (every prime = 3
/// mod 4 to even exponent); constructive via Gaussian gcd.
inline std::optional<std::pair<Int, Int>> two_squares(const Int& n) {
    if (n < 0) return std::nullopt;
    if (n == 0) return std::make_pair(Int(0), Int(0));
    auto fac = factorize(n);
    detail::GaussInt z{1, 0};
    for (auto& [p, e] : fac) {
        if (p == 2) {
            for (unsigned k = 0; k < e; ++k) z = z * detail::GaussInt{1, 1};
        } else if (p % 4 == 3) {
            if (e % 2 != 0) return std::nullopt;
            for (unsigned k = 0; k < e / 2; ++k) z = z * detail::GaussInt{p, 0};
        } else {
            Int c = detail::sqrt_minus_one_mod(p);
            detail::GaussInt pi = detail::gauss_gcd({p, 0}, {c, 1});
            for (unsigned k = 0; k < e; ++k) z = z * pi;
        }
    }
    Int a = abs(z.re), b = abs(z.im);
    if (a * a + b * b != n) throw std::logic_error("two_squares internal check failed");
    return std::make_pair(a, b);
}

/// The class of a positive rational in Q^* modulo norms of Q(i): the product
/// of the primes = 3 (mod 4) appearing to odd exponent (1 for the trivial
/// class). Norms are exactly the positive rationals with trivial class.
inline Int norm_class(const Rat& r) {
    if (r <= 0) throw std::invalid_argument("norm_class needs a positive rational");
    Int work = num(r) * den(r);
    auto fac = factorize(work);
    Int cls = 1;
    for (auto& [p, e] : fac)
        if (p % 4 == 3 && e % 2 == 1) cls *= p;
    return cls;
}

inline bool is_norm(const Rat& r) { return r > 0 ? norm_class(r) == 1 : r == 0; }

/// r = x^2 + y^2 with rational x, y, when r is a norm.
inline std::optional<std::pair<Rat, Rat>> two_squares_rational(const Rat& r) {
    if (r < 0) return std::nullopt;
    if (r == 0) return std::make_pair(Rat(0), Rat(0));
    Int a = num(r), b = den(r);
    auto sq = two_squares(a * b);
    if (!sq) return std::nullopt;
    return std::make_pair(Rat(sq->first) / Rat(b), Rat(sq->second) / Rat(b));
}

}  // namespace rankmet
