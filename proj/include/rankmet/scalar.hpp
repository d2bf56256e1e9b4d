#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rankmet/bigint.hpp"
#include "rankmet/rng.hpp"

namespace rankmet {

enum class FieldKind { Q, Qi, Gf };

/// Coefficient field descriptor: id, involution kind and positive-definiteness
/// are all determined by the kind (identity on Q and GF(p), conjugation on
/// Q(i); Q and Q(i) are positive definite, prime fields are not).
struct Field {
    FieldKind kind = FieldKind::Q;
    std::uint64_t p = 0;  // modulus, Gf only

    static Field rationals() { return {FieldKind::Q, 0}; }
    static Field gaussian_rationals() { return {FieldKind::Qi, 0}; }
    static Field prime_field(std::uint64_t p) {
        if (p < 2) throw std::invalid_argument("prime field needs p >= 2");
        for (std::uint64_t d = 2; d * d <= p; ++d)
            if (p % d == 0) throw std::invalid_argument("prime field modulus must be prime");
        return {FieldKind::Gf, p};
    }

    bool positive_definite() const { return kind != FieldKind::Gf; }
    bool star_capable() const { return kind != FieldKind::Gf; }

    bool operator==(const Field& o) const { return kind == o.kind && p == o.p; }

    std::string name() const {
        switch (kind) {
            case FieldKind::Q: return "q";
            case FieldKind::Qi: return "qi";
            default: return "gf:" + std::to_string(p);
        }
    }

    /// Parses "q" | "qi" | "gf:p".
    static Field parse(const std::string& s) {
        if (s == "q") return rationals();
        if (s == "qi") return gaussian_rationals();
        if (s.rfind("gf:", 0) == 0) return prime_field(std::stoull(s.substr(3)));
        throw std::invalid_argument("unknown field: " + s);
    }
};

struct QVal {
    Rat v;
};
struct QiVal {
    Rat re, im;
};
struct GfVal {
    std::uint64_t v, p;
};

/// Exact field element. All arithmetic is exact; fractions are kept in lowest
/// terms by the GMP backend and residues canonical in [0, p).
class Scalar {
  public:
    Scalar() : rep_(QVal{Rat(0)}) {}

    static Scalar q(const Rat& v) { return Scalar(QVal{v}); }
    static Scalar qi(const Rat& re, const Rat& im) { return Scalar(QiVal{re, im}); }
    static Scalar gf(std::uint64_t v, std::uint64_t p) { return Scalar(GfVal{v % p, p}); }

    static Scalar zero(const Field& f) { return from_long(0, f); }
    static Scalar one(const Field& f) { return from_long(1, f); }

    static Scalar from_long(long n, const Field& f) {
        switch (f.kind) {
            case FieldKind::Q: return q(Rat(n));
            case FieldKind::Qi: return qi(Rat(n), Rat(0));
            default: {
                long r = n % static_cast<long>(f.p);
                if (r < 0) r += static_cast<long>(f.p);
                return gf(static_cast<std::uint64_t>(r), f.p);
            }
        }
    }

    static Scalar from_rat(const Rat& r, const Field& f) {
        switch (f.kind) {
            case FieldKind::Q: return q(r);
            case FieldKind::Qi: return qi(r, Rat(0));
            default: {
                Int p(f.p);
                Int n = num(r) % p;
                if (n < 0) n += p;
                Int d = den(r) % p;
                if (d == 0) throw std::invalid_argument("denominator divisible by p");
                GfVal dv{static_cast<std::uint64_t>(d), f.p};
                return gf(static_cast<std::uint64_t>(n), f.p) * Scalar(dv).inverse();
            }
        }
    }

    FieldKind kind() const {
        if (std::holds_alternative<QVal>(rep_)) return FieldKind::Q;
        if (std::holds_alternative<QiVal>(rep_)) return FieldKind::Qi;
        return FieldKind::Gf;
    }

    Field field() const {
        if (auto* g = std::get_if<GfVal>(&rep_)) return Field{FieldKind::Gf, g->p};
        return Field{kind(), 0};
    }

    bool is_zero() const {
        if (auto* a = std::get_if<QVal>(&rep_)) return a->v == 0;
        if (auto* b = std::get_if<QiVal>(&rep_)) return b->re == 0 && b->im == 0;
        return std::get<GfVal>(rep_).v == 0;
    }

    bool is_one() const {
        if (auto* a = std::get_if<QVal>(&rep_)) return a->v == 1;
        if (auto* b = std::get_if<QiVal>(&rep_)) return b->re == 1 && b->im == 0;
        return std::get<GfVal>(rep_).v == 1;
    }

    const Rat& rat() const {
        if (auto* a = std::get_if<QVal>(&rep_)) return a->v;
        throw std::invalid_argument("scalar is not a plain rational");
    }
    const Rat& re() const {
        if (auto* b = std::get_if<QiVal>(&rep_)) return b->re;
        return rat();
    }
    Rat im() const {
        if (auto* b = std::get_if<QiVal>(&rep_)) return b->im;
        return Rat(0);
    }
    const GfVal& gf_val() const { return std::get<GfVal>(rep_); }

    /// The involution of the ambient field: identity on Q and GF(p),
    /// conjugation on Q(i).
    Scalar conj() const {
        if (auto* b = std::get_if<QiVal>(&rep_)) return qi(b->re, -b->im);
        return *this;
    }

    Scalar operator-() const {
        if (auto* a = std::get_if<QVal>(&rep_)) return q(-a->v);
        if (auto* b = std::get_if<QiVal>(&rep_)) return qi(-b->re, -b->im);
        auto g = std::get<GfVal>(rep_);
        return gf(g.v == 0 ? 0 : g.p - g.v, g.p);
    }

    Scalar operator+(const Scalar& o) const {
        // a zero of any variant acts as the neutral element
        if (!(field() == o.field())) {
            if (is_zero()) return o;
            if (o.is_zero()) return *this;
        }
        check_same(o);
        if (auto* a = std::get_if<QVal>(&rep_)) return q(a->v + o.rat());
        if (auto* b = std::get_if<QiVal>(&rep_)) {
            auto& c = std::get<QiVal>(o.rep_);
            return qi(b->re + c.re, b->im + c.im);
        }
        auto g = std::get<GfVal>(rep_);
        auto h = std::get<GfVal>(o.rep_);
        return gf(addmod(g.v, h.v, g.p), g.p);
    }

    Scalar operator-(const Scalar& o) const { return *this + (-o); }

    Scalar operator*(const Scalar& o) const {
        if (!(field() == o.field())) {
            if (is_zero()) return zero(o.field());
            if (o.is_zero()) return zero(field());
        }
        check_same(o);
        if (auto* a = std::get_if<QVal>(&rep_)) return q(a->v * o.rat());
        if (auto* b = std::get_if<QiVal>(&rep_)) {
            auto& c = std::get<QiVal>(o.rep_);
            return qi(b->re * c.re - b->im * c.im, b->re * c.im + b->im * c.re);
        }
        auto g = std::get<GfVal>(rep_);
        auto h = std::get<GfVal>(o.rep_);
        return gf(mulmod(g.v, h.v, g.p), g.p);
    }

    Scalar inverse() const {
        if (is_zero()) throw std::domain_error("inverse of zero");
        if (auto* a = std::get_if<QVal>(&rep_)) return q(Rat(1) / a->v);
        if (auto* b = std::get_if<QiVal>(&rep_)) {
            Rat n = b->re * b->re + b->im * b->im;
            return qi(b->re / n, -b->im / n);
        }
        auto g = std::get<GfVal>(rep_);
        return gf(powmod(g.v, g.p - 2, g.p), g.p);
    }

    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

    bool operator==(const Scalar& o) const {
        if (kind() != o.kind()) return false;
        if (auto* a = std::get_if<QVal>(&rep_)) return a->v == o.rat();
        if (auto* b = std::get_if<QiVal>(&rep_)) {
            auto& c = std::get<QiVal>(o.rep_);
            return b->re == c.re && b->im == c.im;
        }
        auto g = std::get<GfVal>(rep_);
        auto h = std::get<GfVal>(o.rep_);
        return g.p == h.p && g.v == h.v;
    }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    std::string str() const {
        if (auto* a = std::get_if<QVal>(&rep_)) return to_string(a->v);
        if (auto* b = std::get_if<QiVal>(&rep_))
            return to_string(b->re) + (b->im >= 0 ? "+" : "") + to_string(b->im) + "i";
        auto g = std::get<GfVal>(rep_);
        return std::to_string(g.v) + " (mod " + std::to_string(g.p) + ")";
    }

  private:
    explicit Scalar(QVal a) : rep_(a) {}
    explicit Scalar(QiVal a) : rep_(a) {}
    explicit Scalar(GfVal a) : rep_(a) {}

    void check_same(const Scalar& o) const {
        if (!(field() == o.field())) throw std::invalid_argument("scalar field mismatch");
    }

    static std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
        return (a + b) % p;  // p < 2^32 in practice; keep it simple
    }
    static std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
    }
    static std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
        std::uint64_t r = 1 % p;
        while (e) {
            if (e & 1) r = mulmod(r, a, p);
            a = mulmod(a, a, p);
            e >>= 1;
        }
        return r;
    }

    std::variant<QVal, QiVal, GfVal> rep_;
};

/// involute(involute(x)) = x, involute(x*y) = involute(y)*involute(x), fixes
/// the prime field. Errors when x does not belong to f.
inline Scalar involute(const Scalar& x, const Field& f) {
    if (!(x.field() == f)) throw std::invalid_argument("scalar does not belong to field");
    return x.conj();
}

enum class PositiveDefiniteVerdict { Consistent, ZeroSumWithNonzeroEntry };

/// Evaluates sum x_i^* x_i exactly and reports whether it vanishes on a
/// family with a nonzero entry.  Always "consistent" over Q and Q(i).
inline PositiveDefiniteVerdict check_positive_definite(const std::vector<Scalar>& xs,
                                                       const Field& f) {
    Scalar sum = Scalar::zero(f);
    bool any_nonzero = false;
    for (const auto& x : xs) {
        if (!(x.field() == f)) throw std::invalid_argument("scalar does not belong to field");
        any_nonzero = any_nonzero || !x.is_zero();
        sum += involute(x, f) * x;
    }
    if (sum.is_zero() && any_nonzero) return PositiveDefiniteVerdict::ZeroSumWithNonzeroEntry;
    return PositiveDefiniteVerdict::Consistent;
}

inline Scalar random_scalar(Rng& rng, const Field& f, long height = 3) {
    switch (f.kind) {
        case FieldKind::Q: return Scalar::q(rng.small_rat(height));
        case FieldKind::Qi: return Scalar::qi(rng.small_rat(height), rng.small_rat(height));
        default: return Scalar::gf(rng.below(f.p), f.p);
    }
}

}  // namespace rankmet
