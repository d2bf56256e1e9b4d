#pragma once

#include <optional>

#include "rankmet/matalg.hpp"
#include "rankmet/report.hpp"

namespace rankmet {

/// Blockwise conjugate transpose; an involution of order 2 with
/// (xy)^* = y^* x^*. Defined on Q and Q(i) (and formally on GF(p), where
/// downstream *-operations are rejected instead).
inline Element adjoint(const Element& x) { return x.adjoint(); }

namespace detail {

inline void require_positive_definite(const Field& f, const char* who) {
    if (!f.positive_definite())
        throw std::invalid_argument(std::string(who) + " requires a positive definite field");
}

/// Orthogonal-style projection onto the column space of a block:
/// X (X^* X)^{-1} X^* for a column basis X. Positive definiteness makes the
/// Gram matrix invertible.
inline SpMat lp_block(const SpMat& m, const Field& f) {
    if (m.is_zero()) return SpMat(m.rows(), m.rows());
    SpMat x = column_basis(m);
    SpMat g = x.conj_transpose() * x;
    SpMat gi = inverse(g);
    return x * gi * x.conj_transpose();
}

}  // namespace detail

/// LP(x): the unique projection with LP(x) x = x and image equal to the image
/// of x, per block.
inline Element lp(const Element& x) {
    detail::require_positive_definite(x.field(), "lp");
    std::vector<SpMat> blocks;
    for (int b = 0; b < x.num_blocks(); ++b)
        blocks.push_back(detail::lp_block(x.block(b), x.field()));
    Element e(x.shape(), x.field(), std::move(blocks));
    if (!(e * x == x) || !e.is_projection())
        throw ConstructionFailure("lp postcondition failed");
    return e;
}

/// RP(x) = LP(x^*): the unique projection with x RP(x) = x and row space
/// equal to that of x.
inline Element rp(const Element& x) {
    Element e = lp(adjoint(x));
    if (!(x * e == x)) throw ConstructionFailure("rp postcondition failed");
    return e;
}

/// Relative inverse: the unique y with x y = LP(x) and y x = RP(x).
/// Computed from a rank factorization (Moore-Penrose style), then verified.
inline Element rel_inverse(const Element& x) {
    detail::require_positive_definite(x.field(), "rel_inverse");
    std::vector<SpMat> blocks;
    const Field& f = x.field();
    for (int b = 0; b < x.num_blocks(); ++b) {
        const SpMat& m = x.block(b);
        if (m.is_zero()) {
            blocks.push_back(SpMat(m.rows(), m.rows()));
            continue;
        }
        SpMat c = column_basis(m);
        auto r = solve_right_factor(m, c);
        if (!r) throw ConstructionFailure("rel_inverse rank factorization failed");
        SpMat rr = *r;
        SpMat gc = c.conj_transpose() * c;
        SpMat gr = rr * rr.conj_transpose();
        blocks.push_back(rr.conj_transpose() * inverse(gr) * inverse(gc) * c.conj_transpose());
    }
    Element y(x.shape(), f, std::move(blocks));
    if (x * y != lp(x) || y * x != rp(x))
        throw ConstructionFailure("rel_inverse postcondition failed");
    return y;
}

struct PerturbationReport {
    Rat distance;                    // N(r - s)
    Rat adjoint_lhs, adjoint_rhs;    // N(r^*), N(r)
    std::optional<Rat> ratio_rel;    // N(rbar - sbar) / N(r-s)
    std::optional<Rat> ratio_lp;     // N(LP r - LP s) / N(r-s)
    std::optional<Rat> ratio_rp;
    Audit audit;
};

/// Exact evaluation of the perturbation bounds: the involution is isometric,
/// N(rbar - sbar) <= 3 N(r-s), N(LP r - LP s) <= 4 N(r-s) and dually.
inline PerturbationReport perturbation_ratios(const Element& r, const Element& s,
                                              const PseudoRank& N) {
    detail::require_positive_definite(r.field(), "perturbation_ratios");
    if (r == s) throw std::invalid_argument("perturbation_ratios requires r != s");
    PerturbationReport rep;
    rep.distance = rank_of(r - s, N);
    rep.adjoint_lhs = rank_of(adjoint(r), N);
    rep.adjoint_rhs = rank_of(r, N);
    rep.audit.eq("isometric involution: N(r*) == N(r)", rep.adjoint_lhs, rep.adjoint_rhs);
    rep.audit.eq("isometric involution: N(s*) == N(s)", rank_of(adjoint(s), N), rank_of(s, N));

    Rat d_rel = rank_of(rel_inverse(r) - rel_inverse(s), N);
    Rat d_lp = rank_of(lp(r) - lp(s), N);
    Rat d_rp = rank_of(rp(r) - rp(s), N);
    rep.audit.le("relative inverse: N(rbar - sbar) <= 3 N(r-s)", d_rel, Rat(3) * rep.distance);
    rep.audit.le("left projection: N(LP r - LP s) <= 4 N(r-s)", d_lp, Rat(4) * rep.distance);
    rep.audit.le("right projection: N(RP r - RP s) <= 4 N(r-s)", d_rp, Rat(4) * rep.distance);
    if (rep.distance != 0) {
        rep.ratio_rel = d_rel / rep.distance;
        rep.ratio_lp = d_lp / rep.distance;
        rep.ratio_rp = d_rp / rep.distance;
    }
    return rep;
}

/// Self-adjoint idempotent, validated at construction.
class Projection {
  public:
    explicit Projection(Element e) : e_(std::move(e)) {
        if (!e_.is_projection())
            throw std::invalid_argument("not a projection (e^2 = e = e^* required)");
    }
    const Element& element() const { return e_; }
    const Shape& shape() const { return e_.shape(); }

  private:
    Element e_;
};

/// w with w w^* = target and w^* w = source, validated exactly.
class PartialIsometryWitness {
  public:
    PartialIsometryWitness(Element w, Projection source, Projection target)
        : w_(std::move(w)), src_(std::move(source)), tgt_(std::move(target)) {
        if (w_ * adjoint(w_) != tgt_.element() || adjoint(w_) * w_ != src_.element())
            throw std::invalid_argument("partial isometry witness equations fail");
    }
    const Element& w() const { return w_; }
    const Projection& source() const { return src_; }
    const Projection& target() const { return tgt_; }

  private:
    Element w_;
    Projection src_, tgt_;
};

struct ShrinkResult {
    Projection e1p, e2p;
    PartialIsometryWitness witness;  // e1' = w'' w''^*, e2' = w''^* w''
    Audit audit;
};

/// Given f1 ~* f2 via w and N(e_i - f_i) <= eps, produces projections
/// e_i' <= e_i with e_1' ~* e_2' and N(e_i - e_i') <= 5 eps, following the
/// constructive proof step by step. Every identity is verified exactly.
inline ShrinkResult shrink_to_star_equiv(const Projection& e1, const Projection& e2,
                                         const Projection& f1, const Projection& f2,
                                         const PartialIsometryWitness& w_in,
                                         const PseudoRank& N, const Rat& eps) {
    const Element& w = w_in.w();
    if (w_in.target().element() != f1.element() || w_in.source().element() != f2.element())
        throw std::invalid_argument("witness does not connect f1, f2");
    Audit audit;
    audit.le("hypothesis: N(e1 - f1) <= eps", rank_of(e1.element() - f1.element(), N), eps);
    audit.le("hypothesis: N(e2 - f2) <= eps", rank_of(e2.element() - f2.element(), N), eps);
    audit.require_all("shrink_to_star_equiv");

    const Element& E1 = e1.element();
    const Element& E2 = e2.element();
    Element a = E1 - E1 * w * adjoint(w) * E1;
    if (adjoint(a) != a) throw ConstructionFailure("a is not self-adjoint");
    Element p1 = a.is_zero() ? Element::zero(E1.shape(), E1.field()) : lp(a);
    audit.le("N(p1) = N(a) <= eps", rank_of(a, N), eps);
    Element p1p = E1 - p1;
    if (!(p1p * p1p == p1p) || adjoint(p1p) != p1p)
        throw ConstructionFailure("p1' is not a projection");
    audit.le("N(e1 - p1') <= eps", rank_of(E1 - p1p, N), eps);

    Element wp = p1p * w;
    if (wp * adjoint(wp) != p1p) throw ConstructionFailure("p1' != w' w'^*");

    Element b = E2 - E2 * adjoint(wp) * wp * E2;
    Element e2pp = b.is_zero() ? Element::zero(E2.shape(), E2.field()) : lp(b);
    audit.le("N(e2'') <= 3 eps", rank_of(e2pp, N), Rat(3) * eps);
    Element E2p = E2 - e2pp;
    Element wpp = wp * E2p;
    Element E1p = wpp * adjoint(wpp);

    if (adjoint(wpp) * wpp != E2p) throw ConstructionFailure("e2' != w''^* w''");
    // e_i' <= e_i exactly
    if (E1p * E1 != E1p || E1 * E1p != E1p) throw ConstructionFailure("e1' <= e1 fails");
    if (E2p * E2 != E2p || E2 * E2p != E2p) throw ConstructionFailure("e2' <= e2 fails");

    audit.le("N(e1 - e1') <= 5 eps", rank_of(E1 - E1p, N), Rat(5) * eps);
    audit.le("N(e2 - e2') <= 5 eps", rank_of(E2 - E2p, N), Rat(5) * eps);

    Projection P1(E1p), P2(E2p);
    PartialIsometryWitness wit(wpp, P2, P1);
    return {std::move(P1), std::move(P2), std::move(wit), std::move(audit)};
}

}  // namespace rankmet
