#pragma once

#include <functional>
#include <optional>

#include "rankmet/numtheory.hpp"
#include "rankmet/star.hpp"
#include "rankmet/subalgebra.hpp"

namespace rankmet {

/// Decision data for *-equivalence over Q(i): rank plus the class of the
/// Gram determinant in Q^*/norms (squarefree product of primes = 3 mod 4).
struct HermitianClassInvariant {
    int rank = 0;
    Int discriminant_class = 1;

    bool operator==(const HermitianClassInvariant& o) const {
        return rank == o.rank && discriminant_class == o.discriminant_class;
    }
};

namespace detail {

/// Gram-Schmidt diagonalization of a hermitian positive definite Gram matrix:
/// returns (T, d) with T^* G T = diag(d), T unit upper triangular and d
/// positive rationals.
inline std::pair<SpMat, std::vector<Rat>> gram_diagonalize(const SpMat& g, const Field& f) {
    const int r = g.rows();
    SpMat t = SpMat::identity(r, f);
    // columns b_k of t built incrementally; phi(u, v) = u^* G v
    auto phi = [&](const SpMat& u, const SpMat& v) {
        SpMat res = u.conj_transpose() * g * v;
        return res.get(0, 0);
    };
    std::vector<SpMat> basis;
    std::vector<Scalar> diag;
    for (int k = 0; k < r; ++k) {
        SpMat e(r, 1);
        e.set(k, 0, Scalar::one(f));
        SpMat b = e;
        for (int j = 0; j < k; ++j) {
            Scalar coef = phi(basis[j], e) / diag[j];
            b = b - basis[j].scaled(coef);
        }
        Scalar d = phi(b, b);
        if (d.is_zero())
            throw ConstructionFailure("gram_diagonalize: degenerate form (field not definite?)");
        basis.push_back(b);
        diag.push_back(d);
    }
    SpMat tt(r, r);
    for (int k = 0; k < r; ++k)
        for (int i = 0; i < r; ++i) {
            Scalar v = basis[k].get(i, 0);
            if (!v.is_zero()) tt.set(i, k, v);
        }
    std::vector<Rat> d;
    for (auto& s : diag) {
        if (!(s.im() == 0)) throw ConstructionFailure("gram diagonal entry not rational");
        if (s.re() <= 0)
            throw ConstructionFailure("gram diagonal entry not positive (field not definite?)");
        d.push_back(s.re());
    }
    return {tt, d};
}

/// Solves sum d_i |v_i|^2 = c over Q(i) coordinates, for positive rationals
/// d_i and c whose classes admit a solution. Deterministic bounded search;
/// throws Infeasible when the budget runs out.
inline std::vector<Scalar> represent_by_diagonal(const std::vector<Rat>& d, const Rat& c,
                                                 const Field& f, long budget = 40000) {
    const int r = static_cast<int>(d.size());
    std::vector<Scalar> v(r, Scalar::zero(f));
    if (c == 0) return v;
    long spent = 0;
    auto try_norm = [&](const Rat& val) -> std::optional<std::pair<Rat, Rat>> {
        ++spent;
        if (val < 0) return std::nullopt;
        if (!is_norm(val)) return std::nullopt;
        return two_squares_rational(val);
    };
    // single coordinate
    for (int i = 0; i < r; ++i) {
        auto sq = try_norm(c / d[i]);
        if (sq) {
            v[i] = Scalar::qi(sq->first, sq->second);
            return v;
        }
    }
    // pairs (i, j): d_i |x|^2 = c - d_j y^2 with y rational
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < r; ++i) {
            if (i == j) continue;
            for (long m = 1; m <= 24 && spent < budget; ++m)
                for (long n = 1; spent < budget; ++n) {
                    Rat y = rat_of(n, m);
                    Rat rem = c - d[j] * y * y;
                    if (rem < 0) break;
                    auto sq = try_norm(rem / d[i]);
                    if (sq) {
                        v[i] = Scalar::qi(sq->first, sq->second);
                        v[j] = Scalar::qi(y, Rat(0));
                        return v;
                    }
                }
        }
    throw Infeasible("representation search budget exceeded");
}

}  // namespace detail

/// Gram data of a projection's range in a single-block algebra.
inline std::pair<SpMat, SpMat> projection_range_gram(const Projection& p) {
    const SpMat& m = p.element().block(0);
    SpMat x = column_basis(m);
    SpMat g = x.conj_transpose() * x;
    return {x, g};
}

inline HermitianClassInvariant hermitian_invariant(const Projection& p) {
    if (!p.shape().single_block())
        throw std::invalid_argument("hermitian_invariant needs a single-block algebra");
    auto [x, g] = projection_range_gram(p);
    HermitianClassInvariant inv;
    inv.rank = g.rows();
    if (inv.rank == 0) return inv;
    auto [t, d] = detail::gram_diagonalize(g, p.element().field());
    Rat disc = 1;
    for (auto& dd : d) disc *= dd;
    inv.discriminant_class = norm_class(disc);
    return inv;
}

struct StarEquivVerdict {
    bool equal_rank = false;
    bool star_equivalent = false;
    HermitianClassInvariant inv_p, inv_q;
    std::optional<PartialIsometryWitness> witness;
};

/// Decides p ~* q over Q(i) (single block): equal rank and matching Gram
/// discriminant classes; on "yes" constructs and verifies an explicit
/// witness via stepwise isometry construction.
inline StarEquivVerdict decide_star_equivalence(const Projection& p, const Projection& q) {
    const Field& f = p.element().field();
    if (f.kind != FieldKind::Qi)
        throw std::invalid_argument("decide_star_equivalence works over Q(i)");
    if (!p.shape().single_block() || p.shape() != q.shape())
        throw std::invalid_argument("decide_star_equivalence needs one common block");
    StarEquivVerdict verdict;
    verdict.inv_p = hermitian_invariant(p);
    verdict.inv_q = hermitian_invariant(q);
    verdict.equal_rank = verdict.inv_p.rank == verdict.inv_q.rank;
    if (!verdict.equal_rank ||
        verdict.inv_p.discriminant_class != verdict.inv_q.discriminant_class)
        return verdict;
    verdict.star_equivalent = true;

    const int r = verdict.inv_p.rank;
    if (r == 0) {
        Element z = Element::zero(p.shape(), f);
        verdict.witness = PartialIsometryWitness(z, Projection(z), Projection(z));
        return verdict;
    }
    auto [xp, gp] = projection_range_gram(p);
    auto [xq, gq] = projection_range_gram(q);
    auto [tp, dp] = detail::gram_diagonalize(gp, f);
    auto [tq, dq] = detail::gram_diagonalize(gq, f);

    // Build V with V^* diag(dp) V = diag(dq) one column at a time: realize
    // dq[k] inside the orthogonal complement of the columns chosen so far.
    std::vector<SpMat> chosen_cols;  // columns in the Dp coordinates
    std::vector<SpMat> complement;
    for (int i = 0; i < r; ++i) {
        SpMat e(r, 1);
        e.set(i, 0, Scalar::one(f));
        complement.push_back(e);
    }
    auto dp_form = [&](const SpMat& u, const SpMat& w) {
        Scalar s = Scalar::zero(f);
        for (int i = 0; i < r; ++i) {
            Scalar ui = u.get(i, 0), wi = w.get(i, 0);
            if (ui.is_zero() || wi.is_zero()) continue;
            s += ui.conj() * wi * Scalar::from_rat(dp[i], f);
        }
        return s;
    };
    for (int k = 0; k < r; ++k) {
        // diagonalize the current complement span
        std::vector<SpMat> basis;
        std::vector<Scalar> diag;
        for (auto& cvec : complement) {
            SpMat b = cvec;
            for (std::size_t j = 0; j < basis.size(); ++j) {
                Scalar coef = dp_form(basis[j], cvec) / diag[j];
                b = b - basis[j].scaled(coef);
            }
            Scalar dd = dp_form(b, b);
            if (dd.is_zero()) continue;  // dependent on earlier vectors
            basis.push_back(b);
            diag.push_back(dd);
        }
        std::vector<Rat> dcur;
        for (auto& s : diag) dcur.push_back(s.re());
        auto coords = detail::represent_by_diagonal(dcur, dq[k], f);
        SpMat v(r, 1);
        for (std::size_t j = 0; j < basis.size(); ++j)
            if (!coords[j].is_zero()) v = v + basis[j].scaled(coords[j]);
        if (!(dp_form(v, v) == Scalar::from_rat(dq[k], f)))
            throw ConstructionFailure("isometry step: constructed vector has wrong norm");
        chosen_cols.push_back(v);
        complement = basis;  // next round re-orthogonalizes against v
        // remove the v-component from the complement candidates
        for (auto& cvec : complement) {
            Scalar coef = dp_form(v, cvec) / dp_form(v, v);
            cvec = cvec - v.scaled(coef);
        }
    }
    SpMat v(r, r);
    for (int k = 0; k < r; ++k)
        for (int i = 0; i < r; ++i) {
            Scalar s = chosen_cols[k].get(i, 0);
            if (!s.is_zero()) v.set(i, k, s);
        }
    // U = Tp V Tq^{-1}; w = Xp U Gq^{-1} Xq^*
    SpMat u = tp * v * inverse(tq);
    SpMat wmat = xp * u * inverse(gq) * xq.conj_transpose();
    Element w(p.shape(), f, {wmat});
    if (w * adjoint(w) != p.element() || adjoint(w) * w != q.element())
        throw ConstructionFailure("star-equivalence witness verification failed");
    verdict.witness = PartialIsometryWitness(w, q, p);
    return verdict;
}

/// Plain equivalence witness (x, y) with p = xy, q = yx for projections of
/// equal blockwise rank over a positive definite field.
inline std::optional<std::pair<Element, Element>> equivalence_witness(const Projection& p,
                                                                       const Projection& q) {
    if (p.shape() != q.shape()) return std::nullopt;
    const Field& f = p.element().field();
    std::vector<SpMat> xs, ys;
    for (int b = 0; b < p.element().num_blocks(); ++b) {
        const SpMat& pb = p.element().block(b);
        const SpMat& qb = q.element().block(b);
        if (rank(pb) != rank(qb)) return std::nullopt;
        if (pb.is_zero()) {
            xs.push_back(SpMat(pb.rows(), pb.rows()));
            ys.push_back(SpMat(pb.rows(), pb.rows()));
            continue;
        }
        SpMat xp = column_basis(pb), xq = column_basis(qb);
        SpMat gp = xp.conj_transpose() * xp, gq = xq.conj_transpose() * xq;
        xs.push_back(xp * inverse(gq) * xq.conj_transpose());
        ys.push_back(xq * inverse(gp) * xp.conj_transpose());
    }
    Element x(p.shape(), f, std::move(xs));
    Element y(p.shape(), f, std::move(ys));
    if (x * y != p.element() || y * x != q.element()) return std::nullopt;
    return std::make_pair(x, y);
}

/// A *-compatible subalgebra presentation: unit images satisfy
/// iota(e_ij)^* = iota(e_ji).
inline bool is_star_presentation(const Subalgebra& a) {
    const Shape& s = a.structure();
    for (int b = 0; b < s.num_blocks(); ++b)
        for (int i = 0; i < s.block(b); ++i)
            for (int j = 0; j < s.block(b); ++j)
                if (adjoint(a.embedding().unit_image(b, i, j)) !=
                    a.embedding().unit_image(b, j, i))
                    return false;
    return true;
}

/// Standardness: the coordinate image is a 0/1 diagonal in every simple
/// component of the presentation.
inline bool is_standard_projection(const Projection& p, const Subalgebra& presentation) {
    auto coords = presentation.to_coords(p.element());
    if (!coords) return false;
    for (int b = 0; b < coords->num_blocks(); ++b) {
        const SpMat& m = coords->block(b);
        for (int i = 0; i < m.rows(); ++i)
            for (auto& [j, v] : m.row(i))
                if (j != i || !v.is_one()) return false;
    }
    return true;
}

/// Diagonal projection of prescribed rank per block (1s on the leading
/// diagonal positions).
inline Projection standard_projection(const Subalgebra& a, const std::vector<int>& ranks) {
    const Shape& s = a.structure();
    if (static_cast<int>(ranks.size()) != s.num_blocks())
        throw std::invalid_argument("standard_projection rank count mismatch");
    Element e = Element::zero(s, a.field());
    for (int b = 0; b < s.num_blocks(); ++b) {
        if (ranks[b] > s.block(b)) throw std::invalid_argument("standard projection rank too big");
        for (int i = 0; i < ranks[b]; ++i) e.block_mut(b).set(i, i, Scalar::one(a.field()));
    }
    return Projection(a.from_coords(e));
}

struct HqsEntry {
    Rat requested_eps;
    Rat achieved_distance;
    int component = -1;
    bool ok = false;
};

struct HqsCertificate {
    bool ok = false;
    int failed_clause = 0;  // 1 or 2 (with sub-clause letter in message)
    std::string detail;
    std::vector<HqsEntry> entries;
    std::vector<HermitianClassInvariant> component_invariants;
};

namespace detail {

/// Projection onto the span of a subset of Gram-orthogonalized range vectors.
inline Projection span_subprojection(const SpMat& y, const std::vector<Rat>& d,
                                     const std::vector<int>& subset, const Shape& shape,
                                     const Field& f) {
    if (subset.empty()) return Projection(Element::zero(shape, f));
    SpMat acc(y.rows(), y.rows());
    for (int idx : subset) {
        SpMat col(y.rows(), 1);
        for (int i = 0; i < y.rows(); ++i) {
            Scalar s = y.get(i, idx);
            if (!s.is_zero()) col.set(i, 0, s);
        }
        acc = acc + (col * col.conj_transpose()).scaled(Scalar::from_rat(Rat(1) / d[idx], f));
    }
    return Projection(Element(shape, f, {acc}));
}

/// Largest subset of the diagonal values whose product has trivial norm
/// class; the empty subset (product 1) is always admissible.
inline std::vector<int> best_trivial_class_subset(const std::vector<Rat>& d) {
    const int r = static_cast<int>(d.size());
    if (r > 16) throw Infeasible("subset search too large at desk scale");
    std::vector<int> best;
    for (unsigned mask = 1; mask < (1u << r); ++mask) {
        Rat prod = 1;
        std::vector<int> subset;
        for (int i = 0; i < r; ++i)
            if (mask & (1u << i)) {
                prod *= d[i];
                subset.push_back(i);
            }
        if (subset.size() <= best.size()) continue;
        if (norm_class(prod) == 1) best = subset;
    }
    return best;
}

}  // namespace detail

/// Element of A's structure shape that is `blk` in component b and zero
/// elsewhere.
inline Element lift_block(const Element& reference, int b, const Element& blk) {
    Element out = Element::zero(reference.shape(), reference.field());
    out.block_mut(b) = blk.block(0);
    return out;
}

/// Certifies the hereditarily quasi-standard property at desk scale: clause
/// (1) exactly; clause (2) for a deterministic family of subprojections cut
/// from the diagonalized range, recursing to the requested depth. The
/// enlarged algebra is taken to be A itself (clause (d) trivially).
inline HqsCertificate certify_hereditarily_quasi_standard(const Projection& p,
                                                          const Subalgebra& A,
                                                          const PseudoRank& ambient_rank,
                                                          const Rat& eps, int depth) {
    HqsCertificate cert;
    if (!is_star_presentation(A)) {
        cert.failed_clause = 1;
        cert.detail = "presentation is not a *-isomorphism onto a standard matricial *-algebra";
        return cert;
    }
    auto coords = A.to_coords(p.element());
    if (!coords) {
        cert.failed_clause = 1;
        cert.detail = "projection is not in A";
        return cert;
    }
    const Field& f = A.field();
    // clause (1): p ~* standard inside each simple component
    for (int b = 0; b < coords->num_blocks(); ++b) {
        Shape comp{A.structure().block(b)};
        SpMat pb = coords->block(b);
        Projection pc{Element(comp, f, {pb})};
        HermitianClassInvariant inv = hermitian_invariant(pc);
        cert.component_invariants.push_back(inv);
        if (inv.discriminant_class != 1) {
            cert.failed_clause = 1;
            cert.component_invariants.back() = inv;
            cert.detail = "component " + std::to_string(b) +
                          " range class obstructs *-equivalence to a diagonal projection";
            return cert;
        }
    }
    cert.ok = true;
    if (depth <= 0) return cert;

    // clause (2) on the deterministic prefix family
    for (int b = 0; b < coords->num_blocks(); ++b) {
        Shape comp{A.structure().block(b)};
        SpMat pb = coords->block(b);
        if (pb.is_zero()) continue;
        Projection pc{Element(comp, f, {pb})};
        auto [x, g] = projection_range_gram(pc);
        auto [t, d] = detail::gram_diagonalize(g, f);
        SpMat y = x * t;  // orthogonalized range basis, y^* y = diag(d)
        int r = static_cast<int>(d.size());
        std::vector<int> cuts;
        if (r >= 2) cuts.push_back(r - 1);
        if (r >= 1) cuts.push_back((r + 1) / 2);
        for (int cut : cuts) {
            std::vector<int> prefix;
            for (int i = 0; i < cut; ++i) prefix.push_back(i);
            std::vector<Rat> dsub;
            for (int i : prefix) dsub.push_back(d[i]);
            Projection psub = detail::span_subprojection(y, d, prefix, comp, f);
            // find p'' <= p' with trivial class and distance < eps
            auto keep = detail::best_trivial_class_subset(dsub);
            Projection psub2 = detail::span_subprojection(y, d, keep, comp, f);
            HqsEntry entry;
            entry.component = b;
            entry.requested_eps = eps;
            // distance measured in the ambient pseudo-rank
            Element dp = A.from_coords(lift_block(*coords, b, psub.element())) -
                         A.from_coords(lift_block(*coords, b, psub2.element()));
            entry.achieved_distance = rank_of(dp, ambient_rank);
            entry.ok = entry.achieved_distance < eps;
            cert.entries.push_back(entry);
            if (!entry.ok) {
                cert.ok = false;
                cert.failed_clause = 2;
                cert.detail = "clause (c): no close enough standard subprojection (component " +
                              std::to_string(b) + ")";
                return cert;
            }
            if (depth > 1) {
                // recurse on the certified subprojection
                Projection lifted(A.from_coords(lift_block(*coords, b, psub2.element())));
                auto sub = certify_hereditarily_quasi_standard(lifted, A, ambient_rank, eps,
                                                               depth - 1);
                if (!sub.ok) {
                    cert.ok = false;
                    cert.failed_clause = sub.failed_clause;
                    cert.detail = "recursive certification failed: " + sub.detail;
                    return cert;
                }
            }
        }
    }
    return cert;
}

struct ExhaustionStage {
    Projection p_sub, q_sub;
    Element witness;
    Rat residual_p, residual_q;
};

struct ExhaustionTranscript {
    std::vector<ExhaustionStage> stages;
    bool terminated_zero = false;
    Audit audit;
};

struct OracleReturn {
    Projection p_sub, q_sub;
    Element witness;
};

using SubEquivOracle = std::function<std::optional<OracleReturn>(
    const Projection& p_res, const Projection& q_res, const Rat& bound)>;

/// Finite-stage exhaustion: builds orthogonal families {p_n}, {q_n} with
/// p_n ~* q_n, residuals below 2^{-n}, and the Cauchy tail bound
/// N(w_n) < 2^{-n+1} asserted at every stage.
inline ExhaustionTranscript lp_rp_exhaustion(const Projection& p, const Projection& q,
                                             const SubEquivOracle& oracle, int stages,
                                             const PseudoRank& N) {
    ExhaustionTranscript tr;
    if (!equivalence_witness(p, q))
        throw std::invalid_argument("lp_rp_exhaustion requires equivalent projections");
    Element psum = Element::zero(p.shape(), p.element().field());
    Element qsum = psum;
    for (int n = 1; n <= stages; ++n) {
        Element pres = p.element() - psum;
        Element qres = q.element() - qsum;
        Projection presj(pres), qresj(qres);
        if (pres.is_zero() && qres.is_zero()) {
            tr.terminated_zero = true;
            break;
        }
        Rat bound = Rat(1) / Rat(pow2(static_cast<unsigned long>(n)));
        auto got = oracle(presj, qresj, bound);
        if (!got)
            throw ConstructionFailure("subequivalence oracle failed at stage " +
                                      std::to_string(n));
        // verify oracle postconditions exactly
        const Element& pn = got->p_sub.element();
        const Element& qn = got->q_sub.element();
        if (pn * pres != pn || pres * pn != pn)
            throw ConstructionFailure("oracle p_sub not below the residual");
        if (qn * qres != qn || qres * qn != qn)
            throw ConstructionFailure("oracle q_sub not below the residual");
        if (got->witness * adjoint(got->witness) != pn ||
            adjoint(got->witness) * got->witness != qn)
            throw ConstructionFailure("oracle witness equations fail");
        tr.audit.lt("stage " + std::to_string(n) + ": N(p_res - p_n) < 2^-n",
                    rank_of(pres - pn, N), bound);
        tr.audit.lt("stage " + std::to_string(n) + ": N(q_res - q_n) < 2^-n",
                    rank_of(qres - qn, N), bound);
        tr.audit.lt("stage " + std::to_string(n) + ": tail N(w_n) < 2^-(n-1)",
                    rank_of(got->witness, N),
                    n >= 2 ? Rat(1) / Rat(pow2(static_cast<unsigned long>(n - 1))) : Rat(2));
        psum = psum + pn;
        qsum = qsum + qn;
        tr.audit.lt("stage " + std::to_string(n) + ": N(p - sum p_i) < 2^-n",
                    rank_of(p.element() - psum, N),
                    Rat(1) / Rat(pow2(static_cast<unsigned long>(n))));
        tr.audit.lt("stage " + std::to_string(n) + ": N(q - sum q_i) < 2^-n",
                    rank_of(q.element() - qsum, N),
                    Rat(1) / Rat(pow2(static_cast<unsigned long>(n))));
        ExhaustionStage st{got->p_sub, got->q_sub, got->witness,
                           rank_of(p.element() - psum, N), rank_of(q.element() - qsum, N)};
        tr.stages.push_back(std::move(st));
        if ((p.element() - psum).is_zero() && (q.element() - qsum).is_zero()) {
            tr.terminated_zero = true;
            break;
        }
    }
    return tr;
}

/// Default oracle over Q(i): cuts both residual ranges down to subsets of
/// their orthogonalized bases with matching discriminant classes, then lets
/// decide_star_equivalence build the witness.
inline SubEquivOracle star_equiv_backed_oracle() {
    return [](const Projection& pres, const Projection& qres,
              const Rat& bound) -> std::optional<OracleReturn> {
        const Field f = pres.element().field();
        if (f.kind != FieldKind::Qi || !pres.shape().single_block()) return std::nullopt;
        const int n = pres.shape().block(0);
        auto [xp, gp] = projection_range_gram(pres);
        auto [xq, gq] = projection_range_gram(qres);
        if (gp.rows() != gq.rows()) return std::nullopt;
        const int r = gp.rows();
        if (r == 0) return std::nullopt;
        auto [tp, dp] = detail::gram_diagonalize(gp, f);
        auto [tq, dq] = detail::gram_diagonalize(gq, f);
        SpMat yp = xp * tp, yq = xq * tq;
        if (r > 14) return std::nullopt;
        // cut as little as possible; the defect after cutting k must beat the
        // requested bound
        for (int k = 0; k <= r; ++k) {
            const int want = r - k;
            if (!(Rat(k) / Rat(n) < bound)) continue;
            std::vector<std::vector<int>> subs_p, subs_q;
            std::vector<Int> cls_p, cls_q;
            for (unsigned mask = 0; mask < (1u << r); ++mask) {
                if (__builtin_popcount(mask) != want) continue;
                Rat prod_p = 1, prod_q = 1;
                std::vector<int> subset;
                for (int i = 0; i < r; ++i)
                    if (mask & (1u << i)) {
                        subset.push_back(i);
                        prod_p *= dp[i];
                        prod_q *= dq[i];
                    }
                subs_p.push_back(subset);
                cls_p.push_back(want == 0 ? Int(1) : norm_class(prod_p));
                subs_q.push_back(subset);
                cls_q.push_back(want == 0 ? Int(1) : norm_class(prod_q));
            }
            for (std::size_t a = 0; a < subs_p.size(); ++a)
                for (std::size_t b = 0; b < subs_q.size(); ++b) {
                    if (cls_p[a] != cls_q[b]) continue;
                    Projection p1 =
                        detail::span_subprojection(yp, dp, subs_p[a], pres.shape(), f);
                    Projection q1 =
                        detail::span_subprojection(yq, dq, subs_q[b], qres.shape(), f);
                    if (want == 0) return OracleReturn{p1, q1, Element::zero(pres.shape(), f)};
                    auto verdict = decide_star_equivalence(p1, q1);
                    if (!verdict.star_equivalent || !verdict.witness) continue;
                    return OracleReturn{p1, q1, verdict.witness->w()};
                }
        }
        return std::nullopt;
    };
}

}  // namespace rankmet
