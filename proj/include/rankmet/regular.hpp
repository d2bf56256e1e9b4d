#pragma once

#include <optional>

#include "rankmet/report.hpp"
#include "rankmet/subalgebra.hpp"

namespace rankmet {

/// Witness for a principal one-sided ideal membership claim; multiplying the
/// witness reproduces m exactly (re-verified on construction).
struct IdealMembershipCertificate {
    enum class Kind { Left, Right } kind;  // left: m = b*a, right: m = a*c
    Element witness;

    static IdealMembershipCertificate left(const Element& m, const Element& a, Element b) {
        if (b * a != m) throw ConstructionFailure("left ideal certificate does not multiply back");
        return {Kind::Left, std::move(b)};
    }
    static IdealMembershipCertificate right(const Element& m, const Element& a, Element c) {
        if (a * c != m) throw ConstructionFailure("right ideal certificate does not multiply back");
        return {Kind::Right, std::move(c)};
    }
};

/// Quasi-inverse: y with xyx = x and yxy = y, from a rank factorization with
/// fixed pivot order (deterministic outputs).
inline Element quasi_inverse(const Element& x) {
    std::vector<SpMat> out;
    for (int b = 0; b < x.num_blocks(); ++b) {
        const SpMat& m = x.block(b);
        const int n = m.rows();
        if (m.is_zero()) {
            out.push_back(SpMat(n, n));
            continue;
        }
        SpMat c = column_basis(m);                       // n x r, full column rank
        auto r = solve_right_factor(m, c);               // m = c * r
        if (!r) throw ConstructionFailure("rank factorization failed");
        Field f = x.field();
        SpMat id_r = SpMat::identity(c.cols(), f);
        auto lt = solve_right_factor(id_r, c.transpose());  // c^T * l^T = I
        if (!lt) throw ConstructionFailure("left inverse of column basis failed");
        SpMat l = lt->transpose();                          // l * c = I_r
        auto mm = solve_right_factor(id_r, *r);             // r * mm = I_r
        if (!mm) throw ConstructionFailure("right inverse of row factor failed");
        SpMat y = *mm * l;
        out.push_back(y);
    }
    Element y(x.shape(), x.field(), std::move(out));
    if (x * y * x != x || y * x * y != y)
        throw ConstructionFailure("quasi-inverse postcondition failed");
    return y;
}

/// m in A*a (left ideal): returns b with m = b*a iff, per block, the row
/// space of m is contained in the row space of a.
inline std::optional<IdealMembershipCertificate> in_left_ideal(const Element& m,
                                                               const Element& a) {
    if (m.shape() != a.shape()) throw std::invalid_argument("ideal test shape mismatch");
    std::vector<SpMat> bs;
    for (int b = 0; b < m.num_blocks(); ++b) {
        auto f = solve_left_factor(m.block(b), a.block(b));
        if (!f) return std::nullopt;
        bs.push_back(*f);
    }
    return IdealMembershipCertificate::left(m, a, Element(m.shape(), m.field(), std::move(bs)));
}

/// m in a*A (right ideal): returns c with m = a*c.
inline std::optional<IdealMembershipCertificate> in_right_ideal(const Element& m,
                                                                const Element& a) {
    if (m.shape() != a.shape()) throw std::invalid_argument("ideal test shape mismatch");
    std::vector<SpMat> cs;
    for (int b = 0; b < m.num_blocks(); ++b) {
        auto f = solve_right_factor(m.block(b), a.block(b));
        if (!f) return std::nullopt;
        cs.push_back(*f);
    }
    return IdealMembershipCertificate::right(m, a, Element(m.shape(), m.field(), std::move(cs)));
}

namespace detail {

/// Per-block idempotent with image ker(x-1) and kernel containing ker(x),
/// completed greedily along the standard basis. This yields g^2 = g with
///   x*g = g,  g in xA and Ax,  x - g in A(x - x^2),
/// all re-verified by the caller.
inline SpMat idempotent_block(const SpMat& xb, const Field& f) {
    const int n = xb.rows();
    SpMat fix = kernel_basis(xb - SpMat::identity(n, f));  // n x fdim
    SpMat ker = kernel_basis(xb);                          // n x kdim
    const int fdim = fix.cols();
    // assemble P = [fix | ker | completion], completion from standard basis
    std::vector<std::vector<Scalar>> cols;
    auto push_col = [&](const SpMat& m, int j) {
        std::vector<Scalar> c(n);
        for (int i = 0; i < n; ++i) {
            Scalar v = m.get(i, j);
            if (!v.is_zero()) c[i] = v;
        }
        cols.push_back(std::move(c));
    };
    for (int j = 0; j < fix.cols(); ++j) push_col(fix, j);
    for (int j = 0; j < ker.cols(); ++j) push_col(ker, j);
    // greedy completion: test rank growth column by column
    std::vector<std::vector<Scalar>> work = cols;
    int cur = bareiss_rank(work);
    for (int e = 0; e < n && static_cast<int>(cols.size()) < n; ++e) {
        std::vector<Scalar> unit(n);
        unit[e] = Scalar::one(f);
        auto trial = cols;
        trial.push_back(unit);
        auto tmp = trial;
        int r = bareiss_rank(tmp);
        if (r > cur) {
            cols = std::move(trial);
            cur = r;
        }
    }
    if (static_cast<int>(cols.size()) != n || cur != n)
        throw ConstructionFailure("idempotent basis completion failed");
    SpMat p(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (!cols[j][i].is_zero()) p.set(i, j, cols[j][i]);
    SpMat pinv = inverse(p);
    SpMat diag(n, n);
    for (int j = 0; j < fdim; ++j) diag.set(j, j, Scalar::one(f));
    return p * diag * pinv;
}

}  // namespace detail

struct IdempotentNearResult {
    Element g;                              // in ambient coordinates
    Element g_coords;                       // in A's own coordinates
    IdealMembershipCertificate membership;  // x - g = b*(x - x^2) inside A
};

/// Finds an idempotent g in A with x - g in A(x - x^2); in strong mode
/// additionally g in xA and Ax and x*g = g. Every postcondition is verified
/// exactly at return; failures surface as ConstructionFailure.
inline IdempotentNearResult idempotent_near(const Element& x, const Subalgebra& A,
                                            bool strong = false) {
    auto xa_opt = A.to_coords(x);
    if (!xa_opt) throw std::invalid_argument("idempotent_near: x is not in A");
    const Element& xa = *xa_opt;
    std::vector<SpMat> blocks;
    for (int b = 0; b < xa.num_blocks(); ++b)
        blocks.push_back(detail::idempotent_block(xa.block(b), xa.field()));
    Element ga(xa.shape(), xa.field(), std::move(blocks));

    if (ga * ga != ga) throw ConstructionFailure("idempotent_near: g not idempotent");
    Element defect = xa - xa * xa;
    auto cert = in_left_ideal(xa - ga, defect);
    if (!cert) throw ConstructionFailure("idempotent_near: x - g not in A(x - x^2)");
    if (strong) {
        if (xa * ga != ga) throw ConstructionFailure("idempotent_near: x*g = g failed");
        if (!in_right_ideal(ga, xa))
            throw ConstructionFailure("idempotent_near: g not in xA");
        if (!in_left_ideal(ga, xa)) throw ConstructionFailure("idempotent_near: g not in Ax");
    }
    return {A.from_coords(ga), ga, std::move(*cert)};
}

struct CorrectionReport {
    Rat distance;       // N(rho1 - g)
    Rat epsilon;        // declared bound on N(rho1 - x)
    Rat defect_rank;    // N(x - x^2)
    Audit audit;
    Element g;
};

/// Base-case K(1) = 4 check: corrects x to an idempotent g in A and asserts
/// N(rho1 - g) < 4*eps.
inline CorrectionReport idempotent_correction_bound(const Element& rho1, const Element& x,
                                                    const Subalgebra& A, const PseudoRank& N,
                                                    const Rat& eps) {
    if (!(rho1 * rho1 == rho1))
        throw std::invalid_argument("idempotent_correction_bound: rho1 not idempotent");
    CorrectionReport rep{Rat(0), eps, Rat(0), {}, Element::zero(rho1.shape(), rho1.field())};
    rep.audit.lt("hypothesis: N(rho1 - x) < eps", rank_of(rho1 - x, N), eps);
    auto res = idempotent_near(x, A, false);
    rep.g = res.g;
    rep.defect_rank = rank_of(x - x * x, N);
    rep.distance = rank_of(rho1 - res.g, N);
    rep.audit.le("N(x - g) <= N(x - x^2)", rank_of(x - res.g, N), rep.defect_rank);
    rep.audit.lt("K(1): N(rho1 - g) < 4*eps", rep.distance, Rat(4) * eps);
    return rep;
}

}  // namespace rankmet
