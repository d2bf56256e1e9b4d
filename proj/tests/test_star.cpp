#include <catch2/catch_amalgamated.hpp>

#include "rankmet/numtheory.hpp"
#include "rankmet/star.hpp"
#include "rankmet/starequiv.hpp"

using namespace rankmet;

namespace {
Field Q = Field::rationals();
Field QI = Field::gaussian_rationals();

Projection rank1_projection(const std::vector<Scalar>& v, int n) {
    SpMat col(n, 1);
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (!v[i].is_zero()) col.set(i, 0, v[i]);
    SpMat g = col.conj_transpose() * col;
    SpMat p = col * inverse(g) * col.conj_transpose();
    return Projection(Element(Shape{n}, v[0].field(), {p}));
}

/// Brute-force rank-1 witness search over scaled range vectors with bounded
/// height; independent of the decision procedure.
bool brute_force_rank1_star_equiv(const Projection& p, const Projection& q, long height) {
    SpMat xp = column_basis(p.element().block(0));
    SpMat xq = column_basis(q.element().block(0));
    for (long ar = -height; ar <= height; ++ar)
        for (long ai = -height; ai <= height; ++ai)
            for (long d = 1; d <= height; ++d) {
                if (ar == 0 && ai == 0) continue;
                Scalar c = Scalar::qi(rat_of(ar, d), rat_of(ai, d));
                SpMat w = (xp * xq.conj_transpose()).scaled(c);
                Element we(p.shape(), QI, {w});
                if (we * adjoint(we) == p.element() && adjoint(we) * we == q.element())
                    return true;
            }
    return false;
}
}  // namespace

TEST_CASE("two_squares and norm classes") {
    auto s = two_squares(Int(5));
    REQUIRE(s.has_value());
    CHECK(s->first * s->first + s->second * s->second == 5);
    CHECK(!two_squares(Int(3)).has_value());
    auto big = two_squares(Int(1105));  // 5 * 13 * 17
    REQUIRE(big.has_value());
    CHECK(big->first * big->first + big->second * big->second == 1105);

    CHECK(norm_class(rat_of(2)) == 1);
    CHECK(norm_class(rat_of(3)) == 3);
    CHECK(norm_class(rat_of(9)) == 1);
    CHECK(norm_class(rat_of(3, 7)) == 21);
    CHECK(is_norm(rat_of(5, 13)));
    auto tsr = two_squares_rational(rat_of(5, 13));
    REQUIRE(tsr.has_value());
    CHECK(tsr->first * tsr->first + tsr->second * tsr->second == rat_of(5, 13));
}

TEST_CASE("adjoint basics") {
    Shape s{2};
    CHECK(adjoint(Element::unit(s, QI, 0, 0, 1)) == Element::unit(s, QI, 0, 1, 0));
    Element i_e11 = Element::unit(s, QI, 0, 0, 0).scaled(Scalar::qi(Rat(0), Rat(1)));
    CHECK(adjoint(i_e11) == Element::unit(s, QI, 0, 0, 0).scaled(Scalar::qi(Rat(0), Rat(-1))));
    Rng rng(3);
    for (int t = 0; t < 15; ++t) {
        Element x = random_element(rng, s, QI);
        Element y = random_element(rng, s, QI);
        CHECK(adjoint(x * y) == adjoint(y) * adjoint(x));
        CHECK(adjoint(adjoint(x)) == x);
    }
}

TEST_CASE("lp and rp basics") {
    Shape s{2};
    Element inv(s, QI, {SpMat::from_rows(QI, {{1, 1}, {0, 1}})});
    CHECK(lp(inv) == Element::identity(s, QI));
    Element e12 = Element::unit(s, QI, 0, 0, 1);
    CHECK(lp(e12) == Element::unit(s, QI, 0, 0, 0));
    CHECK(rp(e12) == Element::unit(s, QI, 0, 1, 1));

    // column (1, 1+i): lp = (1/3) [[1, 1-i],[1+i, 2]]
    SpMat col(2, 2);
    col.set(0, 0, Scalar::one(QI));
    col.set(1, 0, Scalar::qi(Rat(1), Rat(1)));
    Element x(s, QI, {col});
    Element l = lp(x);
    CHECK(l.block(0).get(0, 0) == Scalar::qi(rat_of(1, 3), Rat(0)));
    CHECK(l.block(0).get(0, 1) == Scalar::qi(rat_of(1, 3), rat_of(-1, 3)));
    CHECK(l.block(0).get(1, 0) == Scalar::qi(rat_of(1, 3), rat_of(1, 3)));
    CHECK(l.block(0).get(1, 1) == Scalar::qi(rat_of(2, 3), Rat(0)));
    CHECK(l.is_projection());
    CHECK(l * x == x);
}

TEST_CASE("lp uniqueness properties and gf rejection") {
    Shape s{3};
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        Element x = random_element(rng, s, Q);
        Element l = lp(x);
        CHECK(l.is_projection());
        CHECK(l * x == x);
        CHECK(rank_norm(l) == rank_norm(x));
    }
    Field g5 = Field::prime_field(5);
    Element y = Element::unit(Shape{2}, g5, 0, 0, 1);
    CHECK_THROWS(lp(y));
}

TEST_CASE("rel_inverse basics and uniqueness") {
    Shape s{2};
    Element inv(s, Q, {SpMat::from_rows(Q, {{2, 1}, {1, 1}})});
    CHECK(rel_inverse(inv) == Element(s, Q, {inverse(inv.block(0))}));
    CHECK(rel_inverse(Element::unit(s, Q, 0, 0, 1)) == Element::unit(s, Q, 0, 1, 0));
    SpMat d(2, 2);
    d.set(0, 0, Scalar::from_long(2, Q));
    Element dg(s, Q, {d});
    Element y = rel_inverse(dg);
    CHECK(y.block(0).get(0, 0) == Scalar::q(rat_of(1, 2)));
    CHECK(y.block(0).get(1, 1).is_zero());

    // uniqueness: a perturbed candidate cannot satisfy both products
    Rng rng(9);
    for (int t = 0; t < 10; ++t) {
        Element x = random_element(rng, s, QI);
        Element rel = rel_inverse(x);
        CHECK(x * rel == lp(x));
        CHECK(rel * x == rp(x));
        Element cand = rel + Element::unit(s, QI, 0, rng.below(2), rng.below(2))
                                 .scaled(Scalar::qi(rng.small_rat(2), Rat(0)));
        if (cand != rel) {
            bool both = (x * cand == lp(x)) && (cand * x == rp(x)) &&
                        (cand * x * cand == cand);
            CHECK(!both);
        }
    }
}

TEST_CASE("isometric involution on samples") {
    Shape s{2, 2};
    PseudoRank n(s, {rat_of(1, 2), rat_of(1, 2)});
    Rng rng(13);
    for (int t = 0; t < 20; ++t) {
        Element x = random_element(rng, s, QI);
        CHECK(rank_of(adjoint(x), n) == rank_of(x, n));
    }
}

TEST_CASE("perturbation ratios on pinned cases") {
    Shape s{2};
    PseudoRank n = PseudoRank::unique(s);
    auto rep = perturbation_ratios(Element::unit(s, QI, 0, 0, 0),
                                   Element::unit(s, QI, 0, 1, 1), n);
    CHECK(rep.audit.all_ok());
    CHECK(rep.distance == Rat(1));

    // r = e12, s = e12 + e11: N(r - s) = 1/2
    auto rep2 = perturbation_ratios(
        Element::unit(s, QI, 0, 0, 1),
        Element::unit(s, QI, 0, 0, 1) + Element::unit(s, QI, 0, 0, 0), n);
    CHECK(rep2.distance == rat_of(1, 2));
    CHECK(rep2.audit.all_ok());
}

TEST_CASE("perturbation bounds randomized") {
    Shape s{3};
    PseudoRank n = PseudoRank::unique(s);
    for (int t = 0; t < 40; ++t) {
        Rng rng = Rng::derive(777, t);
        Element r = random_element(rng, s, QI, 1);
        Element sd = r + Element::unit(s, QI, 0, rng.below(3), rng.below(3))
                             .scaled(random_scalar(rng, QI, 1));
        if (r == sd) continue;
        auto rep = perturbation_ratios(r, sd, n);
        CHECK(rep.audit.all_ok());
        if (rep.ratio_rel) CHECK(*rep.ratio_rel <= Rat(3));
        if (rep.ratio_lp) CHECK(*rep.ratio_lp <= Rat(4));
    }
}

TEST_CASE("shrink_to_star_equiv identity case") {
    Shape s{2};
    Projection e11{Element::unit(s, QI, 0, 0, 0)};
    PartialIsometryWitness w(e11.element(), e11, e11);
    PseudoRank n = PseudoRank::unique(s);
    auto res = shrink_to_star_equiv(e11, e11, e11, e11, w, n, Rat(0));
    CHECK(res.audit.all_ok());
    CHECK(res.e1p.element() == e11.element());
    CHECK(res.e2p.element() == e11.element());
    CHECK(res.witness.w() == e11.element());
}

TEST_CASE("shrink_to_star_equiv with a moved projection") {
    Shape s{2};
    PseudoRank n = PseudoRank::unique(s);
    Projection f{Element::unit(s, QI, 0, 0, 0)};
    PartialIsometryWitness w(f.element(), f, f);
    Projection e2 = rank1_projection({Scalar::one(QI), Scalar::one(QI)}, 2);
    Rat eps = rank_of(e2.element() - f.element(), n);
    auto res = shrink_to_star_equiv(f, e2, f, f, w, n, eps);
    CHECK(res.audit.all_ok());
    CHECK(res.e1p.element() * f.element() == res.e1p.element());
    CHECK(res.e2p.element() * e2.element() == res.e2p.element());
}

TEST_CASE("shrink_to_star_equiv randomized campaign in M4(Q(i))") {
    Shape s{4};
    PseudoRank n = PseudoRank::unique(s);
    int ran = 0;
    for (int t = 0; t < 25; ++t) {
        Rng rng = Rng::derive(31337, t);
        int r = 1 + static_cast<int>(rng.below(3));
        Element fd = Element::zero(s, QI);
        for (int i = 0; i < r; ++i) fd.block_mut(0).set(i, i, Scalar::one(QI));
        Projection f{fd};
        PartialIsometryWitness w(fd, f, f);
        // e1: a rational-rotation conjugate of f
        int a = static_cast<int>(rng.below(3));
        SpMat u = SpMat::identity(4, QI);
        u.set(a, a, Scalar::qi(rat_of(3, 5), Rat(0)));
        u.set(a, a + 1, Scalar::qi(rat_of(4, 5), Rat(0)));
        u.set(a + 1, a, Scalar::qi(rat_of(-4, 5), Rat(0)));
        u.set(a + 1, a + 1, Scalar::qi(rat_of(3, 5), Rat(0)));
        Element e1{Shape{4}, QI, {u * fd.block(0) * u.conj_transpose()}};
        REQUIRE(e1.is_projection());
        Rat eps1 = rank_of(e1 - fd, n);
        auto res = shrink_to_star_equiv(Projection(e1), f, f, f, w, n,
                                        eps1 > 0 ? eps1 : Rat(1));
        CHECK(res.audit.all_ok());
        ++ran;
    }
    CHECK(ran > 0);
}

TEST_CASE("decide_star_equivalence: identical projections") {
    Projection p = rank1_projection({Scalar::one(QI), Scalar::zero(QI)}, 2);
    auto v = decide_star_equivalence(p, p);
    CHECK(v.star_equivalent);
    REQUIRE(v.witness.has_value());
}

TEST_CASE("decide_star_equivalence: discriminant 3 obstruction") {
    // spans (1,0) and (1, 1+i): Gram discriminants 1 and 3
    Projection p = rank1_projection({Scalar::one(QI), Scalar::zero(QI)}, 2);
    Projection q = rank1_projection({Scalar::one(QI), Scalar::qi(Rat(1), Rat(1))}, 2);
    CHECK(hermitian_invariant(p).discriminant_class == 1);
    CHECK(hermitian_invariant(q).discriminant_class == 3);
    auto v = decide_star_equivalence(p, q);
    CHECK(v.equal_rank);        // equivalent (equal rank)...
    CHECK(!v.star_equivalent);  // ...but not *-equivalent
    CHECK(equivalence_witness(p, q).has_value());
    CHECK(!brute_force_rank1_star_equiv(p, q, 3));
}

TEST_CASE("decide_star_equivalence: discriminant 2 is a norm") {
    Projection p = rank1_projection({Scalar::one(QI), Scalar::zero(QI)}, 2);
    Projection q = rank1_projection({Scalar::one(QI), Scalar::one(QI)}, 2);
    CHECK(hermitian_invariant(q).discriminant_class == 1);  // 2 = 1^2 + 1^2
    auto v = decide_star_equivalence(p, q);
    CHECK(v.star_equivalent);
    REQUIRE(v.witness.has_value());
    CHECK(brute_force_rank1_star_equiv(p, q, 3));
}

TEST_CASE("decide_star_equivalence agrees with brute force on height <= 3 family") {
    std::vector<Projection> family;
    family.push_back(rank1_projection({Scalar::zero(QI), Scalar::one(QI)}, 2));
    for (long a = -1; a <= 1; ++a)
        for (long b = -1; b <= 1; ++b)
            family.push_back(
                rank1_projection({Scalar::one(QI), Scalar::qi(Rat(a), Rat(b))}, 2));
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = 0; j < family.size(); ++j) {
            auto v = decide_star_equivalence(family[i], family[j]);
            bool brute = brute_force_rank1_star_equiv(family[i], family[j], 3);
            CHECK(v.star_equivalent == brute);
            if (v.star_equivalent) REQUIRE(v.witness.has_value());
        }
}

TEST_CASE("rank-2 star equivalence witness in M3") {
    SpMat cols(3, 2);
    cols.set(0, 0, Scalar::one(QI));
    cols.set(1, 0, Scalar::one(QI));
    cols.set(2, 1, Scalar::one(QI));
    SpMat g = cols.conj_transpose() * cols;
    SpMat proj = cols * inverse(g) * cols.conj_transpose();
    Projection q{Element(Shape{3}, QI, {proj})};
    Element pd = Element::unit(Shape{3}, QI, 0, 0, 0) + Element::unit(Shape{3}, QI, 0, 1, 1);
    Projection p{pd};
    CHECK(hermitian_invariant(q).discriminant_class == 1);  // det = 2
    auto v = decide_star_equivalence(p, q);
    CHECK(v.star_equivalent);
    REQUIRE(v.witness.has_value());
}

TEST_CASE("standard projections and presentations") {
    auto emb = standard_embedding(Shape{2, 2}, Shape{4}, QI, {{1, 1}}, true);
    Subalgebra A(emb);
    CHECK(is_star_presentation(A));
    Projection std_p = standard_projection(A, {1, 0});
    CHECK(is_standard_projection(std_p, A));
    Projection not_std = standard_projection(A, {0, 1});
    CHECK(is_standard_projection(not_std, A));  // diagonal in the 2nd block
}

TEST_CASE("hereditarily quasi-standard certificate failure on obstructed class") {
    Subalgebra A = Subalgebra::full(Shape{2}, QI);
    Projection q = rank1_projection({Scalar::one(QI), Scalar::qi(Rat(1), Rat(1))}, 2);
    auto cert = certify_hereditarily_quasi_standard(q, A, PseudoRank::unique(Shape{2}),
                                                    rat_of(1, 4), 1);
    CHECK(!cert.ok);
    CHECK(cert.failed_clause == 1);
}

TEST_CASE("hereditarily quasi-standard positive certificate") {
    Subalgebra A = Subalgebra::full(Shape{4}, QI);
    Element pd = Element::unit(Shape{4}, QI, 0, 0, 0) + Element::unit(Shape{4}, QI, 0, 1, 1) +
                 Element::unit(Shape{4}, QI, 0, 2, 2);
    auto cert = certify_hereditarily_quasi_standard(Projection(pd), A,
                                                    PseudoRank::unique(Shape{4}), Rat(1), 2);
    CHECK(cert.ok);
    CHECK(!cert.entries.empty());
}

TEST_CASE("quasi-standard certificate for a rotated standard projection") {
    Subalgebra A = Subalgebra::full(Shape{4}, QI);
    Element std_p = Element::unit(Shape{4}, QI, 0, 0, 0) + Element::unit(Shape{4}, QI, 0, 1, 1);
    SpMat u = SpMat::identity(4, QI);
    u.set(1, 1, Scalar::qi(rat_of(3, 5), Rat(0)));
    u.set(1, 2, Scalar::qi(rat_of(4, 5), Rat(0)));
    u.set(2, 1, Scalar::qi(rat_of(-4, 5), Rat(0)));
    u.set(2, 2, Scalar::qi(rat_of(3, 5), Rat(0)));
    Element moved{Shape{4}, QI, {u * std_p.block(0) * u.conj_transpose()}};
    REQUIRE(moved.is_projection());
    auto cert = certify_hereditarily_quasi_standard(Projection(moved), A,
                                                    PseudoRank::unique(Shape{4}), Rat(1), 1);
    CHECK(cert.ok);
}

TEST_CASE("lp_rp_exhaustion with exact oracle terminates at stage 1") {
    Shape s{4};
    Element pd = Element::unit(s, QI, 0, 0, 0) + Element::unit(s, QI, 0, 1, 1);
    Projection p{pd};
    PseudoRank n = PseudoRank::unique(s);
    SubEquivOracle exact = [](const Projection& pr, const Projection& qr,
                              const Rat&) -> std::optional<OracleReturn> {
        return OracleReturn{pr, qr, pr.element()};
    };
    auto tr = lp_rp_exhaustion(p, p, exact, 4, n);
    CHECK(tr.terminated_zero);
    CHECK(tr.stages.size() == 1);
    CHECK(tr.audit.all_ok());
}

TEST_CASE("lp_rp_exhaustion with the star-equivalence backed oracle in M8") {
    Shape s{8};
    PseudoRank n = PseudoRank::unique(s);
    Element pd = Element::unit(s, QI, 0, 0, 0) + Element::unit(s, QI, 0, 1, 1);
    SpMat cols(8, 2);
    cols.set(2, 0, Scalar::one(QI));
    cols.set(3, 0, Scalar::one(QI));  // gram 2, a norm
    cols.set(4, 1, Scalar::one(QI));
    SpMat g = cols.conj_transpose() * cols;
    SpMat proj = cols * inverse(g) * cols.conj_transpose();
    Projection q{Element(s, QI, {proj})};
    auto tr = lp_rp_exhaustion(Projection(pd), q, star_equiv_backed_oracle(), 3, n);
    CHECK(tr.audit.all_ok());
    CHECK(tr.terminated_zero);
}

TEST_CASE("lp_rp_exhaustion adversarial bookkeeping oracle") {
    // diagonal projections in M16; the synthetic oracle leaves defect exactly
    // bound/2 = 2^{-n-1} at stage n
    const int m = 16;
    Shape s{m};
    PseudoRank n = PseudoRank::unique(s);
    Element pd = Element::zero(s, QI);
    for (int i = 0; i < 8; ++i) pd.block_mut(0).set(i, i, Scalar::one(QI));
    Element qd = Element::zero(s, QI);
    for (int i = 8; i < 16; ++i) qd.block_mut(0).set(i, i, Scalar::one(QI));

    SubEquivOracle synthetic = [&](const Projection& pr, const Projection& qr,
                                   const Rat& bound) -> std::optional<OracleReturn> {
        Rat target = bound / 2;
        std::vector<int> ppos, qpos;
        for (int i = 0; i < m; ++i) {
            if (pr.element().block(0).get(i, i).is_one()) ppos.push_back(i);
            if (qr.element().block(0).get(i, i).is_one()) qpos.push_back(i);
        }
        Rat defect_unit = rat_of(1, m);
        Rat keep_defect_r = target / defect_unit;
        long keep_defect = static_cast<long>(num(keep_defect_r) / den(keep_defect_r));
        long keep = static_cast<long>(ppos.size()) - keep_defect;
        if (keep < 0) return std::nullopt;
        Element pn = Element::zero(s, QI), qn = Element::zero(s, QI), w = Element::zero(s, QI);
        for (long k = 0; k < keep; ++k) {
            pn.block_mut(0).set(ppos[k], ppos[k], Scalar::one(QI));
            qn.block_mut(0).set(qpos[k], qpos[k], Scalar::one(QI));
            w.block_mut(0).set(ppos[k], qpos[k], Scalar::one(QI));
        }
        return OracleReturn{Projection(pn), Projection(qn), w};
    };
    auto tr = lp_rp_exhaustion(Projection(pd), Projection(qd), synthetic, 3, n);
    CHECK(tr.audit.all_ok());
    REQUIRE(tr.stages.size() == 3);
    CHECK(tr.stages[0].residual_p == rat_of(1, 4));
    CHECK(tr.stages[1].residual_p == rat_of(1, 8));
    CHECK(tr.stages[2].residual_p == rat_of(1, 16));
}
