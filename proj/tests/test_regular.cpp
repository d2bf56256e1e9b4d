#include <catch2/catch_amalgamated.hpp>

#include "rankmet/regular.hpp"

using namespace rankmet;

namespace {
Field Q = Field::rationals();

/// Test-only oracle for the M2 example: searches idempotents of the form
/// g = col * rowT over a small rational grid and keeps those satisfying the
/// strong contract. Independent of the production construction.
std::vector<Element> brute_rank1_idempotents_near(const Element& x) {
    std::vector<Element> found;
    std::vector<Rat> grid;
    for (int n = -4; n <= 4; ++n)
        for (int d = 1; d <= 2; ++d) grid.push_back(rat_of(n, d));
    Shape s = x.shape();
    for (auto& a : grid)
        for (auto& b : grid)
            for (auto& c : grid)
                for (auto& d : grid) {
                    SpMat m(2, 2);
                    m.set(0, 0, Scalar::q(a * c));
                    m.set(0, 1, Scalar::q(a * d));
                    m.set(1, 0, Scalar::q(b * c));
                    m.set(1, 1, Scalar::q(b * d));
                    Element g(s, Q, {m});
                    if (!(g * g == g) || g.is_zero()) continue;
                    if (!(x * g == g)) continue;
                    Element defect = x - x * x;
                    if (!in_left_ideal(x - g, defect)) continue;
                    if (!in_right_ideal(g, x) || !in_left_ideal(g, x)) continue;
                    found.push_back(g);
                }
    return found;
}
}  // namespace

TEST_CASE("quasi_inverse basics") {
    Shape s{2};
    // invertible x -> x^{-1}
    Element x(s, Q, {SpMat::from_rows(Q, {{1, 1}, {0, 1}})});
    Element y = quasi_inverse(x);
    CHECK(x * y == Element::identity(s, Q));
    CHECK(y * x == Element::identity(s, Q));

    CHECK(quasi_inverse(Element::zero(s, Q)) == Element::zero(s, Q));

    Element e12 = Element::unit(s, Q, 0, 0, 1);
    Element q = quasi_inverse(e12);
    CHECK(e12 * q * e12 == e12);
    CHECK(q * e12 * q == q);
}

TEST_CASE("quasi_inverse postconditions on random elements") {
    Rng rng(77);
    for (auto shape : {Shape{3}, Shape{2, 2}}) {
        for (int t = 0; t < 25; ++t) {
            Element x = random_element(rng, shape, Q);
            Element y = quasi_inverse(x);
            CHECK(x * y * x == x);
            CHECK(y * x * y == y);
        }
    }
    // determinism
    Rng r1(5), r2(5);
    Element a = random_element(r1, Shape{3}, Q);
    Element b = random_element(r2, Shape{3}, Q);
    CHECK(quasi_inverse(a) == quasi_inverse(b));
}

TEST_CASE("in_left_ideal soundness and completeness") {
    Shape s{3};
    Rng rng(19);
    for (int t = 0; t < 20; ++t) {
        Element a = random_element(rng, s, Q);
        // m = a itself
        auto self = in_left_ideal(a, a);
        REQUIRE(self.has_value());
        CHECK(self->witness * a == a);
        // m = r * a is always a member
        Element r = random_element(rng, s, Q);
        auto cert = in_left_ideal(r * a, a);
        REQUIRE(cert.has_value());
        CHECK(cert->witness * a == r * a);
    }
    // a row outside rowspace(a) -> none
    Element a(s, Q, {SpMat::from_rows(Q, {{1, 0, 0}, {0, 1, 0}, {0, 0, 0}})});
    Element m(s, Q, {SpMat::from_rows(Q, {{0, 0, 1}, {0, 0, 0}, {0, 0, 0}})});
    CHECK(!in_left_ideal(m, a).has_value());
    // right-ideal variant
    auto rc = in_right_ideal(m * a, m);
    REQUIRE(rc.has_value());
    CHECK(m * rc->witness == m * a);
}

TEST_CASE("in_left_ideal cross-checked against brute-force on small blocks") {
    // per block completeness: certificate exists iff row-space containment
    Rng rng(23);
    Shape s{3};
    for (int t = 0; t < 30; ++t) {
        Element a = random_element(rng, s, Q, 1);
        Element m = random_element(rng, s, Q, 1);
        bool member = in_left_ideal(m, a).has_value();
        // oracle: rank([a; m]) == rank(a) per block
        SpMat stacked(6, 3);
        for (int i = 0; i < 3; ++i) {
            for (auto& [j, v] : a.block(0).row(i)) stacked.set(i, j, v);
            for (auto& [j, v] : m.block(0).row(i)) stacked.set(3 + i, j, v);
        }
        bool oracle = (rank(stacked) == rank(a.block(0)));
        CHECK(member == oracle);
    }
}

TEST_CASE("idempotent_near: x already idempotent returns x") {
    Shape s{3};
    Subalgebra A = Subalgebra::full(s, Q);
    Element e = Element::unit(s, Q, 0, 0, 0) + Element::unit(s, Q, 0, 2, 2);
    auto res = idempotent_near(e, A, true);
    CHECK(res.g == e);
}

TEST_CASE("idempotent_near on the Jordan block example") {
    Shape s{2};
    Subalgebra A = Subalgebra::full(s, Q);
    Element x(s, Q, {SpMat::from_rows(Q, {{1, 1}, {0, 1}})});
    auto res = idempotent_near(x, A, true);
    // strong postconditions
    CHECK(res.g * res.g == res.g);
    CHECK(x * res.g == res.g);
    CHECK(in_right_ideal(res.g, x).has_value());
    CHECK(in_left_ideal(res.g, x).has_value());
    // g has the form [[1, c],[0, 0]]: row 1 zero, (0,0) entry 1
    CHECK(res.g.block(0).get(0, 0) == Scalar::one(Q));
    CHECK(res.g.block(0).get(1, 0).is_zero());
    CHECK(res.g.block(0).get(1, 1).is_zero());
    // x - g has rank 1 = rank(x - x^2)
    PseudoRank n = PseudoRank::unique(s);
    CHECK(rank_of(x - res.g, n) == rank_of(x - x * x, n));
    // brute-force oracle finds our g among the admissible ones
    auto all = brute_rank1_idempotents_near(x);
    CHECK(!all.empty());
    bool ours_found = false;
    for (auto& g : all) ours_found = ours_found || (g == res.g);
    CHECK(ours_found);
}

TEST_CASE("idempotent_near on diag(1, 1/2)") {
    Shape s{2};
    Subalgebra A = Subalgebra::full(s, Q);
    SpMat m(2, 2);
    m.set(0, 0, Scalar::one(Q));
    m.set(1, 1, Scalar::q(rat_of(1, 2)));
    Element x(s, Q, {m});
    auto res = idempotent_near(x, A, false);
    // g = diag(1, 0) per the kernel-of-(x-1) construction
    SpMat expect(2, 2);
    expect.set(0, 0, Scalar::one(Q));
    CHECK(res.g == Element(s, Q, {expect}));
    PseudoRank n = PseudoRank::unique(s);
    CHECK(rank_of(x - res.g, n) <= rank_of(x - x * x, n));
    CHECK(rank_of(x - x * x, n) == rat_of(1, 2));
}

TEST_CASE("idempotent_near strong postconditions on random near-idempotents") {
    Rng rng(101);
    Shape s{4};
    Subalgebra A = Subalgebra::full(s, Q);
    PseudoRank n = PseudoRank::unique(s);
    for (int t = 0; t < 25; ++t) {
        // idempotent plus a small perturbation
        SpMat d(4, 4);
        int r = static_cast<int>(rng.below(4)) + 1;
        for (int i = 0; i < r; ++i) d.set(i, i, Scalar::one(Q));
        Element e(s, Q, {d});
        Element pert = Element::unit(s, Q, 0, rng.below(4), rng.below(4))
                           .scaled(Scalar::q(rng.small_rat(2)));
        Element x = e + pert;
        auto res = idempotent_near(x, A, true);
        CHECK(res.g * res.g == res.g);
        CHECK(x * res.g == res.g);
        CHECK(rank_of(x - res.g, n) <= rank_of(x - x * x, n));
    }
}

TEST_CASE("idempotent_near inside a proper subalgebra") {
    // A = M2 embedded twice in M4; x in A
    auto emb = standard_embedding(Shape{2}, Shape{4}, Q, {{2}}, true);
    Subalgebra A(emb);
    Element x2(Shape{2}, Q, {SpMat::from_rows(Q, {{1, 1}, {0, 1}})});
    Element x = emb.apply(x2);
    auto res = idempotent_near(x, A, true);
    CHECK(A.contains(res.g));
    CHECK(res.g * res.g == res.g);
    CHECK(x * res.g == res.g);
    // outside-A input is rejected
    CHECK_THROWS(idempotent_near(Element::unit(Shape{4}, Q, 0, 0, 1), A, false));
}

TEST_CASE("idempotent_correction_bound reports the 4*eps bound") {
    Shape s{4};
    Subalgebra A = Subalgebra::full(s, Q);
    PseudoRank n = PseudoRank::unique(s);
    // rho1 = e11, x = e11 + t e12
    Element rho1 = Element::unit(s, Q, 0, 0, 0);
    Element x = rho1 + Element::unit(s, Q, 0, 0, 1).scaled(Scalar::q(rat_of(1, 3)));
    Rat dist = rank_of(rho1 - x, n);
    Rat eps = dist * rat_of(1025, 1024);  // declared strict bound
    auto rep = idempotent_correction_bound(rho1, x, A, n, eps);
    CHECK(rep.audit.all_ok());
    CHECK(rep.distance < Rat(4) * eps);

    // x = rho1 exactly: distance 0
    auto rep0 = idempotent_correction_bound(rho1, rho1, A, n, rat_of(1, 100));
    CHECK(rep0.audit.all_ok());
    CHECK(rep0.distance == 0);
}

TEST_CASE("randomized idempotent-correction campaign in M6 stays under 4*eps") {
    Shape s{6};
    Subalgebra A = Subalgebra::full(s, Q);
    PseudoRank n = PseudoRank::unique(s);
    Rat max_ratio(0);
    for (int t = 0; t < 60; ++t) {
        Rng rng = Rng::derive(424242, t);
        SpMat d(6, 6);
        int r = static_cast<int>(rng.below(6)) + 1;
        for (int i = 0; i < r; ++i) d.set(i, i, Scalar::one(Q));
        // conjugate the diagonal idempotent by a random unit
        SpMat u = SpMat::identity(6, Q);
        u.set(rng.below(3), 3 + rng.below(3), Scalar::q(rng.small_rat(2)));
        Element rho1(s, Q, {u * d * inverse(u)});
        REQUIRE(rho1.is_idempotent());
        Element pert = Element::unit(s, Q, 0, rng.below(6), rng.below(6))
                           .scaled(Scalar::q(rng.small_rat(2)));
        Element x = rho1 + pert;
        Rat dist = rank_of(rho1 - x, n);
        if (dist == 0) continue;
        Rat eps = dist * rat_of(1025, 1024);
        auto rep = idempotent_correction_bound(rho1, x, A, n, eps);
        CHECK(rep.audit.all_ok());
        if (eps > 0) {
            Rat ratio = rep.distance / eps;
            if (ratio > max_ratio) max_ratio = ratio;
        }
    }
    CHECK(max_ratio <= Rat(4));
}
