#include "doctest.h"
#include "prymtk/lattice.hpp"

#include <random>

using namespace prymtk;

namespace {

IntMatrix from_rows(std::vector<std::vector<long>> rows) {
    std::size_t r = rows.size(), c = rows.empty() ? 0 : rows[0].size();
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    return m;
}

IntMatrix random_unimodular(std::size_t n, std::mt19937& rng) {
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<int> coef(-2, 2);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    for (int step = 0; step < 16; ++step) {
        std::size_t i = idx(rng), j = idx(rng);
        if (i == j) continue;
        Int c = coef(rng);
        for (std::size_t k = 0; k < n; ++k) u(i, k) += c * u(j, k);
    }
    return u;
}

}  // namespace

TEST_CASE("standard lattices") {
    Lattice k3 = lattice_K3();
    CHECK(k3.rank() == 22);
    CHECK(k3.is_even());
    CHECK(abs(k3.det()) == 1);
    auto s = inertia(k3.gram);
    CHECK(s.n_plus == 3);
    CHECK(s.n_minus == 19);

    Lattice m = lattice_I17_2();
    IntMatrix expect(8, 8);
    expect(0, 0) = 2;
    for (std::size_t i = 1; i < 8; ++i) expect(i, i) = -2;
    CHECK(m.gram == expect);

    CHECK(make_standard("U").gram == from_rows({{0, 1}, {1, 0}}));
    CHECK_THROWS(make_standard("no-such-lattice"));
}

TEST_CASE("triple") {
    Triple t = triple(lattice_I17_2());
    CHECK(t.sign.n_plus == 1);
    CHECK(t.sign.n_minus == 7);
    CHECK(t.a == 8);
    CHECK(t.delta == 1);

    Triple u2 = triple(make_standard("U(2)"));
    CHECK(u2.sign.n_plus == 1);
    CHECK(u2.sign.n_minus == 1);
    CHECK(u2.a == 2);
    CHECK(u2.delta == 0);

    Triple u = triple(lattice_U());
    CHECK(u.a == 0);
    CHECK(u.delta == 0);

    CHECK_THROWS(triple(Lattice(from_rows({{0, 0}, {0, 0}}))));          // degenerate
    CHECK_THROWS(triple(rescale(lattice_U(), 3)));                        // not 2-elementary
}

TEST_CASE("triple invariant under unimodular congruence") {
    std::mt19937 rng(5);
    Lattice m = lattice_I17_2();
    for (int trial = 0; trial < 10; ++trial) {
        auto u = random_unimodular(8, rng);
        Lattice m2(u.transpose() * m.gram * u);
        Triple t = triple(m2);
        CHECK(t.sign.n_plus == 1);
        CHECK(t.sign.n_minus == 7);
        CHECK(t.a == 8);
        CHECK(t.delta == 1);
    }
}

TEST_CASE("orthogonal complement in U") {
    Embedding e(lattice_U(), from_rows({{1, 1}}));
    Embedding c = orthogonal_complement(e);
    CHECK(c.rank() == 1);
    // complement generated by e-f
    auto b = c.basis;
    CHECK(abs(b(0, 0)) == 1);
    CHECK(b(0, 0) == -b(0, 1));

    Embedding full(lattice_U(), IntMatrix::identity(2));
    CHECK(orthogonal_complement(full).rank() == 0);
}

TEST_CASE("is_primitive") {
    CHECK(is_primitive(Embedding(lattice_U(), from_rows({{1, 1}}))));
    CHECK(!is_primitive(Embedding(lattice_U(), from_rows({{2, 0}}))));
    CHECK(!is_primitive(Embedding(lattice_U(), from_rows({{1, 1}, {1, -1}}))));
}

TEST_CASE("glue map inside U") {
    Embedding e(lattice_U(), from_rows({{1, 1}}));
    GlueMap g = glue_map(e);
    CHECK(g.source.order() == 2);
    CHECK(g.target.order() == 2);
    CHECK(g.verified);
    // q values +1/2 and -1/2 = 3/2 mod 2Z
    std::vector<Int> one{Int(1)};
    Rat qs = g.source.q_value(g.source.vector_of(one));
    Rat qt = g.target.q_value(g.target.vector_of(one));
    CHECK((qs == Rat(1, 2) || qs == Rat(3, 2)));
    CHECK(qs + qt == 2);
}

TEST_CASE("glue map trivial for unimodular sublattice") {
    Lattice uu = direct_sum(lattice_U(), lattice_U());
    IntMatrix b(2, 4);
    b(0, 0) = 1;
    b(1, 1) = 1;
    GlueMap g = glue_map(Embedding(uu, b));
    CHECK(g.source.order() == 1);
    CHECK(g.verified);
}

TEST_CASE("involution from sublattice of U") {
    Embedding e(lattice_U(), from_rows({{1, 1}}));
    IntMatrix i = involution_from_sublattice(e);
    // swaps e and f
    CHECK(i == from_rows({{0, 1}, {1, 0}}));

    Embedding full(lattice_U(), IntMatrix::identity(2));
    CHECK(involution_from_sublattice(full) == IntMatrix::identity(2));
}

TEST_CASE("shipped embedding of I_{1,7}(2) in the K3 lattice") {
    Embedding e = embed_I17_2_in_K3();
    CHECK(is_primitive(e));
    CHECK(e.induced_gram() == lattice_I17_2().gram);

    Embedding c = orthogonal_complement(e);
    CHECK(c.rank() == 14);
    Lattice comp = c.sublattice();
    auto s = inertia(comp.gram);
    CHECK(s.n_plus == 2);
    CHECK(s.n_minus == 12);
    Triple t = triple(comp);
    CHECK(t.a == 8);
    // moduli dimension as a rank identity
    CHECK(c.rank() - 2 == 12);
}

TEST_CASE("glue map of the K3 fixture") {
    GlueMap g = glue_map(embed_I17_2_in_K3());
    CHECK(g.source.order() == 256);
    CHECK(g.target.order() == 256);
    CHECK(g.verified);
    CHECK(g.elements_checked == 256);
}

TEST_CASE("involution of the K3 fixture") {
    Embedding e = embed_I17_2_in_K3();
    IntMatrix i = involution_from_sublattice(e);
    Lattice k3 = e.ambient;
    CHECK(i * i == IntMatrix::identity(22));
    CHECK(i.transpose() * k3.gram * i == k3.gram);
    // fixed lattice = M, anti-fixed = M^perp
    IntMatrix fix = integer_kernel(i - IntMatrix::identity(22));
    IntMatrix anti = integer_kernel(i + IntMatrix::identity(22));
    CHECK(fix.rows() == 8);
    CHECK(anti.rows() == 14);
    CHECK(hermite_normal_form(fix).h == hermite_normal_form(saturate(e.basis)).h);
    CHECK(hermite_normal_form(anti).h ==
          hermite_normal_form(orthogonal_complement(e).basis).h);
}

TEST_CASE("extend_isometry") {
    Embedding e(lattice_U(), from_rows({{1, 1}}));

    // identity pair extends to the ambient identity
    auto id1 = IntMatrix::identity(1);
    auto r = extend_isometry(e, e, id1, id1);
    REQUIRE(r.ambient_isometry.has_value());
    CHECK(*r.ambient_isometry == IntMatrix::identity(2));

    // -id on both sides extends to -identity
    IntMatrix neg(1, 1);
    neg(0, 0) = -1;
    auto r2 = extend_isometry(e, e, neg, neg);
    REQUIRE(r2.ambient_isometry.has_value());
    CHECK(*r2.ambient_isometry == -IntMatrix::identity(2));

    // mixed signs on the Z/2 glue group are still compatible (-id = id there);
    // the extension is the swap of e and f
    auto r3 = extend_isometry(e, e, id1, neg);
    REQUIRE(r3.ambient_isometry.has_value());
    CHECK(*r3.ambient_isometry == from_rows({{0, 1}, {1, 0}}));

    // genuine incompatibility needs glue of order > 2: <e+2f> in U has
    // discriminant Z/4, where psi-bar = -id differs from phi-bar = id
    Embedding e4(lattice_U(), from_rows({{1, 2}}));
    auto r4 = extend_isometry(e4, e4, id1, neg);
    CHECK(!r4.ambient_isometry.has_value());
    CHECK(!r4.mismatches.empty());
    auto r5 = extend_isometry(e4, e4, neg, neg);
    REQUIRE(r5.ambient_isometry.has_value());
    CHECK(*r5.ambient_isometry == -IntMatrix::identity(2));
}

TEST_CASE("nikulin isometry class predicate") {
    CHECK(nikulin_isometry_class_equal(lattice_I17_2(), lattice_I17_2()));
    CHECK(!nikulin_isometry_class_equal(lattice_U(), make_standard("U(2)")));
    CHECK_THROWS(nikulin_isometry_class_equal(lattice_A1(), lattice_A1()));  // definite

    // complements of two primitive embeddings of I_{1,7}(2) agree in class
    Embedding e1 = embed_I17_2_in_K3();
    // second embedding: transport by a unimodular isometry candidate is not
    // available; instead re-derive from a permuted fixture (swap the two E8
    // blocks and the roles of U summands 2,3)
    std::vector<std::size_t> perm(22);
    for (std::size_t i = 0; i < 22; ++i) perm[i] = i;
    std::swap(perm[2], perm[4]);
    std::swap(perm[3], perm[5]);
    for (std::size_t i = 0; i < 8; ++i) std::swap(perm[6 + i], perm[14 + i]);
    IntMatrix p(22, 22);
    for (std::size_t i = 0; i < 22; ++i) p(i, perm[i]) = 1;
    // p is an isometry of the K3 Gram (block permutation)
    Lattice k3 = lattice_K3();
    REQUIRE(p.transpose() * k3.gram * p == k3.gram);
    Embedding e2(k3, e1.basis * p);
    REQUIRE(is_primitive(e2));
    Lattice c1 = orthogonal_complement(e1).sublattice();
    Lattice c2 = orthogonal_complement(e2).sublattice();
    CHECK(nikulin_isometry_class_equal(c1, c2));
}

TEST_CASE("matrix fixture io roundtrip") {
    auto path = std::string("test_fixture_matrix.txt");
    Embedding e = embed_I17_2_in_K3();
    write_int_matrix(path, e.basis);
    auto m = read_int_matrix(path);
    CHECK(m == e.basis);
    std::remove(path.c_str());
}
