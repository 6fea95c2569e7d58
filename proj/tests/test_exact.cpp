#include "doctest.h"
#include "prymtk/exact.hpp"

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

// random unimodular matrix built from elementary row operations
IntMatrix random_unimodular(std::size_t n, std::mt19937& rng) {
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    for (int step = 0; step < 20; ++step) {
        std::size_t i = idx(rng), j = idx(rng);
        if (i == j) continue;
        Int c = coef(rng);
        for (std::size_t k = 0; k < n; ++k) u(i, k) += c * u(j, k);
    }
    return u;
}

void check_snf(const IntMatrix& a) {
    auto r = smith_normal_form(a);
    CHECK(r.u * a * r.v == r.s);
    CHECK(abs(determinant(r.u)) == 1);
    CHECK(abs(determinant(r.v)) == 1);
    std::size_t d = std::min(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) CHECK(r.s(i, j) == 0);
    for (std::size_t i = 0; i + 1 < d; ++i) {
        CHECK(r.s(i, i) >= 0);
        if (r.s(i + 1, i + 1) != 0) {
            REQUIRE(r.s(i, i) != 0);
            CHECK(r.s(i + 1, i + 1) % r.s(i, i) == 0);
        }
    }
}

}  // namespace

TEST_CASE("smith normal form basic cases") {
    auto id2 = IntMatrix::identity(2);
    auto r = smith_normal_form(id2);
    CHECK(r.s == id2);

    IntMatrix d2(8, 8);
    for (std::size_t i = 0; i < 8; ++i) d2(i, i) = 2;
    auto r2 = smith_normal_form(d2);
    CHECK(r2.s == d2);

    // hyperbolic plane: unimodular, so S = identity
    auto u = from_rows({{0, 1}, {1, 0}});
    auto r3 = smith_normal_form(u);
    CHECK(r3.s == IntMatrix::identity(2));
    check_snf(u);
}

TEST_CASE("smith normal form randomized identity U*A*V=S") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> e(-9, 9);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    for (int trial = 0; trial < 40; ++trial) {
        IntMatrix a(dim(rng), dim(rng));
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = e(rng);
        check_snf(a);
    }
}

TEST_CASE("hermite normal form") {
    auto r = hermite_normal_form(IntMatrix::identity(3));
    CHECK(r.h == IntMatrix::identity(3));

    auto d = from_rows({{2, 0}, {0, 3}});
    CHECK(hermite_normal_form(d).h == d);

    // hand row reduction gives [[1,3],[0,2]]; the fully reduced form is
    // [[1,1],[0,2]] with the same row span
    auto a = from_rows({{2, 4}, {1, 3}});
    auto hr = hermite_normal_form(a);
    CHECK(hr.h == from_rows({{1, 1}, {0, 2}}));
    CHECK(hermite_normal_form(from_rows({{1, 3}, {0, 2}})).h == hr.h);
    CHECK(hr.u * a == hr.h);
    CHECK(abs(determinant(hr.u)) == 1);
}

TEST_CASE("inertia") {
    CHECK_THROWS(inertia(from_rows({{0, 1}, {2, 0}})));

    auto u = inertia(from_rows({{0, 1}, {1, 0}}));
    CHECK(u.n_plus == 1);
    CHECK(u.n_minus == 1);
    CHECK(u.n_zero == 0);

    auto d = inertia(from_rows({{2, 0}, {0, -2}}));
    CHECK(d.n_plus == 1);
    CHECK(d.n_minus == 1);

    // E8(-1): negative definite of rank 8
    IntMatrix e8(8, 8);
    for (std::size_t i = 0; i < 8; ++i) e8(i, i) = -2;
    const std::pair<int, int> edges[] = {{1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {2, 4}};
    for (auto [a, b] : edges) { e8(a - 1, b - 1) = 1; e8(b - 1, a - 1) = 1; }
    auto s = inertia(e8);
    CHECK(s.n_plus == 0);
    CHECK(s.n_minus == 8);
    CHECK(s.n_zero == 0);

    auto z = inertia(from_rows({{0, 0}, {0, 0}}));
    CHECK(z.n_zero == 2);
}

TEST_CASE("inertia invariant under unimodular congruence") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> e(-4, 4);
    for (int trial = 0; trial < 20; ++trial) {
        IntMatrix g(5, 5);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = i; j < 5; ++j) { g(i, j) = e(rng); g(j, i) = g(i, j); }
        auto u = random_unimodular(5, rng);
        auto g2 = u.transpose() * g * u;
        auto s1 = inertia(g);
        auto s2 = inertia(g2);
        CHECK(s1.n_plus == s2.n_plus);
        CHECK(s1.n_minus == s2.n_minus);
        CHECK(s1.n_zero == s2.n_zero);
    }
}

TEST_CASE("saturate") {
    auto s = saturate(from_rows({{2, 0}}));
    CHECK(hermite_normal_form(s).h == from_rows({{1, 0}}));

    auto s2 = saturate(from_rows({{1, 1}}));
    CHECK(hermite_normal_form(s2).h == from_rows({{1, 1}}));

    // rows (2,0,2),(0,2,2): saturation contains (1,0,1)
    auto b = from_rows({{2, 0, 2}, {0, 2, 2}});
    auto s3 = saturate(b);
    CHECK(s3.rows() == 2);
    auto sol = integer_solve(s3.transpose(), {Int(1), Int(0), Int(1)});
    CHECK(sol.has_value());

    CHECK_THROWS(saturate(from_rows({{1, 1}, {2, 2}})));
}

TEST_CASE("saturate is idempotent and index matches SNF product") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> e(-5, 5);
    for (int trial = 0; trial < 25; ++trial) {
        IntMatrix b(2, 4);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 4; ++j) b(i, j) = e(rng);
        if (rank(b) != 2) continue;
        auto s = saturate(b);
        auto s2 = saturate(s);
        CHECK(hermite_normal_form(s).h == hermite_normal_form(s2).h);
        CHECK(saturation_index(s) == 1);
        // every row of b lies in the span of s over Z
        for (std::size_t i = 0; i < 2; ++i) {
            auto row = b.row(i);
            CHECK(integer_solve(s.transpose(), row).has_value());
        }
    }
}

TEST_CASE("rational_solve") {
    auto id = IntMatrix::identity(3);
    std::vector<Rat> b{Rat(1), Rat(2, 3), Rat(-5)};
    auto x = rational_solve(id, b);
    REQUIRE(x.has_value());
    CHECK(*x == b);

    auto half = rational_solve(from_rows({{2}}), {Rat(1)});
    REQUIRE(half.has_value());
    CHECK((*half)[0] == Rat(1, 2));

    auto none = rational_solve(from_rows({{1, 1}, {1, 1}}), {Rat(0), Rat(1)});
    CHECK(!none.has_value());
}

TEST_CASE("integer_solve") {
    auto a = from_rows({{2, 0}, {0, 3}});
    auto y = integer_solve(a, {Int(4), Int(9)});
    REQUIRE(y.has_value());
    CHECK((*y)[0] == 2);
    CHECK((*y)[1] == 3);
    CHECK(!integer_solve(a, {Int(1), Int(0)}).has_value());
}
