#include "doctest.h"
#include "prymtk/tower.hpp"

#include <algorithm>
#include <cmath>

using namespace prymtk;

namespace {

std::size_t midx(int degree, int i, int j) {
    return std::size_t(degree - i) * (degree - i + 1) / 2 + std::size_t(degree - i - j);
}

TernaryForm form(int degree, std::vector<std::tuple<int, int, Rat>> terms) {
    std::vector<Rat> c(monomials(degree).size(), Rat(0));
    for (auto& [i, j, v] : terms) c[midx(degree, i, j)] = v;
    return TernaryForm(degree, c);
}

TernaryForm fermat() {
    return form(4, {{4, 0, Rat(1)}, {0, 4, Rat(1)}, {0, 0, Rat(1)}});
}

TernaryForm unit_conic() {
    return form(2, {{2, 0, Rat(1)}, {0, 2, Rat(1)}, {0, 0, Rat(1)}});
}

// the worked fixture: x^4 + y^4 + z^4, x^2 + y^2 + z^2, lambda = 1/2, line z = 0
TowerInstance fermat_instance() {
    TowerInstance inst;
    inst.b0 = fermat();
    inst.q = unit_conic();
    inst.lambda = Rat(1, 2);
    inst.mu = Cplx(1.0 / std::sqrt(2.0));
    inst.t = RatLine{{Rat(0), Rat(0), Rat(1)}};
    return inst;
}

Cplx ev(const std::vector<Cplx>& p, Cplx u) {
    Cplx v(0);
    for (std::size_t i = p.size(); i-- > 0;) v = v * u + p[i];
    return v;
}

int cycles(const std::array<int, 4>& p) {
    int n = 0;
    std::array<bool, 4> seen{};
    for (int s = 0; s < 4; ++s) {
        if (seen[s]) continue;
        ++n;
        for (int t = s; !seen[t]; t = p[t]) seen[t] = true;
    }
    return n;
}

}  // namespace

TEST_CASE("fermat slice matches the worked example") {
    auto [br, m] = slice(fermat_instance());

    CHECK(m.b == std::vector<Rat>{Rat(1), Rat(0), Rat(0), Rat(0), Rat(1)});
    // d = (1 + u^2)^2 - (1 + u^4)/2 = (u^4 + 4u^2 + 1)/2
    CHECK(m.d == std::vector<Rat>{Rat(1, 2), Rat(0), Rat(2), Rat(0), Rat(1, 2)});
    CHECK(m.q == std::vector<Rat>{Rat(1), Rat(0), Rat(1)});
    CHECK(m.genus_E == 1);
    CHECK(m.genus_C == 3);

    // a_i are the 4th roots of -1
    REQUIRE(br.a.size() == 4);
    for (Cplx a : br.a) {
        CHECK(std::abs(std::abs(a) - 1.0) < 1e-10);
        CHECK(std::abs(a * a * a * a + 1.0) < 1e-9);
    }
    // p_i satisfy u^2 = -2 +- sqrt(3)
    REQUIRE(br.p.size() == 4);
    int near = 0, far = 0;
    for (Cplx p : br.p) {
        Cplx u2 = p * p;
        if (std::abs(u2 - Cplx(-2.0 + std::sqrt(3.0))) < 1e-9) ++near;
        if (std::abs(u2 - Cplx(-2.0 - std::sqrt(3.0))) < 1e-9) ++far;
    }
    CHECK(near == 2);
    CHECK(far == 2);
}

TEST_CASE("slice rejects bad input and non-generic lines") {
    auto inst = fermat_instance();

    auto zero_lambda = inst;
    zero_lambda.lambda = Rat(0);
    CHECK_THROWS_AS(slice(zero_lambda), std::invalid_argument);

    auto wrong_mu = inst;
    wrong_mu.mu = Cplx(2.0);
    CHECK_THROWS_WITH_AS(slice(wrong_mu), "slice: mu^2 != lambda", std::invalid_argument);

    // x^3 y + y^4 + z^4 restricted to y = 0 is a 4th power: the branch
    // divisor on the line degenerates
    TowerInstance bad;
    bad.b0 = form(4, {{3, 1, Rat(1)}, {0, 4, Rat(1)}, {0, 0, Rat(1)}});
    bad.q = unit_conic();
    bad.lambda = Rat(1, 2);
    bad.mu = Cplx(1.0 / std::sqrt(2.0));
    bad.t = RatLine{{Rat(0), Rat(1), Rat(0)}};
    CHECK_THROWS_WITH_AS(slice(bad), "non-generic line: double root in b(u)",
                         std::invalid_argument);
}

TEST_CASE("bigonal dual satisfies the pair identities") {
    auto [br, m] = slice(fermat_instance());
    auto dual = bigonal_dual(m);
    CHECK(dual.identity_residual < 1e-10);

    // the identities do not depend on the choice of square root of lambda
    auto flipped = m;
    flipped.mu = -m.mu;
    auto dual2 = bigonal_dual(flipped);
    CHECK(dual2.identity_residual < 1e-10);
    CHECK(dual2.d == dual.d);

    // a model violating the pencil identity is refused
    auto broken = m;
    broken.d[0] += Rat(1, 1000);
    CHECK_THROWS_AS(bigonal_dual(broken), std::invalid_argument);
}

TEST_CASE("step 2: the dual swaps the two kinds of branch points") {
    auto [br, m] = slice(fermat_instance());
    auto dual = bigonal_dual(m);

    auto rep = verify_step2(br, dual);
    CHECK(rep.pencil_identity);
    CHECK(rep.lower_over_p);
    CHECK(rep.upper_over_a);
    CHECK(rep.pass());
    CHECK(rep.max_mismatch < 1e-10);

    // negative control: nudging d moves both branch divisors off target
    auto corrupt = dual;
    corrupt.d[0] += Rat(1, 1000);
    auto bad = verify_step2(br, corrupt);
    CHECK(!bad.pencil_identity);
    CHECK(!bad.lower_over_p);
    CHECK(!bad.pass());
    CHECK(bad.offending.has_value());
}

TEST_CASE("step 3: dual of dual, branch divisors and twist") {
    for (unsigned seed : {0u, 1u, 2u, 3u, 4u, 5u}) {
        CAPTURE(seed);
        auto inst = random_instance(seed);
        auto [br, m] = slice(inst);
        auto dual = bigonal_dual(m);
        auto sw = swapped_tower(m);

        auto rep = verify_step3(dual, sw);
        CHECK(rep.sign_consistent);
        CHECK(rep.branch_divisors_equal);
        CHECK(rep.dual_of_dual);
        CHECK(rep.pass());
        CHECK(std::abs(rep.twist_constant - 2.0 * m.mu) < 1e-12);

        // the swap really inverts the pencil parameter
        CHECK(sw.lambda == Rat(1) / m.lambda);
        CHECK(verify_step2(br, dual).pass());

        // negative control: a swapped tower built from the wrong pencil
        // member is caught by the dual-of-dual identity
        auto wrong = sw;
        wrong.d[0] += Rat(1);
        auto bad = verify_step3(dual, wrong);
        CHECK(!bad.dual_of_dual);
        CHECK(!bad.pass());
    }

    // the fermat fixture has lambda = 1/2: no rational square root, so the
    // role-swapped pair is not defined over Q
    auto [br, m] = slice(fermat_instance());
    CHECK_THROWS_WITH_AS(swapped_tower(m), "swapped_tower: lambda must be a rational square",
                         std::invalid_argument);
}

TEST_CASE("fiber monodromy of the 4-sheeted cover") {
    auto [br, m] = slice(fermat_instance());
    auto mon = fiber_monodromy(m);

    REQUIRE(mon.perms.size() == 8);
    CHECK(mon.product_identity);
    CHECK(mon.transitive);
    CHECK(mon.cycle_types_ok);
    CHECK(mon.tau == std::array<int, 4>{1, 0, 3, 2});
    CHECK(std::count(mon.branch_kind.begin(), mon.branch_kind.end(), 'a') == 4);
    CHECK(std::count(mon.branch_kind.begin(), mon.branch_kind.end(), 'p') == 4);

    // Riemann-Hurwitz ledger: chi = 4*2 - sum of deficiencies = -4, genus 3
    int deficiency = 0;
    for (const auto& p : mon.perms) deficiency += 4 - cycles(p);
    CHECK(deficiency == 12);
    CHECK(8 - deficiency == 2 - 2 * m.genus_C);

    // every branch point is an actual root of b or d
    std::vector<Cplx> bc, dc;
    for (const auto& x : m.b) bc.push_back(static_cast<double>(x));
    for (const auto& x : m.d) dc.push_back(static_cast<double>(x));
    for (std::size_t i = 0; i < mon.branch_points.size(); ++i) {
        const auto& poly = mon.branch_kind[i] == 'a' ? bc : dc;
        CHECK(std::abs(ev(poly, mon.branch_points[i])) < 1e-8);
    }
}

TEST_CASE("monodromy invariants do not depend on the basepoint or loop order") {
    auto [br, m] = slice(fermat_instance());
    auto ref = fiber_monodromy(m);

    for (Cplx bp : {Cplx(2.1, -5.3), Cplx(-3.7, -4.9)}) {
        CAPTURE(bp.real());
        auto mon = fiber_monodromy(m, bp);
        CHECK(mon.product_identity);
        CHECK(mon.transitive);
        CHECK(mon.cycle_types_ok);
        CHECK(mon.perms.size() == ref.perms.size());
    }

    auto rot = fiber_monodromy(m, std::nullopt, 3);
    CHECK(rot.product_identity);
    CHECK(rot.transitive);
    CHECK(rot.cycle_types_ok);
    // same branch points, cyclically rotated
    auto sorted = [](std::vector<Cplx> v) {
        std::sort(v.begin(), v.end(), [](Cplx a, Cplx b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        return v;
    };
    auto s1 = sorted(ref.branch_points), s2 = sorted(rot.branch_points);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) CHECK(std::abs(s1[i] - s2[i]) < 1e-12);
}

TEST_CASE("seeded instances run the whole pipeline") {
    for (unsigned seed = 0; seed < 10; ++seed) {
        CAPTURE(seed);
        auto inst = random_instance(seed);
        CHECK(is_smooth(inst.b0));
        CHECK(conic_is_smooth(inst.q));

        auto [br, m] = slice(inst);
        auto dual = bigonal_dual(m);
        CHECK(verify_step2(br, dual).pass());
        CHECK(verify_step3(dual, swapped_tower(m)).pass());

        auto mon = fiber_monodromy(m);
        CHECK(mon.product_identity);
        CHECK(mon.transitive);
        CHECK(mon.cycle_types_ok);
    }

    // generation is deterministic in the seed
    auto a = random_instance(4), b = random_instance(4);
    CHECK(a.b0.coeffs == b.b0.coeffs);
    CHECK(a.q.coeffs == b.q.coeffs);
    CHECK(a.lambda == b.lambda);
    CHECK(a.t.l == b.t.l);
}
