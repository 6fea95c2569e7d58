#include "doctest.h"
#include "prymtk/homology.hpp"

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

TowerInstance fermat_instance() {
    TowerInstance inst;
    inst.b0 = form(4, {{4, 0, Rat(1)}, {0, 4, Rat(1)}, {0, 0, Rat(1)}});
    inst.q = form(2, {{2, 0, Rat(1)}, {0, 2, Rat(1)}, {0, 0, Rat(1)}});
    inst.lambda = Rat(1, 2);
    inst.mu = Cplx(1.0 / std::sqrt(2.0));
    inst.t = RatLine{{Rat(0), Rat(0), Rat(1)}};
    return inst;
}

std::size_t kernel_rank(const IntMatrix& a) { return integer_kernel(a).rows(); }

struct Profile {
    std::size_t prym_rank;
    std::vector<Int> polarization;
    Int component_order, anti_index;
};

Profile profile(const SurfaceHomology& h) {
    auto p = prym_sublattice(h);
    return {p.basis.rows(), p.polarization, p.component_order, p.anti_invariant_index};
}

bool operator==(const Profile& a, const Profile& b) {
    return a.prym_rank == b.prym_rank && a.polarization == b.polarization &&
           a.component_order == b.component_order && a.anti_index == b.anti_index;
}

// symplectic transvection x -> x + <x, v> v for the skew form j
IntMatrix transvection(const IntMatrix& j, const std::vector<Int>& v, bool inverse) {
    std::size_t n = j.rows();
    IntMatrix t = IntMatrix::identity(n);
    std::vector<Int> jv(n, Int(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) jv[i] += j(i, k) * v[k];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            t(i, k) += (inverse ? -1 : 1) * v[i] * jv[k];
    return t;
}

}  // namespace

TEST_CASE("torus sanity: two sheets, four simple branch points") {
    CoverPresentation pres;
    pres.sheets = 2;
    pres.perms = {{1, 0}, {1, 0}, {1, 0}, {1, 0}};
    pres.tau = {1, 0};
    pres.genus = 1;

    auto h = homology_with_intersection(pres);
    CHECK(h.vertices == 2);
    CHECK(h.edges == 8);
    CHECK(h.faces == 6);
    CHECK(h.genus == 1);
    REQUIRE(h.intersection.rows() == 2);
    CHECK(determinant(h.intersection) == 1);
    // the deck involution of a double cover of the sphere acts by -1 on H1
    CHECK(h.tau_action == -IntMatrix::identity(2));

    auto p = prym_sublattice(h);
    CHECK(p.basis.rows() == 2);
    CHECK(p.component_order == 1);
    CHECK(p.anti_invariant_index == 4);
}

TEST_CASE("cover_presentation validates the monodromy data") {
    auto [br, m] = slice(fermat_instance());
    auto mon = fiber_monodromy(m);

    auto pres = cover_presentation(mon);
    CHECK(pres.sheets == 4);
    CHECK(pres.perms.size() == 8);
    CHECK(pres.genus == 3);

    // dropping one permutation breaks the product-identity invariant
    auto dropped = mon;
    dropped.perms.pop_back();
    CHECK_THROWS_WITH_AS(cover_presentation(dropped),
                         "cover_presentation: loop product is not the identity",
                         std::invalid_argument);

    // a disconnected presentation is rejected
    MonodromyResult split;
    split.perms = {{1, 0, 2, 3}, {1, 0, 2, 3}, {0, 1, 3, 2}, {0, 1, 3, 2}};
    CHECK_THROWS_WITH_AS(cover_presentation(split),
                         "cover_presentation: cover is not connected", std::invalid_argument);

    // a deck involution that fails to commute is rejected
    MonodromyResult twisted;
    twisted.perms = {{1, 2, 3, 0}, {3, 0, 1, 2}};
    CHECK_THROWS_WITH_AS(cover_presentation(twisted),
                         "cover_presentation: deck involution does not commute",
                         std::invalid_argument);
}

TEST_CASE("homology of the genus-3 cover") {
    auto [br, m] = slice(fermat_instance());
    auto h = homology_with_intersection(cover_presentation(fiber_monodromy(m)));

    CHECK(h.vertices == 4);
    CHECK(h.edges == 32);
    CHECK(h.faces == 24);
    CHECK(h.genus == 3);
    REQUIRE(h.intersection.rows() == 6);

    // unimodular symplectic form: principal, elementary divisors (1,1,1)
    CHECK(determinant(h.intersection) == 1);
    CHECK((h.intersection + h.intersection.transpose()).is_zero());
    CHECK(invariant_factors(h.intersection).empty());

    IntMatrix id = IntMatrix::identity(6);
    CHECK(h.tau_action * h.tau_action == id);
    CHECK(h.tau_action.transpose() * h.intersection * h.tau_action == h.intersection);
    // invariant rank 2 = 2 g(E), anti-invariant rank 4
    CHECK(kernel_rank(h.tau_action - id) == 2);
    CHECK(kernel_rank(h.tau_action + id) == 4);
}

TEST_CASE("prym lattice: type (1,2), connected kernel") {
    auto [br, m] = slice(fermat_instance());
    auto h = homology_with_intersection(cover_presentation(fiber_monodromy(m)));
    auto p = prym_sublattice(h);

    REQUIRE(p.basis.rows() == 4);
    CHECK(p.polarization == std::vector<Int>{1, 1, 2, 2});
    CHECK(p.type == std::array<Int, 2>{1, 2});
    CHECK(p.component_order == 1);
    CHECK(p.anti_invariant_index == 4);
    // basis rows really are anti-invariant
    CHECK((p.basis * (h.tau_action + IntMatrix::identity(6)).transpose()).is_zero());
    CHECK((p.form + p.form.transpose()).is_zero());

    // negative control: -tau has the rank-2 invariant lattice as its kernel
    auto flipped = h;
    flipped.tau_action = -h.tau_action;
    CHECK(prym_sublattice(flipped).basis.rows() == 2);
}

TEST_CASE("invariants are stable under symplectic base change") {
    auto [br, m] = slice(fermat_instance());
    auto h = homology_with_intersection(cover_presentation(fiber_monodromy(m)));
    auto ref = profile(h);

    std::vector<std::vector<Int>> vs = {{1, 0, -1, 2, 0, 1},
                                        {0, 2, 1, 0, -1, 1},
                                        {-1, 1, 0, 0, 2, -1}};
    IntMatrix s = IntMatrix::identity(6), si = IntMatrix::identity(6);
    for (const auto& v : vs) {
        s = s * transvection(h.intersection, v, false);
        si = transvection(h.intersection, v, true) * si;
    }
    REQUIRE(s * si == IntMatrix::identity(6));

    SurfaceHomology moved = h;
    moved.intersection = s.transpose() * h.intersection * s;
    moved.tau_action = si * h.tau_action * s;
    CHECK(moved.intersection == h.intersection);  // transvections preserve the form
    CHECK(moved.tau_action != h.tau_action);
    CHECK(profile(moved) == ref);
}

TEST_CASE("loop order and basepoint do not change the invariant profile") {
    auto [br, m] = slice(fermat_instance());
    auto base = profile(homology_with_intersection(cover_presentation(fiber_monodromy(m))));

    for (int rot : {1, 3, 5}) {
        CAPTURE(rot);
        auto mon = fiber_monodromy(m, std::nullopt, rot);
        CHECK(profile(homology_with_intersection(cover_presentation(mon))) == base);
    }
    auto mon = fiber_monodromy(m, Cplx(2.1, -5.3));
    CHECK(profile(homology_with_intersection(cover_presentation(mon))) == base);
}

TEST_CASE("dual tower has the same invariant profile") {
    for (unsigned seed : {0u, 1u, 2u, 3u, 4u, 5u, 6u, 7u}) {
        CAPTURE(seed);
        auto inst = random_instance(seed);
        auto [br, m] = slice(inst);
        auto h = homology_with_intersection(cover_presentation(fiber_monodromy(m)));
        auto p = profile(h);
        CHECK(p.prym_rank == 4);
        CHECK(p.polarization == std::vector<Int>{1, 1, 2, 2});
        CHECK(p.component_order == 1);
        CHECK(p.anti_index == 4);

        auto dm = dual_curve_model(bigonal_dual(m));
        auto hd = homology_with_intersection(cover_presentation(fiber_monodromy(dm)));
        CHECK(profile(hd) == p);
    }
}
