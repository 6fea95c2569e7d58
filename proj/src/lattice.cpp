#include "prymtk/lattice.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace prymtk {

Lattice::Lattice(IntMatrix g) : gram(std::move(g)) {
    if (!gram.is_symmetric()) throw std::invalid_argument("Lattice: Gram matrix not symmetric");
}

bool Lattice::is_even() const {
    for (std::size_t i = 0; i < gram.rows(); ++i)
        if (gram(i, i) % 2 != 0) return false;
    return true;
}

bool Lattice::is_degenerate() const { return det() == 0; }

Lattice lattice_U() {
    return Lattice(IntMatrix(2, 2, {Int(0), Int(1), Int(1), Int(0)}));
}

Lattice lattice_E8_minus() {
    // negated Cartan matrix, Bourbaki node numbering
    IntMatrix g(8, 8);
    for (std::size_t i = 0; i < 8; ++i) g(i, i) = -2;
    const std::pair<int, int> edges[] = {{1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {2, 4}};
    for (auto [a, b] : edges) {
        g(a - 1, b - 1) = 1;
        g(b - 1, a - 1) = 1;
    }
    return Lattice(g);
}

Lattice lattice_A1() { return Lattice(IntMatrix(1, 1, {Int(-2)})); }

Lattice lattice_I(std::size_t p, std::size_t q) {
    IntMatrix g(p + q, p + q);
    for (std::size_t i = 0; i < p; ++i) g(i, i) = 1;
    for (std::size_t i = p; i < p + q; ++i) g(i, i) = -1;
    return Lattice(g);
}

Lattice rescale(const Lattice& l, const Int& d) {
    IntMatrix g = l.gram;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= d;
    return Lattice(g);
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
    const std::size_t n = a.rank(), m = b.rank();
    IntMatrix g(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = a.gram(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) g(n + i, n + j) = b.gram(i, j);
    return Lattice(g);
}

Lattice lattice_K3() {
    Lattice l = lattice_U();
    l = direct_sum(l, lattice_U());
    l = direct_sum(l, lattice_U());
    l = direct_sum(l, lattice_E8_minus());
    l = direct_sum(l, lattice_E8_minus());
    return l;
}

Lattice lattice_I17_2() { return rescale(lattice_I(1, 7), 2); }

Lattice make_standard(const std::string& name) {
    if (name == "U") return lattice_U();
    if (name == "U(2)") return rescale(lattice_U(), 2);
    if (name == "E8(-1)") return lattice_E8_minus();
    if (name == "A1") return lattice_A1();
    if (name == "K3") return lattice_K3();
    if (name == "I17_2") return lattice_I17_2();
    throw std::invalid_argument("make_standard: unknown lattice name '" + name + "'");
}

Embedding::Embedding(Lattice amb, IntMatrix b) : ambient(std::move(amb)), basis(std::move(b)) {
    if (basis.cols() != ambient.rank())
        throw std::invalid_argument("Embedding: basis width does not match ambient rank");
    if (prymtk::rank(basis) != basis.rows())
        throw std::invalid_argument("Embedding: basis rows not independent");
}

IntMatrix Embedding::induced_gram() const {
    return basis * ambient.gram * basis.transpose();
}

Int DiscriminantGroup::order() const {
    Int n(1);
    for (const auto& f : factors) n *= f;
    return n;
}

std::size_t DiscriminantGroup::two_rank() const { return factors.size(); }

bool DiscriminantGroup::is_two_elementary() const {
    return std::all_of(factors.begin(), factors.end(), [](const Int& f) { return f == 2; });
}

std::vector<Int> DiscriminantGroup::canonical(const std::vector<Rat>& v) const {
    // v = sum c_i (1/s_i) V e_i mod Z^n  =>  c = S V^-1 v mod s
    const std::size_t n = gram.rows();
    RatMatrix vinv = rational_inverse(to_rational(snf_v));
    std::vector<Int> out;
    for (std::size_t i = 0; i < n; ++i) {
        Rat c(0);
        for (std::size_t j = 0; j < n; ++j) c += all_factors[i] * vinv(i, j) * v[j];
        if (denominator(c) != 1)
            throw std::invalid_argument("DiscriminantGroup::canonical: vector not in dual lattice");
        if (all_factors[i] > 1) {
            Int ci = numerator(c) % all_factors[i];
            if (ci < 0) ci += all_factors[i];
            out.push_back(ci);
        }
    }
    return out;
}

std::vector<Rat> DiscriminantGroup::vector_of(const std::vector<Int>& coeffs) const {
    const std::size_t n = gram.rows();
    if (coeffs.size() != factors.size())
        throw std::invalid_argument("DiscriminantGroup::vector_of: coefficient count mismatch");
    std::vector<Rat> v(n, Rat(0));
    for (std::size_t k = 0; k < factors.size(); ++k)
        for (std::size_t j = 0; j < n; ++j)
            v[j] += coeffs[k] * Rat(generators(k, j));
    return v;
}

namespace {
Rat mod_reduce(const Rat& x, const Int& m) {
    // representative of x mod m*Z in [0, m)
    Int num = numerator(x), den = denominator(x);
    Int r = num % (m * den);
    if (r < 0) r += m * den;
    return Rat(r, den);
}
}  // namespace

Rat DiscriminantGroup::q_value(const std::vector<Rat>& v) const {
    Rat q(0);
    for (std::size_t i = 0; i < gram.rows(); ++i)
        for (std::size_t j = 0; j < gram.cols(); ++j) q += v[i] * Rat(gram(i, j)) * v[j];
    return mod_reduce(q, 2);
}

Rat DiscriminantGroup::b_value(const std::vector<Rat>& v, const std::vector<Rat>& w) const {
    Rat b(0);
    for (std::size_t i = 0; i < gram.rows(); ++i)
        for (std::size_t j = 0; j < gram.cols(); ++j) b += v[i] * Rat(gram(i, j)) * w[j];
    return mod_reduce(b, 1);
}

DiscriminantGroup discriminant_group(const Lattice& l) {
    if (l.is_degenerate())
        throw std::invalid_argument("discriminant_group: degenerate lattice");
    const std::size_t n = l.rank();
    auto snf = smith_normal_form(l.gram);
    DiscriminantGroup g;
    g.gram = l.gram;
    g.snf_v = snf.v;
    for (std::size_t i = 0; i < n; ++i) g.all_factors.push_back(snf.s(i, i));
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
        if (snf.s(i, i) > 1) {
            g.factors.push_back(snf.s(i, i));
            idx.push_back(i);
        }
    // generator for factor s_i: (1/s_i) * column i of V, in M-basis coordinates
    g.generators = RatMatrix(idx.size(), n);
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (std::size_t j = 0; j < n; ++j)
            g.generators(k, j) = Rat(snf.v(j, idx[k]), snf.s(idx[k], idx[k]));
    return g;
}

namespace {

/// delta = 0 iff q is integral on the whole discriminant group.
int compute_delta(const DiscriminantGroup& g) {
    const std::size_t a = g.factors.size();
    if (!g.is_two_elementary())
        throw std::invalid_argument("delta: group not 2-elementary");
    if (a <= 12) {
        // full enumeration of (Z/2)^a
        for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << a); ++mask) {
            std::vector<Int> c(a, 0);
            for (std::size_t k = 0; k < a; ++k)
                if (mask & (std::uint64_t(1) << k)) c[k] = 1;
            Rat q = g.q_value(g.vector_of(c));
            if (denominator(q) != 1) return 1;
        }
        return 0;
    }
    // generators and pairwise sums; complete for q on (Z/2)^a because
    // q(x+y) = q(x) + q(y) + 2 b(x,y) and 2 b(x,y) in Z for 2-elementary groups
    for (std::size_t i = 0; i < a; ++i) {
        std::vector<Int> c(a, 0);
        c[i] = 1;
        if (denominator(g.q_value(g.vector_of(c))) != 1) return 1;
        for (std::size_t j = i + 1; j < a; ++j) {
            std::vector<Int> c2 = c;
            c2[j] = 1;
            if (denominator(g.q_value(g.vector_of(c2))) != 1) return 1;
        }
    }
    return 0;
}

}  // namespace

Triple triple(const Lattice& l) {
    if (l.is_degenerate()) throw std::invalid_argument("triple: degenerate lattice");
    if (!l.is_even()) throw std::invalid_argument("triple: lattice not even");
    auto g = discriminant_group(l);
    if (!g.is_two_elementary())
        throw std::invalid_argument("triple: lattice not 2-elementary");
    Triple t;
    t.sign = inertia(l.gram);
    t.a = g.two_rank();
    t.delta = compute_delta(g);
    return t;
}

Embedding orthogonal_complement(const Embedding& e) {
    if (e.ambient.is_degenerate())
        throw std::invalid_argument("orthogonal_complement: degenerate ambient");
    // x with B G x = 0; integer_kernel returns a saturated basis
    IntMatrix bg = e.basis * e.ambient.gram;
    IntMatrix k = integer_kernel(bg);
    return Embedding(e.ambient, k);
}

bool is_primitive(const Embedding& e) {
    auto f = invariant_factors(e.basis);
    return f.empty();
}

namespace {

/// Rational coordinates of the orthogonal projection of ambient vector x onto
/// the span of the rows of B, expressed in the B-basis.
std::vector<Rat> projection_coords(const IntMatrix& b, const IntMatrix& gram,
                                   const std::vector<Rat>& x) {
    RatMatrix gsub = to_rational(b * gram * b.transpose());
    RatMatrix bg = to_rational(b * gram);
    RatMatrix rhs(b.rows(), 1);
    for (std::size_t i = 0; i < b.rows(); ++i) {
        Rat s(0);
        for (std::size_t j = 0; j < b.cols(); ++j) s += bg(i, j) * x[j];
        rhs(i, 0) = s;
    }
    auto sol = rational_solve(gsub, rhs);
    if (!sol) throw std::invalid_argument("projection: degenerate sublattice Gram");
    std::vector<Rat> out(b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i) out[i] = (*sol)(i, 0);
    return out;
}

}  // namespace

GlueMap glue_map(const Embedding& e) {
    const Lattice& amb = e.ambient;
    if (abs(amb.det()) != 1) throw std::invalid_argument("glue_map: ambient not unimodular");
    if (!is_primitive(e)) throw std::invalid_argument("glue_map: sublattice not primitive");
    Lattice sub = e.sublattice();
    if (sub.is_degenerate()) throw std::invalid_argument("glue_map: degenerate sublattice");

    GlueMap g;
    Embedding comp = orthogonal_complement(e);
    g.complement_basis = comp.basis;
    g.source = discriminant_group(sub);
    g.target = discriminant_group(comp.sublattice());

    const std::size_t n = amb.rank();
    // quotient L / (M + M^perp): cokernel of T^t where rows of T are the bases
    IntMatrix t(e.basis.rows() + comp.basis.rows(), n);
    for (std::size_t i = 0; i < e.basis.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) t(i, j) = e.basis(i, j);
    for (std::size_t i = 0; i < comp.basis.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) t(e.basis.rows() + i, j) = comp.basis(i, j);
    if (t.rows() != n) throw std::invalid_argument("glue_map: rank defect");

    auto snf = smith_normal_form(t.transpose());
    IntMatrix uinv = unimodular_inverse(snf.u);
    // coset representatives with their orders
    std::vector<std::vector<Int>> src_classes, tgt_classes;
    for (std::size_t i = 0; i < n; ++i) {
        if (snf.s(i, i) <= 1) continue;
        std::vector<Rat> x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = Rat(uinv(j, i));
        auto cm = projection_coords(e.basis, amb.gram, x);
        auto ck = projection_coords(comp.basis, amb.gram, x);
        src_classes.push_back(g.source.canonical(cm));
        tgt_classes.push_back(g.target.canonical(ck));
    }

    // express each A_M generator as an integer combination of the source
    // classes, and push the same combination to the target side
    const std::size_t a = g.source.factors.size();
    const std::size_t k = src_classes.size();
    for (std::size_t j = 0; j < a; ++j) {
        IntMatrix sys(a, k + a);
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t r = 0; r < a; ++r) sys(r, c) = src_classes[c][r];
        for (std::size_t r = 0; r < a; ++r) sys(r, k + r) = g.source.factors[r];
        std::vector<Int> rhs(a, 0);
        rhs[j] = 1;
        auto sol = integer_solve(sys, rhs);
        if (!sol) throw std::invalid_argument("glue_map: generator not in glue projection");
        std::vector<Int> img(g.target.factors.size(), 0);
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t r = 0; r < img.size(); ++r)
                img[r] = (img[r] + (*sol)[c] * tgt_classes[c][r]) % g.target.factors[r];
        for (std::size_t r = 0; r < img.size(); ++r)
            if (img[r] < 0) img[r] += g.target.factors[r];
        g.generator_images.push_back(img);
    }

    // verification: bijectivity and q_{M^perp}(gamma x) = -q_M(x) over the
    // whole group (enumerable at the sizes in play)
    g.verified = true;
    if (g.source.order() != g.target.order()) g.verified = false;
    if (g.verified && g.source.order() <= 65536 && g.source.is_two_elementary()) {
        std::vector<std::vector<Int>> images;
        const std::size_t bits = a;
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << bits); ++mask) {
            std::vector<Int> c(a, 0);
            for (std::size_t i = 0; i < bits; ++i)
                if (mask & (std::uint64_t(1) << i)) c[i] = 1;
            std::vector<Int> img(g.target.factors.size(), 0);
            for (std::size_t i = 0; i < a; ++i)
                for (std::size_t r = 0; r < img.size(); ++r)
                    img[r] = (img[r] + c[i] * g.generator_images[i][r]) % g.target.factors[r];
            Rat qs = g.source.q_value(g.source.vector_of(c));
            Rat qt = g.target.q_value(g.target.vector_of(img));
            if (mod_reduce(qs + qt, 2) != 0) { g.verified = false; break; }
            images.push_back(img);
            ++g.elements_checked;
        }
        if (g.verified) {
            std::sort(images.begin(), images.end());
            if (std::adjacent_find(images.begin(), images.end()) != images.end())
                g.verified = false;  // gamma not injective
        }
    } else if (g.verified) {
        // generators and pairwise sums only
        for (std::size_t i = 0; i < a && g.verified; ++i) {
            std::vector<Int> c(a, 0);
            c[i] = 1;
            Rat qs = g.source.q_value(g.source.vector_of(c));
            Rat qt = g.target.q_value(g.target.vector_of(g.generator_images[i]));
            if (mod_reduce(qs + qt, 2) != 0) g.verified = false;
            ++g.elements_checked;
        }
    }
    return g;
}

IntMatrix involution_from_sublattice(const Embedding& e) {
    const Lattice& amb = e.ambient;
    if (amb.is_degenerate())
        throw std::invalid_argument("involution_from_sublattice: degenerate ambient");
    Lattice sub = e.sublattice();
    if (sub.is_degenerate())
        throw std::invalid_argument("involution_from_sublattice: degenerate sublattice");

    const std::size_t n = amb.rank();
    // orthogonal projector onto span(M): P = B^t (B G B^t)^-1 B G
    RatMatrix gsub = to_rational(e.induced_gram());
    RatMatrix inv = rational_inverse(gsub);
    RatMatrix p = to_rational(e.basis.transpose()) * inv * to_rational(e.basis * amb.gram);
    RatMatrix i2(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            i2(i, j) = 2 * p(i, j) - (i == j ? Rat(1) : Rat(0));
    IntMatrix inv_m;
    try {
        inv_m = to_integer(i2);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("involution_from_sublattice: extension not integral");
    }
    // exact sanity: involutive and Gram-preserving
    if (!(inv_m * inv_m == IntMatrix::identity(n)))
        throw std::logic_error("involution_from_sublattice: not an involution");
    if (!(inv_m.transpose() * amb.gram * inv_m == amb.gram))
        throw std::logic_error("involution_from_sublattice: does not preserve the form");
    return inv_m;
}

namespace {

bool same_row_span(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    auto ha = hermite_normal_form(a).h;
    auto hb = hermite_normal_form(b).h;
    return ha == hb;
}

}  // namespace

IsometryExtension extend_isometry(const Embedding& e1, const Embedding& e2,
                                  const IntMatrix& phi, const IntMatrix& psi) {
    const Lattice& amb = e1.ambient;
    if (!(amb.gram == e2.ambient.gram))
        throw std::invalid_argument("extend_isometry: embeddings in different ambients");
    if (abs(amb.det()) != 1)
        throw std::invalid_argument("extend_isometry: ambient not unimodular");
    if (!is_primitive(e1) || !is_primitive(e2))
        throw std::invalid_argument("extend_isometry: embeddings not primitive");

    Embedding c1 = orthogonal_complement(e1);
    Embedding c2 = orthogonal_complement(e2);

    IntMatrix g1 = e1.induced_gram(), g2 = e2.induced_gram();
    IntMatrix h1 = c1.induced_gram(), h2 = c2.induced_gram();
    if (!(phi.transpose() * g2 * phi == g1))
        throw std::invalid_argument("extend_isometry: phi is not an isometry");
    if (!(psi.transpose() * h2 * psi == h1))
        throw std::invalid_argument("extend_isometry: psi is not an isometry");

    const std::size_t n = amb.rank();
    const std::size_t r = e1.rank();
    // stack bases; candidate F = S2^t D (S1^t)^-1 on coordinate columns
    auto stack = [&](const IntMatrix& top, const IntMatrix& bot) {
        IntMatrix s(top.rows() + bot.rows(), n);
        for (std::size_t i = 0; i < top.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j) s(i, j) = top(i, j);
        for (std::size_t i = 0; i < bot.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j) s(top.rows() + i, j) = bot(i, j);
        return s;
    };
    IntMatrix s1 = stack(e1.basis, c1.basis);
    IntMatrix s2 = stack(e2.basis, c2.basis);
    IntMatrix d(n, n);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) d(i, j) = phi(i, j);
    for (std::size_t i = 0; i < n - r; ++i)
        for (std::size_t j = 0; j < n - r; ++j) d(r + i, r + j) = psi(i, j);

    RatMatrix f = to_rational(s2.transpose()) * to_rational(d) *
                  rational_inverse(to_rational(s1.transpose()));

    IsometryExtension out;
    bool integral = true;
    for (std::size_t i = 0; i < n && integral; ++i)
        for (std::size_t j = 0; j < n && integral; ++j)
            if (denominator(f(i, j)) != 1) integral = false;
    if (integral) {
        IntMatrix fm = to_integer(f);
        if (!(fm.transpose() * amb.gram * fm == amb.gram))
            throw std::logic_error("extend_isometry: candidate does not preserve the form");
        out.ambient_isometry = fm;
        return out;
    }

    // report mismatched discriminant images: gamma2(phi-bar x) vs psi-bar(gamma1 x)
    GlueMap gl1 = glue_map(e1);
    GlueMap gl2 = glue_map(e2);
    DiscriminantGroup a1 = gl1.source, a2 = gl2.source;
    for (std::size_t j = 0; j < a1.factors.size(); ++j) {
        std::vector<Int> gen(a1.factors.size(), 0);
        gen[j] = 1;
        // route 1: phi then glue in e2
        auto v1 = a1.vector_of(gen);  // coords in M1 basis
        std::vector<Rat> v1m2(phi.rows(), Rat(0));
        for (std::size_t i = 0; i < phi.rows(); ++i)
            for (std::size_t kk = 0; kk < phi.cols(); ++kk) v1m2[i] += Rat(phi(i, kk)) * v1[kk];
        auto cls2 = a2.canonical(v1m2);
        std::vector<Int> route1(gl2.target.factors.size(), 0);
        for (std::size_t i = 0; i < cls2.size(); ++i)
            for (std::size_t rr = 0; rr < route1.size(); ++rr)
                route1[rr] = (route1[rr] + cls2[i] * gl2.generator_images[i][rr]) %
                             gl2.target.factors[rr];
        // route 2: glue in e1 then psi
        const auto& img1 = gl1.generator_images[j];
        auto w1 = gl1.target.vector_of(img1);  // coords in M1^perp basis
        std::vector<Rat> w1c2(psi.rows(), Rat(0));
        for (std::size_t i = 0; i < psi.rows(); ++i)
            for (std::size_t kk = 0; kk < psi.cols(); ++kk) w1c2[i] += Rat(psi(i, kk)) * w1[kk];
        auto route2 = gl2.target.canonical(w1c2);
        if (route1 != route2) out.mismatches.emplace_back(route1, route2);
    }
    if (out.mismatches.empty())
        throw std::logic_error("extend_isometry: non-integral extension but no mismatch found");
    return out;
}

bool nikulin_isometry_class_equal(const Lattice& l1, const Lattice& l2) {
    Triple t1 = triple(l1), t2 = triple(l2);
    if (t1.sign.n_plus == 0 || t1.sign.n_minus == 0 || t2.sign.n_plus == 0 ||
        t2.sign.n_minus == 0)
        throw std::invalid_argument("nikulin_isometry_class_equal: definite lattice");
    return t1.sign.n_plus == t2.sign.n_plus && t1.sign.n_minus == t2.sign.n_minus &&
           t1.a == t2.a && t1.delta == t2.delta;
}

Embedding embed_I17_2_in_K3() {
    // basis order of the K3 lattice here: U, U, U, E8(-1), E8(-1)
    Lattice k3 = lattice_K3();
    IntMatrix b(8, 22);
    b(0, 0) = 1;
    b(0, 1) = 1;  // e+f in the first U, norm 2
    // pairwise orthogonal (-2)-roots: Bourbaki nodes {1,2,5,7} are an
    // independent set in the E8 diagram
    const std::size_t roots1[] = {6 + 0, 6 + 1, 6 + 4, 6 + 6};
    const std::size_t roots2[] = {14 + 0, 14 + 1, 14 + 4};
    std::size_t r = 1;
    for (std::size_t c : roots1) b(r++, c) = 1;
    for (std::size_t c : roots2) b(r++, c) = 1;
    Embedding e(k3, b);
    if (!(e.induced_gram() == lattice_I17_2().gram))
        throw std::logic_error("embed_I17_2_in_K3: wrong induced Gram");
    if (!is_primitive(e)) throw std::logic_error("embed_I17_2_in_K3: not primitive");
    return e;
}

void write_int_matrix(const std::string& path, const IntMatrix& m) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_int_matrix: cannot open " + path);
    os << m.rows() << ' ' << m.cols() << '\n' << m.str();
}

IntMatrix read_int_matrix(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_int_matrix: cannot open " + path);
    std::size_t rows, cols;
    if (!(is >> rows >> cols)) throw std::runtime_error("read_int_matrix: bad header in " + path);
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            std::string tok;
            if (!(is >> tok)) throw std::runtime_error("read_int_matrix: truncated " + path);
            m(i, j) = Int(tok);
        }
    return m;
}

}  // namespace prymtk
