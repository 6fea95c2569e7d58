#include "prymtk/quartic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace prymtk {

std::vector<std::array<int, 3>> monomials(int degree) {
    std::vector<std::array<int, 3>> m;
    for (int i = degree; i >= 0; --i)
        for (int j = degree - i; j >= 0; --j) m.push_back({i, j, degree - i - j});
    return m;
}

namespace {

std::size_t mono_index(int degree, int i, int j) {
    // position of x^i y^j z^(d-i-j) in graded-lex order
    std::size_t skip = std::size_t(degree - i) * (degree - i + 1) / 2;
    return skip + std::size_t(degree - i - j);
}

template <typename T>
std::vector<T> binary_mul(const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> c(a.size() + b.size() - 1, T(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

template <typename T>
std::vector<T> binary_pow(const std::vector<T>& a, int n) {
    std::vector<T> r{T(1)};
    for (int k = 0; k < n; ++k) r = binary_mul(r, a);
    return r;
}

// dense homogeneous trivariate polynomial of fixed degree
struct TriPoly {
    int degree;
    std::vector<Rat> c;
    explicit TriPoly(int d) : degree(d), c(monomials(d).size(), Rat(0)) {}
};

TriPoly tri_mul(const TriPoly& a, const TriPoly& b) {
    TriPoly r(a.degree + b.degree);
    auto ma = monomials(a.degree);
    auto mb = monomials(b.degree);
    for (std::size_t i = 0; i < ma.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < mb.size(); ++j) {
            if (b.c[j] == 0) continue;
            r.c[mono_index(r.degree, ma[i][0] + mb[j][0], ma[i][1] + mb[j][1])] += a.c[i] * b.c[j];
        }
    }
    return r;
}

TriPoly tri_pow(const TriPoly& a, int n) {
    TriPoly r(0);
    r.c[0] = 1;
    for (int k = 0; k < n; ++k) r = tri_mul(r, a);
    return r;
}

}  // namespace

TernaryForm::TernaryForm(int deg, std::vector<Rat> c) : degree(deg), coeffs(std::move(c)) {
    if (deg != 2 && deg != 4 && deg != 1 && deg != 3)
        throw std::invalid_argument("TernaryForm: unsupported degree");
    if (coeffs.size() != monomials(deg).size())
        throw std::invalid_argument("TernaryForm: coefficient count mismatch");
}

bool TernaryForm::is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Rat& r) { return r == 0; });
}

Rat TernaryForm::eval(const Rat& x, const Rat& y, const Rat& z) const {
    Rat s(0);
    auto ms = monomials(degree);
    for (std::size_t k = 0; k < ms.size(); ++k) {
        if (coeffs[k] == 0) continue;
        Rat t = coeffs[k];
        for (int i = 0; i < ms[k][0]; ++i) t *= x;
        for (int i = 0; i < ms[k][1]; ++i) t *= y;
        for (int i = 0; i < ms[k][2]; ++i) t *= z;
        s += t;
    }
    return s;
}

Cplx TernaryForm::eval(Cplx x, Cplx y, Cplx z) const {
    Cplx s(0);
    auto ms = monomials(degree);
    auto cc = coeffs_c();
    for (std::size_t k = 0; k < ms.size(); ++k) {
        Cplx t = cc[k];
        for (int i = 0; i < ms[k][0]; ++i) t *= x;
        for (int i = 0; i < ms[k][1]; ++i) t *= y;
        for (int i = 0; i < ms[k][2]; ++i) t *= z;
        s += t;
    }
    return s;
}

std::vector<Cplx> TernaryForm::coeffs_c() const {
    std::vector<Cplx> c(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        c[i] = Cplx(static_cast<double>(coeffs[i]), 0.0);
    return c;
}

TernaryForm TernaryForm::partial(int var) const {
    auto ms = monomials(degree);
    std::vector<Rat> out(monomials(degree - 1).size(), Rat(0));
    for (std::size_t k = 0; k < ms.size(); ++k) {
        int e = ms[k][var];
        if (e == 0 || coeffs[k] == 0) continue;
        std::array<int, 3> m = ms[k];
        m[var] -= 1;
        out[mono_index(degree - 1, m[0], m[1])] += e * coeffs[k];
    }
    TernaryForm f;
    f.degree = degree - 1;
    f.coeffs = std::move(out);
    return f;
}

TernaryForm TernaryForm::compose(const RatMatrix& a) const {
    if (a.rows() != 3 || a.cols() != 3) throw std::invalid_argument("compose: need 3x3 matrix");
    // rows of the substitution: new variable i evaluates row i of A at (x,y,z)
    std::array<TriPoly, 3> lin{TriPoly(1), TriPoly(1), TriPoly(1)};
    for (int v = 0; v < 3; ++v) {
        lin[v].c[0] = a(v, 0);  // x
        lin[v].c[1] = a(v, 1);  // y
        lin[v].c[2] = a(v, 2);  // z
    }
    auto ms = monomials(degree);
    TriPoly acc(degree);
    for (std::size_t k = 0; k < ms.size(); ++k) {
        if (coeffs[k] == 0) continue;
        TriPoly term = tri_pow(lin[0], ms[k][0]);
        term = tri_mul(term, tri_pow(lin[1], ms[k][1]));
        term = tri_mul(term, tri_pow(lin[2], ms[k][2]));
        for (std::size_t t = 0; t < acc.c.size(); ++t) acc.c[t] += coeffs[k] * term.c[t];
    }
    TernaryForm f;
    f.degree = degree;
    f.coeffs = std::move(acc.c);
    return f;
}

TernaryForm TernaryForm::operator*(const TernaryForm& o) const {
    TriPoly pa(degree), pb(o.degree);
    pa.c = coeffs;
    pb.c = o.coeffs;
    auto r = tri_mul(pa, pb);
    TernaryForm f;
    f.degree = degree + o.degree;
    f.coeffs = std::move(r.c);
    return f;
}

TernaryForm TernaryForm::scaled(const Rat& c) const {
    TernaryForm f = *this;
    for (auto& x : f.coeffs) x *= c;
    return f;
}

TernaryForm TernaryForm::operator-(const TernaryForm& o) const {
    if (degree != o.degree) throw std::invalid_argument("TernaryForm: degree mismatch");
    TernaryForm f = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i) f.coeffs[i] -= o.coeffs[i];
    return f;
}

Line Line::from_coords(Cplx l0, Cplx l1, Cplx l2) {
    std::array<Cplx, 3> v{l0, l1, l2};
    std::size_t p = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(v[i]) > std::abs(v[p])) p = i;
    if (std::abs(v[p]) == 0.0) throw std::invalid_argument("Line: zero coordinates");
    Cplx d = v[p];
    return Line{{v[0] / d, v[1] / d, v[2] / d}};
}

std::array<std::array<Cplx, 3>, 2> Line::parametrization() const {
    std::size_t p = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(l[i]) > std::abs(l[p])) p = i;
    std::array<std::size_t, 2> rest{};
    std::size_t w = 0;
    for (std::size_t i = 0; i < 3; ++i)
        if (i != p) rest[w++] = i;
    std::array<std::array<Cplx, 3>, 2> v{};
    v[0][rest[0]] = l[p];
    v[0][p] = -l[rest[0]];
    v[1][rest[1]] = l[p];
    v[1][p] = -l[rest[1]];
    return v;
}

double Line::distance(const Line& o) const {
    // chordal (Fubini-Study) distance: scale-invariant, robust when the two
    // normalizations picked different pivot coordinates
    Cplx inner(0);
    double n1 = 0, n2 = 0;
    for (int i = 0; i < 3; ++i) {
        inner += l[i] * std::conj(o.l[i]);
        n1 += std::norm(l[i]);
        n2 += std::norm(o.l[i]);
    }
    double c = std::norm(inner) / (n1 * n2);
    return std::sqrt(std::max(0.0, 1.0 - c));
}

std::array<std::array<Rat, 3>, 2> RatLine::parametrization() const {
    std::size_t p = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (abs(l[i]) > abs(l[p])) p = i;
    if (l[p] == 0) throw std::invalid_argument("RatLine: zero coordinates");
    std::array<std::size_t, 2> rest{};
    std::size_t w = 0;
    for (std::size_t i = 0; i < 3; ++i)
        if (i != p) rest[w++] = i;
    std::array<std::array<Rat, 3>, 2> v{};
    v[0][rest[0]] = l[p];
    v[0][p] = -l[rest[0]];
    v[1][rest[1]] = l[p];
    v[1][p] = -l[rest[1]];
    return v;
}

Line RatLine::numeric() const {
    return Line::from_coords(static_cast<double>(l[0]), static_cast<double>(l[1]),
                             static_cast<double>(l[2]));
}

namespace {

template <typename T>
std::vector<T> restrict_impl(const TernaryForm& f, const std::array<std::array<T, 3>, 2>& v,
                             const std::vector<T>& fc) {
    auto ms = monomials(f.degree);
    std::vector<T> out(std::size_t(f.degree) + 1, T(0));
    for (std::size_t k = 0; k < ms.size(); ++k) {
        if (fc[k] == T(0)) continue;
        std::vector<T> term{T(1)};
        for (int var = 0; var < 3; ++var) {
            std::vector<T> lin{v[0][var], v[1][var]};  // s*v0[var] + u*v1[var]
            term = binary_mul(term, binary_pow(lin, ms[k][var]));
        }
        for (std::size_t i = 0; i < term.size(); ++i) out[i] += fc[k] * term[i];
    }
    return out;
}

}  // namespace

std::vector<Rat> restrict_to_line(const TernaryForm& f, const RatLine& t) {
    return restrict_impl<Rat>(f, t.parametrization(), f.coeffs);
}

std::vector<Cplx> restrict_to_line(const TernaryForm& f, const Line& t) {
    return restrict_impl<Cplx>(f, t.parametrization(), f.coeffs_c());
}

std::vector<Rat> restrict_to_chart(const TernaryForm& f, const std::array<Rat, 3>& p0,
                                   const std::array<Rat, 3>& p1) {
    return restrict_impl<Rat>(f, {p0, p1}, f.coeffs);
}

std::vector<Cplx> poly_roots(const std::vector<Cplx>& coeffs) {
    double maxc = 0;
    for (const auto& c : coeffs) maxc = std::max(maxc, std::abs(c));
    if (maxc == 0) throw std::invalid_argument("poly_roots: zero polynomial");
    std::size_t deg = coeffs.size() - 1;
    while (deg > 0 && std::abs(coeffs[deg]) < 1e-13 * maxc) --deg;
    if (deg == 0) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (std::size_t i = 0; i + 1 < deg; ++i) comp(i + 1, i) = 1.0;
    for (std::size_t i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<Cplx> roots(deg);
    for (std::size_t i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(i);
    std::sort(roots.begin(), roots.end(), [](Cplx a, Cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

std::string to_string(Tangency t) {
    switch (t) {
        case Tangency::ordinary: return "ordinary";
        case Tangency::simple_tangent: return "simple-tangent";
        case Tangency::flex: return "flex";
        case Tangency::bitangent: return "bitangent";
        case Tangency::hyperflex: return "hyperflex";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// exact univariate helpers

namespace {

void trim(std::vector<Rat>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

std::vector<Rat> poly_derivative(const std::vector<Rat>& p) {
    if (p.size() <= 1) return {};
    std::vector<Rat> d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = Rat(Int(i)) * p[i];
    return d;
}

std::vector<Rat> poly_mod(std::vector<Rat> a, const std::vector<Rat>& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rat f = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
        trim(a);
    }
    return a;
}

std::vector<Rat> poly_div(std::vector<Rat> a, const std::vector<Rat>& b) {
    trim(a);
    std::vector<Rat> q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rat(0));
    while (a.size() >= b.size() && !a.empty()) {
        Rat f = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        q[off] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
        trim(a);
    }
    return q;
}

}  // namespace

std::vector<Rat> poly_gcd(std::vector<Rat> a, std::vector<Rat> b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = poly_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rat lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

std::vector<std::vector<Rat>> squarefree_decomposition(const std::vector<Rat>& p) {
    // Yun's algorithm
    std::vector<Rat> f = p;
    trim(f);
    if (f.size() <= 1) return {};
    std::vector<std::vector<Rat>> out;
    auto fp = poly_derivative(f);
    auto a = poly_gcd(f, fp);
    auto b = poly_div(f, a);
    auto c = poly_div(fp, a);
    // d = c - b'
    for (;;) {
        auto bp = poly_derivative(b);
        std::vector<Rat> d(std::max(c.size(), bp.size()), Rat(0));
        for (std::size_t i = 0; i < c.size(); ++i) d[i] += c[i];
        for (std::size_t i = 0; i < bp.size(); ++i) d[i] -= bp[i];
        trim(d);
        if (b.size() <= 1) break;
        auto ai = poly_gcd(b, d);
        out.push_back(ai);
        b = poly_div(b, ai);
        c = poly_div(d, ai);
    }
    return out;
}

Rat resultant(const std::vector<Rat>& p, const std::vector<Rat>& q) {
    std::vector<Rat> a = p, b = q;
    trim(a);
    trim(b);
    if (a.empty() || b.empty()) return Rat(0);
    std::size_t m = a.size() - 1, n = b.size() - 1;
    if (m == 0 && n == 0) return Rat(1);
    RatMatrix s(m + n, m + n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= m; ++j) s(i, i + j) = a[m - j];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= n; ++j) s(n + i, i + j) = b[n - j];
    return determinant(s);
}

std::vector<Rat> resultant_z(const TernaryForm& f, const TernaryForm& g) {
    const int m = f.degree, n = g.degree;
    // z-leading coefficients must be nonzero constants
    if (f.eval(Rat(0), Rat(0), Rat(1)) == 0 || g.eval(Rat(0), Rat(0), Rat(1)) == 0)
        throw std::invalid_argument("resultant_z: vanishing z-leading coefficient");
    const int d = m * n;
    auto slice = [](const TernaryForm& h, const Rat& t) {
        // h(t, 1, z) as a polynomial in z
        std::vector<Rat> out(std::size_t(h.degree) + 1, Rat(0));
        auto ms = monomials(h.degree);
        for (std::size_t k = 0; k < ms.size(); ++k) {
            if (h.coeffs[k] == 0) continue;
            Rat v = h.coeffs[k];
            for (int i = 0; i < ms[k][0]; ++i) v *= t;
            out[ms[k][2]] += v;
        }
        return out;
    };
    // sample and interpolate in t = x/y
    std::vector<Rat> ts, vs;
    for (int k = 0; k <= d; ++k) {
        Rat t(k);
        ts.push_back(t);
        vs.push_back(resultant(slice(f, t), slice(g, t)));
    }
    // Lagrange interpolation
    std::vector<Rat> r(d + 1, Rat(0));
    for (int i = 0; i <= d; ++i) {
        std::vector<Rat> basis{Rat(1)};
        Rat denom(1);
        for (int j = 0; j <= d; ++j) {
            if (j == i) continue;
            // multiply by (t - ts[j])
            std::vector<Rat> nb(basis.size() + 1, Rat(0));
            for (std::size_t k = 0; k < basis.size(); ++k) {
                nb[k + 1] += basis[k];
                nb[k] -= ts[j] * basis[k];
            }
            basis = std::move(nb);
            denom *= ts[i] - ts[j];
        }
        Rat w = vs[i] / denom;
        for (std::size_t k = 0; k < basis.size(); ++k) r[k] += w * basis[k];
    }
    return r;  // r[i] = coefficient of x^i y^(d-i)
}

// ---------------------------------------------------------------------------
// smoothness by elimination: project the singular locus to the t = x/y line
// via resultants, then decide the finitely many candidate directions exactly
// with a gcd computation over Q[t]/(h) (dynamic evaluation: the modulus is
// split whenever a leading coefficient fails to be invertible)

namespace {

RatMatrix chart_matrix(int which) {
    // deterministic list of invertible coordinate changes
    static const std::vector<std::vector<long>> charts = {
        {1, 0, 0, 0, 1, 0, 0, 0, 1},
        {1, 1, 0, 0, 1, 1, 1, 0, 1},
        {1, 2, 3, 0, 1, 2, 1, 1, 1},
        {2, 1, 1, 1, 3, 1, 1, 1, 4},
        {1, -1, 2, 2, 1, -1, -1, 2, 1},
        {3, 1, 2, 1, 1, 1, 2, 1, 3},
    };
    const auto& c = charts[which % charts.size()];
    RatMatrix a(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = Rat(c[3 * i + j]);
    return a;
}

using PolyQ = std::vector<Rat>;

PolyQ pq_mul(const PolyQ& a, const PolyQ& b) {
    if (a.empty() || b.empty()) return {};
    PolyQ c(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// inverse of a modulo h, both with gcd(a, h) = 1; extended Euclid
PolyQ inv_mod(PolyQ a, const PolyQ& h) {
    PolyQ r0 = h, r1 = poly_mod(std::move(a), h);
    PolyQ s0 = {}, s1 = {Rat(1)};  // coefficients of the second argument
    while (!r1.empty()) {
        PolyQ q = poly_div(r0, r1);
        PolyQ r2 = poly_mod(r0, r1);
        PolyQ qs = pq_mul(q, s1);
        PolyQ s2(std::max(s0.size(), qs.size()), Rat(0));
        for (std::size_t i = 0; i < s0.size(); ++i) s2[i] += s0[i];
        for (std::size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
        trim(s2);
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0.size() != 1) throw std::logic_error("inv_mod: arguments not coprime");
    PolyQ inv = s0;
    for (auto& c : inv) c /= r0[0];
    return poly_mod(std::move(inv), h);
}

// polynomial in z whose coefficients live in Q[t]
using ZPoly = std::vector<PolyQ>;

struct SplitNeeded {
    PolyQ factor;  // nontrivial monic factor of the current modulus
};

// normalize mod h; drop leading coefficients that vanish mod h; request a
// split when a leading coefficient is a zero divisor
ZPoly zp_reduce(ZPoly p, const PolyQ& h) {
    for (auto& c : p) c = poly_mod(std::move(c), h);
    while (!p.empty()) {
        if (p.back().empty()) {
            p.pop_back();
            continue;
        }
        PolyQ g = poly_gcd(p.back(), h);
        if (g.size() > 1) throw SplitNeeded{g};
        break;
    }
    return p;
}

// remainder of a by b over Q[t]/h, both with invertible leading coefficients
ZPoly zp_mod(ZPoly a, const ZPoly& b, const PolyQ& h) {
    PolyQ lci = inv_mod(b.back(), h);
    while (a.size() >= b.size() && !a.empty()) {
        PolyQ f = poly_mod(pq_mul(a.back(), lci), h);
        std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            PolyQ fb = pq_mul(f, b[i]);
            PolyQ& t = a[off + i];
            if (t.size() < fb.size()) t.resize(fb.size(), Rat(0));
            for (std::size_t k = 0; k < fb.size(); ++k) t[k] -= fb[k];
        }
        a = zp_reduce(std::move(a), h);
    }
    return a;
}

// do the three z-polynomials, with t ranging over the roots of h, share a
// common root (t0, z0)?
bool d5_has_common_root(const PolyQ& h, const std::array<ZPoly, 3>& ps) {
    if (h.size() <= 1) return false;  // no roots of t left on this branch
    try {
        ZPoly g = zp_reduce(ps[0], h);
        for (int i = 1; i < 3; ++i) {
            ZPoly b = zp_reduce(ps[i], h);
            // Euclid in z over Q[t]/h
            while (!b.empty()) {
                ZPoly r = zp_mod(std::move(g), b, h);
                g = std::move(b);
                b = std::move(r);
            }
            if (g.empty()) continue;  // gcd with 0: keep the other argument
        }
        if (g.empty()) return true;      // all three vanish identically mod h
        return g.size() >= 2;            // nonconstant gcd in z: common root
    } catch (const SplitNeeded& s) {
        PolyQ other = poly_div(h, s.factor);
        return d5_has_common_root(s.factor, ps) || d5_has_common_root(other, ps);
    }
}

// f(t, 1, z) with exact coefficients in Q[t]
ZPoly z_slice(const TernaryForm& f) {
    ZPoly out(std::size_t(f.degree) + 1);
    auto ms = monomials(f.degree);
    for (std::size_t k = 0; k < ms.size(); ++k) {
        if (f.coeffs[k] == 0) continue;
        PolyQ& c = out[ms[k][2]];
        if (c.size() <= std::size_t(ms[k][0])) c.resize(ms[k][0] + 1, Rat(0));
        c[ms[k][0]] += f.coeffs[k];
    }
    for (auto& c : out) trim(c);
    return out;
}

// f(1, 0, z) as a univariate polynomial in z
PolyQ z_slice_y0(const TernaryForm& f) {
    PolyQ out(std::size_t(f.degree) + 1, Rat(0));
    auto ms = monomials(f.degree);
    for (std::size_t k = 0; k < ms.size(); ++k)
        if (ms[k][1] == 0) out[ms[k][2]] += f.coeffs[k];
    trim(out);
    return out;
}

PolyQ squarefree_part(const PolyQ& p) {
    auto g = poly_gcd(p, poly_derivative(p));
    if (g.size() <= 1) return p;
    return poly_div(p, g);
}

}  // namespace

bool is_smooth(const TernaryForm& f) {
    if (f.degree != 4) throw std::invalid_argument("is_smooth: expects a quartic");
    if (f.is_zero()) throw std::invalid_argument("is_smooth: zero form");
    for (int chart = 0; chart < 6; ++chart) {
        TernaryForm g = f.compose(chart_matrix(chart));
        TernaryForm fx = g.partial(0), fy = g.partial(1), fz = g.partial(2);
        // a vanishing partial means the quartic is a cone: singular at the apex
        if (fx.is_zero() || fy.is_zero() || fz.is_zero()) return false;
        // require unit leading z-coefficients so the resultants are faithful
        if (fx.eval(Rat(0), Rat(0), Rat(1)) == 0 || fy.eval(Rat(0), Rat(0), Rat(1)) == 0 ||
            fz.eval(Rat(0), Rat(0), Rat(1)) == 0)
            continue;

        // candidate singular points in the direction y = 0
        PolyQ g0 = poly_gcd(poly_gcd(z_slice_y0(fx), z_slice_y0(fz)), z_slice_y0(fy));
        if (g0.size() >= 2) return false;

        // project to the t = x/y line
        PolyQ r1 = resultant_z(fx, fz);
        PolyQ r2 = resultant_z(fy, fz);
        trim(r1);
        trim(r2);
        if (r1.empty() && r2.empty()) return false;  // fz shares a curve with both
        PolyQ h = r1.empty() ? r2 : (r2.empty() ? r1 : poly_gcd(r1, r2));
        if (h.size() <= 1) return true;
        h = squarefree_part(h);
        Rat lead = h.back();
        for (auto& c : h) c /= lead;

        std::array<ZPoly, 3> ps{z_slice(fx), z_slice(fy), z_slice(fz)};
        return !d5_has_common_root(h, ps);
    }
    throw std::runtime_error("is_smooth: no usable chart");
}

bool conic_is_smooth(const TernaryForm& q) {
    if (q.degree != 2) throw std::invalid_argument("conic_is_smooth: expects a conic");
    // symmetric matrix of the quadratic form
    RatMatrix m(3, 3);
    m(0, 0) = q.coeffs[0];
    m(1, 1) = q.coeffs[3];
    m(2, 2) = q.coeffs[5];
    m(0, 1) = m(1, 0) = q.coeffs[1] / 2;
    m(0, 2) = m(2, 0) = q.coeffs[2] / 2;
    m(1, 2) = m(2, 1) = q.coeffs[4] / 2;
    return determinant(m) != 0;
}

// ---------------------------------------------------------------------------
// tangency classification

namespace {

struct Cluster {
    Cplx center;
    int mult;
};

std::vector<Cluster> cluster_roots(const std::vector<Cplx>& roots, double tol) {
    std::vector<Cluster> cl;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        Cplx sum = roots[i];
        int cnt = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(roots[j] - roots[i]) < tol) {
                sum += roots[j];
                ++cnt;
                used[j] = true;
            }
        }
        cl.push_back({sum / double(cnt), cnt});
    }
    return cl;
}

Tangency pattern_to_class(std::vector<int> mults) {
    std::sort(mults.begin(), mults.end(), std::greater<int>());
    if (mults.empty() || mults[0] == 1) return Tangency::ordinary;
    if (mults[0] == 4) return Tangency::hyperflex;
    if (mults[0] == 3) return Tangency::flex;
    if (mults.size() > 1 && mults[1] >= 2) return Tangency::bitangent;
    return Tangency::simple_tangent;
}

}  // namespace

namespace {

std::vector<Cplx> cplx_derivative(const std::vector<Cplx>& p) {
    if (p.size() <= 1) return {Cplx(0)};
    std::vector<Cplx> d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = double(i) * p[i];
    return d;
}

Cplx cplx_eval(const std::vector<Cplx>& p, Cplx z) {
    Cplx v(0);
    for (std::size_t i = p.size(); i-- > 0;) v = v * z + p[i];
    return v;
}

// refine a multiplicity-m root: Newton on the (m-1)-th derivative
Cplx refine_multiple_root(const std::vector<Cplx>& g, Cplx z, int m) {
    std::vector<Cplx> d = g;
    for (int k = 0; k < m - 1; ++k) d = cplx_derivative(d);
    std::vector<Cplx> dp = cplx_derivative(d);
    for (int it = 0; it < 30; ++it) {
        Cplx dv = cplx_eval(dp, z);
        if (std::abs(dv) < 1e-300) break;
        Cplx step = cplx_eval(d, z) / dv;
        z -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    return z;
}

struct PatternFit {
    std::vector<Cluster> clusters;
    std::vector<int> mults;  // includes a possible root at infinity
    double residual = 1e300;
    int degeneracy = 0;  // sum of (mult - 1)
};

PatternFit fit_pattern(const std::vector<Cplx>& g, const std::vector<Cplx>& roots, int inf_mult,
                       double tol, double maxc) {
    PatternFit pf;
    pf.clusters = cluster_roots(roots, tol);
    for (auto& c : pf.clusters)
        if (c.mult >= 2) c.center = refine_multiple_root(g, c.center, c.mult);
    for (const auto& c : pf.clusters) {
        pf.mults.push_back(c.mult);
        pf.degeneracy += c.mult - 1;
    }
    if (inf_mult > 0) {
        pf.mults.push_back(inf_mult);
        pf.degeneracy += inf_mult - 1;
    }
    std::vector<Cplx> fit{g[roots.size()]};  // leading coeff of the stripped poly
    for (const auto& c : pf.clusters) {
        std::vector<Cplx> lin{-c.center, Cplx(1.0)};
        for (int k = 0; k < c.mult; ++k) fit = binary_mul(fit, lin);
    }
    double res = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        Cplx fi = i < fit.size() ? fit[i] : Cplx(0);
        res = std::max(res, std::abs(g[i] - fi));
    }
    pf.residual = res / maxc;
    return pf;
}

}  // namespace

TangencyReport classify_tangency(const TernaryForm& f, const Line& t, double cluster_tol) {
    TangencyReport rep;
    rep.line = t;
    auto g = restrict_to_line(f, t);
    double maxc = 0;
    for (const auto& c : g) maxc = std::max(maxc, std::abs(c));
    if (maxc < 1e-14) {
        rep.restriction_zero = true;
        return rep;
    }
    auto roots = poly_roots(g);
    int inf_mult = int(g.size()) - 1 - int(roots.size());

    // a quadruple root is resolved by the companion matrix only to O(eps^{1/4}),
    // so try several cluster scales and keep the most degenerate pattern whose
    // refined-root refit certifies
    constexpr double kFitTol = 1e-9;
    const double scales[] = {1e-3, 1e-4, 1e-5, 0.0};
    PatternFit best;
    bool have_best = false;
    PatternFit finest;
    for (double s : scales) {
        double tol = s == 0.0 ? cluster_tol : s;
        PatternFit pf = fit_pattern(g, roots, inf_mult, tol, maxc);
        if (s == 0.0) finest = pf;
        if (pf.residual < kFitTol && (!have_best || pf.degeneracy > best.degeneracy)) {
            best = pf;
            have_best = true;
        }
    }
    const PatternFit& chosen = have_best ? best : finest;
    rep.classification = pattern_to_class(chosen.mults);
    rep.residual = chosen.residual;

    auto par = t.parametrization();
    for (const auto& c : chosen.clusters) {
        if (c.mult < 2) continue;
        TangencyPoint p;
        p.parameter = c.center;
        p.multiplicity = c.mult;
        for (int v = 0; v < 3; ++v) p.point[v] = par[0][v] + c.center * par[1][v];
        rep.points.push_back(p);
    }
    return rep;
}

TangencyReport classify_tangency_exact(const TernaryForm& f, const RatLine& t) {
    TangencyReport rep;
    rep.line = t.numeric();
    auto g = restrict_to_line(f, t);
    trim(g);
    if (g.empty()) {
        rep.restriction_zero = true;
        return rep;
    }
    auto sq = squarefree_decomposition(g);
    std::vector<int> mults;
    for (std::size_t k = 0; k < sq.size(); ++k) {
        int d = int(sq[k].size()) - 1;
        for (int c = 0; c < d; ++c) mults.push_back(int(k) + 1);
    }
    int total = 0;
    for (int m : mults) total += m;
    int inf_mult = f.degree - total;
    if (inf_mult > 0) mults.push_back(inf_mult);
    rep.classification = pattern_to_class(mults);
    rep.residual = 0.0;  // exact

    auto par = t.parametrization();
    std::array<std::array<Cplx, 3>, 2> parc;
    for (int a = 0; a < 2; ++a)
        for (int v = 0; v < 3; ++v) parc[a][v] = static_cast<double>(par[a][v]);
    for (std::size_t k = 1; k < sq.size(); ++k) {
        if (sq[k].size() <= 1) continue;
        std::vector<Cplx> fc(sq[k].size());
        for (std::size_t i = 0; i < sq[k].size(); ++i) fc[i] = static_cast<double>(sq[k][i]);
        for (Cplx r : poly_roots(fc)) {
            TangencyPoint p;
            p.parameter = r;
            p.multiplicity = int(k) + 1;
            for (int v = 0; v < 3; ++v) p.point[v] = parc[0][v] + r * parc[1][v];
            rep.points.push_back(p);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// totally tangent pairs

PairStatus make_tangent_pair(const TernaryForm& b0, const TernaryForm& q, const Rat& lambda) {
    if (b0.degree != 4 || q.degree != 2)
        throw std::invalid_argument("make_tangent_pair: need a quartic and a conic");
    if (!conic_is_smooth(q)) throw std::invalid_argument("make_tangent_pair: conic not smooth");

    PairStatus out;
    out.delta0 = (q * q) - b0.scaled(lambda);
    if (lambda == 0) {
        out.kind = PairStatus::q_locus;
        return out;
    }
    if (!is_smooth(out.delta0)) {
        out.kind = PairStatus::degenerate;
        // best-effort numeric witness of a singular point
        for (int chart = 0; chart < 6 && !out.singular_witness; ++chart) {
            RatMatrix a = chart_matrix(chart);
            TernaryForm g = out.delta0.compose(a);
            if (g.eval(Rat(0), Rat(0), Rat(1)) == 0) continue;
            TernaryForm gx = g.partial(0), gy = g.partial(1), gz = g.partial(2);
            if (gx.eval(Rat(0), Rat(0), Rat(1)) == 0 || gy.eval(Rat(0), Rat(0), Rat(1)) == 0)
                continue;
            auto r = resultant_z(gx, gy);
            std::vector<Cplx> rc(r.size());
            for (std::size_t i = 0; i < r.size(); ++i) rc[i] = static_cast<double>(r[i]);
            for (Cplx t : poly_roots(rc)) {
                // common z root of gx, gy at (t, 1, z)
                auto zslice = [&](const TernaryForm& h) {
                    std::vector<Cplx> zc(std::size_t(h.degree) + 1, Cplx(0));
                    auto ms = monomials(h.degree);
                    auto hc = h.coeffs_c();
                    for (std::size_t k = 0; k < ms.size(); ++k)
                        zc[ms[k][2]] += hc[k] * std::pow(t, ms[k][0]);
                    return zc;
                };
                auto zx = poly_roots(zslice(gx));
                for (Cplx z : zx) {
                    double scale = 1.0 + std::abs(t) + std::abs(z);
                    if (std::abs(gy.eval(t, 1.0, z)) < 1e-6 * std::pow(scale, 3) &&
                        std::abs(gz.eval(t, 1.0, z)) < 1e-6 * std::pow(scale, 3)) {
                        // map back to original coordinates
                        std::array<Cplx, 3> w{t, Cplx(1), z};
                        std::array<Cplx, 3> orig{};
                        for (int i = 0; i < 3; ++i)
                            for (int j = 0; j < 3; ++j)
                                orig[i] += static_cast<double>(a(i, j)) * w[j];
                        out.singular_witness = orig;
                        break;
                    }
                }
                if (out.singular_witness) break;
            }
        }
        return out;
    }

    out.kind = PairStatus::u_member;

    // tangency verification: Res_z(B0, Delta0) = c * Res_z(B0, Q)^2 with the
    // degree-8 base resultant squarefree (8 distinct tangency directions)
    for (int chart = 0; chart < 6; ++chart) {
        RatMatrix a = chart_matrix(chart);
        TernaryForm bb = b0.compose(a), qq = q.compose(a), dd = out.delta0.compose(a);
        if (bb.eval(Rat(0), Rat(0), Rat(1)) == 0 || qq.eval(Rat(0), Rat(0), Rat(1)) == 0)
            continue;
        auto r8 = resultant_z(bb, qq);
        if (r8.back() == 0) continue;  // intersection at infinity in this chart
        auto dr8 = poly_derivative(r8);
        if (poly_gcd(r8, dr8).size() > 1) continue;  // repeated direction; re-chart
        auto r16 = resultant_z(bb, dd);
        // compare r16 with r8^2 up to a constant
        std::vector<Rat> sq = binary_mul(r8, r8);
        Rat c = r16.back() / sq.back();
        bool match = true;
        for (std::size_t i = 0; i < sq.size(); ++i)
            if (r16[i] != c * sq[i]) { match = false; break; }
        out.tangency_verified = match;
        if (!match) return out;

        // numeric tangency points: roots of r8, lifted to z
        std::vector<Cplx> rc(r8.size());
        for (std::size_t i = 0; i < r8.size(); ++i) rc[i] = static_cast<double>(r8[i]);
        auto bslice = [&](Cplx t) {
            std::vector<Cplx> zc(5, Cplx(0));
            auto ms = monomials(4);
            auto hc = bb.coeffs_c();
            for (std::size_t k = 0; k < ms.size(); ++k)
                zc[ms[k][2]] += hc[k] * std::pow(t, ms[k][0]);
            return zc;
        };
        for (Cplx t : poly_roots(rc)) {
            // z root shared by bb and qq
            auto zb = poly_roots(bslice(t));
            Cplx best_z = 0;
            double best = 1e300;
            for (Cplx z : zb) {
                double v = std::abs(qq.eval(t, 1.0, z));
                if (v < best) { best = v; best_z = z; }
            }
            std::array<Cplx, 3> w{t, Cplx(1), best_z};
            std::array<Cplx, 3> orig{};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) orig[i] += static_cast<double>(a(i, j)) * w[j];
            out.tangency_points.push_back(orig);
        }
        return out;
    }
    throw std::runtime_error("make_tangent_pair: no usable chart for tangency verification");
}

std::optional<ConicFit> points_on_conic(const std::vector<std::array<Cplx, 3>>& pts, double tol) {
    if (pts.size() < 6) throw std::invalid_argument("points_on_conic: need at least 6 points");
    auto ms = monomials(2);
    Eigen::MatrixXcd m(pts.size(), 6);
    for (std::size_t r = 0; r < pts.size(); ++r) {
        // normalize the point to unit norm so residuals are scale-free
        double nrm = 0;
        for (int v = 0; v < 3; ++v) nrm += std::norm(pts[r][v]);
        nrm = std::sqrt(nrm);
        for (std::size_t k = 0; k < 6; ++k) {
            Cplx val(1.0);
            for (int v = 0; v < 3; ++v)
                for (int e = 0; e < ms[k][v]; ++e) val *= pts[r][v] / nrm;
            m(r, k) = val;
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinV);
    auto sv = svd.singularValues();
    double smallest = sv(sv.size() - 1);
    double next = sv(sv.size() - 2);
    if (smallest > tol || next < 10 * smallest) return std::nullopt;
    ConicFit fit;
    fit.residual = smallest;
    fit.gap = next;
    fit.coeffs.resize(6);
    for (int k = 0; k < 6; ++k) fit.coeffs[k] = svd.matrixV()(k, 5);
    return fit;
}

}  // namespace prymtk
