#include "prymtk/homology.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace prymtk {

namespace {

int permutation_cycles(const std::vector<int>& p) {
    int n = 0;
    std::vector<bool> seen(p.size(), false);
    for (std::size_t s = 0; s < p.size(); ++s) {
        if (seen[s]) continue;
        ++n;
        for (std::size_t t = s; !seen[t]; t = p[t]) seen[t] = true;
    }
    return n;
}

int riemann_hurwitz_genus(int sheets, const std::vector<std::vector<int>>& perms) {
    int deficiency = 0;
    for (const auto& p : perms) deficiency += sheets - permutation_cycles(p);
    int chi = 2 * sheets - deficiency;
    if ((2 - chi) % 2 != 0)
        throw std::invalid_argument("cover_presentation: odd total ramification deficiency");
    return (2 - chi) / 2;
}

IntMatrix submatrix_rows(const IntMatrix& a, std::size_t from) {
    IntMatrix r(a.rows() - from, a.cols());
    for (std::size_t i = from; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i - from, j) = a(i, j);
    return r;
}

IntMatrix submatrix_cols(const IntMatrix& a, std::size_t from) {
    IntMatrix r(a.rows(), a.cols() - from);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = from; j < a.cols(); ++j) r(i, j - from) = a(i, j);
    return r;
}

/// Index of the column lattice of img inside the lattice with the given
/// saturated row basis; img columns must lie in the rational span.
Int sublattice_index(const IntMatrix& basis, const IntMatrix& img) {
    if (basis.rows() == 0) {
        if (!img.is_zero())
            throw std::logic_error("sublattice_index: image outside the zero lattice");
        return 1;
    }
    RatMatrix gram = to_rational(basis * basis.transpose());
    RatMatrix coords = rational_inverse(gram) * to_rational(basis * img);
    IntMatrix x = to_integer(coords);  // integral because the basis is saturated
    auto snf = smith_normal_form(x);
    Int index = 1;
    for (std::size_t i = 0; i < basis.rows(); ++i) index *= snf.s(i, i);
    return index;
}

}  // namespace

CoverPresentation cover_presentation(const MonodromyResult& mon) {
    CoverPresentation pres;
    pres.sheets = 4;
    for (const auto& p : mon.perms) pres.perms.emplace_back(p.begin(), p.end());
    pres.tau.assign(mon.tau.begin(), mon.tau.end());

    for (const auto& p : pres.perms) {
        std::vector<bool> hit(pres.sheets, false);
        for (int s : p) {
            if (s < 0 || s >= pres.sheets || hit[s])
                throw std::invalid_argument("cover_presentation: not a permutation");
            hit[s] = true;
        }
    }

    std::vector<int> prod(pres.sheets);
    std::iota(prod.begin(), prod.end(), 0);
    for (const auto& p : pres.perms) {
        std::vector<int> np(pres.sheets);
        for (int s = 0; s < pres.sheets; ++s) np[s] = p[prod[s]];
        prod = np;
    }
    for (int s = 0; s < pres.sheets; ++s)
        if (prod[s] != s)
            throw std::invalid_argument("cover_presentation: loop product is not the identity");

    std::vector<int> comp(pres.sheets);
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](int x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    for (const auto& p : pres.perms)
        for (int s = 0; s < pres.sheets; ++s) comp[find(s)] = find(p[s]);
    for (int s = 0; s < pres.sheets; ++s)
        if (find(s) != find(0))
            throw std::invalid_argument("cover_presentation: cover is not connected");

    for (const auto& p : pres.perms)
        for (int s = 0; s < pres.sheets; ++s)
            if (p[pres.tau[s]] != pres.tau[p[s]])
                throw std::invalid_argument(
                    "cover_presentation: deck involution does not commute");

    pres.genus = riemann_hurwitz_genus(pres.sheets, pres.perms);
    return pres;
}

SurfaceHomology homology_with_intersection(const CoverPresentation& pres) {
    const int N = pres.sheets;
    const int n = int(pres.perms.size());
    const int E = n * N;
    if (n == 0 || N <= 0) throw std::invalid_argument("homology: empty presentation");

    // edge i*N + s runs from sheet s to sheet perms[i][s]; half-edge 2e is the
    // outgoing half at the tail, 2e+1 the incoming half at the head
    auto tail = [&](int e) { return e % N; };
    auto head = [&](int e) { return pres.perms[e / N][e % N]; };

    std::vector<std::vector<int>> inv(n, std::vector<int>(N));
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < N; ++s) inv[i][pres.perms[i][s]] = s;

    // rotation system: at each sheet, the loops in angular order, each
    // contributing its outgoing half followed by the incoming half of its lift
    // ending there
    std::vector<std::vector<int>> rot(N);
    for (int v = 0; v < N; ++v)
        for (int i = 0; i < n; ++i) {
            rot[v].push_back(2 * (i * N + v));
            rot[v].push_back(2 * (i * N + inv[i][v]) + 1);
        }

    std::vector<int> half_vertex(2 * E), half_pos(2 * E);
    for (int v = 0; v < N; ++v)
        for (std::size_t k = 0; k < rot[v].size(); ++k) {
            half_vertex[rot[v][k]] = v;
            half_pos[rot[v][k]] = int(k);
        }

    // faces: orbits of (rotation successor) o (edge flip)
    auto phi = [&](int h) {
        int h2 = h ^ 1;
        const auto& r = rot[half_vertex[h2]];
        return r[(half_pos[h2] + 1) % r.size()];
    };
    std::vector<std::vector<Int>> face_boundary;  // over the edge lattice
    {
        std::vector<bool> seen(2 * E, false);
        for (int h0 = 0; h0 < 2 * E; ++h0) {
            if (seen[h0]) continue;
            std::vector<Int> bd(E, Int(0));
            for (int h = h0; !seen[h]; h = phi(h)) {
                seen[h] = true;
                bd[h >> 1] += (h & 1) ? Int(-1) : Int(1);
            }
            face_boundary.push_back(std::move(bd));
        }
    }
    const int F = int(face_boundary.size());
    int chi = N - E + F;
    if (chi != 2 - 2 * pres.genus)
        throw std::logic_error("homology: ribbon graph Euler characteristic disagrees with "
                               "Riemann-Hurwitz");

    // spanning tree by breadth-first search from sheet 0
    std::vector<int> parent_edge(N, -1), parent_sign(N, 0), order;
    std::vector<bool> visited(N, false);
    visited[0] = true;
    order.push_back(0);
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
        int v = order[qi];
        for (int e = 0; e < E; ++e) {
            if (tail(e) == v && !visited[head(e)]) {
                visited[head(e)] = true;
                parent_edge[head(e)] = e;
                parent_sign[head(e)] = 1;
                order.push_back(head(e));
            } else if (head(e) == v && !visited[tail(e)]) {
                visited[tail(e)] = true;
                parent_edge[tail(e)] = e;
                parent_sign[tail(e)] = -1;
                order.push_back(tail(e));
            }
        }
    }
    if (int(order.size()) != N) throw std::invalid_argument("homology: cover is not connected");

    std::vector<bool> in_tree(E, false);
    for (int v = 1; v < N; ++v) in_tree[parent_edge[v]] = true;
    std::vector<int> nontree;
    for (int e = 0; e < E; ++e)
        if (!in_tree[e]) nontree.push_back(e);
    const int K = int(nontree.size());  // E - N + 1
    std::vector<int> nontree_index(E, -1);
    for (int k = 0; k < K; ++k) nontree_index[nontree[k]] = k;

    // signed edge vector of the tree path from sheet 0 down to v
    auto down = [&](int v) {
        std::vector<Int> p(E, Int(0));
        while (v != 0) {
            p[parent_edge[v]] += parent_sign[v];
            v = parent_sign[v] > 0 ? tail(parent_edge[v]) : head(parent_edge[v]);
        }
        return p;
    };

    // cycle basis: non-tree edge conjugated by tree paths to the basepoint
    std::vector<std::vector<Int>> cyc(K);
    for (int k = 0; k < K; ++k) {
        int e = nontree[k];
        auto c = down(tail(e));
        auto h = down(head(e));
        for (int j = 0; j < E; ++j) c[j] -= h[j];
        c[e] += 1;
        cyc[k] = std::move(c);
    }

    // relations: face boundaries in cycle-basis coordinates (the coordinate of
    // a cycle on the basis element of non-tree edge e is its coefficient at e)
    IntMatrix rel(K, F);
    for (int f = 0; f < F; ++f)
        for (int k = 0; k < K; ++k) rel(k, f) = face_boundary[f][nontree[k]];

    auto snf = smith_normal_form(rel);
    std::size_t r = 0;
    while (r < std::min(snf.s.rows(), snf.s.cols()) && snf.s(r, r) != 0) ++r;
    for (std::size_t i = 0; i < r; ++i)
        if (snf.s(i, i) != 1)
            throw std::logic_error("homology: torsion in the cycle quotient");
    const int g2 = K - int(r);
    if (g2 != 2 * pres.genus)
        throw std::logic_error("homology: cycle quotient rank disagrees with the genus");

    IntMatrix proj = submatrix_rows(snf.u, r);                       // 2g x K
    IntMatrix lift = submatrix_cols(unimodular_inverse(snf.u), r);   // K x 2g

    // contract the spanning tree: splice each child's rotation into its
    // parent's at the contracted edge, leaving one vertex whose boundary
    // circle carries the 2K chord endpoints
    {
        std::vector<int> root(N);
        std::iota(root.begin(), root.end(), 0);
        auto find = [&](int x) {
            while (root[x] != x) x = root[x] = root[root[x]];
            return x;
        };
        for (int v = 1; v < N; ++v) {
            int e = parent_edge[v];
            int ru = find(tail(e)), rv = find(head(e));
            if (ru == rv) throw std::logic_error("homology: tree edge inside one vertex");
            auto& lu = rot[ru];
            auto& lv = rot[rv];
            auto pu = std::find(lu.begin(), lu.end(), 2 * e) - lu.begin();
            auto pv = std::find(lv.begin(), lv.end(), 2 * e + 1) - lv.begin();
            std::vector<int> merged(lu.begin(), lu.begin() + pu);
            merged.insert(merged.end(), lv.begin() + pv + 1, lv.end());
            merged.insert(merged.end(), lv.begin(), lv.begin() + pv);
            merged.insert(merged.end(), lu.begin() + pu + 1, lu.end());
            root[rv] = ru;
            rot[ru] = std::move(merged);
            rot[rv].clear();
        }
        int r0 = find(0);
        std::fill(half_pos.begin(), half_pos.end(), -1);
        for (std::size_t k = 0; k < rot[r0].size(); ++k) half_pos[rot[r0][k]] = int(k);
        if (int(rot[r0].size()) != 2 * K)
            throw std::logic_error("homology: tree contraction left stray half-edges");
    }

    // chord diagram: basis loop k closes up inside the vertex disk by the
    // chord from its incoming slot to its outgoing slot; two loops intersect
    // once with a sign iff their chords interleave
    const int M = 2 * K;
    auto in_arc = [&](int x, int a, int b) {
        return ((x - a) % M + M) % M > 0 && ((x - a) % M + M) % M < ((b - a) % M + M) % M;
    };
    IntMatrix jk(K, K);
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l) {
            if (k == l) continue;
            int a1 = half_pos[2 * nontree[k] + 1], a2 = half_pos[2 * nontree[k]];
            int b1 = half_pos[2 * nontree[l] + 1], b2 = half_pos[2 * nontree[l]];
            bool c1 = in_arc(b1, a1, a2), c2 = in_arc(b2, a1, a2);
            if (c1 != c2) jk(k, l) = c1 ? 1 : -1;
        }
    if (!(jk + jk.transpose()).is_zero())
        throw std::logic_error("homology: chord pairing is not skew");

    // deck involution on the cycle basis: relabel each edge lift by tau on
    // the sheets, then read off the non-tree coordinates
    IntMatrix tk(K, K);
    for (int k = 0; k < K; ++k) {
        std::vector<Int> w(E, Int(0));
        for (int e = 0; e < E; ++e)
            if (cyc[k][e] != 0) w[(e / N) * N + pres.tau[e % N]] += cyc[k][e];
        // the relabeled cycle must equal its non-tree combination exactly
        std::vector<Int> check = w;
        for (int f = 0; f < K; ++f) {
            tk(f, k) = w[nontree[f]];
            if (tk(f, k) == 0) continue;
            for (int e = 0; e < E; ++e) check[e] -= tk(f, k) * cyc[f][e];
        }
        for (int e = 0; e < E; ++e)
            if (check[e] != 0)
                throw std::logic_error("homology: deck action does not preserve the cycle basis");
    }

    SurfaceHomology out;
    out.vertices = N;
    out.edges = E;
    out.faces = F;
    out.genus = pres.genus;
    out.intersection = lift.transpose() * jk * lift;
    out.tau_action = proj * tk * lift;

    Int det = determinant(out.intersection);
    if (det != 1 && det != -1)
        throw std::logic_error("homology: intersection form is not unimodular");
    if (out.tau_action * out.tau_action != IntMatrix::identity(g2))
        throw std::logic_error("homology: deck action is not an involution on H1");
    if (out.tau_action.transpose() * out.intersection * out.tau_action != out.intersection)
        throw std::logic_error("homology: deck action is not symplectic");
    return out;
}

PrymLattice prym_sublattice(const SurfaceHomology& h) {
    const std::size_t g2 = h.intersection.rows();
    PrymLattice out;

    out.basis = integer_kernel(h.tau_action + IntMatrix::identity(g2));
    out.form = out.basis * h.intersection * out.basis.transpose();

    auto snf = smith_normal_form(out.form);
    for (std::size_t i = 0; i < out.basis.rows(); ++i) out.polarization.push_back(snf.s(i, i));
    if (out.polarization.size() % 2 != 0 || out.polarization.empty() ||
        out.polarization.back() == 0)
        throw std::logic_error("prym_sublattice: restricted form is degenerate");
    out.type = {out.polarization[0], out.polarization[out.polarization.size() / 2]};

    IntMatrix id = IntMatrix::identity(g2);
    IntMatrix plus = id + h.tau_action, minus = id - h.tau_action;
    if (!(plus * minus).is_zero())
        throw std::logic_error("prym_sublattice: tau is not an involution");

    // component group of ker(id + tau) in the Jacobian: the quotient of the
    // saturated invariant lattice by (id + tau) H1
    out.component_order = sublattice_index(integer_kernel(minus), plus);

    // the anti-invariant index, reported alongside: always a power of two,
    // never below 4 for invariant rank 2
    out.anti_invariant_index = sublattice_index(out.basis, minus);
    return out;
}

}  // namespace prymtk
