#include "prymtk/exact.hpp"

#include <algorithm>
#include <sstream>

namespace prymtk {

template <typename T>
std::string Matrix<T>::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) os << ' ';
            os << (*this)(i, j);
        }
        os << '\n';
    }
    return os.str();
}

template class Matrix<Int>;
template class Matrix<Rat>;

RatMatrix to_rational(const IntMatrix& a) {
    RatMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = Rat(a(i, j));
    return r;
}

IntMatrix to_integer(const RatMatrix& a) {
    IntMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (denominator(a(i, j)) != 1)
                throw std::invalid_argument("to_integer: non-integral entry");
            r(i, j) = numerator(a(i, j));
        }
    return r;
}

namespace {

void swap_rows(IntMatrix& m, std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(i, k), m(j, k));
}
void swap_cols(IntMatrix& m, std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < m.rows(); ++k) std::swap(m(k, i), m(k, j));
}
// row i += c * row j
void add_row(IntMatrix& m, std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) += c * m(j, k);
}
void add_col(IntMatrix& m, std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < m.rows(); ++k) m(k, i) += c * m(k, j);
}
void negate_row(IntMatrix& m, std::size_t i) {
    for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = -m(i, k);
}
void negate_col(IntMatrix& m, std::size_t i) {
    for (std::size_t k = 0; k < m.rows(); ++k) m(k, i) = -m(k, i);
}

}  // namespace

SNFResult smith_normal_form(const IntMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    IntMatrix s = a;
    IntMatrix u = IntMatrix::identity(m);
    IntMatrix v = IntMatrix::identity(n);

    const std::size_t d = std::min(m, n);
    for (std::size_t t = 0; t < d; ++t) {
        // locate a nonzero pivot in the trailing block
        std::size_t pi = t, pj = t;
        bool found = false;
        Int best;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (s(i, j) != 0) {
                    Int v0 = abs(s(i, j));
                    if (!found || v0 < best) {
                        best = v0;
                        pi = i;
                        pj = j;
                        found = true;
                    }
                }
        if (!found) break;
        if (pi != t) { swap_rows(s, t, pi); swap_rows(u, t, pi); }
        if (pj != t) { swap_cols(s, t, pj); swap_cols(v, t, pj); }

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (s(i, t) == 0) continue;
                Int q = s(i, t) / s(t, t);
                add_row(s, i, t, -q);
                add_row(u, i, t, -q);
                if (s(i, t) != 0) {
                    swap_rows(s, t, i);
                    swap_rows(u, t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (s(t, j) == 0) continue;
                Int q = s(t, j) / s(t, t);
                add_col(s, j, t, -q);
                add_col(v, j, t, -q);
                if (s(t, j) != 0) {
                    swap_cols(s, t, j);
                    swap_cols(v, t, j);
                    clean = false;
                }
            }
            if (clean) break;
        }

        // enforce divisibility of the remaining block by the pivot
        bool redo = false;
        for (std::size_t i = t + 1; i < m && !redo; ++i)
            for (std::size_t j = t + 1; j < n && !redo; ++j)
                if (s(i, j) % s(t, t) != 0) {
                    add_row(s, t, i, 1);
                    add_row(u, t, i, 1);
                    redo = true;
                }
        if (redo) { --t; continue; }

        if (s(t, t) < 0) { negate_row(s, t); negate_row(u, t); }
    }
    return {u, s, v};
}

std::vector<Int> invariant_factors(const IntMatrix& a) {
    auto snf = smith_normal_form(a);
    std::vector<Int> f;
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i)
        if (snf.s(i, i) > 1) f.push_back(snf.s(i, i));
    return f;
}

HNFResult hermite_normal_form(const IntMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    IntMatrix h = a;
    IntMatrix u = IntMatrix::identity(m);

    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        // reduce column c below row r by gcd elimination
        for (;;) {
            std::size_t p = r;
            bool found = false;
            Int best;
            for (std::size_t i = r; i < m; ++i)
                if (h(i, c) != 0) {
                    Int v0 = abs(h(i, c));
                    if (!found || v0 < best) { best = v0; p = i; found = true; }
                }
            if (!found) break;
            if (p != r) { swap_rows(h, r, p); swap_rows(u, r, p); }
            bool clean = true;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (h(i, c) == 0) continue;
                Int q = h(i, c) / h(r, c);
                add_row(h, i, r, -q);
                add_row(u, i, r, -q);
                if (h(i, c) != 0) clean = false;
            }
            if (clean) break;
        }
        if (h(r, c) == 0) continue;
        if (h(r, c) < 0) { negate_row(h, r); negate_row(u, r); }
        // reduce entries above the pivot
        for (std::size_t i = 0; i < r; ++i) {
            // floor division so residues land in [0, pivot)
            Int q = h(i, c) / h(r, c);
            if (h(i, c) - q * h(r, c) < 0) q -= 1;
            if (q != 0) { add_row(h, i, r, -q); add_row(u, i, r, -q); }
        }
        ++r;
    }
    return {h, u};
}

Inertia inertia(const IntMatrix& g) {
    if (!g.is_symmetric()) throw std::invalid_argument("inertia: matrix not symmetric");
    const std::size_t n = g.rows();
    RatMatrix a = to_rational(g);
    Inertia res;

    // indices of still-active basis vectors
    std::vector<std::size_t> act(n);
    for (std::size_t i = 0; i < n; ++i) act[i] = i;

    // work on the full matrix, shrinking the active set
    std::vector<std::vector<Rat>> w(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i][j] = a(i, j);

    while (!act.empty()) {
        // diagonal pivot if available
        std::size_t kpos = act.size();
        for (std::size_t k = 0; k < act.size(); ++k)
            if (w[act[k]][act[k]] != 0) { kpos = k; break; }
        if (kpos < act.size()) {
            std::size_t p = act[kpos];
            Rat d = w[p][p];
            if (d > 0) ++res.n_plus; else ++res.n_minus;
            act.erase(act.begin() + kpos);
            for (std::size_t ii = 0; ii < act.size(); ++ii) {
                std::size_t i = act[ii];
                Rat ci = w[i][p] / d;
                if (ci == 0) continue;
                for (std::size_t jj = 0; jj < act.size(); ++jj) {
                    std::size_t j = act[jj];
                    w[i][j] -= ci * w[p][j];
                }
            }
            // symmetrize the touched block
            for (std::size_t ii = 0; ii < act.size(); ++ii)
                for (std::size_t jj = 0; jj < act.size(); ++jj)
                    w[act[jj]][act[ii]] = w[act[ii]][act[jj]];
            continue;
        }
        // all active diagonals vanish: look for a hyperbolic pair
        bool found = false;
        std::size_t p = 0, q = 0;
        for (std::size_t ii = 0; ii < act.size() && !found; ++ii)
            for (std::size_t jj = ii + 1; jj < act.size() && !found; ++jj)
                if (w[act[ii]][act[jj]] != 0) {
                    p = act[ii];
                    q = act[jj];
                    found = true;
                }
        if (!found) { res.n_zero += act.size(); break; }
        Rat b = w[p][q];
        res.n_plus += 1;
        res.n_minus += 1;
        act.erase(std::remove(act.begin(), act.end(), p), act.end());
        act.erase(std::remove(act.begin(), act.end(), q), act.end());
        // split off span(p,q): v -> v - (<v,q>/b) p - (<v,p>/b) q
        for (std::size_t ii = 0; ii < act.size(); ++ii) {
            std::size_t i = act[ii];
            Rat cp = w[i][q] / b;
            Rat cq = w[i][p] / b;
            if (cp == 0 && cq == 0) continue;
            for (std::size_t jj = 0; jj <= ii; ++jj) {
                std::size_t j = act[jj];
                Rat dp = w[j][q] / b;
                Rat dq = w[j][p] / b;
                Rat nv = w[i][j] - cp * w[p][j] - cq * w[q][j]
                         - dp * w[i][p] - dq * w[i][q]
                         + cp * dp * w[p][p] + cp * dq * w[p][q]
                         + cq * dp * w[q][p] + cq * dq * w[q][q];
                w[i][j] = nv;
                w[j][i] = nv;
            }
        }
    }
    return res;
}

std::size_t rank(const IntMatrix& a) {
    auto snf = smith_normal_form(a);
    std::size_t r = 0;
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i)
        if (snf.s(i, i) != 0) ++r;
    return r;
}

Rat determinant(const RatMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant: non-square");
    const std::size_t n = a.rows();
    RatMatrix w = a;
    Rat det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && w(p, c) == 0) ++p;
        if (p == n) return Rat(0);
        if (p != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(w(p, k), w(c, k));
            det = -det;
        }
        det *= w(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (w(i, c) == 0) continue;
            Rat f = w(i, c) / w(c, c);
            for (std::size_t k = c; k < n; ++k) w(i, k) -= f * w(c, k);
        }
    }
    return det;
}

Int determinant(const IntMatrix& a) {
    Rat d = determinant(to_rational(a));
    return numerator(d);  // exact: integer matrix has integer determinant
}

IntMatrix saturate(const IntMatrix& b) {
    const std::size_t r = b.rows(), n = b.cols();
    if (rank(b) != r) throw std::invalid_argument("saturate: rows not independent");
    auto snf = smith_normal_form(b);
    // B = U^-1 [D|0] V^-1; rational row span = first r rows of V^-1,
    // which are primitive as rows of a unimodular matrix.
    IntMatrix vinv = unimodular_inverse(snf.v);
    IntMatrix s(r, n);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < n; ++j) s(i, j) = vinv(i, j);
    return s;
}

Int saturation_index(const IntMatrix& b) {
    auto snf = smith_normal_form(b);
    Int idx(1);
    for (std::size_t i = 0; i < std::min(b.rows(), b.cols()); ++i)
        if (snf.s(i, i) != 0) idx *= snf.s(i, i);
    return idx;
}

IntMatrix integer_kernel(const IntMatrix& a) {
    // U A V = S; columns of V past the rank are a saturated kernel basis.
    auto snf = smith_normal_form(a);
    const std::size_t n = a.cols();
    std::size_t r = 0;
    for (std::size_t i = 0; i < std::min(a.rows(), n); ++i)
        if (snf.s(i, i) != 0) ++r;
    IntMatrix k(n - r, n);
    for (std::size_t j = r; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) k(j - r, i) = snf.v(i, j);
    return k;
}

std::optional<RatMatrix> rational_solve(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("rational_solve: shape mismatch");
    const std::size_t m = a.rows(), n = a.cols(), w = b.cols();
    RatMatrix aug(m, n + w);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        for (std::size_t j = 0; j < w; ++j) aug(i, n + j) = b(i, j);
    }
    // Gauss-Jordan
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && aug(p, c) == 0) ++p;
        if (p == m) continue;
        if (p != r)
            for (std::size_t k = 0; k < n + w; ++k) std::swap(aug(p, k), aug(r, k));
        Rat d = aug(r, c);
        for (std::size_t k = 0; k < n + w; ++k) aug(r, k) /= d;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || aug(i, c) == 0) continue;
            Rat f = aug(i, c);
            for (std::size_t k = 0; k < n + w; ++k) aug(i, k) -= f * aug(r, k);
        }
        pivot_col.push_back(c);
        ++r;
    }
    // consistency
    for (std::size_t i = r; i < m; ++i)
        for (std::size_t j = 0; j < w; ++j)
            if (aug(i, n + j) != 0) return std::nullopt;
    RatMatrix x(n, w);
    for (std::size_t k = 0; k < pivot_col.size(); ++k)
        for (std::size_t j = 0; j < w; ++j) x(pivot_col[k], j) = aug(k, n + j);
    return x;
}

std::optional<std::vector<Rat>> rational_solve(const IntMatrix& a, const std::vector<Rat>& b) {
    RatMatrix bm(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) bm(i, 0) = b[i];
    auto x = rational_solve(to_rational(a), bm);
    if (!x) return std::nullopt;
    std::vector<Rat> out(a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) out[i] = (*x)(i, 0);
    return out;
}

std::optional<std::vector<Int>> integer_solve(const IntMatrix& a, const std::vector<Int>& b) {
    if (a.rows() != b.size()) throw std::invalid_argument("integer_solve: shape mismatch");
    auto snf = smith_normal_form(a);
    const std::size_t m = a.rows(), n = a.cols();
    // A = U^-1 S V^-1, so solve S t = U b, y = V t.
    std::vector<Int> ub(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) ub[i] += snf.u(i, j) * b[j];
    std::vector<Int> t(n, 0);
    for (std::size_t i = 0; i < m; ++i) {
        Int s = i < n ? snf.s(i, i) : Int(0);
        if (s == 0) {
            if (ub[i] != 0) return std::nullopt;
        } else {
            if (ub[i] % s != 0) return std::nullopt;
            t[i] = ub[i] / s;
        }
    }
    std::vector<Int> y(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) y[i] += snf.v(i, j) * t[j];
    return y;
}

RatMatrix rational_inverse(const RatMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("rational_inverse: non-square");
    if (determinant(a) == 0) throw std::invalid_argument("rational_inverse: singular");
    auto x = rational_solve(a, to_rational(IntMatrix::identity(a.rows())));
    return *x;
}

IntMatrix unimodular_inverse(const IntMatrix& u) {
    auto x = rational_solve(to_rational(u), to_rational(IntMatrix::identity(u.rows())));
    if (!x) throw std::invalid_argument("unimodular_inverse: singular");
    return to_integer(*x);
}

}  // namespace prymtk
