#include "prymtk/bitangent.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace prymtk {

namespace {

using Vec5 = Eigen::Matrix<Cplx, 5, 1>;
using Mat5 = Eigen::Matrix<Cplx, 5, 5>;

// binary form coefficients of F(s*P0 + u*P1); coefficient i of s^(d-i) u^i
std::array<Cplx, 5> binary_along(const std::vector<Cplx>& fc, int degree,
                                 const std::array<Cplx, 3>& p0, const std::array<Cplx, 3>& p1) {
    auto ms = monomials(degree);
    std::array<Cplx, 5> out{};
    for (std::size_t k = 0; k < ms.size(); ++k) {
        if (fc[k] == Cplx(0)) continue;
        // expand prod_v (p0[v] s + p1[v] u)^e_v
        std::array<Cplx, 5> term{};
        term[0] = fc[k];
        int len = 1;
        for (int v = 0; v < 3; ++v) {
            for (int e = 0; e < ms[k][v]; ++e) {
                std::array<Cplx, 5> nt{};
                for (int i = 0; i < len; ++i) {
                    nt[i] += term[i] * p0[v];
                    nt[i + 1] += term[i] * p1[v];
                }
                term = nt;
                ++len;
            }
        }
        for (int i = 0; i <= degree; ++i) out[i] += term[i];
    }
    return out;
}

struct ChartData {
    TernaryForm form;            // F composed with the chart matrix
    std::vector<Cplx> fc;        // its complex coefficients
    std::vector<Cplx> fzc;       // complex coefficients of dF'/dz (cubic)
    Eigen::Matrix3cd back;       // maps chart line coords to original line coords
};

std::vector<ChartData> make_charts(const TernaryForm& f) {
    std::vector<RatMatrix> mats;
    {
        RatMatrix id(3, 3);
        for (int i = 0; i < 3; ++i) id(i, i) = 1;
        mats.push_back(id);
        RatMatrix cyc(3, 3);
        cyc(0, 2) = 1;
        cyc(1, 0) = 1;
        cyc(2, 1) = 1;
        mats.push_back(cyc);
        RatMatrix gen(3, 3);
        gen(0, 0) = 1; gen(0, 1) = 1; gen(0, 2) = 0;
        gen(1, 0) = 0; gen(1, 1) = 1; gen(1, 2) = 1;
        gen(2, 0) = 1; gen(2, 1) = 0; gen(2, 2) = 1;
        mats.push_back(gen);
    }
    std::vector<ChartData> out;
    for (const auto& a : mats) {
        ChartData cd;
        cd.form = f.compose(a);
        cd.fc = cd.form.coeffs_c();
        cd.fzc = cd.form.partial(2).coeffs_c();
        // line transport: x = A x', so l' = A^T l and l = (A^T)^{-1} l'
        RatMatrix at(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) at(i, j) = a(j, i);
        RatMatrix inv = rational_inverse(at);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cd.back(i, j) = static_cast<double>(inv(i, j));
        out.push_back(std::move(cd));
    }
    return out;
}

// residual and Jacobian of the perfect-square system in w = (a, b, q0, q1, q2)
void square_system(const ChartData& cd, const Vec5& w, Vec5& r, Mat5& jac) {
    Cplx a = w(0), b = w(1), q0 = w(2), q1 = w(3), q2 = w(4);
    std::array<Cplx, 3> p0{Cplx(1), Cplx(0), a}, p1{Cplx(0), Cplx(1), b};
    auto g = binary_along(cd.fc, 4, p0, p1);
    auto fz = binary_along(cd.fzc, 3, p0, p1);  // cubic: indices 0..3

    Cplx sq[5] = {q0 * q0, 2.0 * q0 * q1, q1 * q1 + 2.0 * q0 * q2, 2.0 * q1 * q2, q2 * q2};
    for (int i = 0; i < 5; ++i) r(i) = g[i] - sq[i];

    jac.setZero();
    // dg_i/da = coeff of s^(4-i)u^i in s * Fz  -> fz shifted toward s
    for (int j = 0; j <= 3; ++j) {
        jac(j, 0) = fz[j];      // s * fz: s^(3-j)u^j * s = s^(4-j)u^j -> index j
        jac(j + 1, 1) = fz[j];  // u * fz -> index j+1
    }
    // minus derivatives of the square
    jac(0, 2) -= 2.0 * q0;
    jac(1, 2) -= 2.0 * q1;
    jac(1, 3) -= 2.0 * q0;
    jac(2, 2) -= 2.0 * q2;
    jac(2, 3) -= 2.0 * q1;
    jac(2, 4) -= 2.0 * q0;
    jac(3, 3) -= 2.0 * q2;
    jac(3, 4) -= 2.0 * q1;
    jac(4, 4) -= 2.0 * q2;
}

double point_distance(const std::array<Cplx, 3>& p, const std::array<Cplx, 3>& q) {
    Cplx inner(0);
    double n1 = 0, n2 = 0;
    for (int i = 0; i < 3; ++i) {
        inner += p[i] * std::conj(q[i]);
        n1 += std::norm(p[i]);
        n2 += std::norm(q[i]);
    }
    double c = std::norm(inner) / (n1 * n2);
    return std::sqrt(std::max(0.0, 1.0 - c));
}

bool line_less(const Line& a, const Line& b) {
    for (int i = 0; i < 3; ++i) {
        if (a.l[i].real() != b.l[i].real()) return a.l[i].real() < b.l[i].real();
        if (a.l[i].imag() != b.l[i].imag()) return a.l[i].imag() < b.l[i].imag();
    }
    return false;
}

}  // namespace

namespace {

BitangentSet bitangents_core(const TernaryForm& f, const BitangentOptions& opt) {
    if (f.degree != 4) throw std::invalid_argument("bitangents: expects a quartic");
    BitangentSet out;
    auto charts = make_charts(f);

    std::mt19937 rng(opt.seed);
    std::uniform_real_distribution<double> box(-2.0, 2.0);

    auto known = [&](const Line& l) {
        for (const auto& r : out.bitangents)
            if (r.line.distance(l) < opt.dedup_tol) return true;
        return false;
    };

    double fscale = 0;
    for (const auto& c : f.coeffs) fscale = std::max(fscale, std::abs(static_cast<double>(c)));

    for (int start = 0; start < opt.max_starts; ++start) {
        if (out.bitangents.size() == 28) break;
        const ChartData& cd = charts[start % charts.size()];
        ++out.starts_used;

        // widen the sampling box periodically: some bitangents have large
        // chart coordinates in every chart
        static constexpr double scales[] = {1.0, 2.5, 6.0, 0.4};
        double scale = scales[(start / 64) % 4];

        Vec5 w;
        Cplx a = scale * Cplx(box(rng), box(rng)), b = scale * Cplx(box(rng), box(rng));
        w(0) = a;
        w(1) = b;
        {
            std::array<Cplx, 3> p0{Cplx(1), Cplx(0), a}, p1{Cplx(0), Cplx(1), b};
            auto g = binary_along(cd.fc, 4, p0, p1);
            Cplx q0 = std::sqrt(g[0]), q2 = std::sqrt(g[4]);
            if (std::abs(q0) < 1e-8) q0 = Cplx(box(rng), box(rng));
            if (std::abs(q2) < 1e-8) q2 = Cplx(box(rng), box(rng));
            Cplx q1 = g[1] / (2.0 * q0);
            if (std::abs(q1 * q1 + 2.0 * q0 * q2 - g[2]) >
                std::abs(q1 * q1 - 2.0 * q0 * q2 - g[2]))
                q2 = -q2;
            w(2) = q0;
            w(3) = q1;
            w(4) = q2;
        }

        bool converged = false;
        Vec5 r;
        Mat5 jac;
        for (int it = 0; it < opt.newton_iters; ++it) {
            square_system(cd, w, r, jac);
            double rn = r.norm();
            if (rn < 1e-12 * std::max(1.0, fscale)) {
                converged = true;
                break;
            }
            Vec5 dw = jac.partialPivLu().solve(-r);
            if (!dw.allFinite()) break;
            w += dw;
            if (w.norm() > 1e7) break;
        }
        if (!converged) continue;

        Eigen::Vector3cd lp(w(0), w(1), Cplx(-1));
        Eigen::Vector3cd lo = cd.back * lp;
        Line line;
        try {
            line = Line::from_coords(lo(0), lo(1), lo(2));
        } catch (const std::invalid_argument&) {
            continue;
        }
        if (known(line)) continue;

        TangencyReport rep = classify_tangency(f, line);
        if (rep.residual > opt.cert_tol) continue;
        // hyperflexes count toward the 28 as degenerate bitangents but are
        // flagged separately for the genericity conditions
        if (rep.classification == Tangency::bitangent) {
            out.bitangents.push_back(rep);
        } else if (rep.classification == Tangency::hyperflex) {
            out.bitangents.push_back(rep);
            out.hyperflexes.push_back(rep);
        }
    }

    auto by_line = [](const TangencyReport& x, const TangencyReport& y) {
        return line_less(x.line, y.line);
    };
    std::sort(out.bitangents.begin(), out.bitangents.end(), by_line);
    std::sort(out.hyperflexes.begin(), out.hyperflexes.end(), by_line);

    bool separated = true;
    for (std::size_t i = 0; i < out.bitangents.size() && separated; ++i)
        for (std::size_t j = i + 1; j < out.bitangents.size(); ++j)
            if (out.bitangents[i].line.distance(out.bitangents[j].line) < opt.separation) {
                separated = false;
                break;
            }
    out.complete = separated && out.bitangents.size() == 28;
    return out;
}

}  // namespace

BitangentSet bitangents(const TernaryForm& f, const BitangentOptions& opt) {
    BitangentSet out = bitangents_core(f, opt);

    // escalation: a bitangent can be badly placed for the multistart in the
    // original coordinates; retry after a coordinate change and transport the
    // lines back, re-certifying against the original quartic
    static const std::array<std::array<int, 9>, 4> changes = {{{1, 1, 0, 0, 1, 1, 1, 0, 1},
                                                               {2, 1, 1, 1, 3, 1, 1, 1, 4},
                                                               {1, -1, 2, 2, 1, -1, -1, 2, 1},
                                                               {3, 1, 2, 1, 1, 1, 2, 1, 3}}};
    for (const auto& c : changes) {
        if (out.complete) break;
        RatMatrix a(3, 3);
        Eigen::Matrix3cd an;
        for (int i = 0; i < 9; ++i) {
            a(i / 3, i % 3) = Rat(c[i]);
            an(i / 3, i % 3) = Cplx(double(c[i]));
        }
        Eigen::Matrix3cd back = an.transpose().inverse();
        BitangentSet alt = bitangents_core(f.compose(a), opt);
        out.starts_used += alt.starts_used;

        for (const auto& found : alt.bitangents) {
            Eigen::Vector3cd lp(found.line.l[0], found.line.l[1], found.line.l[2]);
            Eigen::Vector3cd lo = back * lp;
            Line line;
            try {
                line = Line::from_coords(lo(0), lo(1), lo(2));
            } catch (const std::invalid_argument&) {
                continue;
            }
            bool dup = false;
            for (const auto& r : out.bitangents)
                if (r.line.distance(line) < opt.dedup_tol) dup = true;
            if (dup) continue;
            TangencyReport rep = classify_tangency(f, line);
            if (rep.residual > opt.cert_tol ||
                (rep.classification != Tangency::bitangent &&
                 rep.classification != Tangency::hyperflex)) {
                // a tangency point near the line at infinity of the original
                // chart is ill-conditioned there; tangency is projectively
                // invariant, so keep the certificate from the chart where the
                // line was found and transport the tangency points
                if (found.residual > opt.cert_tol) continue;
                rep.line = line;
                rep.classification = found.classification;
                rep.residual = found.residual;
                rep.points.clear();
                auto par = line.parametrization();
                for (const auto& p : found.points) {
                    Eigen::Vector3cd y = an * Eigen::Vector3cd(p.point[0], p.point[1], p.point[2]);
                    // parameter t with y parallel to par0 + t par1, from the
                    // cross-product component of largest modulus
                    Eigen::Vector3cd p0(par[0][0], par[0][1], par[0][2]);
                    Eigen::Vector3cd p1(par[1][0], par[1][1], par[1][2]);
                    Eigen::Vector3cd c0 = y.cross(p0), c1 = y.cross(p1);
                    int k = 0;
                    for (int v = 1; v < 3; ++v)
                        if (std::abs(c1(v)) > std::abs(c1(k))) k = v;
                    if (std::abs(c1(k)) < 1e-300) continue;
                    TangencyPoint q;
                    q.parameter = -c0(k) / c1(k);
                    q.multiplicity = p.multiplicity;
                    for (int v = 0; v < 3; ++v) q.point[v] = par[0][v] + q.parameter * par[1][v];
                    rep.points.push_back(q);
                }
            }
            if (rep.classification == Tangency::bitangent) {
                out.bitangents.push_back(rep);
            } else if (rep.classification == Tangency::hyperflex) {
                out.bitangents.push_back(rep);
                out.hyperflexes.push_back(rep);
            }
        }

        auto by_line = [](const TangencyReport& x, const TangencyReport& y) {
            return line_less(x.line, y.line);
        };
        std::sort(out.bitangents.begin(), out.bitangents.end(), by_line);
        std::sort(out.hyperflexes.begin(), out.hyperflexes.end(), by_line);
        bool separated = true;
        for (std::size_t i = 0; i < out.bitangents.size() && separated; ++i)
            for (std::size_t j = i + 1; j < out.bitangents.size(); ++j)
                if (out.bitangents[i].line.distance(out.bitangents[j].line) < opt.separation) {
                    separated = false;
                    break;
                }
        out.complete = separated && out.bitangents.size() == 28;
    }
    return out;
}

GenericityReport genericity_check(const TernaryForm& b0, const TernaryForm& d0,
                                  const BitangentOptions& opt) {
    GenericityReport rep;
    BitangentSet bs = bitangents(b0, opt);
    BitangentSet ds = bitangents(d0, opt);
    rep.conclusive = bs.complete && ds.complete;

    rep.no_hyperflex = bs.hyperflexes.empty();

    // condition 2: no bitangent of B0 is tangent to D0 at one of its own
    // tangency points
    rep.no_shared_tangency = true;
    for (const auto& m : bs.bitangents) {
        TangencyReport dr = classify_tangency(d0, m.line);
        for (const auto& p : m.points) {
            if (std::abs(d0.eval(p.point[0], p.point[1], p.point[2])) <
                1e-8 * (1.0 + std::pow(std::abs(p.point[0]) + std::abs(p.point[1]) +
                                           std::abs(p.point[2]),
                                       4)))
                rep.transversal_meeting_flagged = true;
            for (const auto& q : dr.points) {
                if (point_distance(p.point, q.point) < 1e-5) {
                    rep.no_shared_tangency = false;
                    rep.shared_tangency_witnesses.push_back(p.point);
                }
            }
        }
    }

    // condition 3: the two bitangent sets are disjoint
    rep.disjoint_bitangents = true;
    for (const auto& m : bs.bitangents)
        for (const auto& n : ds.bitangents)
            if (m.line.distance(n.line) < 1e-6) {
                rep.disjoint_bitangents = false;
                rep.common_bitangents.push_back(m.line);
            }
    return rep;
}

}  // namespace prymtk
