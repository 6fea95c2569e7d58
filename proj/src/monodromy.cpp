#include "prymtk/tower.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace prymtk {

namespace {

Cplx ev(const std::vector<Cplx>& p, Cplx u) {
    Cplx v(0);
    for (std::size_t i = p.size(); i-- > 0;) v = v * u + p[i];
    return v;
}

struct Fiber {
    Cplx y, z;
};

// continue (y, z) from u0 to u1, subdividing until the nearest-candidate
// choice is certified unambiguous
struct Tracker {
    const std::vector<Cplx>& b;
    const std::vector<Cplx>& q;
    Cplx mu;

    void step(Cplx u1, Fiber& f, int depth, Cplx u0) const {
        if (depth > 48) throw std::runtime_error("fiber_monodromy: path tracking stalled");
        Cplx ys = std::sqrt(ev(b, u1));
        Cplx ycand = std::abs(ys - f.y) <= std::abs(-ys - f.y) ? ys : -ys;
        Cplx zs = std::sqrt(mu * ycand - ev(q, u1));
        Cplx zcand = std::abs(zs - f.z) <= std::abs(-zs - f.z) ? zs : -zs;
        // certified: the move is small against the gap between the two sheets
        bool ok = std::abs(ycand - f.y) <= 0.3 * std::abs(2.0 * ys) + 1e-300 &&
                  std::abs(zcand - f.z) <= 0.3 * std::abs(2.0 * zs) + 1e-300;
        if (!ok) {
            Cplx mid = 0.5 * (u0 + u1);
            step(mid, f, depth + 1, u0);
            step(u1, f, depth + 1, mid);
            return;
        }
        f.y = ycand;
        f.z = zcand;
    }

    void track(const std::vector<Cplx>& path, Fiber& f) const {
        for (std::size_t i = 1; i < path.size(); ++i) step(path[i], f, 0, path[i - 1]);
    }
};

}  // namespace

namespace {

MonodromyResult fiber_monodromy_at(const CurveModel& model, std::optional<Cplx> basepoint,
                                   int loop_rotation, double offset);

}  // namespace

MonodromyResult fiber_monodromy(const CurveModel& model, std::optional<Cplx> basepoint,
                                int loop_rotation) {
    // spokes through a branch point stall the tracker; shift the default
    // basepoint sideways and retry deterministically
    const double offsets[] = {0.317, -0.473, 0.829, -1.191, 1.553, 0.0};
    for (double off : offsets) {
        try {
            return fiber_monodromy_at(model, basepoint, loop_rotation, off);
        } catch (const std::runtime_error&) {
            if (basepoint) throw;  // an explicit basepoint is the caller's choice
        }
    }
    throw std::runtime_error("fiber_monodromy: path tracking failed for all basepoints");
}

namespace {

MonodromyResult fiber_monodromy_at(const CurveModel& model, std::optional<Cplx> basepoint,
                                   int loop_rotation, double offset) {
    std::vector<Cplx> bc, qc, dc;
    for (const auto& x : model.b) bc.push_back(static_cast<double>(x));
    for (const auto& x : model.q) qc.push_back(static_cast<double>(x));
    for (const auto& x : model.d) dc.push_back(static_cast<double>(x));

    auto a_pts = poly_roots(bc);
    auto p_pts = poly_roots(dc);
    std::vector<std::pair<Cplx, char>> branch;
    for (Cplx w : a_pts) branch.push_back({w, 'a'});
    for (Cplx w : p_pts) branch.push_back({w, 'p'});

    MonodromyResult out;
    double lo_im = 1e300, spread = 0;
    Cplx center(0);
    for (const auto& [w, k] : branch) {
        lo_im = std::min(lo_im, w.imag());
        center += w / double(branch.size());
    }
    for (const auto& [w, k] : branch) spread = std::max(spread, std::abs(w - center));
    Cplx bp = basepoint ? *basepoint
                        : Cplx(center.real() + offset * (spread + 1.0), lo_im - 2.0 * spread - 1.0);
    out.basepoint = bp;
    for (const auto& [w, k] : branch)
        if (std::abs(w - bp) < 1e-9)
            throw std::invalid_argument("fiber_monodromy: basepoint hits a branch point");

    // counterclockwise angular order of the straight spokes from the basepoint
    std::sort(branch.begin(), branch.end(), [&](const auto& x, const auto& y) {
        return std::arg(x.first - bp) < std::arg(y.first - bp);
    });
    std::rotate(branch.begin(),
                branch.begin() + ((loop_rotation % int(branch.size())) + branch.size()) %
                                     branch.size(),
                branch.end());

    // fiber over the basepoint: sheets labeled by the signs of (y, z)
    Cplx y0 = std::sqrt(ev(bc, bp));
    Cplx z_p = std::sqrt(model.mu * y0 - ev(qc, bp));
    Cplx z_m = std::sqrt(-model.mu * y0 - ev(qc, bp));
    std::array<Fiber, 4> sheets = {Fiber{y0, z_p}, Fiber{y0, -z_p}, Fiber{-y0, z_m},
                                   Fiber{-y0, -z_m}};

    Tracker tr{bc, qc, model.mu};

    std::array<int, 4> prod{0, 1, 2, 3};
    for (const auto& [w, kind] : branch) {
        double r = 1e300;
        for (const auto& [w2, k2] : branch)
            if (std::abs(w2 - w) > 1e-12) r = std::min(r, 0.35 * std::abs(w2 - w));
        r = std::min(r, 0.35 * std::abs(w - bp));

        // spoke to the circle, the circle counterclockwise, spoke back
        Cplx dir = (w - bp) / std::abs(w - bp);
        Cplx entry = w - r * dir;
        std::vector<Cplx> path{bp};
        for (int k = 1; k <= 16; ++k) path.push_back(bp + (entry - bp) * (double(k) / 16));
        double ang0 = std::arg(entry - w);
        for (int k = 1; k <= 48; ++k) {
            double ang = ang0 + 2.0 * M_PI * double(k) / 48;
            path.push_back(w + r * Cplx(std::cos(ang), std::sin(ang)));
        }
        for (int k = 15; k >= 0; --k) path.push_back(bp + (entry - bp) * (double(k) / 16));

        std::array<int, 4> perm{};
        for (int s = 0; s < 4; ++s) {
            Fiber f = sheets[s];
            tr.track(path, f);
            int tgt = -1;
            double best = 1e300;
            for (int t = 0; t < 4; ++t) {
                double dd = std::abs(f.y - sheets[t].y) + std::abs(f.z - sheets[t].z);
                if (dd < best) {
                    best = dd;
                    tgt = t;
                }
            }
            if (best > 1e-6 * (1.0 + std::abs(y0) + std::abs(z_p)))
                throw std::runtime_error("fiber_monodromy: endpoint does not match a sheet");
            perm[s] = tgt;
        }
        out.branch_points.push_back(w);
        out.branch_kind.push_back(kind);
        out.perms.push_back(perm);

        std::array<int, 4> np{};
        for (int s = 0; s < 4; ++s) np[s] = perm[prod[s]];
        prod = np;
    }
    out.product_identity = prod == std::array<int, 4>{0, 1, 2, 3};

    // transitivity of the generated group
    std::array<int, 4> comp{0, 1, 2, 3};
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    for (const auto& perm : out.perms)
        for (int s = 0; s < 4; ++s) comp[find(s)] = find(perm[s]);
    int roots = 0;
    for (int s = 0; s < 4; ++s)
        if (find(s) == s) ++roots;
    out.transitive = roots == 1;

    // cycle types: 2+2 around the a_i, 2+1+1 around the p_i
    out.cycle_types_ok = true;
    for (std::size_t i = 0; i < out.perms.size(); ++i) {
        int fixed = 0, moved = 0;
        bool involution = true;
        for (int s = 0; s < 4; ++s) {
            if (out.perms[i][s] == s)
                ++fixed;
            else
                ++moved;
            if (out.perms[i][out.perms[i][s]] != s) involution = false;
        }
        bool ok = involution && (out.branch_kind[i] == 'a' ? (fixed == 0 && moved == 4)
                                                           : (fixed == 2 && moved == 2));
        if (!ok) out.cycle_types_ok = false;
    }

    // the deck involution must commute with every loop
    for (const auto& perm : out.perms)
        for (int s = 0; s < 4; ++s)
            if (perm[out.tau[s]] != out.tau[perm[s]])
                throw std::logic_error("fiber_monodromy: deck involution fails to commute");
    return out;
}

}  // namespace

}  // namespace prymtk
