#include "prymtk/tower.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace prymtk {

namespace {

void trim(std::vector<Rat>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

std::vector<Rat> pmul(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Rat> c(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

std::vector<Rat> psub(std::vector<Rat> a, const std::vector<Rat>& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rat(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return a;
}

std::vector<Rat> pscale(std::vector<Rat> a, const Rat& c) {
    for (auto& x : a) x *= c;
    return a;
}

std::vector<Rat> pderiv(const std::vector<Rat>& p) {
    if (p.size() <= 1) return {};
    std::vector<Rat> d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = Rat(Int(i)) * p[i];
    return d;
}

bool peq(std::vector<Rat> a, std::vector<Rat> b) {
    trim(a);
    trim(b);
    return a == b;
}

std::vector<Cplx> to_cplx(const std::vector<Rat>& p) {
    std::vector<Cplx> c(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) c[i] = static_cast<double>(p[i]);
    return c;
}

Rat eval_form(const TernaryForm& f, const std::array<Rat, 3>& p) {
    return f.eval(p[0], p[1], p[2]);
}

// does every root of `wanted` appear among `roots`, and vice versa?
double match_roots(const std::vector<Cplx>& xs, const std::vector<Cplx>& ys, Cplx* worst) {
    double m = 0;
    for (const auto& x : xs) {
        double best = 1e300;
        for (const auto& y : ys) best = std::min(best, std::abs(x - y));
        if (best > m) {
            m = best;
            if (worst) *worst = x;
        }
    }
    return m;
}

std::optional<Rat> rational_sqrt(const Rat& r) {
    if (r < 0) return std::nullopt;
    Int num = numerator(r), den = denominator(r);
    Int sn = sqrt(num), sd = sqrt(den);
    if (sn * sn != num || sd * sd != den) return std::nullopt;
    return Rat(sn, sd);
}

}  // namespace

std::pair<BranchData, CurveModel> slice(const TowerInstance& inst) {
    if (inst.lambda == 0) throw std::invalid_argument("slice: lambda must be nonzero");
    Cplx mu2 = inst.mu * inst.mu;
    if (std::abs(mu2 - Cplx(static_cast<double>(inst.lambda))) > 1e-12 * (1.0 + std::abs(mu2)))
        throw std::invalid_argument("slice: mu^2 != lambda");

    TernaryForm delta0 = (inst.q * inst.q) - inst.b0.scaled(inst.lambda);

    // chart: keep the point at infinity off both quartics so both slice
    // polynomials have exact degree 4
    auto par = inst.t.parametrization();
    CurveModel m;
    bool chart_found = false;
    for (int c : {0, 1, -1, 2, -2, 3, -3, 4, -4, 5}) {
        std::array<Rat, 3> p1;
        for (int v = 0; v < 3; ++v) p1[v] = par[1][v] + Rat(c) * par[0][v];
        if (eval_form(inst.b0, p1) == 0 || eval_form(delta0, p1) == 0) continue;
        m.chart = LineChart{par[0], p1};
        chart_found = true;
        break;
    }
    if (!chart_found) throw std::runtime_error("slice: no degree-preserving chart on this line");

    m.b = restrict_to_chart(inst.b0, m.chart.p0, m.chart.p1);
    m.q = restrict_to_chart(inst.q, m.chart.p0, m.chart.p1);
    m.d = restrict_to_chart(delta0, m.chart.p0, m.chart.p1);
    m.lambda = inst.lambda;
    m.mu = inst.mu;

    // pencil identity, exactly
    if (!peq(m.d, psub(pmul(m.q, m.q), pscale(m.b, inst.lambda))))
        throw std::logic_error("slice: pencil identity d = q^2 - lambda*b violated");

    // genericity of the line
    if (poly_gcd(m.b, pderiv(m.b)).size() > 1)
        throw std::invalid_argument("non-generic line: double root in b(u)");
    if (poly_gcd(m.d, pderiv(m.d)).size() > 1)
        throw std::invalid_argument("non-generic line: double root in d(u)");
    if (poly_gcd(m.b, m.d).size() > 1)
        throw std::invalid_argument("non-generic line: b(u) and d(u) share a root");

    BranchData br;
    br.a = poly_roots(to_cplx(m.b));
    br.p = poly_roots(to_cplx(m.d));
    if (br.a.size() != 4 || br.p.size() != 4)
        throw std::logic_error("slice: expected degree-4 slice polynomials");
    return {br, m};
}

DualModel bigonal_dual(const CurveModel& model) {
    if (!peq(model.d, psub(pmul(model.q, model.q), pscale(model.b, model.lambda))))
        throw std::invalid_argument("bigonal_dual: pencil identity violated");

    DualModel dual;
    dual.chart = model.chart;
    dual.b = model.b;
    dual.q = model.q;
    dual.d = model.d;
    dual.lambda = model.lambda;
    dual.mu = model.mu;

    // re-verify the pair identities eta = z*z', zeta = z+z' at sample points:
    // eta^2 = d(u) and zeta^2 = 2*(eta - q(u)), independent of all square-root
    // branch choices
    auto bc = to_cplx(model.b), qc = to_cplx(model.q), dc = to_cplx(model.d);
    auto ev = [](const std::vector<Cplx>& p, Cplx u) {
        Cplx v(0);
        for (std::size_t i = p.size(); i-- > 0;) v = v * u + p[i];
        return v;
    };
    std::mt19937 rng(0);
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    double res = 0;
    for (int k = 0; k < 20; ++k) {
        Cplx u(box(rng), box(rng));
        Cplx y = std::sqrt(ev(bc, u));
        Cplx z1 = std::sqrt(model.mu * y - ev(qc, u));
        Cplx z2 = std::sqrt(-model.mu * y - ev(qc, u));
        Cplx eta = z1 * z2, zeta = z1 + z2;
        double scale = 1.0 + std::abs(ev(dc, u));
        res = std::max(res, std::abs(eta * eta - ev(dc, u)) / scale);
        res = std::max(res, std::abs(zeta * zeta - 2.0 * (eta - ev(qc, u))) / scale);
    }
    dual.identity_residual = res;
    if (res > 1e-10) throw std::logic_error("bigonal_dual: pair identities fail numerically");
    return dual;
}

Step2Report verify_step2(const BranchData& branch, const DualModel& dual, double tol) {
    Step2Report rep;
    // q^2 - d = lambda * b, exactly
    rep.pencil_identity = peq(psub(pmul(dual.q, dual.q), dual.d), pscale(dual.b, dual.lambda));

    // the eta-cover Etilde: eta^2 = d(u) is branched exactly over the p_i
    auto eta_branch = poly_roots(to_cplx(dual.d));
    Cplx worst;
    double m1 = std::max(match_roots(eta_branch, branch.p, &worst),
                         match_roots(branch.p, eta_branch, nullptr));
    rep.lower_over_p = m1 < tol;
    rep.max_mismatch = m1;
    if (!rep.lower_over_p) rep.offending = worst;

    // the zeta-cover ramifies where eta = q(u) on Etilde, i.e. over the roots
    // of q^2 - d; these must be the a_i
    auto upper = poly_roots(to_cplx(psub(pmul(dual.q, dual.q), dual.d)));
    double m2 = std::max(match_roots(upper, branch.a, &worst),
                         match_roots(branch.a, upper, nullptr));
    rep.upper_over_a = m2 < tol;
    rep.max_mismatch = std::max(rep.max_mismatch, m2);
    if (!rep.upper_over_a && !rep.offending) rep.offending = worst;
    return rep;
}

CurveModel swapped_tower(const CurveModel& model) {
    auto mu_rat = rational_sqrt(model.lambda);
    if (!mu_rat)
        throw std::invalid_argument("swapped_tower: lambda must be a rational square");
    Rat mu = model.mu.real() < 0 ? -*mu_rat : *mu_rat;
    CurveModel sw;
    sw.chart = model.chart;
    sw.b = model.d;
    sw.q = pscale(model.q, Rat(1) / mu);
    sw.lambda = Rat(1) / model.lambda;
    sw.mu = Cplx(static_cast<double>(Rat(1) / mu));
    sw.d = psub(pmul(sw.q, sw.q), pscale(sw.b, sw.lambda));
    return sw;
}

CurveModel dual_curve_model(const DualModel& dual) {
    // zeta^2 = 2*(eta - q) over Etilde: eta^2 = d, so with y = eta the model
    // reads z^2 = mu'*y - q' with mu' = 2 and q' = 2q; the matching pencil
    // member is q'^2 - mu'^2 * d = 4*(q^2 - d) = 4*lambda*b
    CurveModel m;
    m.chart = dual.chart;
    m.b = dual.d;
    m.q = pscale(dual.q, Rat(2));
    m.lambda = Rat(4);
    m.mu = Cplx(2.0);
    m.d = pscale(dual.b, Rat(4) * dual.lambda);
    if (!peq(m.d, psub(pmul(m.q, m.q), pscale(m.b, m.lambda))))
        throw std::logic_error("dual_curve_model: pencil identity violated");
    return m;
}

Step3Report verify_step3(const DualModel& dual, const CurveModel& swapped, double tol) {
    Step3Report rep;

    // dual of dual: the swapped tower's pencil member is the original b
    rep.dual_of_dual = peq(swapped.d, dual.b) && peq(swapped.b, dual.d);

    // branch divisors on Etilde agree exactly: both covers ramify over the
    // zero locus of (eta - q) -- the swapped model's branch function
    // mu~*y - q~ equals (1/mu)(y - q)
    auto mu_rat = rational_sqrt(dual.lambda);
    if (mu_rat) {
        Rat mu = dual.mu.real() < 0 ? -*mu_rat : *mu_rat;
        rep.branch_divisors_equal =
            rep.dual_of_dual && peq(pscale(swapped.q, mu), dual.q);
        rep.twist_constant = 2.0 * static_cast<double>(mu);
    } else {
        rep.branch_divisors_equal = false;
    }

    // sign consistency: over each a_i the two points of Etilde are
    // eta = +-q(a_i); the zeta-cover must ramify at eta = +q(a_i) for every i
    // (one consistent sign, never mixed)
    auto qc = to_cplx(dual.q), dc = to_cplx(dual.d);
    auto ev = [](const std::vector<Cplx>& p, Cplx u) {
        Cplx v(0);
        for (std::size_t i = p.size(); i-- > 0;) v = v * u + p[i];
        return v;
    };
    auto a_roots = poly_roots(to_cplx(dual.b));
    rep.sign_consistent = true;
    for (Cplx a : a_roots) {
        Cplx eta0 = std::sqrt(ev(dc, a));  // one of the two points over a
        double scale = 1.0 + std::abs(eta0) + std::abs(ev(qc, a));
        int ramified = 0;
        for (Cplx eta : {eta0, -eta0}) {
            // the zeta-cover degenerates where 2*(eta - q) vanishes
            if (std::abs(2.0 * (eta - ev(qc, a))) < tol * scale) ++ramified;
        }
        // exactly one of the two points, and it is the one with eta = +q(a)
        bool plus_sign = std::abs(eta0 - ev(qc, a)) < tol * scale ||
                         std::abs(-eta0 - ev(qc, a)) < tol * scale;
        if (ramified != 1 || !plus_sign) {
            rep.sign_consistent = false;
            rep.offending = a;
        }
    }
    return rep;
}

TowerInstance random_instance(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coef(-9, 9);
    std::uniform_int_distribution<int> small(1, 4);

    TowerInstance inst;
    // smooth quartic
    for (;;) {
        std::vector<Rat> c(15);
        for (auto& x : c) x = Rat(coef(rng));
        TernaryForm f(4, c);
        if (!f.is_zero() && is_smooth(f)) {
            inst.b0 = f;
            break;
        }
    }
    // smooth conic
    for (;;) {
        std::vector<Rat> c(6);
        for (auto& x : c) x = Rat(coef(rng));
        TernaryForm f(2, c);
        if (!f.is_zero() && conic_is_smooth(f)) {
            inst.q = f;
            break;
        }
    }
    // rational mu with smooth pencil member
    for (;;) {
        Rat mu(small(rng), small(rng));
        inst.lambda = mu * mu;
        inst.mu = Cplx(static_cast<double>(mu));
        auto pair = make_tangent_pair(inst.b0, inst.q, inst.lambda);
        if (pair.kind == PairStatus::u_member && pair.tangency_verified) break;
    }
    // generic line
    for (;;) {
        std::array<Rat, 3> l;
        for (auto& x : l) x = Rat(coef(rng));
        if (l[0] == 0 && l[1] == 0 && l[2] == 0) continue;
        inst.t = RatLine{l};
        try {
            slice(inst);
            return inst;
        } catch (const std::exception&) {
            continue;
        }
    }
}

}  // namespace prymtk
