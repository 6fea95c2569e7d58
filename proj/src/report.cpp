#include "prymtk/report.hpp"

#include <fstream>
#include <future>
#include <sstream>

#include "json.hpp"
#include "prymtk/homology.hpp"

namespace prymtk {

namespace {

using njson = nlohmann::ordered_json;

std::string rat_s(const Rat& r) { return r.str(); }

Rat parse_rat(const std::string& s, const std::string& field) {
    try {
        return Rat(s);
    } catch (const std::exception&) {
        throw InputError("field '" + field + "': '" + s + "' is not a rational number");
    }
}

njson rats_json(const std::vector<Rat>& v) {
    njson a = njson::array();
    for (const auto& r : v) a.push_back(rat_s(r));
    return a;
}

std::vector<Rat> rats_from(const njson& j, const std::string& field, std::size_t n) {
    if (!j.is_array() || j.size() != n)
        throw InputError("field '" + field + "': expected an array of " + std::to_string(n) +
                         " rationals");
    std::vector<Rat> v;
    for (const auto& e : j) {
        if (!e.is_string())
            throw InputError("field '" + field + "': coefficients must be rational strings");
        v.push_back(parse_rat(e.get<std::string>(), field));
    }
    return v;
}

njson cplx_json(Cplx z) { return njson::array({z.real(), z.imag()}); }

njson points_json(const std::vector<std::array<Cplx, 3>>& pts) {
    njson a = njson::array();
    for (const auto& p : pts) a.push_back(njson::array({cplx_json(p[0]), cplx_json(p[1]), cplx_json(p[2])}));
    return a;
}

njson roots_json(const std::vector<Cplx>& v) {
    njson a = njson::array();
    for (Cplx z : v) a.push_back(cplx_json(z));
    return a;
}

njson matrix_json(const IntMatrix& m) {
    njson rows = njson::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        njson row = njson::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

Report finish(const std::string& claim, const std::string& status, int code, njson details) {
    njson j;
    j["claim"] = claim;
    j["status"] = status;
    j["details"] = std::move(details);
    return Report{claim, status, code, j.dump(2) + "\n"};
}

Report pass_or_fail(const std::string& claim, bool ok, njson details) {
    return finish(claim, ok ? "pass" : "fail", ok ? 0 : 1, std::move(details));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

// file formats -------------------------------------------------------------

TernaryForm read_form(const std::string& path) {
    std::istringstream in(read_file(path));
    int degree = 0;
    if (!(in >> degree)) throw InputError("'" + path + "': missing degree");
    std::vector<Rat> coeffs;
    std::string tok;
    while (in >> tok) coeffs.push_back(parse_rat(tok, path));
    try {
        return TernaryForm(degree, std::move(coeffs));
    } catch (const std::exception& e) {
        throw InputError("'" + path + "': " + e.what());
    }
}

void write_form(const std::string& path, const TernaryForm& f) {
    std::ofstream out(path);
    out << f.degree << "\n";
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        out << (i ? " " : "") << rat_s(f.coeffs[i]);
    out << "\n";
}

PairSpec read_pair(const std::string& path) {
    njson j;
    try {
        j = njson::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + path + "': " + e.what());
    }
    if (!j.contains("b0") || !j.contains("q") || !j.contains("lambda"))
        throw InputError("'" + path + "': pair file needs fields b0, q, lambda");
    PairSpec p;
    p.b0 = TernaryForm(4, rats_from(j["b0"], "b0", 15));
    p.q = TernaryForm(2, rats_from(j["q"], "q", 6));
    if (!j["lambda"].is_string()) throw InputError("field 'lambda': expected a rational string");
    p.lambda = parse_rat(j["lambda"].get<std::string>(), "lambda");
    return p;
}

TowerInstance instance_from_json_text(const std::string& text) {
    njson j;
    try {
        j = njson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("instance: ") + e.what());
    }
    for (const char* f : {"b0", "q", "lambda", "mu", "line"})
        if (!j.contains(f)) throw InputError(std::string("instance: missing field '") + f + "'");

    TowerInstance inst;
    inst.b0 = TernaryForm(4, rats_from(j["b0"], "b0", 15));
    inst.q = TernaryForm(2, rats_from(j["q"], "q", 6));
    if (!j["lambda"].is_string()) throw InputError("field 'lambda': expected a rational string");
    inst.lambda = parse_rat(j["lambda"].get<std::string>(), "lambda");

    const auto& mu = j["mu"];
    if (mu.is_string()) {
        inst.mu = Cplx(static_cast<double>(parse_rat(mu.get<std::string>(), "mu")));
    } else if (mu.is_array() && mu.size() == 2 && mu[0].is_number() && mu[1].is_number()) {
        inst.mu = Cplx(mu[0].get<double>(), mu[1].get<double>());
    } else {
        throw InputError("field 'mu': expected a rational string or [re, im]");
    }

    auto l = rats_from(j["line"], "line", 3);
    inst.t = RatLine{{l[0], l[1], l[2]}};
    if (l[0] == 0 && l[1] == 0 && l[2] == 0) throw InputError("field 'line': zero vector");
    return inst;
}

std::string instance_to_json_text(const TowerInstance& inst) {
    njson j;
    j["b0"] = rats_json(inst.b0.coeffs);
    j["q"] = rats_json(inst.q.coeffs);
    j["lambda"] = rat_s(inst.lambda);
    j["mu"] = cplx_json(inst.mu);
    j["line"] = rats_json({inst.t.l[0], inst.t.l[1], inst.t.l[2]});
    return j.dump(2) + "\n";
}

TowerInstance read_instance(const std::string& path) {
    try {
        return instance_from_json_text(read_file(path));
    } catch (const InputError& e) {
        throw InputError("'" + path + "': " + e.what());
    }
}

void write_instance(const std::string& path, const TowerInstance& inst) {
    std::ofstream out(path);
    out << instance_to_json_text(inst);
}

// lattice claims -----------------------------------------------------------

Report report_lattice_triple(const Lattice& l) {
    njson d;
    try {
        Triple t = triple(l);
        d["signature"] = njson::array({t.sign.n_plus, t.sign.n_minus});
        d["a"] = t.a;
        d["delta"] = t.delta;
        d["rank"] = l.rank();
        d["even"] = l.is_even();
        d["det"] = l.det().str();
        return pass_or_fail("lattice.triple", true, d);
    } catch (const std::exception& e) {
        d["witness"] = e.what();
        return pass_or_fail("lattice.triple", false, d);
    }
}

Report report_lattice_complement(const Embedding& e) {
    njson d;
    d["primitive"] = is_primitive(e);
    auto c = orthogonal_complement(e);
    auto cl = c.sublattice();
    Inertia in = inertia(cl.gram);
    d["rank"] = cl.rank();
    d["signature"] = njson::array({in.n_plus, in.n_minus});
    d["even"] = cl.is_even();
    auto disc = discriminant_group(cl);
    d["two_elementary"] = disc.is_two_elementary();
    d["a"] = disc.is_two_elementary() ? disc.two_rank() : 0;
    d["moduli_dimension"] = cl.rank() >= 2 ? cl.rank() - 2 : 0;
    bool ok = d["primitive"].get<bool>() && d["two_elementary"].get<bool>();
    return pass_or_fail("lattice.complement", ok, d);
}

Report report_lattice_involution(const Embedding& e) {
    njson d;
    try {
        IntMatrix inv = involution_from_sublattice(e);
        std::size_t n = e.ambient.rank();
        bool sq = inv * inv == IntMatrix::identity(n);
        bool isometry = inv.transpose() * e.ambient.gram * inv == e.ambient.gram;
        bool fixes = e.basis * inv.transpose() == e.basis;
        auto comp = orthogonal_complement(e);
        bool anti = comp.basis * inv.transpose() == -comp.basis;
        d["involution"] = sq;
        d["isometry"] = isometry;
        d["fixes_sublattice"] = fixes;
        d["negates_complement"] = anti;
        d["matrix"] = matrix_json(inv);
        return pass_or_fail("lattice.involution", sq && isometry && fixes && anti, d);
    } catch (const std::exception& ex) {
        d["witness"] = ex.what();
        return pass_or_fail("lattice.involution", false, d);
    }
}

Report report_lattice_glue(const Embedding& e) {
    njson d;
    try {
        GlueMap g = glue_map(e);
        d["verified"] = g.verified;
        d["elements_checked"] = g.elements_checked;
        d["source_order"] = g.source.order().str();
        d["target_order"] = g.target.order().str();
        return pass_or_fail("lattice.glue", g.verified, d);
    } catch (const std::exception& ex) {
        d["witness"] = ex.what();
        return pass_or_fail("lattice.glue", false, d);
    }
}

Report report_lattice_extend(const Embedding& e, const IntMatrix& phi, const IntMatrix& psi) {
    njson d;
    try {
        auto ext = extend_isometry(e, e, phi, psi);
        d["extends"] = ext.ambient_isometry.has_value();
        d["mismatches"] = ext.mismatches.size();
        if (ext.ambient_isometry) d["matrix"] = matrix_json(*ext.ambient_isometry);
        return pass_or_fail("lattice.extend", ext.ambient_isometry.has_value(), d);
    } catch (const std::exception& ex) {
        d["witness"] = ex.what();
        return pass_or_fail("lattice.extend", false, d);
    }
}

Report report_lattice_nikulin_equal(const Lattice& l1, const Lattice& l2) {
    njson d;
    try {
        Triple t1 = triple(l1), t2 = triple(l2);
        d["first"] = njson::array({t1.sign.n_plus, t1.sign.n_minus, t1.a, t1.delta});
        d["second"] = njson::array({t2.sign.n_plus, t2.sign.n_minus, t2.a, t2.delta});
        bool eq = nikulin_isometry_class_equal(l1, l2);
        d["equal"] = eq;
        return pass_or_fail("lattice.nikulin-equal", eq, d);
    } catch (const std::exception& ex) {
        d["witness"] = ex.what();
        return pass_or_fail("lattice.nikulin-equal", false, d);
    }
}

// quartic claims -----------------------------------------------------------

Report report_quartic_bitangents(const TernaryForm& f, const BitangentOptions& opt) {
    njson d;
    if (!is_smooth(f)) {
        d["witness"] = "quartic is singular";
        return pass_or_fail("quartic.bitangents", false, d);
    }
    auto set = bitangents(f, opt);
    d["count"] = set.bitangents.size();
    d["hyperflexes"] = set.hyperflexes.size();
    d["lines_on_double_cover"] = 2 * set.bitangents.size();
    d["complete"] = set.complete;
    d["starts_used"] = set.starts_used;
    if (set.complete && set.bitangents.size() == 28)
        return pass_or_fail("quartic.bitangents", true, d);
    d["witness"] = "incomplete bitangent set";
    return finish("quartic.bitangents", "inconclusive", 1, d);
}

Report report_quartic_make_pair(const PairSpec& p) {
    njson d;
    if (!is_smooth(p.b0)) throw InputError("make-pair: b0 is singular");
    if (!conic_is_smooth(p.q)) throw InputError("make-pair: q is singular");
    auto st = make_tangent_pair(p.b0, p.q, p.lambda);
    d["lambda"] = rat_s(p.lambda);
    switch (st.kind) {
        case PairStatus::u_member: d["kind"] = "u-member"; break;
        case PairStatus::q_locus: d["kind"] = "q-locus"; break;
        case PairStatus::degenerate: d["kind"] = "degenerate"; break;
    }
    if (st.kind == PairStatus::q_locus) return pass_or_fail("quartic.make-pair", true, d);
    if (st.kind == PairStatus::degenerate) {
        if (st.singular_witness) {
            d["witness"] = njson::array({cplx_json((*st.singular_witness)[0]),
                                         cplx_json((*st.singular_witness)[1]),
                                         cplx_json((*st.singular_witness)[2])});
        }
        return pass_or_fail("quartic.make-pair", false, d);
    }
    d["tangency_verified"] = st.tangency_verified;
    d["tangency_points"] = points_json(st.tangency_points);
    return pass_or_fail("quartic.make-pair",
                        st.tangency_verified && st.tangency_points.size() == 8, d);
}

Report report_quartic_conic_check(const PairSpec& p, double tol) {
    njson d;
    auto st = make_tangent_pair(p.b0, p.q, p.lambda);
    if (st.kind != PairStatus::u_member) throw InputError("conic-check: pair is degenerate");
    auto fit = points_on_conic(st.tangency_points, tol);
    d["points"] = st.tangency_points.size();
    if (!fit) {
        d["witness"] = "no certified conic through the tangency points";
        return pass_or_fail("quartic.conic-check", false, d);
    }
    d["residual"] = fit->residual;
    d["gap"] = fit->gap;
    // the recovered conic must be q itself (projectively)
    std::vector<Cplx> qc = p.q.coeffs_c();
    Cplx dot(0), nq(0), nf(0);
    for (int i = 0; i < 6; ++i) {
        dot += std::conj(qc[i]) * fit->coeffs[i];
        nq += std::conj(qc[i]) * qc[i];
        nf += std::conj(fit->coeffs[i]) * fit->coeffs[i];
    }
    double align = std::abs(dot) / std::sqrt(std::abs(nq) * std::abs(nf));
    d["conic_match"] = align;
    return pass_or_fail("quartic.conic-check", align > 1.0 - 1e-8, d);
}

Report report_quartic_genericity(const PairSpec& p, const BitangentOptions& opt) {
    njson d;
    if (!is_smooth(p.b0)) throw InputError("genericity: b0 is singular");
    auto st = make_tangent_pair(p.b0, p.q, p.lambda);
    if (st.kind != PairStatus::u_member) throw InputError("genericity: pair is degenerate");
    auto rep = genericity_check(p.b0, st.delta0, opt);
    d["no_hyperflex"] = rep.no_hyperflex;
    d["no_shared_tangency"] = rep.no_shared_tangency;
    d["disjoint_bitangents"] = rep.disjoint_bitangents;
    d["conclusive"] = rep.conclusive;
    if (!rep.shared_tangency_witnesses.empty())
        d["shared_tangency_witnesses"] = points_json(rep.shared_tangency_witnesses);
    d["common_bitangents"] = rep.common_bitangents.size();
    if (!rep.conclusive) return finish("quartic.genericity", "inconclusive", 1, d);
    return pass_or_fail("quartic.genericity", rep.pass(), d);
}

// tower claims -------------------------------------------------------------

namespace {

njson slice_details(const BranchData& br, const CurveModel& m) {
    njson d;
    d["b"] = rats_json(m.b);
    d["q"] = rats_json(m.q);
    d["d"] = rats_json(m.d);
    d["a_points"] = roots_json(br.a);
    d["p_points"] = roots_json(br.p);
    d["genus_C"] = m.genus_C;
    d["genus_E"] = m.genus_E;
    return d;
}

}  // namespace

Report report_tower_slice(const TowerInstance& inst) {
    njson d;
    try {
        auto [br, m] = slice(inst);
        d = slice_details(br, m);
        return pass_or_fail("tower.slice", true, d);
    } catch (const std::invalid_argument& e) {
        d["witness"] = e.what();
        return finish("tower.slice", "fail", 2, d);
    }
}

Report report_tower_dualize(const TowerInstance& inst) {
    njson d;
    try {
        auto [br, m] = slice(inst);
        auto dual = bigonal_dual(m);
        d["b"] = rats_json(dual.b);
        d["q"] = rats_json(dual.q);
        d["d"] = rats_json(dual.d);
        d["identity_residual"] = dual.identity_residual;
        return pass_or_fail("tower.dualize", dual.identity_residual < 1e-10, d);
    } catch (const std::invalid_argument& e) {
        d["witness"] = e.what();
        return finish("tower.dualize", "fail", 2, d);
    }
}

Report report_tower_step2(const TowerInstance& inst, double tol) {
    njson d;
    try {
        auto [br, m] = slice(inst);
        auto rep = verify_step2(br, bigonal_dual(m), tol);
        d["pencil_identity"] = rep.pencil_identity;
        d["lower_over_p"] = rep.lower_over_p;
        d["upper_over_a"] = rep.upper_over_a;
        d["max_mismatch"] = rep.max_mismatch;
        if (rep.offending) d["witness"] = cplx_json(*rep.offending);
        return pass_or_fail("tower.step2", rep.pass(), d);
    } catch (const std::invalid_argument& e) {
        d["witness"] = e.what();
        return finish("tower.step2", "fail", 2, d);
    }
}

Report report_tower_step3(const TowerInstance& inst, double tol) {
    njson d;
    try {
        auto [br, m] = slice(inst);
        auto dual = bigonal_dual(m);
        CurveModel sw;
        try {
            sw = swapped_tower(m);
        } catch (const std::invalid_argument& e) {
            d["witness"] = e.what();
            return finish("tower.step3", "inconclusive", 1, d);
        }
        auto rep = verify_step3(dual, sw, tol);
        d["sign_consistent"] = rep.sign_consistent;
        d["branch_divisors_equal"] = rep.branch_divisors_equal;
        d["dual_of_dual"] = rep.dual_of_dual;
        d["twist_constant"] = cplx_json(rep.twist_constant);
        if (rep.offending) d["witness"] = cplx_json(*rep.offending);
        return pass_or_fail("tower.step3", rep.pass(), d);
    } catch (const std::invalid_argument& e) {
        d["witness"] = e.what();
        return finish("tower.step3", "fail", 2, d);
    }
}

Report report_tower_monodromy(const TowerInstance& inst) {
    njson d;
    try {
        auto [br, m] = slice(inst);
        auto mon = fiber_monodromy(m);
        d["basepoint"] = cplx_json(mon.basepoint);
        njson loops = njson::array();
        for (std::size_t i = 0; i < mon.perms.size(); ++i) {
            njson loop;
            loop["branch_point"] = cplx_json(mon.branch_points[i]);
            loop["kind"] = std::string(1, mon.branch_kind[i]);
            loop["permutation"] = mon.perms[i];
            loops.push_back(loop);
        }
        d["loops"] = loops;
        d["product_identity"] = mon.product_identity;
        d["transitive"] = mon.transitive;
        d["cycle_types"] = mon.cycle_types_ok;
        bool ok = mon.product_identity && mon.transitive && mon.cycle_types_ok;
        return pass_or_fail("tower.monodromy", ok, d);
    } catch (const std::invalid_argument& e) {
        d["witness"] = e.what();
        return finish("tower.monodromy", "fail", 2, d);
    }
}

// prym claim ---------------------------------------------------------------

namespace {

njson prym_details(const CurveModel& m, bool& ok) {
    auto mon = fiber_monodromy(m);
    auto h = homology_with_intersection(cover_presentation(mon));
    auto p = prym_sublattice(h);
    njson d;
    d["h1_rank"] = h.intersection.rows();
    d["genus"] = h.genus;
    d["det_intersection"] = determinant(h.intersection).str();
    d["prym_rank"] = p.basis.rows();
    njson pol = njson::array();
    for (const auto& x : p.polarization) pol.push_back(x.str());
    d["polarization"] = pol;
    d["type"] = njson::array({p.type[0].str(), p.type[1].str()});
    d["component_order"] = p.component_order.str();
    d["anti_invariant_index"] = p.anti_invariant_index.str();
    ok = p.basis.rows() == 4 && p.type == std::array<Int, 2>{1, 2} && p.component_order == 1 &&
         h.genus == 3;
    return d;
}

}  // namespace

Report report_prym(const TowerInstance& inst) {
    njson d;
    try {
        auto [br, m] = slice(inst);
        bool ok1 = false, ok2 = false;
        d["tower"] = prym_details(m, ok1);
        d["dual_tower"] = prym_details(dual_curve_model(bigonal_dual(m)), ok2);
        return pass_or_fail("prym.lattice", ok1 && ok2, d);
    } catch (const std::invalid_argument& e) {
        d["witness"] = e.what();
        return finish("prym.lattice", "fail", 2, d);
    }
}

// suite --------------------------------------------------------------------

namespace {

njson suite_one(unsigned seed, double tol) {
    njson r;
    r["id"] = "seed-" + std::to_string(seed);
    auto inst = random_instance(seed);
    r["instance"] = njson::parse(instance_to_json_text(inst));

    bool all = true;
    auto record = [&](const char* name, const Report& rep) {
        njson e;
        e["status"] = rep.status;
        e["details"] = njson::parse(rep.body)["details"];
        r["checks"][name] = e;
        all = all && rep.status == "pass";
    };

    record("slice", report_tower_slice(inst));
    record("dualize", report_tower_dualize(inst));
    record("step2", report_tower_step2(inst, tol));
    record("step3", report_tower_step3(inst, tol));
    record("monodromy", report_tower_monodromy(inst));
    record("prym", report_prym(inst));
    record("conic", report_quartic_conic_check({inst.b0, inst.q, inst.lambda}, 1e-8));
    BitangentOptions opt;
    opt.seed = seed;
    record("genericity", report_quartic_genericity({inst.b0, inst.q, inst.lambda}, opt));

    r["pass"] = all;
    return r;
}

}  // namespace

Report report_suite(unsigned seed, int count, double tol, int jobs) {
    if (count < 0) throw InputError("suite: count must be nonnegative");
    njson d;
    d["seed"] = seed;
    d["count"] = count;
    d["tolerance"] = tol;
    njson instances = njson::array();
    int passed = 0;

    if (jobs > 1 && count > 1) {
        for (int start = 0; start < count; start += jobs) {
            std::vector<std::future<njson>> futs;
            for (int i = start; i < std::min(count, start + jobs); ++i)
                futs.push_back(std::async(std::launch::async,
                                          [=] { return suite_one(seed + unsigned(i), tol); }));
            for (auto& f : futs) instances.push_back(f.get());
        }
    } else {
        for (int i = 0; i < count; ++i) instances.push_back(suite_one(seed + unsigned(i), tol));
    }
    for (const auto& r : instances) passed += r["pass"].get<bool>() ? 1 : 0;

    d["passed"] = passed;
    d["instances"] = instances;
    return pass_or_fail("suite", passed == count, d);
}

}  // namespace prymtk
