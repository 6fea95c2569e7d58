#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "prymtk/report.hpp"

using namespace prymtk;

namespace {

Lattice lattice_arg(const std::string& fixture, const std::string& file) {
    if (!fixture.empty()) {
        try {
            return make_standard(fixture);
        } catch (const std::exception& e) {
            throw InputError(e.what());
        }
    }
    if (file.empty()) throw InputError("need a --fixture name or a Gram matrix file");
    try {
        return Lattice(read_int_matrix(file));
    } catch (const std::exception& e) {
        throw InputError(std::string("'") + file + "': " + e.what());
    }
}

Embedding embedding_arg(const std::string& fixture, const std::string& ambient,
                        const std::string& basis) {
    if (fixture == "I17_2-in-K3" || (fixture.empty() && ambient.empty())) {
        return embed_I17_2_in_K3();
    }
    if (!fixture.empty()) throw InputError("unknown embedding fixture '" + fixture + "'");
    try {
        return Embedding(Lattice(read_int_matrix(ambient)), read_int_matrix(basis));
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

void emit(const Report& rep, const std::string& out) {
    if (out.empty()) {
        std::cout << rep.body;
    } else {
        std::ofstream f(out);
        if (!f) throw InputError("cannot write '" + out + "'");
        f << rep.body;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification toolkit for quartic/conic tower duality"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out;
    unsigned seed = 0;
    double tol = 1e-10;
    int jobs = 1;
    app.add_option("--out", out, "write the report to this file instead of stdout")
        ->envname("PRYMTK_OUT");
    app.add_option("--seed", seed, "seed for randomized paths")->envname("PRYMTK_SEED");
    app.add_option("--tol", tol, "numeric tolerance for residual checks")->envname("PRYMTK_TOL");
    app.add_option("--jobs", jobs, "parallel instances in suite mode")->envname("PRYMTK_JOBS");

    // lattice ---------------------------------------------------------------
    auto* lat = app.add_subcommand("lattice", "integral lattice checks");
    lat->require_subcommand(1);
    std::string fixture, fixture2, mat_file, mat_file2, ambient_file, basis_file;
    std::string phi_file, psi_file;
    for (const char* name : {"triple", "complement", "involution", "glue", "extend",
                             "nikulin-equal"}) {
        auto* sub = lat->add_subcommand(name);
        sub->add_option("--fixture", fixture, "built-in lattice or embedding name");
        if (std::string(name) == "triple" || std::string(name) == "nikulin-equal")
            sub->add_option("file", mat_file, "Gram matrix file");
        if (std::string(name) == "nikulin-equal") {
            sub->add_option("--fixture2", fixture2, "second built-in lattice");
            sub->add_option("file2", mat_file2, "second Gram matrix file");
        } else if (std::string(name) != "triple") {
            sub->add_option("--ambient", ambient_file, "ambient Gram matrix file");
            sub->add_option("--basis", basis_file, "sublattice basis file");
        }
        if (std::string(name) == "extend") {
            sub->add_option("--phi", phi_file, "isometry of the sublattice (matrix file)");
            sub->add_option("--psi", psi_file, "isometry of the complement (matrix file)");
        }
    }

    // quartic ---------------------------------------------------------------
    auto* qua = app.add_subcommand("quartic", "plane quartic checks");
    qua->require_subcommand(1);
    std::string form_file, pair_file, lambda_str;
    qua->add_subcommand("bitangents")->add_option("form", form_file, "quartic form file")
        ->required();
    for (const char* name : {"genericity", "make-pair", "conic-check"}) {
        auto* sub = qua->add_subcommand(name);
        sub->add_option("pair", pair_file, "pair JSON file")->required();
        if (std::string(name) == "make-pair")
            sub->add_option("--lambda", lambda_str, "override the pencil parameter");
    }

    // tower / prym ----------------------------------------------------------
    auto* tow = app.add_subcommand("tower", "tower construction and duality checks");
    tow->require_subcommand(1);
    std::string inst_file;
    for (const char* name : {"slice", "dualize", "verify-step2", "verify-step3", "monodromy"})
        tow->add_subcommand(name)->add_option("instance", inst_file, "instance JSON file")
            ->required();
    app.add_subcommand("prym", "homology pipeline: monodromy, intersection form, kernel lattice")
        ->add_option("instance", inst_file, "instance JSON file")->required();

    // suite -----------------------------------------------------------------
    auto* suite = app.add_subcommand("suite", "batch verification of seeded instances");
    int count = 10;
    suite->add_option("--count", count, "number of seeded instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    auto started = std::chrono::steady_clock::now();
    try {
        Report rep;
        if (lat->parsed()) {
            auto* sub = lat->get_subcommands().front();
            const std::string name = sub->get_name();
            if (name == "triple") {
                rep = report_lattice_triple(lattice_arg(fixture, mat_file));
            } else if (name == "nikulin-equal") {
                rep = report_lattice_nikulin_equal(lattice_arg(fixture, mat_file),
                                                   lattice_arg(fixture2, mat_file2));
            } else {
                Embedding e = embedding_arg(fixture, ambient_file, basis_file);
                if (name == "complement") rep = report_lattice_complement(e);
                if (name == "involution") rep = report_lattice_involution(e);
                if (name == "glue") rep = report_lattice_glue(e);
                if (name == "extend") {
                    IntMatrix phi = phi_file.empty() ? IntMatrix::identity(e.rank())
                                                     : read_int_matrix(phi_file);
                    auto comp = orthogonal_complement(e);
                    IntMatrix psi = psi_file.empty() ? IntMatrix::identity(comp.rank())
                                                     : read_int_matrix(psi_file);
                    rep = report_lattice_extend(e, phi, psi);
                }
            }
        } else if (qua->parsed()) {
            auto* sub = qua->get_subcommands().front();
            const std::string name = sub->get_name();
            BitangentOptions opt;
            opt.seed = seed;
            if (name == "bitangents") {
                rep = report_quartic_bitangents(read_form(form_file), opt);
            } else {
                PairSpec p = read_pair(pair_file);
                if (!lambda_str.empty()) {
                    try {
                        p.lambda = Rat(lambda_str);
                    } catch (const std::exception&) {
                        throw InputError("--lambda: '" + lambda_str + "' is not rational");
                    }
                }
                if (name == "genericity") rep = report_quartic_genericity(p, opt);
                if (name == "make-pair") rep = report_quartic_make_pair(p);
                if (name == "conic-check") rep = report_quartic_conic_check(p, tol);
            }
        } else if (tow->parsed()) {
            auto* sub = tow->get_subcommands().front();
            const std::string name = sub->get_name();
            TowerInstance inst = read_instance(inst_file);
            if (name == "slice") rep = report_tower_slice(inst);
            if (name == "dualize") rep = report_tower_dualize(inst);
            if (name == "verify-step2") rep = report_tower_step2(inst, tol);
            if (name == "verify-step3") rep = report_tower_step3(inst, tol);
            if (name == "monodromy") rep = report_tower_monodromy(inst);
        } else if (app.got_subcommand("prym")) {
            rep = report_prym(read_instance(inst_file));
        } else {
            rep = report_suite(seed, count, tol, jobs);
        }

        emit(rep, out);
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - started)
                      .count();
        std::cerr << rep.claim << ": " << rep.status << " (" << ms << " ms)\n";
        return rep.code;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
