#pragma once

#include <string>

#include "prymtk/bitangent.hpp"
#include "prymtk/lattice.hpp"
#include "prymtk/tower.hpp"

namespace prymtk {

/// Input that failed to parse or violates a precondition; mapped to exit
/// code 2 by the command-line driver.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One verification result.  `body` is canonical JSON: given identical
/// inputs and seed the bytes are reproducible (timings are deliberately kept
/// out of the body and go to stderr in the driver).
struct Report {
    std::string claim;
    std::string status;  // "pass", "fail" or "inconclusive"
    int code = 0;        // 0 pass, 1 fail/inconclusive, 2 invalid input
    std::string body;
};

// file formats -------------------------------------------------------------

/// Plain-text form file: first line the degree, second line the
/// coefficients as rationals in graded-lex order.
TernaryForm read_form(const std::string& path);
void write_form(const std::string& path, const TernaryForm& f);

struct PairSpec {
    TernaryForm b0, q;
    Rat lambda;
};
PairSpec read_pair(const std::string& path);

/// JSON instance files: b0 (15 rationals), q (6 rationals), lambda, mu
/// (rational string, or [re, im] for an irrational square root), line
/// (3 rationals).  Throws InputError with a field diagnostic.
TowerInstance instance_from_json_text(const std::string& text);
std::string instance_to_json_text(const TowerInstance& inst);
TowerInstance read_instance(const std::string& path);
void write_instance(const std::string& path, const TowerInstance& inst);

// claim runners ------------------------------------------------------------

Report report_lattice_triple(const Lattice& l);
Report report_lattice_complement(const Embedding& e);
Report report_lattice_involution(const Embedding& e);
Report report_lattice_glue(const Embedding& e);
Report report_lattice_extend(const Embedding& e, const IntMatrix& phi, const IntMatrix& psi);
Report report_lattice_nikulin_equal(const Lattice& l1, const Lattice& l2);

Report report_quartic_bitangents(const TernaryForm& f, const BitangentOptions& opt);
Report report_quartic_make_pair(const PairSpec& p);
Report report_quartic_conic_check(const PairSpec& p, double tol);
Report report_quartic_genericity(const PairSpec& p, const BitangentOptions& opt);

Report report_tower_slice(const TowerInstance& inst);
Report report_tower_dualize(const TowerInstance& inst);
Report report_tower_step2(const TowerInstance& inst, double tol);
Report report_tower_step3(const TowerInstance& inst, double tol);
Report report_tower_monodromy(const TowerInstance& inst);

Report report_prym(const TowerInstance& inst);

/// Generates `count` seeded instances and runs every verification on each;
/// aggregate report sorted by instance id, byte-identical for a fixed
/// (seed, count).  `jobs` > 1 verifies instances concurrently.
Report report_suite(unsigned seed, int count, double tol, int jobs);

}  // namespace prymtk
