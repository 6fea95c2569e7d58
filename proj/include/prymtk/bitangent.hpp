#pragma once

#include "prymtk/quartic.hpp"

namespace prymtk {

struct BitangentOptions {
    unsigned seed = 0;
    double cert_tol = 1e-9;     // residual of the perfect-square fit
    double dedup_tol = 1e-6;    // lines closer than this are identified
    double separation = 1e-4;   // distinct lines must be at least this far apart
    int max_starts = 8000;      // multistart budget across all charts
    int newton_iters = 80;
};

struct BitangentSet {
    // all 28 certified perfect-square lines; a smooth quartic has exactly 28
    // counting hyperflexes as degenerate bitangents (e.g. the Fermat quartic
    // has 16 ordinary bitangents and 12 hyperflexes)
    std::vector<TangencyReport> bitangents;
    std::vector<TangencyReport> hyperflexes;  // the degenerate ones, flagged
    bool complete = false;                    // 28 certified, well separated
    int starts_used = 0;
    bool hyperflex_free() const { return hyperflexes.empty(); }
};

/// All bitangent lines of a smooth quartic, found by seeded multistart Newton
/// on the perfect-square system in three charts and certified by the residual
/// of the square fit.  Results are sorted deterministically.
BitangentSet bitangents(const TernaryForm& f, const BitangentOptions& opt = {});

struct GenericityReport {
    bool no_hyperflex = false;        // condition 1
    bool no_shared_tangency = false;  // condition 2
    bool disjoint_bitangents = false; // condition 3
    bool conclusive = false;          // both bitangent sets certified complete
    std::vector<std::array<Cplx, 3>> shared_tangency_witnesses;
    std::vector<Line> common_bitangents;
    bool transversal_meeting_flagged = false;  // some tangency point of B0 lies on D0
    bool pass() const { return conclusive && no_hyperflex && no_shared_tangency && disjoint_bitangents; }
};

/// The three genericity conditions for a totally tangent pair of quartics.
GenericityReport genericity_check(const TernaryForm& b0, const TernaryForm& d0,
                                  const BitangentOptions& opt = {});

}  // namespace prymtk
