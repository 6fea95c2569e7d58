#pragma once

#include <optional>

#include "prymtk/quartic.hpp"

namespace prymtk {

/// A quartic/conic pair with a pencil parameter and a slicing line.  The
/// square root mu of lambda is part of the data: it pins down which of the
/// two components over the double-conic member the tower uses, so the sign
/// claims of the duality construction become definite computations.
struct TowerInstance {
    TernaryForm b0;  // smooth quartic
    TernaryForm q;   // smooth conic
    Rat lambda;      // pencil parameter, nonzero
    Cplx mu;         // mu^2 = lambda
    RatLine t;       // generic line
};

/// Affine chart of the line: point(u) = p0 + u * p1, with the point at
/// infinity in direction p1 kept off both quartics so all slice polynomials
/// have exact degree 4.
struct LineChart {
    std::array<Rat, 3> p0, p1;
};

struct BranchData {
    std::vector<Cplx> a;  // branch points of the lower cover (roots of b)
    std::vector<Cplx> p;  // their counterparts on the dual side (roots of d)
};

/// E: y^2 = b(u); C: z^2 = mu*y - q(u).  All slice polynomials exact.
struct CurveModel {
    LineChart chart;
    std::vector<Rat> b;  // degree 4
    std::vector<Rat> q;  // degree 2
    std::vector<Rat> d;  // degree 4, d = q^2 - lambda*b
    Rat lambda;
    Cplx mu;
    int genus_E = 1;
    int genus_C = 3;
};

/// Dual side: Etilde: eta^2 = d(u); Cdual: zeta^2 = 2*(eta - q(u)).
struct DualModel {
    LineChart chart;
    std::vector<Rat> b;  // carried along for the swap checks
    std::vector<Rat> q;
    std::vector<Rat> d;
    Rat lambda;
    Cplx mu;
    double identity_residual = 0.0;  // numeric re-check of the pair identities
};

/// Slice the pair along the line; throws on a non-generic line (multiple or
/// overlapping roots of b and d) with a witness message.
std::pair<BranchData, CurveModel> slice(const TowerInstance& inst);

/// Pantazis's bigonal construction at the level of hyperelliptic models:
/// eta = z*z' and zeta = z+z' over the two points of E above u satisfy
/// eta^2 = d(u) and zeta^2 = 2*(eta - q(u)).  The pencil identity
/// d = q^2 - lambda*b is verified exactly; the pair identities are re-checked
/// numerically at 20 points.
DualModel bigonal_dual(const CurveModel& model);

struct Step2Report {
    bool pencil_identity = false;  // q^2 - d = lambda*b exactly
    bool lower_over_p = false;     // eta-cover branched exactly over the p_i
    bool upper_over_a = false;     // zeta-cover branch locus lies above the a_i
    double max_mismatch = 0.0;
    std::optional<Cplx> offending;
    bool pass() const { return pencil_identity && lower_over_p && upper_over_a; }
};

/// Step 2: the bigonal dual swaps the two kinds of branch data.
Step2Report verify_step2(const BranchData& branch, const DualModel& dual, double tol = 1e-10);

/// The tower of the role-swapped pair over the same line: B0 and Delta0
/// exchange roles, Q becomes Q/mu, lambda becomes 1/lambda.
CurveModel swapped_tower(const CurveModel& model);

struct Step3Report {
    bool sign_consistent = false;    // all 4 branch points carry eta = +q(a_i)
    bool branch_divisors_equal = false;
    bool dual_of_dual = false;       // swapped tower's d equals the original b
    Cplx twist_constant = 0.0;       // zeta^2 / ztilde^2 = 2*mu
    std::optional<Cplx> offending;
    bool pass() const { return sign_consistent && branch_divisors_equal && dual_of_dual; }
};

/// Step 3: the dual curve is the tower of the swapped pair, up to a
/// quadratic twist that is trivial over C.
Step3Report verify_step3(const DualModel& dual, const CurveModel& swapped, double tol = 1e-10);

/// The dual tower as a curve model of its own: Cdual -> Etilde -> P^1 with
/// eta^2 = d and zeta^2 = 2*(eta - q) rewritten in the (b, q, mu) shape,
/// so the monodromy and homology pipeline applies verbatim.
CurveModel dual_curve_model(const DualModel& dual);

struct MonodromyResult {
    Cplx basepoint;
    std::vector<Cplx> branch_points;           // in loop order
    std::vector<char> branch_kind;             // 'a' or 'p'
    std::vector<std::array<int, 4>> perms;     // sheet permutation per loop
    std::array<int, 4> tau{1, 0, 3, 2};        // deck involution z -> -z
    bool product_identity = false;
    bool transitive = false;
    bool cycle_types_ok = false;  // 2+2 around a_i, 2+1+1 around p_i
};

/// Monodromy of the 4-sheeted cover C -> P^1 on the fiber over a basepoint,
/// sheets labeled by the signs of (y, z).  Loops are standard generators
/// around each branch point in angular order as seen from the basepoint, so
/// their ordered product is the identity; `loop_rotation` rotates the list
/// cyclically (the product stays the identity up to conjugation).
MonodromyResult fiber_monodromy(const CurveModel& model,
                                std::optional<Cplx> basepoint = std::nullopt,
                                int loop_rotation = 0);

/// Deterministic generation of a verified tower instance from a seed: draws
/// quartic, conic, pencil parameter and line until all genericity conditions
/// hold.  Used by the batch driver and the test corpus.
TowerInstance random_instance(unsigned seed);

}  // namespace prymtk
