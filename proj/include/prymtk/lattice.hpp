#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "prymtk/exact.hpp"

namespace prymtk {

/// Integral lattice given by its Gram matrix.
struct Lattice {
    IntMatrix gram;

    explicit Lattice(IntMatrix g);
    std::size_t rank() const { return gram.rows(); }
    bool is_even() const;
    bool is_degenerate() const;
    Int det() const { return determinant(gram); }
};

// Standard lattices.
Lattice lattice_U();
Lattice lattice_E8_minus();
Lattice lattice_A1();                       // <-2>
Lattice lattice_I(std::size_t p, std::size_t q);
Lattice rescale(const Lattice& l, const Int& d);
Lattice direct_sum(const Lattice& a, const Lattice& b);
Lattice lattice_K3();                       // U^3 + E8(-1)^2
Lattice lattice_I17_2();                    // I_{1,7}(2)
Lattice make_standard(const std::string& name);

/// Sublattice of an ambient lattice; rows of `basis` are coordinates of the
/// sublattice basis in the ambient basis.
struct Embedding {
    Lattice ambient;
    IntMatrix basis;

    Embedding(Lattice amb, IntMatrix b);
    std::size_t rank() const { return basis.rows(); }
    IntMatrix induced_gram() const;
    Lattice sublattice() const { return Lattice(induced_gram()); }
};

/// Finite group M^v / M with generators as rational vectors in the coordinates
/// of the lattice basis of M.
struct DiscriminantGroup {
    std::vector<Int> factors;        // invariant factors > 1, divisibility chain
    RatMatrix generators;            // rows: generator coordinates in M-basis
    // internals used for canonicalization
    IntMatrix gram;                  // Gram of M
    IntMatrix snf_v;                 // V of SNF(gram)
    std::vector<Int> all_factors;    // full diagonal of SNF(gram), length rank

    Int order() const;
    std::size_t two_rank() const;    // valid when 2-elementary
    bool is_two_elementary() const;

    /// Canonical coefficients (c_i mod s_i, only factors > 1) of a class
    /// given by a rational vector in M-basis coordinates.
    std::vector<Int> canonical(const std::vector<Rat>& v) const;
    /// Rational vector in M-basis coordinates for given coefficients.
    std::vector<Rat> vector_of(const std::vector<Int>& coeffs) const;

    /// q(v) = <v,v> reduced into [0,2) (value in Q/2Z).
    Rat q_value(const std::vector<Rat>& v) const;
    /// b(v,w) = <v,w> reduced into [0,1) (value in Q/Z).
    Rat b_value(const std::vector<Rat>& v, const std::vector<Rat>& w) const;
};

DiscriminantGroup discriminant_group(const Lattice& l);

struct Triple {
    Inertia sign;
    std::size_t a = 0;
    int delta = 0;
};

/// (sign, a, delta) of an even nondegenerate 2-elementary lattice.
/// Throws if the lattice is degenerate, odd, or not 2-elementary.
Triple triple(const Lattice& l);

/// Saturated orthogonal complement of the embedded sublattice.
Embedding orthogonal_complement(const Embedding& e);

bool is_primitive(const Embedding& e);

/// Glue map A_M -> A_{M^perp} of a primitive nondegenerate sublattice of a
/// unimodular ambient, with its verification data.
struct GlueMap {
    DiscriminantGroup source;        // A_M
    DiscriminantGroup target;        // A_{M^perp}
    IntMatrix complement_basis;      // rows: complement basis in ambient coords
    // image of source generator i, as canonical coefficients in the target
    std::vector<std::vector<Int>> generator_images;
    bool verified = false;           // group isomorphism + anti-isometry checks
    std::size_t elements_checked = 0;
};

GlueMap glue_map(const Embedding& e);

/// Integral involution of the ambient acting as +1 on M and -1 on M^perp.
IntMatrix involution_from_sublattice(const Embedding& e);

struct IsometryExtension {
    std::optional<IntMatrix> ambient_isometry;
    // on failure: mismatched generator images (canonical coeffs in A_{M2^perp})
    std::vector<std::pair<std::vector<Int>, std::vector<Int>>> mismatches;
};

/// Extend phi: M1 -> M2 and psi: M1^perp -> M2^perp to an ambient isometry,
/// when the induced discriminant maps are compatible.  phi and psi act on
/// basis coordinate columns: x |-> phi*x.
IsometryExtension extend_isometry(const Embedding& e1, const Embedding& e2,
                                  const IntMatrix& phi, const IntMatrix& psi);

/// Nikulin's classification predicate for indefinite even 2-elementary
/// lattices: equality of (signature, a, delta).
bool nikulin_isometry_class_equal(const Lattice& l1, const Lattice& l2);

/// The shipped primitive embedding I_{1,7}(2) into the K3 lattice.
Embedding embed_I17_2_in_K3();

// Matrix text fixtures: first line "rows cols", then row-major integer entries.
void write_int_matrix(const std::string& path, const IntMatrix& m);
IntMatrix read_int_matrix(const std::string& path);

}  // namespace prymtk
