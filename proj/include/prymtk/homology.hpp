#pragma once

#include "prymtk/exact.hpp"
#include "prymtk/tower.hpp"

namespace prymtk {

/// Branched-cover data over P^1: sheet permutations of the standard loop
/// generators (ordered product = identity) together with a deck involution
/// commuting with all of them.
struct CoverPresentation {
    int sheets = 0;
    std::vector<std::vector<int>> perms;
    std::vector<int> tau;
    int genus = 0;  // from Riemann-Hurwitz
};

/// Validates and converts a monodromy computation; throws on a presentation
/// that is not a connected cover or whose deck involution fails to commute.
CoverPresentation cover_presentation(const MonodromyResult& mon);

/// Integral H1 of the covering surface with its intersection form and the
/// action of the deck involution, computed from a ribbon-graph model of the
/// cover: vertices are sheets, edges are loop lifts, faces are traced from
/// the rotation system, and a spanning tree is contracted to read the
/// intersection numbers off the chord diagram at the single vertex.
struct SurfaceHomology {
    int vertices = 0, edges = 0, faces = 0;
    int genus = 0;
    IntMatrix intersection;  // 2g x 2g, unimodular, skew
    IntMatrix tau_action;    // 2g x 2g, symplectic involution
};

SurfaceHomology homology_with_intersection(const CoverPresentation& pres);

/// The anti-invariant lattice of the deck involution with the restricted
/// intersection form.
///
/// component_order is the order of the component group of ker(id + tau)
/// inside the Jacobian, read off the lattice as the index
/// [saturated ker(id - tau) : (id + tau) H1]: a class v with (id + tau)v
/// integral defines a point of the kernel, and v lies in the identity
/// component exactly when (id + tau)v is hit by the lattice.  The
/// anti-invariant index [ker(id + tau) : (id - tau) H1] is reported too;
/// it equals 2^(number of sign summands of H1 as an involution module) and
/// is 4 whenever the invariant/anti-invariant ranks are (2, 4), so it is
/// not a connectedness measure.
struct PrymLattice {
    IntMatrix basis;              // rows: saturated basis of ker(id + tau)
    IntMatrix form;               // restricted skew form on that basis
    std::vector<Int> polarization;  // SNF diagonal of the form, (d1,d1,d2,d2)
    std::array<Int, 2> type;        // (d1, d2)
    Int component_order = 0;        // [saturated ker(id - tau) : (id + tau) H1]
    Int anti_invariant_index = 0;   // [ker(id + tau) : (id - tau) H1]
};

PrymLattice prym_sublattice(const SurfaceHomology& h);

}  // namespace prymtk
