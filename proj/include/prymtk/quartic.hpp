#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "prymtk/exact.hpp"

namespace prymtk {

using Cplx = std::complex<double>;

/// Monomial exponents of a homogeneous degree-d form in graded-lex order
/// with x > y > z: (d,0,0), (d-1,1,0), (d-1,0,1), ...
std::vector<std::array<int, 3>> monomials(int degree);

/// Homogeneous plane form of degree 2 (conic) or 4 (quartic) with exact
/// rational coefficients in graded-lex monomial order.
struct TernaryForm {
    int degree = 0;
    std::vector<Rat> coeffs;  // 6 for conics, 15 for quartics

    TernaryForm() = default;
    TernaryForm(int deg, std::vector<Rat> c);

    bool is_zero() const;
    Rat eval(const Rat& x, const Rat& y, const Rat& z) const;
    Cplx eval(Cplx x, Cplx y, Cplx z) const;
    std::vector<Cplx> coeffs_c() const;

    /// partial derivative as a degree-(d-1) form
    TernaryForm partial(int var) const;

    /// F(A x) for a rational 3x3 change of coordinates
    TernaryForm compose(const RatMatrix& a) const;

    TernaryForm operator*(const TernaryForm& o) const;  // degree adds
    TernaryForm scaled(const Rat& c) const;
    TernaryForm operator-(const TernaryForm& o) const;
};

/// Line in the dual plane, complex coordinates normalized so the
/// largest-modulus coordinate equals 1.
struct Line {
    std::array<Cplx, 3> l;

    static Line from_coords(Cplx l0, Cplx l1, Cplx l2);
    /// deterministic parametrization: two points spanning the line
    std::array<std::array<Cplx, 3>, 2> parametrization() const;
    double distance(const Line& o) const;
};

/// Rational line with the same deterministic parametrization rule.
struct RatLine {
    std::array<Rat, 3> l;
    std::array<std::array<Rat, 3>, 2> parametrization() const;
    Line numeric() const;
};

/// Restriction of F to the line: binary degree-deg(F) form, coefficient i of
/// s^(d-i) u^i, along Line::parametrization.  Exact for rational lines.
std::vector<Rat> restrict_to_line(const TernaryForm& f, const RatLine& t);
std::vector<Cplx> restrict_to_line(const TernaryForm& f, const Line& t);

/// Same restriction along an explicit pair of spanning points.
std::vector<Rat> restrict_to_chart(const TernaryForm& f, const std::array<Rat, 3>& p0,
                                   const std::array<Rat, 3>& p1);

/// Roots of a complex univariate polynomial (coefficient i of x^i) via the
/// companion matrix.  Leading zeros are stripped; roots at infinity dropped.
std::vector<Cplx> poly_roots(const std::vector<Cplx>& coeffs);

enum class Tangency { ordinary, simple_tangent, flex, bitangent, hyperflex };
std::string to_string(Tangency t);

struct TangencyPoint {
    Cplx parameter;               // in the line parametrization
    std::array<Cplx, 3> point;
    int multiplicity = 1;
};

struct TangencyReport {
    Line line;
    Tangency classification = Tangency::ordinary;
    std::vector<TangencyPoint> points;  // non-simple roots only
    double residual = 0.0;              // perfect-square (or 4th power) fit residual
    bool restriction_zero = false;      // line contained in the curve
};

/// Exact smoothness of a quartic via the Macaulay resultant of its partials.
bool is_smooth(const TernaryForm& f);
bool conic_is_smooth(const TernaryForm& q);

/// Multiplicity pattern of the restriction roots; exact (Yun decomposition)
/// for rational lines, clustered numerics otherwise.
TangencyReport classify_tangency(const TernaryForm& f, const Line& t, double cluster_tol = 1e-6);
TangencyReport classify_tangency_exact(const TernaryForm& f, const RatLine& t);

struct PairStatus {
    enum Kind { u_member, q_locus, degenerate } kind = u_member;
    TernaryForm delta0;                       // Q^2 - lambda B0
    std::vector<std::array<Cplx, 3>> tangency_points;  // 8 points of B0 cap Q
    std::optional<std::array<Cplx, 3>> singular_witness;
    bool tangency_verified = false;           // Res(B0,Delta0) = c Res(B0,Q)^2, squarefree
};

/// Build Delta0 = Q^2 - lambda*B0 and verify the total tangency along B0 cap Q.
PairStatus make_tangent_pair(const TernaryForm& b0, const TernaryForm& q, const Rat& lambda);

/// Conic through >= 6 points, when the Veronese evaluation matrix has a
/// certified one-dimensional kernel.
struct ConicFit {
    std::vector<Cplx> coeffs;  // 6, graded-lex
    double residual = 0.0;     // smallest singular value
    double gap = 0.0;          // next singular value
};
std::optional<ConicFit> points_on_conic(const std::vector<std::array<Cplx, 3>>& pts,
                                        double tol = 1e-8);

// exact helpers used across modules

/// Resultant of two univariate rational polynomials (coefficient i of x^i).
Rat resultant(const std::vector<Rat>& p, const std::vector<Rat>& q);

/// Res_z of two ternary forms as a binary form in (x, y), degree
/// deg(f)*deg(g); requires nonzero z-leading coefficients.
std::vector<Rat> resultant_z(const TernaryForm& f, const TernaryForm& g);

/// gcd of rational polynomials, monic.
std::vector<Rat> poly_gcd(std::vector<Rat> a, std::vector<Rat> b);

/// Yun squarefree decomposition: returns factors a_k with p = prod a_k^k.
std::vector<std::vector<Rat>> squarefree_decomposition(const std::vector<Rat>& p);

}  // namespace prymtk
