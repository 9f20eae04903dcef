#pragma once

#include "fanolab/laurent.hpp"
#include "fanolab/linalg.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fanolab {

/// Divisor classes are coefficient vectors over a model's curve list.  The
/// curves need not be numerically independent; only intersection numbers
/// matter.
using DivisorClass = RatVector;

class SurfaceModel {
  public:
    SurfaceModel() = default;
    /// Validates symmetry, names and, when given, (-K)^2 > 0.
    SurfaceModel(std::vector<std::string> curves, RatMatrix gram, std::vector<std::string> mori,
                 std::optional<DivisorClass> anticanonical);

    std::size_t size() const { return curves_.size(); }
    const std::vector<std::string>& curves() const { return curves_; }
    const RatMatrix& gram() const { return gram_; }
    /// Curves generating the Mori cone (indices into curves()).
    const std::vector<std::size_t>& mori() const { return mori_; }
    const std::optional<DivisorClass>& anticanonical() const { return antik_; }

    std::size_t index(const std::string& name) const;
    DivisorClass curve(const std::string& name) const;
    DivisorClass zero() const { return DivisorClass(size(), 0); }

    Rational intersect(const DivisorClass& a, const DivisorClass& b) const;
    /// (D . C_i) for every curve.
    RatVector degrees(const DivisorClass& d) const;
    bool is_nef(const DivisorClass& d) const;

    std::string format(const DivisorClass& d) const;

  private:
    std::vector<std::string> curves_;
    RatMatrix gram_;
    std::vector<std::size_t> mori_;
    std::optional<DivisorClass> antik_;
};

/// Raised for classes outside the pseudo-effective cone.  The witness H is
/// nef (non-negative on every Mori generator) with H . D < 0.
class NotPseudoEffective : public ComputationError {
  public:
    NotPseudoEffective(const std::string& what, DivisorClass witness)
        : ComputationError(what), witness_(std::move(witness)) {}
    const DivisorClass& witness() const { return witness_; }

  private:
    DivisorClass witness_;
};

bool is_pseudo_effective(const SurfaceModel& s, const DivisorClass& d);

struct ZariskiDecomposition {
    DivisorClass positive;
    std::vector<std::pair<std::size_t, Rational>> negative;  // (curve, coefficient > 0)
    Rational volume;                                          // positive . positive
};

/// Iterative scheme: repeatedly add curves meeting the current positive part
/// negatively and re-solve P . C = 0 on the support.
ZariskiDecomposition zariski_decompose(const SurfaceModel& s, const DivisorClass& d);

Rational volume(const SurfaceModel& s, const DivisorClass& d);

/// sup{t : L - tF pseudo-effective}.
Rational pseff_threshold(const SurfaceModel& s, const DivisorClass& l, const DivisorClass& f);

struct PiecewisePolynomial {
    std::vector<Rational> breakpoints;          // increasing, pieces.size() + 1 entries
    std::vector<std::vector<Rational>> pieces;  // ascending coefficients on each interval

    /// Zero outside [front, back].
    Rational operator()(const Rational& t) const;
    Rational integral() const;
    std::string to_string(char var = 't') const;
};

/// t -> vol(L - tF) on [0, pseff_threshold].
PiecewisePolynomial volume_fn(const SurfaceModel& s, const DivisorClass& l, const DivisorClass& f);

/// (1 / vol L) * integral of vol(L - tF) dt.
Rational s_invariant(const SurfaceModel& s, const DivisorClass& l, const DivisorClass& f);

struct ValuationSpec {
    Rational A;    // log discrepancy
    Rational ord;  // multiplicity of the boundary along the valuation
    Rational S;
    Rational beta_without_boundary() const { return A - S; }
};

struct QuasiMonomialPart {
    Rational weight, A, beta;
};

/// A = sum w_i A_i, beta = sum w_i beta_i, S = A - beta.  The boundary order
/// is left at zero for the caller to fill in.
ValuationSpec quasimonomial_combine(const std::vector<QuasiMonomialPart>& parts);

/// A - c ord - (1 - slope c) S.
Rational beta(const Rational& c, const Rational& slope, const ValuationSpec& v);

/// The c with beta = 0, nullopt when beta does not depend on c.
std::optional<Rational> wall_solve(const ValuationSpec& v, const Rational& slope);

struct NamedValuation {
    std::string name;
    ValuationSpec spec;
};

struct Wall {
    Rational c;
    std::vector<std::string> sources;
};

/// Distinct walls with lo < c <= hi, increasing.
std::vector<Wall> walls_in_range(const std::vector<NamedValuation>& vals, const Rational& slope, const Rational& lo,
                                 const Rational& hi);

/// Class depending affinely on a parameter: constant + u * slope.
struct AffineClass {
    DivisorClass constant, slope;
};

/// Symmetric trilinear form on a threefold divisor basis.
class CubicForm {
  public:
    CubicForm() = default;
    explicit CubicForm(std::vector<std::string> names) : names_(std::move(names)) {}

    const std::vector<std::string>& names() const { return names_; }
    std::size_t index(const std::string& name) const;
    /// Sets all permutations of (i, j, k).
    void set(std::size_t i, std::size_t j, std::size_t k, const Rational& value);
    Rational get(std::size_t i, std::size_t j, std::size_t k) const;
    Rational operator()(const DivisorClass& a, const DivisorClass& b, const DivisorClass& c) const;

  private:
    std::vector<std::string> names_;
    std::map<std::array<std::size_t, 3>, Rational> values_;
};

struct FlagConfig {
    CubicForm threefold;
    DivisorClass L;                // threefold basis
    std::size_t surface = 0;       // the flag surface among the threefold divisors
    AffineClass negative;          // N(u) on the threefold, valid for u in [0, u_max]
    Rational u_max;                // pseudo-effective threshold of L - uB
    SurfaceModel surface_model;    // curves on the flag surface
    AffineClass restriction;       // P(u) restricted to the flag surface
    std::size_t flag_curve = 0;    // index in surface_model
    /// Local intersection multiplicity at the flag point of each curve other
    /// than the flag curve; absent when the flag stops at the curve.
    std::optional<std::map<std::size_t, Rational>> point_multiplicity;
};

/// Polynomials in (u, v) are LaurentPolynomials in two variables with
/// non-negative exponents, u first.
struct FlagCell {
    Rational u_lo, u_hi;
    std::array<Rational, 2> v_lo, v_hi;  // v bounds a + b u
    std::vector<std::size_t> support;    // negative part curves
    LaurentPolynomial volume;            // vol(P(u)|_B - vC)
    LaurentPolynomial degree;            // P(u,v) . C
    std::vector<std::pair<std::size_t, LaurentPolynomial>> negative;  // coefficients of N(u,v)
};

/// Chamber decomposition of {(u, v) : 0 <= u <= u_max, 0 <= v <= t(u)}.
std::vector<FlagCell> flag_volume_2d(const FlagConfig& f);

struct FlagRefinement {
    std::vector<Rational> volume_polynomial;  // P(u)^3 in ascending powers of u
    Rational L_cubed;
    Rational S_surface;  // S_L(B)
    Rational beta_surface;
    Rational S_curve;                     // S(W^B; C)
    std::optional<Rational> F_point;      // F_x
    std::optional<Rational> S_point;      // S(W^{B,C}; x)
    Rational delta_lower_bound;
};

FlagRefinement flag_refine(const FlagConfig& f);

/// floor(9 / (4 (1 - 4c)^2)): the largest local group order compatible with
/// the local volume comparison for (S, c Delta).
Integer local_volume_bound(const Rational& c);

/// h^0(S, -mK_S) = 1 + m(m+1)d/2 on a del Pezzo surface of degree d.
Integer dp_plurianticanonical_dim(const Integer& degree, const Integer& m);

/// Exact integral of p(u, v) over u in [u0, u1], v between two affine functions of u.
Rational integrate_cell(const LaurentPolynomial& p, const Rational& u0, const Rational& u1,
                        const std::array<Rational, 2>& v_lo, const std::array<Rational, 2>& v_hi);

}  // namespace fanolab
