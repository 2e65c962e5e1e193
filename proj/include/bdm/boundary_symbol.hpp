#ifndef BDM_BOUNDARY_SYMBOL_HPP
#define BDM_BOUNDARY_SYMBOL_HPP

// Classical polyhomogeneous symbols on R^{n'} (n' = 1 or 2), the regularized
// (finite-part) integral, cutoff integrals, residue densities and parity.
//
// Homogeneous terms are stored as sphere functions plus degree; inside the
// unit ball each term is glued along rays to its unit-sphere value with the
// fixed bump eta (smoothing_eta), so every comparison in the project uses one
// and the same inner extension.

#include "bdm/elliptic_model.hpp"
#include "bdm/real.hpp"
#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace bdm {

using UnitVec = std::array<Real, 2>; // n'=1: {±1, 0};  n'=2: point on the circle

enum class ParityClass { EvenEven, EvenOdd, None };

struct SymbolClassTag {
    Real m;
    int d = 0, s = 0;
    // weakenings of a tag with s <= 0 per the (m,d,s)-space inclusions
    SymbolClassTag weaken_into_m() const { return {m + Real(s), d, 0}; }
    SymbolClassTag weaken_into_d() const { return {m, d + s, 0}; }
    friend SymbolClassTag operator+(const SymbolClassTag &a, const SymbolClassTag &b) {
        return {a.m + b.m, a.d + b.d, a.s + b.s};
    }
};

class ClassicalSymbol {
  public:
    int dim = 1;  // n'
    Real nu;      // order

    struct Term {
        Real degree;
        std::function<Real(const UnitVec &)> sphere;
    };
    std::vector<Term> terms; // term j carries degree nu - j (gaps allowed as zero fns)

    // When true the symbol *is* the finite sum of its stored terms (glued
    // inside the ball); otherwise `full` supplies f and, for large radii,
    // `tail` must supply f - sum_{j <= jcut} f_{nu-j} without cancellation.
    bool finite_sum = true;
    std::function<Real(const UnitVec &, const Real &r)> full;
    std::function<Real(int jcut, const UnitVec &, const Real &r)> tail;
    Real tail_r0 = Real(64);

    Real term_value(size_t j, const UnitVec &w, const Real &r) const;
    Real value(const UnitVec &w, const Real &r) const;
    Real remainder_value(int jcut, const UnitVec &w, const Real &r) const;

    int borderline_index() const; // j with nu - j = -n' (or -1 if absent)
};

// quadrature rules shared by the symbol integrals
Real sphere_integral(int dim, const std::function<Real(const UnitVec &)> &f); // against dbar-S
Real ball_integral(const ClassicalSymbol &f, size_t term_index);              // |xi| <= 1, dbar-xi

struct FinitePartResult {
    Real value;    // the finite part (3.17)
    Real log_coef; // coefficient of log mu in the cutoff expansion, reported separately
};

// the regularized integral; `tol` controls the remainder quadrature
FinitePartResult finite_part(const ClassicalSymbol &f, const Real &tol = Real("1e-30"));

// integral over |xi| <= mu against dbar-xi
Real cutoff_integral(const ClassicalSymbol &f, const Real &mu, const Real &tol = Real("1e-30"));

// integral of the degree -n' sphere component against dbar-S (0 if absent)
Real residue_density(const ClassicalSymbol &f);

struct ParityReport {
    ParityClass cls = ParityClass::None;
    bool integer_order = true;
};
ParityReport parity_classify(const ClassicalSymbol &f, int samples = 16);

// ---- constructors used by the test corpus and the suites -------------------

// single homogeneous term  c * [xi]-type ray extension of r^deg * ang(w)
ClassicalSymbol make_homogeneous(int dim, Real degree,
                                 std::function<Real(const UnitVec &)> ang);

// finite sum of homogeneous terms with degrees nu - j, j = 0..(count-1)
ClassicalSymbol make_finite_sum(int dim, Real nu,
                                std::vector<std::function<Real(const UnitVec &)>> angs);

// full symbol (c^2 + |xi|^2)^{nu/2} with exact binomial tail (dim 1 or 2)
ClassicalSymbol make_bessel_power(int dim, Real nu, Real c2, int stored_terms);

} // namespace bdm

#endif
