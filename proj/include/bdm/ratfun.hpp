#ifndef BDM_RATFUN_HPP
#define BDM_RATFUN_HPP

// Rational functions of the covariable xi_n in canonical form:
//     f(xi) = sum_k poly[k] xi^k  +  sum c_{kind,j} * F_kind(xi)^{-j},
// where the four admissible linear factors are
//     SigmaPlus  = sigma  + i xi      (pole  i sigma,  upper half-plane)
//     SigmaMinus = sigma  - i xi      (pole -i sigma,  lower)
//     KappaPlus  = kappa+ + i xi      (pole  i kappa+, upper)
//     KappaMinus = kappa- - i xi      (pole -i kappa-, lower)
// and the coefficients live in the symbolic field CoefExpr.
//
// The slashed measure convention is used throughout: every line integral
// carries d-bar xi = d xi / (2 pi).

#include "bdm/coefexpr.hpp"
#include <map>
#include <utility>
#include <vector>

namespace bdm {

enum class PoleKind { SigmaPlus, SigmaMinus, KappaPlus, KappaMinus };

inline int pole_sign(PoleKind k) { // the s in  base + s*i*xi
    return (k == PoleKind::SigmaPlus || k == PoleKind::KappaPlus) ? +1 : -1;
}
inline bool is_upper(PoleKind k) { return pole_sign(k) > 0; }
CoefExpr atom_base(PoleKind k);       // sigma, sigma, kappa+, kappa-
CoefExpr pole_location(PoleKind k);   // i*s*base

using PoleKey = std::pair<PoleKind, int>; // (kind, order >= 1)
using Poly = std::vector<CoefExpr>;       // xi-polynomial, index = power

Poly poly_mul(const Poly &a, const Poly &b);
Poly poly_add(const Poly &a, const Poly &b);
Poly poly_pow(const Poly &a, int e);
void poly_trim(Poly &p);

class RatFun {
  public:
    RatFun() = default;

    static RatFun polynomial(Poly p);
    static RatFun fraction(PoleKind kind, int order, CoefExpr coef);
    static RatFun constant(CoefExpr c);

    const Poly &poly() const { return poly_; }
    const std::map<PoleKey, CoefExpr> &fractions() const { return frac_; }
    bool proper() const { return poly_.empty(); }
    bool zero() const { return poly_.empty() && frac_.empty(); }

    void add_poly_coef(int power, const CoefExpr &c);
    void add_fraction(PoleKind kind, int order, const CoefExpr &c);

    RatFun operator-() const;
    friend RatFun operator+(const RatFun &a, const RatFun &b);
    friend RatFun operator-(const RatFun &a, const RatFun &b);
    friend RatFun operator*(const RatFun &a, const RatFun &b); // re-canonicalizes
    RatFun scaled(const CoefExpr &c) const;

    Cx eval(const Cx &xi, const Binding &b) const;

  private:
    Poly poly_;
    std::map<PoleKey, CoefExpr> frac_;
};

// Decompose num(xi) / prod_t F_{kind_t}(xi)^{mult_t} into canonical form.
// Repeated kinds in `den` are merged (orders add).  The result recomposes to
// the input as a rational function; improper inputs yield a polynomial part.
RatFun partial_fractions(const Poly &num, const std::vector<std::pair<PoleKind, int>> &den);

// h^+ / h^- splitting by pole half-plane.  Requires a proper input.
std::pair<RatFun, RatFun> h_split(const RatFun &f);

// Closed form of  integral F_A^{-j} F_B^{-k} dbar-xi  for A upper, B lower:
//     binom(j+k-2, j-1) (base_A + base_B)^{1-j-k}.
CoefExpr cross_pair_integral(PoleKind upper_kind, int j, PoleKind lower_kind, int k);

// integral over the real line of a canonical f (proper, decay O(xi^-2), no
// real poles) against dbar-xi, evaluated as the sum of residues.  The upper
// and lower contour evaluations are both formed; a probabilistic mismatch
// (slow decay) throws.
CoefExpr integrate_line(const RatFun &f, Rng &rng);

// Same integral for a *product* a*b without canonicalizing the product:
// cross half-plane term pairs contribute closed forms, same-side pairs give 0.
CoefExpr integrate_product(const RatFun &a, const RatFun &b);

struct RatLambdaRules {
    LambdaRules coef; // derivative of each atom
    // derivative of the pole base per kind (sigma: 0, kappa: model-supplied)
    CoefExpr dbase_sigma, dbase_kappa_plus, dbase_kappa_minus;
};

RatFun lambda_derivative(const RatFun &f, const RatLambdaRules &rules);

// Formal adjoint: conjugates constants and swaps (SigmaPlus <-> SigmaMinus),
// (KappaPlus <-> KappaMinus).  Exact when the atoms take values with
// conj(kappa+) = kappa- and sigma real, e.g. the symmetric model on rays.
RatFun conjugate_formal(const RatFun &f);

// Numeric decay order at a binding: smallest r >= -deg(poly) such that the
// xi^{-r} coefficient of the expansion at infinity is nonzero relative to the
// term scale; returns max_check+1 when all checked coefficients vanish.
int decay_order(const RatFun &f, const Binding &b, int max_check = 8);

// Quadrature cross-check of integrate_line at a numeric binding: adaptive
// panels on [-cut, cut] plus a series tail estimate.
Cx integrate_line_quadrature(const RatFun &f, const Binding &b, const Real &tol,
                             const Real &cut = Real(1e6));

Rational binom_rational(long long n, long long k); // n may be negative

} // namespace bdm

#endif
