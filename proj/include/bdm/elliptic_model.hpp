#ifndef BDM_ELLIPTIC_MODEL_HPP
#define BDM_ELLIPTIC_MODEL_HPP

// Boundary-frozen second-order model  p(xi) = a xi_n^2 + b xi_n + c(sigma),
// its resolvent factorization  p + mu^2 = a (kappa+ + i xi_n)(kappa- - i xi_n),
// and the lambda-differentiation rules it induces on the atoms.

#include "bdm/ratfun.hpp"
#include <optional>

namespace bdm {

struct EllipticModel {
    Rational a{1};                      // leading coefficient, > 0
    CoefExpr b;                         // first-order coefficient, CoefExpr in sigma (default 0)
    CoefExpr c;                         // zero-order part, second-order homogeneous in sigma
    Rational mass2{0};                  // lower-order mass shift m^2 >= 0
    double sector_eps = 0.2;            // aperture of the mu-sector (3.9)

    static EllipticModel symmetric_default(Rational mass2 = Rational(0)) {
        EllipticModel m;
        m.c = CoefExpr::atom(Atom::Sigma).pow(2);
        m.mass2 = std::move(mass2);
        return m;
    }

    bool symmetric() const { return b.is_zero_const(); }

    // p(xi_n) + mu^2 as a xi_n-polynomial (mass2 included)
    Poly char_poly() const;

    // lambda rules:  d kappa+/d lambda = -1/(2 a kappa+ - i b),
    //                d kappa-/d lambda = -1/(2 a kappa- + i b),
    //                d mu   /d lambda = -1/(2 mu),  d sigma/d lambda = 0.
    RatLambdaRules lambda_rules() const;

    // mu-sector membership per the resolvent region
    bool mu_in_sector(const Cx &mu) const;
};

// Numeric roots of the characteristic polynomial, returned as (kappa+, kappa-)
// with positive real parts.  Throws if a root is real (ellipticity violated).
struct KappaPair {
    const EllipticModel *model;
    double sector_eps;
    std::pair<Cx, Cx> eval(const Cx &sigma, const Cx &mu) const;
    // numeric binding with kappa+/- filled in consistently
    Binding binding(const Cx &sigma, const Cx &mu) const;
};

KappaPair kappa_roots(const EllipticModel &model);

// sigma smoothing [xi'] used on the continuum side: equals |t| for |t| >= 1,
// equals 1 near 0, glued with eta(t) = f(1-t)/(f(1-t)+f(t-1/2)), f(s)=e^{-1/s}.
Real smoothed_norm(const Real &t);
Real smoothing_eta(const Real &t);

// Lemma-A.1 data: (p+mu^2)^{-m} = sum_{j<L} c_j mu^{-2m-2j} p^j
//                                + mu^{-2m-2L} sum_{k<=m} e_k p^{L+k} (p+mu^2)^{-k}
struct GeometricExpansion {
    int m, L;
    std::vector<Rational> c;  // c[j], j = 0..L-1
    std::vector<Rational> e;  // e[k], k = 0..m
    // residual of the identity at numeric (p, mu); exact zero up to rounding
    Real residual(const Cx &p, const Cx &mu) const;
    // remainder p'_L at numeric (p, mu)
    Cx remainder(const Cx &p, const Cx &mu) const;
};

GeometricExpansion geometric_expansion(int m, int L);

} // namespace bdm

#endif
