#ifndef BDM_RESOLVENT_SYMBOLS_HPP
#define BDM_RESOLVENT_SYMBOLS_HPP

// Parameter-dependent symbols attached to the resolvent of the model:
// interior symbols q^{circ N}, their boundary simple-fraction decompositions,
// the Dirichlet singular Green symbol, the truncation-leftover symbols
// G^{+-}(Q^N), and the diagonal composition symbol alpha^(N).

#include "bdm/elliptic_model.hpp"
#include "bdm/laguerre.hpp"

namespace bdm {

// q^{circ N} in the constant-coefficient desk scope: a sum over J (even) of
// rational terms  coef * (p_{1,2} + mu^2)^{-power}  generated by the mass
// shift; J = 0 is the single term when mass2 = 0.
struct ResolventSymbolN {
    int N = 1;
    struct Term {
        int J;          // homogeneity drop: term is homogeneous of degree -2N-J
        int power;      // m in (p+mu^2)^{-m}
        Rational coef;  // constant numerator
    };
    std::vector<Term> terms;

    // exact-shift route: (p_core + mass2 + mu^2)^{-N} at numeric (p_core, mu)
    Cx exact_value(const Cx &p_core, const Cx &mu, const Rational &mass2) const;
    // homogeneous route: sum of the stored terms at numeric (p_core, mu)
    Cx series_value(const Cx &p_core, const Cx &mu) const;
};

// homogeneous expansion of (p + mass2 + mu^2)^{-N} in terms of (p + mu^2)
ResolventSymbolN resolvent_symbol(const EllipticModel &model, int N, int J_max);

// boundary decomposition of one interior term (p_{1,2}+mu^2)^{-power} at
// x_n = 0 into kappa-fractions; coef/a^power spread over orders 1..2*power
RatFun boundary_term_ratfun(const EllipticModel &model, int power, const Rational &coef);

// h+ / h- parts of a full q^{circ N}; sums boundary_term_ratfun over terms
std::pair<RatFun, RatFun> boundary_decompose(const EllipticModel &model,
                                             const ResolventSymbolN &q);

// Dirichlet singular Green symbol G^(N): built for N = 1 from the Poisson
// symbol and the h--projected trace symbol, then lambda-differentiated.
// The mass shift of the model rides inside the kappa atoms.
SgoSymbol dirichlet_sgo_symbol(const EllipticModel &model, int N);

// leftover symbols G^{+-}(Q^N); closed form requires b = 0 (throws otherwise)
SgoSymbol leftover_sgo_symbol(const EllipticModel &model, int N, bool plus);

// lambda-derivative of an s.g.o. symbol under the model rules
SgoSymbol sgo_lambda_derivative(const SgoSymbol &g, const EllipticModel &model);

// alpha^(N): h+ q at xi_n = -i sigma plus h- q at xi_n = +i sigma, then
// lambda-derivatives; alpha^(1) = a^{-1}(k+ + k-)^{-1}[(k+ + s)^{-1} + (k- + s)^{-1}]
CoefExpr alpha_expr(const EllipticModel &model, int N);

// substitute xi_n <- value (a CoefExpr) into a proper RatFun
CoefExpr substitute_xi(const RatFun &f, const CoefExpr &xi_value);

} // namespace bdm

#endif
