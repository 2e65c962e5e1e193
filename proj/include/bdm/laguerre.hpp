#ifndef BDM_LAGUERRE_HPP
#define BDM_LAGUERRE_HPP

// Laguerre basis on the half-line in Fourier form, the normal trace, and the
// composition integrals used throughout the boundary calculus.
//
// Conventions.  The unnormalized functions are
//     lag'_k(xi, sigma) = (sigma - i xi)^k (sigma + i xi)^{-k-1};
// the normalized family carries an extra factor (2 sigma)^{1/2}, which is not
// representable in the coefficient field, so every pairing of two normalized
// functions accounts for it as an explicit factor 2 sigma, and Poisson-type
// single pairings carry a half-power tag (ScaledExpr).

#include "bdm/elliptic_model.hpp"
#include "bdm/ratfun.hpp"
#include <array>
#include <vector>

namespace bdm {

// (base - i xi)^m (base + i xi)^{-m-1} for m >= 0, and the mirrored
// (base + i xi)^{m'} (base - i xi)^{-m'-1}-type form for m < 0, in canonical
// fraction form.  `up` selects which atom plays the upper-half-plane base
// (SigmaPlus for the ordinary basis, KappaPlus for kappa-parameter tricks).
RatFun laguerre_ratio(int m, PoleKind up = PoleKind::SigmaPlus);

// lag'_k as a RatFun (unnormalized; k >= 0)
RatFun laguerre_fn(int k);

// conj(lag'_k): poles in the lower half-plane
RatFun laguerre_fn_conj(int k);

// <lag_j, lag_k> with both factors normalized:  2 sigma * integral of
// lag'_j conj(lag'_k).  Equals delta_{jk} as an expression in sigma.
CoefExpr inner_product(int j, int k);

// Coefficient triple of the differentiation rules on the basis:
//   d/d xi_j   : (k, -1, -(k+1)) * (2 sigma)^{-1} * dsigma   (tangential)
//   d/d xi_n   : -i (k, 2k+1, k+1) * (2 sigma)^{-1}
// expressed on (lag_{k-1}, lag_k, lag_{k+1}); the k-1 slot is absent at k=0.
// The tangential rule acts on the unnormalized family; the normal rule acts
// on both families.
struct LaguerreDeriv {
    CoefExpr c_km1, c_k, c_kp1;
};
LaguerreDeriv laguerre_deriv(int k, bool normal_direction, const CoefExpr &dsigma = CoefExpr());

// value with an attached half-integer power of (2 sigma)
struct ScaledExpr {
    CoefExpr core;
    int half_powers = 0; // value = core * (2 sigma)^{half_powers/2}
    Cx eval(const Binding &b) const;
};

// ---- composition integrals ------------------------------------------------

// Lemma-B.1 integral: integral of
//   (sigma +- i xi)^m (sigma -+ i xi)^{-m-1} (kappa^{+-} +- i xi)^{-j} dbar-xi
// (upper signs for plus=true).  Exact closed form as a CoefExpr.
CoefExpr compose_b1_value(int m, int j, bool plus);

// span extraction for B.1: coefficients a_{j m'} on the basis
//   kappa^{1-j} (sigma-kappa)^{m'} (sigma+kappa)^{-m'-1},  |m'-m| < j,
// solved at random numeric bindings; residual returned for the span check.
struct SpanFit {
    std::vector<int> indices;   // the m' values
    std::vector<Cx> coef;
    Real residual;              // max mismatch at check bindings
};
SpanFit compose_b1_extract(int m, int j, bool plus, Rng &rng);

// Lemma-B.2 integral s_{j,j',m}
CoefExpr compose_b2_value(int m, int j, int jprime);
// basis coefficients b on (kappa-)^{-j''}(sigma-kappa-)^{m'}(sigma+kappa-)^{-m'-1}
// (kappa+ + kappa-)^{-j-j'+1+j''} for m >= 0; mirrored for m < 0
SpanFit compose_b2_extract(int m, int j, int jprime, Rng &rng);

// Lemma-B.4 integral s^{+-}_{j,l,m}
CoefExpr compose_b4_value(int l, int m, int j, bool plus);

// (B.5) plus-removal: all three contour placements of the projection agree.
// qtilde must be a pure kappa-type fraction.  Returns the max pairwise
// difference over `trials` random bindings, using normalized functions.
Real plus_removal_check(int k, int l, const RatFun &qtilde, Rng &rng, int trials = 5);

// ---- singular Green symbols in Laguerre form -------------------------------

enum class SgoPolePair { PlusMinus, PlusPlus, MinusMinus }; // (kappa, kappa')

// g(xi_n, eta_n) = sum s_{j,j'} (kappa + i xi_n)^{-j} (kappa' - i eta_n)^{-j'}
struct SgoSymbol {
    SgoPolePair pair = SgoPolePair::PlusMinus;
    std::map<std::pair<int, int>, CoefExpr> terms; // (j, j') -> coefficient
    void add(int j, int jp, const CoefExpr &c);
    SgoSymbol scaled(const CoefExpr &c) const;
    friend SgoSymbol operator+(const SgoSymbol &a, const SgoSymbol &b);
    Cx eval(const Cx &xi, const Cx &eta, const Binding &bind) const;
    int max_order() const;
};

// For PlusPlus / MinusMinus pairs the RatFun realizations below bind both
// poles to the KappaPlus/KappaMinus slots of the atom set; this is exact for
// the symmetric model where kappa+ = kappa- at every admissible binding.
CoefExpr atom_for_xi_side(SgoPolePair p);
CoefExpr atom_for_eta_side(SgoPolePair p);

// normal trace of an s.g.o. symbol: set eta = xi and integrate
CoefExpr tr_n(const SgoSymbol &g);

struct LaguerreMatrix {
    int J_max = 0;
    std::vector<std::vector<CoefExpr>> d; // (J_max+1)^2 entries
    CoefExpr diagonal_sum() const;
    // observed sup-norm decay exponent p with max|d_jk| (1+j+k)^p bounded,
    // measured at a binding
    Real decay_rate(const Binding &b) const;
};

// d_{jk} = double pairing of g against normalized lag_j (x) lag_k
LaguerreMatrix sgo_to_laguerre(const SgoSymbol &g, int J_max);

// evaluate the truncated Laguerre series at a point (round-trip check)
Cx laguerre_series_eval(const LaguerreMatrix &m, const Cx &xi, const Cx &eta, const Binding &b);

// tr_n q^{circ N} against a Laguerre pair (B.9-type value): the rank-one
// composition value for indices (l, m); equals alpha^(N) on the diagonal.
CoefExpr trn_qn_laguerre(const EllipticModel &model, int N, int l, int m);

// Poisson symbol expansion: C_j = pairing of k_sym with normalized lag_j.
// The (2 sigma)^{1/2} normalization is carried in the tag.
std::vector<ScaledExpr> poisson_to_laguerre(const RatFun &poisson_symbol, int J_max);

} // namespace bdm

#endif
