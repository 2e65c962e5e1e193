#ifndef BDM_EXPANSION_HPP
#define BDM_EXPANSION_HPP

// Asymptotic-expansion model in the variable mu = (-lambda)^{1/2}, the
// weighted least-squares coefficient extraction, and the conversions to
// zeta-function data.
//
// Trace expansions are fitted against the basis {mu^p} U {mu^p log mu} on a
// geometric mu-grid.  Exponents come in two families:
//   family 0:  p = nu + n - j - 2N,  j = 0..J_cut   (no logs)
//   family 1:  p = -k - 2N,          k = 0..K_cut   (log partner when the
//              order is integer, or when a family-0 exponent collides)
// The fitted log-mu coefficient at p = -k-2N equals twice the log(-lambda)
// coefficient of the lambda-form expansion.

#include "bdm/boundary_symbol.hpp"
#include "bdm/linalg.hpp"
#include <optional>
#include <string>
#include <vector>

namespace bdm {

struct ExpTerm {
    Real exponent;      // power of mu
    bool with_log;      // a mu^p log(mu) column accompanies mu^p
    int family;         // 0 or 1 (after merging: 1 wins the bookkeeping)
    int index;          // j or k within the family
    bool merged = false;
};

struct ExpansionModel {
    Real nu;
    int n = 2;
    int N = 1;
    int J_cut = 0, K_cut = 0;
    std::vector<ExpTerm> terms; // deduplicated, exponent-descending

    static ExpansionModel resolvent_lattice(Real nu, int n, int N, int J_cut, int K_cut,
                                            bool force_logs = false);
    // ad-hoc lattice (cutoff-integral fits): given exponents, one log column at 0
    static ExpansionModel power_lattice(std::vector<Real> exponents, bool log_at_zero);

    int find(const Real &exponent, const Real &tol = Real("1e-9")) const;
};

struct TraceSamples {
    std::vector<Real> mu;
    std::vector<Cx> value;
    std::vector<Real> error_bound; // truncation-tail bounds, may be zero
};

struct FitCoef {
    Real exponent;
    bool is_log;   // coefficient of mu^p log mu
    Cx estimate;
    Real stderr_scale;  // residual-based standard error
    Real stability;     // change under half-grid refit
    bool resolved;
};

struct FitReport {
    std::vector<FitCoef> coef;
    Real condition;
    Real residual_norm;
    bool all_resolved;
    // accessors in lambda-form bookkeeping
    Cx c_tilde(const ExpansionModel &m, const Real &mu_exponent) const;      // non-log coef
    Cx c_tilde_log(const ExpansionModel &m, const Real &mu_exponent) const;  // log(-lambda) coef
    const FitCoef *find(const Real &exponent, bool is_log) const;
    Real scale() const; // largest |estimate| over non-log coefficients
};

struct FitOptions {
    Real resolve_tol = Real("1e-3"); // stability threshold relative to scale
    bool half_grid_check = true;
};

FitReport fit_expansion(const TraceSamples &s, const ExpansionModel &model,
                        const FitOptions &opt = {});

// geometric grid of `count` points on [lo, hi]
std::vector<Real> geometric_grid(const Real &lo, const Real &hi, int count);

// ---- zeta data and structural predictions ----------------------------------

struct ZetaData {
    Cx C_minus1;
    Cx C_0;
    std::string provenance;
};

// per the resolvent-to-zeta dictionary: C_{-1} = log-coefficient at mu^{-2N},
// C_0 = (merged) constant coefficient at mu^{-2N}
ZetaData zeta_from_resolvent(const FitReport &fit, const ExpansionModel &model);

// vanishing pattern forced by parity (even-even with n even / even-odd with
// n odd): families and indices whose coefficients must vanish
struct ParityPrediction {
    bool applies = false;
    std::vector<int> vanishing_family0_j; // c_j with nu+n-1-j even
    std::vector<int> vanishing_log_k;     // log coefficients with k even
    bool c0_equals_boundary_trace = false;
};
ParityPrediction parity_predict(ParityClass cls, const Real &nu, int n, int J_cut, int K_cut);

// finite-part prediction of the constant coefficient for an s.g.o. given its
// normal-trace symbol on the boundary; the 2 pi factor is the x'-volume of
// the circle (lattice sum <-> 2 pi times the dbar-integral).
struct C0Prediction {
    Real value;
    bool modulo_local_terms;
    Real log_coef_prediction; // residue-density based
};
C0Prediction predict_c0_sgo(const ClassicalSymbol &trn_symbol, const Real &x_volume = Real(0));

// interior route: finite part over R^n of a localized interior symbol times
// the x-volume factor; exact when nu < -n, otherwise flagged
C0Prediction predict_c0_psdo(const ClassicalSymbol &interior_symbol, const Real &x_volume);

// comparison (residue relation): fitted log data against half the residue
// density of the normal trace
struct ResidueRelationReport {
    Cx fitted_log_coef;      // c'_0 in lambda-form
    Real residue_half;       // (1/2) * res
    Real abs_error;
};
ResidueRelationReport residue_relation_check(const FitReport &fit, const ExpansionModel &model,
                                             const ClassicalSymbol &trn_symbol,
                                             const Real &x_volume);

} // namespace bdm

#endif
