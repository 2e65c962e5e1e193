#ifndef BDM_CYLINDER_HPP
#define BDM_CYLINDER_HPP

// Brute-force ground truth on the half-cylinder S^1 x R+ for the model
// P_1 = D_{x_n}^2 + P_1' with P_1' = alpha D_{x'}^2 + mass2.
//
// Everything is closed-form per Fourier mode k: the resolvent kernel is the
// method-of-images expression, its Laguerre matrix elements are short
// rational expressions of (sigma, kappa), and higher powers come from Taylor
// jets in lambda.  Traces are lattice sums with Euler-Maclaurin tail
// corrections where the per-mode term extends smoothly to real xi.

#include "bdm/elliptic_model.hpp"
#include "bdm/expansion.hpp"
#include "bdm/jet.hpp"
#include <functional>
#include <string>

namespace bdm {

struct CylinderModel {
    Real alpha{1};
    Real mass2{1};
    double sector_eps = 0.2;

    Real pprime(const Real &xi) const { return alpha * xi * xi + mass2; }
    Real sigma_at(const Real &xi) const { return smoothed_norm(xi); } // = max(|k|,1) on Z
    Real kappa_at(const Real &xi, const Real &mu) const { return sqrt(pprime(xi) + mu * mu); }

    // boundary-frozen symbolic model (a=1, b=0, c = alpha sigma^2)
    EllipticModel boundary_model() const;
};

// ---- per-mode resolvent ----------------------------------------------------

// closed-form kernel of the N-th resolvent power at mode xi, split into the
// convolution part and the image (singular Green) part
struct ModeResolvent {
    int N;
    Real mu, kappa_value;
    RJet kappa; // jet in lambda, order N-1

    Real q_part(const Real &x, const Real &y) const;  // truncated convolution piece
    Real g_part(const Real &x, const Real &y) const;  // image piece (negative)
    Real value(const Real &x, const Real &y) const { return q_part(x, y) + g_part(x, y); }
};

ModeResolvent mode_resolvent(const CylinderModel &m, const Real &xi, const Real &mu, int N);

// ---- Laguerre matrix elements of the resolvent parts ------------------------

// Matrices in the basis lag_m(x, sigma(xi)), m = 0..J:
//   Q^N_+ :     M[m][l] = Tq[|l-m|]
//   G^(N) :     M[m][l] = -Gh[m+l]
//   G^{+-}(Q^N):M[m][l] = +Gh[m+l]
struct ModeMatrices {
    int J;
    std::vector<Real> Tq; // index |d| = 0..J
    std::vector<Real> Gh; // index s = 0..2J
    Real vol_qn;          // (1/(N-1)!) d^{N-1}/d lambda^{N-1} of 1/(2 kappa)
    Real trn_gn;          // -(1/4)(p'(xi) + mu^2)^{-N}, exact normal trace of G^(N)
};

ModeMatrices mode_matrices(const CylinderModel &m, const Real &xi, const Real &mu, int N, int J);

// cross-parameter Laguerre overlap <lag_j(., s), lag_l(., s')>, closed form
Real cross_sigma_overlap(int j, int l, const Real &s, const Real &sprime);

// x-space normalized Laguerre function (for dense-quadrature cross-checks)
Real laguerre_x(int j, const Real &sigma, const Real &x);

// ---- operator data -----------------------------------------------------------

// boundary symbol data c_{jl}(x',xi') with finitely many x'-Fourier modes
struct LaguerreSymbol {
    int J = 0;         // Laguerre entries 0..J
    int bandwidth = 0; // x'-Fourier offsets -B..B
    Real order;        // nu
    std::function<Cx(int j, int l, int b, const Real &xi)> coef;
};

// assembled lattice operator: column modes k' in [-K, K], offsets b in [-B, B]
class CylinderOperator {
  public:
    CylinderOperator() = default;
    CylinderOperator(int K, int J, int B);
    int K = 0, J = 0, B = 0;
    Cx &at(int b, int kcol, int m, int mprime);
    const Cx &at(int b, int kcol, int m, int mprime) const;

    // trace of the operator itself over the truncated lattice
    Cx lattice_trace() const;

  private:
    std::vector<Cx> a_;
};

CylinderOperator assemble_operator(const LaguerreSymbol &sym, const CylinderModel &model, int K);

// mode-diagonal blocks, on the lattice (exact) or extended to real xi (for
// tails); the composed forms are lattice-only
struct DiagBlocks {
    int J = 0;
    // fill block[(J+1)^2] at lattice mode k
    std::function<void(long long k, Cx *block)> at_mode;
    // smooth extension at real xi (empty when unavailable)
    std::function<void(const Real &xi, Cx *block)> at_real;
};

DiagBlocks diag_blocks_single(const LaguerreSymbol &sym);
DiagBlocks diag_blocks_product(const CylinderOperator &A, const CylinderOperator &B);
DiagBlocks diag_blocks_commutator(const CylinderOperator &A, const CylinderOperator &B);

// ---- traces -----------------------------------------------------------------

enum class RPart { RN, QN, GN, GplusQN, GminusQN };

struct TraceOptions {
    int K = 200;
    bool em_tail = true;   // Euler-Maclaurin tail (needs at_real)
    Real T_cut = Real(1);  // x_n-cutoff for the volume part of Q^N_+ alone
    int threads = 1;
};

// Tr( data . part ) over the mu grid; `data` may be empty for part-only
// traces (QN volume term and GN normal trace)
TraceSamples trace_sample(const DiagBlocks *data, RPart part, const CylinderModel &model, int N,
                          const std::vector<Real> &mu_grid, const TraceOptions &opt);

// FNV-1a hash of the formatted samples (determinism witness)
std::string samples_hash(const TraceSamples &s);

// ---- boundary (S^1) scalar operators, for the reduction routes --------------

struct ScalarSymbol {
    int bandwidth = 0;
    Real order;
    std::function<Cx(int b, const Real &xi)> coef;
};

class ScalarBandOp {
  public:
    ScalarBandOp() = default;
    ScalarBandOp(int K, int B);
    int K = 0, B = 0;
    Cx &at(int b, int kcol);
    const Cx &at(int b, int kcol) const;
    friend ScalarBandOp band_mul(const ScalarBandOp &A, const ScalarBandOp &B);
    Cx diag(long long k) const;

  private:
    std::vector<Cx> a_;
};

ScalarBandOp assemble_scalar(const ScalarSymbol &sym, int K);

// Tr( D (P_1' + mu^2)^{-N} ) over the mu grid; sym_diag optionally supplies a
// smooth diagonal-symbol extension for the EM tail
TraceSamples boundary_trace(const ScalarBandOp &D, const CylinderModel &model, int N,
                            const std::vector<Real> &mu_grid, const TraceOptions &opt,
                            const std::function<Cx(const Real &xi)> &sym_diag = {});

} // namespace bdm

#endif
