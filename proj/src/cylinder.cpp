#include "bdm/cylinder.hpp"
#include "bdm/laguerre.hpp"
#include "bdm/quadrature.hpp"
#include <cmath>
#include <atomic>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bdm {

EllipticModel CylinderModel::boundary_model() const {
    EllipticModel m;
    // alpha is kept as an exact value only when it is a simple ratio; the
    // desk presets use small integers
    long long num = llround(alpha.convert_to<double>() * 16);
    m.a = Rational(1);
    m.b = CoefExpr();
    m.c = CoefExpr::constant(Rational(BigInt(num), BigInt(16))) *
          CoefExpr::atom(Atom::Sigma).pow(2);
    long long m2 = llround(mass2.convert_to<double>() * 16);
    m.mass2 = Rational(BigInt(m2), BigInt(16));
    m.sector_eps = sector_eps;
    return m;
}

// ---- per-mode resolvent ------------------------------------------------------

ModeResolvent mode_resolvent(const CylinderModel &m, const Real &xi, const Real &mu, int N) {
    ModeResolvent r;
    r.N = N;
    r.mu = mu;
    RJet lam = RJet::variable(N - 1, -mu * mu);
    RJet p = RJet::constant(N - 1, m.pprime(xi)) - lam;
    r.kappa = sqrt(p);
    r.kappa_value = r.kappa.c[0];
    return r;
}

Real ModeResolvent::q_part(const Real &x, const Real &y) const {
    RJet e = exp(kappa * (-abs(x - y)));
    RJet v = e * recip(kappa * Real(2));
    return v.c[N - 1];
}

Real ModeResolvent::g_part(const Real &x, const Real &y) const {
    RJet e = exp(kappa * (-(x + y)));
    RJet v = e * recip(kappa * Real(2));
    return -v.c[N - 1];
}

// ---- matrix elements ---------------------------------------------------------

ModeMatrices mode_matrices(const CylinderModel &m, const Real &xi, const Real &mu, int N, int J) {
    ModeMatrices out;
    out.J = J;
    int ord = N - 1;
    Real sig = m.sigma_at(xi);
    RJet lam = RJet::variable(ord, -mu * mu);
    RJet kap = sqrt(RJet::constant(ord, m.pprime(xi)) - lam);
    RJet sig_j = RJet::constant(ord, sig);
    RJet splus = sig_j + kap;
    RJet inv_splus = recip(splus);
    RJet ratio = (sig_j - kap) * inv_splus;
    RJet base = sig_j * recip(kap) * inv_splus * inv_splus; // (sigma/kappa)(sigma+kappa)^{-2}
    out.Tq.resize(J + 1);
    out.Gh.resize(2 * J + 1);
    RJet alpha_jet = recip(kap * splus); // 1/(kappa(kappa+sigma))
    out.Tq[0] = alpha_jet.c[ord];
    RJet acc = base;
    for (int s = 0; s <= 2 * J; ++s) {
        out.Gh[s] = acc.c[ord];
        if (s + 1 <= J) out.Tq[s + 1] = acc.c[ord];
        acc *= ratio;
    }
    out.vol_qn = recip(kap * Real(2)).c[ord];
    out.trn_gn = -pow_int(m.pprime(xi) + mu * mu, -(long long)N) / 4;
    return out;
}

Real cross_sigma_overlap(int j, int l, const Real &s, const Real &sprime) {
    // pair lag'_j at sigma = s (upper poles) with conj lag'_l at kappa- = s'
    static thread_local std::map<std::pair<int, int>, CoefExpr> cache;
    auto key = std::make_pair(j, l);
    auto it = cache.find(key);
    if (it == cache.end()) {
        CoefExpr v = integrate_product(laguerre_fn(j), laguerre_ratio(l, PoleKind::KappaMinus));
        it = cache.emplace(key, v).first;
    }
    Binding b;
    b.sigma = Cx(s);
    b.kappa_minus = Cx(sprime);
    b.kappa_plus = Cx(sprime);
    b.mu = Cx(Real(1));
    Cx v = it->second.eval(b);
    Real norm = 2 * sqrt(s * sprime);
    return v.re * norm;
}

Real laguerre_x(int j, const Real &sigma, const Real &x) {
    // (-1)^j sqrt(2 sigma) e^{-sigma x} L_j(2 sigma x)
    Real t = 2 * sigma * x;
    Real l0(1), l1 = 1 - t;
    Real lj = (j == 0) ? l0 : l1;
    for (int k = 2; k <= j; ++k) {
        Real l2 = ((2 * k - 1 - t) * l1 - (k - 1) * l0) / k;
        l0 = l1;
        l1 = l2;
        lj = l2;
    }
    Real v = sqrt(2 * sigma) * exp(-sigma * x) * lj;
    return (j % 2 == 0) ? v : -v;
}

// ---- operators ---------------------------------------------------------------

CylinderOperator::CylinderOperator(int K_, int J_, int B_) : K(K_), J(J_), B(B_) {
    a_.assign(size_t(2 * B + 1) * (2 * K + 1) * (J + 1) * (J + 1), Cx(0));
}

Cx &CylinderOperator::at(int b, int kcol, int m, int mprime) {
    size_t idx = ((size_t(b + B) * (2 * K + 1) + (kcol + K)) * (J + 1) + m) * (J + 1) + mprime;
    return a_[idx];
}
const Cx &CylinderOperator::at(int b, int kcol, int m, int mprime) const {
    return const_cast<CylinderOperator *>(this)->at(b, kcol, m, mprime);
}

Cx CylinderOperator::lattice_trace() const {
    Cx acc(0);
    for (long long ak = 0; ak <= K; ++ak)
        for (int sgn : {+1, -1}) {
            if (ak == 0 && sgn < 0) continue;
            long long k = sgn * ak;
            for (int m = 0; m <= J; ++m) acc += at(0, int(k), m, m);
        }
    return acc;
}

CylinderOperator assemble_operator(const LaguerreSymbol &sym, const CylinderModel &model, int K) {
    (void)model;
    CylinderOperator op(K, sym.J, sym.bandwidth);
    for (int b = -sym.bandwidth; b <= sym.bandwidth; ++b)
        for (int kc = -K; kc <= K; ++kc) {
            Real xi = Real(kc);
            for (int m = 0; m <= sym.J; ++m)
                for (int mp = 0; mp <= sym.J; ++mp)
                    op.at(b, kc, m, mp) = sym.coef(m, mp, b, xi);
        }
    return op;
}

DiagBlocks diag_blocks_single(const LaguerreSymbol &sym) {
    DiagBlocks d;
    d.J = sym.J;
    int J = sym.J;
    d.at_mode = [&sym, J](long long k, Cx *block) {
        Real xi = Real(k);
        for (int m = 0; m <= J; ++m)
            for (int mp = 0; mp <= J; ++mp) block[m * (J + 1) + mp] = sym.coef(m, mp, 0, xi);
    };
    d.at_real = [&sym, J](const Real &xi, Cx *block) {
        for (int m = 0; m <= J; ++m)
            for (int mp = 0; mp <= J; ++mp) block[m * (J + 1) + mp] = sym.coef(m, mp, 0, xi);
    };
    return d;
}

namespace {

void product_diag_block(const CylinderOperator &A, const CylinderOperator &B, long long k,
                        Cx *out) {
    int J = A.J;
    int n = J + 1;
    for (int t = 0; t < n * n; ++t) out[t] = Cx(0);
    // C^{(k,k)} = sum_b A^{(k, k-b)} B^{(k-b, k)}
    for (int b = -A.B; b <= A.B; ++b) {
        long long kc = k - b;
        if (kc < -A.K || kc > A.K) continue;
        if (-b < -B.B || -b > B.B) continue;
        if (k < -B.K || k > B.K) continue;
        for (int m = 0; m < n; ++m)
            for (int j = 0; j < n; ++j) {
                Cx amj = A.at(b, int(kc), m, j);
                if (amj.re == 0 && amj.im == 0) continue;
                for (int mp = 0; mp < n; ++mp)
                    out[m * n + mp] += amj * B.at(-b, int(k), j, mp);
            }
    }
}

} // namespace

DiagBlocks diag_blocks_product(const CylinderOperator &A, const CylinderOperator &B) {
    if (A.J != B.J) throw std::invalid_argument("diag_blocks_product: mismatched J");
    DiagBlocks d;
    d.J = A.J;
    d.at_mode = [&A, &B](long long k, Cx *block) { product_diag_block(A, B, k, block); };
    return d;
}

DiagBlocks diag_blocks_commutator(const CylinderOperator &A, const CylinderOperator &B) {
    if (A.J != B.J) throw std::invalid_argument("diag_blocks_commutator: mismatched J");
    DiagBlocks d;
    d.J = A.J;
    int n = A.J + 1;
    d.at_mode = [&A, &B, n](long long k, Cx *block) {
        std::vector<Cx> tmp(n * n);
        product_diag_block(A, B, k, block);
        product_diag_block(B, A, k, tmp.data());
        for (int t = 0; t < n * n; ++t) block[t] -= tmp[t];
    };
    return d;
}

// ---- traces -------------------------------------------------------------------

namespace {

// contraction tr(block . M_part) for one mode
Cx contract_part(const Cx *block, const ModeMatrices &mm, RPart part, const Real &T_cut) {
    int n = mm.J + 1;
    Cx acc(0);
    switch (part) {
    case RPart::QN:
    case RPart::RN:
        for (int m = 0; m < n; ++m)
            for (int l = 0; l < n; ++l) {
                Real M = mm.Tq[std::abs(m - l)];
                if (part == RPart::RN) M -= mm.Gh[m + l];
                acc += block[m * n + l] * Cx(M);
            }
        break;
    case RPart::GN:
        for (int m = 0; m < n; ++m)
            for (int l = 0; l < n; ++l) acc += block[m * n + l] * Cx(-mm.Gh[m + l]);
        break;
    case RPart::GplusQN:
    case RPart::GminusQN:
        for (int m = 0; m < n; ++m)
            for (int l = 0; l < n; ++l) acc += block[m * n + l] * Cx(mm.Gh[m + l]);
        break;
    }
    (void)T_cut;
    return acc;
}

struct OneSideTail {
    Cx value;
    Real bound;
};

// Euler-Maclaurin sum over k = a, a+1, ... of a smooth decaying f
OneSideTail em_tail(const std::function<Cx(const Real &)> &f, const Real &a, const Real &tol) {
    OneSideTail out{Cx(0), Real(0)};
    // integral by doubling panels
    Cx integral(0);
    Real lo = a;
    Real last_piece(0);
    for (int p = 0; p < 60; ++p) {
        Real hi = lo * 2;
        Cx piece = integrate_adaptive_cx(f, lo, hi, tol / 8);
        integral += piece;
        last_piece = abs(piece);
        if (last_piece < tol / 4 && p >= 3) break;
        lo = hi;
    }
    out.bound += last_piece; // geometric continuation bound
    Real h = Real(1) / 2;
    Cx f0 = f(a);
    Cx fp1 = f(a + h), fm1 = f(a - h), fp2 = f(a + 2 * h), fm2 = f(a - 2 * h);
    Cx d1 = (Cx(8) * (fp1 - fm1) - (fp2 - fm2)) / Cx(12 * h);
    Cx d3 = (fp2 - Cx(2) * fp1 + Cx(2) * fm1 - fm2) / Cx(2 * h * h * h);
    out.value = integral + f0 * Cx(Real(0.5)) - d1 * Cx(Real(1) / 12) + d3 * Cx(Real(1) / 720);
    out.bound += abs(d3) / 720; // next-order proxy
    return out;
}

// power-law extrapolation bound from the last sampled lattice terms
Real edge_bound(const std::vector<Real> &mags, long long Kmax) {
    int n = int(mags.size());
    if (n < 4) return Real(0);
    Real m_hi = mags.back() + Real("1e-60");
    Real m_lo = mags.front() + Real("1e-60");
    Real span = log(Real(double(Kmax)) / Real(double(Kmax - n + 1)));
    if (span <= 0) return m_hi * Kmax;
    Real slope = log(m_hi / m_lo) / span; // ~ negative power
    if (slope > -Real("1.05")) slope = -Real("1.05");
    // sum_{k>K} C k^slope ~ m_hi * K / (-slope - 1)
    return m_hi * Real(double(Kmax)) / (-slope - 1);
}

} // namespace

TraceSamples trace_sample(const DiagBlocks *data, RPart part, const CylinderModel &model, int N,
                          const std::vector<Real> &mu_grid, const TraceOptions &opt) {
    if (!data && part != RPart::QN && part != RPart::GN)
        throw std::invalid_argument("trace_sample: composed parts need data blocks");
    TraceSamples out;
    out.mu = mu_grid;
    out.value.assign(mu_grid.size(), Cx(0));
    out.error_bound.assign(mu_grid.size(), Real(0));

    int J = data ? data->J : 0;
    int n = J + 1;

    // the data blocks are mu-independent: build them once per mode
    std::vector<std::vector<Cx>> mode_blocks;
    if (data) {
        mode_blocks.assign(2 * opt.K + 1, {});
        for (long long k = -opt.K; k <= opt.K; ++k) {
            auto &blk = mode_blocks[size_t(k + opt.K)];
            blk.assign(size_t(n) * n, Cx(0));
            data->at_mode(k, blk.data());
        }
    }

    auto run_one = [&](size_t gi) {
        const Real &mu = mu_grid[gi];
        Cx total(0);
        std::vector<Real> edge_mags;
        // lattice sum, |k| ascending, positive sign first
        for (long long ak = 0; ak <= opt.K; ++ak)
            for (int sgn : {+1, -1}) {
                if (ak == 0 && sgn < 0) continue;
                long long k = sgn * ak;
                Cx term(0);
                if (data) {
                    ModeMatrices mm = mode_matrices(model, Real(double(k)), mu, N, J);
                    term = contract_part(mode_blocks[size_t(k + opt.K)].data(), mm, part,
                                         opt.T_cut);
                } else if (part == RPart::QN) {
                    ModeMatrices mm = mode_matrices(model, Real(double(k)), mu, N, 0);
                    term = Cx(opt.T_cut * mm.vol_qn);
                } else { // GN alone: exact normal trace
                    term = Cx(-pow_int(model.pprime(Real(double(k))) + mu * mu, -(long long)N) / 4);
                }
                total += term;
                if (ak >= opt.K - 7) edge_mags.push_back(abs(term));
            }
        Real bound(0);
        bool smooth = !data || bool(data->at_real);
        if (opt.em_tail && smooth) {
            auto f_of = [&](int side) {
                return std::function<Cx(const Real &)>([&, side](const Real &x) {
                    Real xi = side > 0 ? x : -x;
                    if (data) {
                        std::vector<Cx> blk(n * n);
                        data->at_real(xi, blk.data());
                        ModeMatrices mm = mode_matrices(model, xi, mu, N, J);
                        return contract_part(blk.data(), mm, part, opt.T_cut);
                    }
                    if (part == RPart::QN) {
                        ModeMatrices mm = mode_matrices(model, xi, mu, N, 0);
                        return Cx(opt.T_cut * mm.vol_qn);
                    }
                    return Cx(-pow_int(model.pprime(xi) + mu * mu, -(long long)N) / 4);
                });
            };
            Real tail_tol = (abs(total) + Real("1e-40")) * Real("1e-28");
            OneSideTail tp = em_tail(f_of(+1), Real(double(opt.K + 1)), tail_tol);
            OneSideTail tm = em_tail(f_of(-1), Real(double(opt.K + 1)), tail_tol);
            total += tp.value + tm.value;
            bound = tp.bound + tm.bound;
        } else {
            bound = 2 * edge_bound(edge_mags, opt.K);
        }
        out.value[gi] = total;
        out.error_bound[gi] = bound;
    };

    int nthreads = std::max(1, opt.threads);
    if (nthreads == 1) {
        for (size_t gi = 0; gi < mu_grid.size(); ++gi) run_one(gi);
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&]() {
                for (;;) {
                    size_t gi = next.fetch_add(1);
                    if (gi >= mu_grid.size()) return;
                    run_one(gi);
                }
            });
        for (auto &th : pool) th.join();
    }
    return out;
}

std::string samples_hash(const TraceSamples &s) {
    std::ostringstream os;
    for (size_t i = 0; i < s.mu.size(); ++i)
        os << fmt_real(s.mu[i], 30) << "," << fmt_real(s.value[i].re, 30) << ","
           << fmt_real(s.value[i].im, 30) << "," << fmt_real(s.error_bound[i], 20) << ";";
    std::string data = os.str();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream hex;
    hex << std::hex << h;
    return hex.str();
}

// ---- boundary operators --------------------------------------------------------

ScalarBandOp::ScalarBandOp(int K_, int B_) : K(K_), B(B_) {
    a_.assign(size_t(2 * B + 1) * (2 * K + 1), Cx(0));
}
Cx &ScalarBandOp::at(int b, int kcol) { return a_[size_t(b + B) * (2 * K + 1) + (kcol + K)]; }
const Cx &ScalarBandOp::at(int b, int kcol) const {
    return const_cast<ScalarBandOp *>(this)->at(b, kcol);
}

ScalarBandOp band_mul(const ScalarBandOp &A, const ScalarBandOp &B) {
    ScalarBandOp C(std::min(A.K, B.K), A.B + B.B);
    for (int b = -C.B; b <= C.B; ++b)
        for (int kc = -C.K; kc <= C.K; ++kc) {
            // C^{(kc+b, kc)} = sum_{b2} A^{(kc+b, kc+b-b1... )}: row kc+b via A-offset b1
            Cx acc(0);
            for (int b2 = -B.B; b2 <= B.B; ++b2) {
                int b1 = b - b2;
                if (b1 < -A.B || b1 > A.B) continue;
                int mid = kc + b2;
                if (mid < -A.K || mid > A.K) continue;
                acc += A.at(b1, mid) * B.at(b2, kc);
            }
            C.at(b, kc) = acc;
        }
    return C;
}

Cx ScalarBandOp::diag(long long k) const {
    if (k < -K || k > K) return Cx(0);
    return at(0, int(k));
}

ScalarBandOp assemble_scalar(const ScalarSymbol &sym, int K) {
    ScalarBandOp op(K, sym.bandwidth);
    for (int b = -sym.bandwidth; b <= sym.bandwidth; ++b)
        for (int kc = -K; kc <= K; ++kc) op.at(b, kc) = sym.coef(b, Real(kc));
    return op;
}

TraceSamples boundary_trace(const ScalarBandOp &D, const CylinderModel &model, int N,
                            const std::vector<Real> &mu_grid, const TraceOptions &opt,
                            const std::function<Cx(const Real &xi)> &sym_diag) {
    TraceSamples out;
    out.mu = mu_grid;
    out.value.assign(mu_grid.size(), Cx(0));
    out.error_bound.assign(mu_grid.size(), Real(0));
    int K = std::min(opt.K, D.K);
    for (size_t gi = 0; gi < mu_grid.size(); ++gi) {
        const Real &mu = mu_grid[gi];
        Cx total(0);
        std::vector<Real> edge;
        for (long long ak = 0; ak <= K; ++ak)
            for (int sgn : {+1, -1}) {
                if (ak == 0 && sgn < 0) continue;
                long long k = sgn * ak;
                Cx term = D.diag(k) *
                          Cx(pow_int(model.pprime(Real(double(k))) + mu * mu, -(long long)N));
                total += term;
                if (ak >= K - 7) edge.push_back(abs(term));
            }
        Real bound(0);
        if (opt.em_tail && sym_diag) {
            auto f_of = [&](int side) {
                return std::function<Cx(const Real &)>([&, side](const Real &x) {
                    Real xi = side > 0 ? x : -x;
                    return sym_diag(xi) *
                           Cx(pow_int(model.pprime(xi) + mu * mu, -(long long)N));
                });
            };
            Real tail_tol = (abs(total) + Real("1e-40")) * Real("1e-28");
            OneSideTail tp = em_tail(f_of(+1), Real(double(K + 1)), tail_tol);
            OneSideTail tm = em_tail(f_of(-1), Real(double(K + 1)), tail_tol);
            total += tp.value + tm.value;
            bound = tp.bound + tm.bound;
        } else {
            bound = 2 * edge_bound(edge, K);
        }
        out.value[gi] = total;
        out.error_bound[gi] = bound;
    }
    return out;
}

} // namespace bdm
