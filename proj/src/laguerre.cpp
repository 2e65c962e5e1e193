#include "bdm/laguerre.hpp"
#include "bdm/linalg.hpp"
#include <stdexcept>

namespace bdm {

namespace {

PoleKind mirror(PoleKind k) {
    switch (k) {
    case PoleKind::SigmaPlus: return PoleKind::SigmaMinus;
    case PoleKind::SigmaMinus: return PoleKind::SigmaPlus;
    case PoleKind::KappaPlus: return PoleKind::KappaMinus;
    default: return PoleKind::KappaPlus;
    }
}

// general cross-pair rule with explicit bases:
//   integral (b_up + i xi)^{-j} (b_lo - i xi)^{-k} dbar-xi
//     = binom(j+k-2, j-1) (b_up + b_lo)^{1-j-k}
CoefExpr cross_pair_expr(const CoefExpr &b_up, int j, const CoefExpr &b_lo, int k) {
    return CoefExpr::constant(binom_rational(j + k - 2, j - 1)) * (b_up + b_lo).pow(1 - j - k);
}

// pair a single explicit-base fraction against the opposite-side fractions of
// a canonical RatFun
CoefExpr pair_with_fraction(const CoefExpr &base, bool base_upper, int order, const RatFun &other) {
    CoefExpr acc;
    for (const auto &[key, c] : other.fractions()) {
        if (is_upper(key.first) == base_upper) continue;
        CoefExpr piece = base_upper
                             ? cross_pair_expr(base, order, atom_base(key.first), key.second)
                             : cross_pair_expr(atom_base(key.first), key.second, base, order);
        acc = acc + c * piece;
    }
    return acc;
}

} // namespace

RatFun laguerre_ratio(int m, PoleKind up) {
    CoefExpr base = atom_base(up);
    CoefExpr two_base = CoefExpr::integer(2) * base;
    RatFun out;
    if (m >= 0) {
        // (F_mirror)^m (F_up)^{-m-1},  F_mirror = 2 base - F_up
        for (int t = 0; t <= m; ++t) {
            CoefExpr c = CoefExpr::constant(binom_rational(m, t) * (t % 2 ? Rational(-1) : Rational(1))) *
                         two_base.pow(m - t);
            out.add_fraction(up, m + 1 - t, c);
        }
    } else {
        int M = -m; // (F_mirror)^{-M} (F_up)^{M-1},  F_up = 2 base - F_mirror
        PoleKind down = mirror(up);
        for (int t = 0; t <= M - 1; ++t) {
            CoefExpr c = CoefExpr::constant(binom_rational(M - 1, t) * (t % 2 ? Rational(-1) : Rational(1))) *
                         two_base.pow(M - 1 - t);
            out.add_fraction(down, M - t, c);
        }
    }
    return out;
}

RatFun laguerre_fn(int k) {
    if (k < 0) throw std::invalid_argument("laguerre_fn: k >= 0 required");
    return laguerre_ratio(k, PoleKind::SigmaPlus);
}

RatFun laguerre_fn_conj(int k) {
    if (k < 0) throw std::invalid_argument("laguerre_fn_conj: k >= 0 required");
    return laguerre_ratio(k, PoleKind::SigmaMinus);
}

CoefExpr inner_product(int j, int k) {
    CoefExpr two_sigma = CoefExpr::integer(2) * CoefExpr::atom(Atom::Sigma);
    return two_sigma * integrate_product(laguerre_fn(j), laguerre_fn_conj(k));
}

LaguerreDeriv laguerre_deriv(int k, bool normal_direction, const CoefExpr &dsigma) {
    CoefExpr inv2s = (CoefExpr::integer(2) * CoefExpr::atom(Atom::Sigma)).recip();
    LaguerreDeriv d;
    if (normal_direction) {
        CoefExpr mi = -CoefExpr::imaginary_unit();
        d.c_km1 = mi * CoefExpr::integer(k) * inv2s;
        d.c_k = mi * CoefExpr::integer(2 * k + 1) * inv2s;
        d.c_kp1 = mi * CoefExpr::integer(k + 1) * inv2s;
    } else {
        d.c_km1 = CoefExpr::integer(k) * inv2s * dsigma;
        d.c_k = -(inv2s * dsigma);
        d.c_kp1 = -(CoefExpr::integer(k + 1) * inv2s * dsigma);
    }
    if (k == 0) d.c_km1 = CoefExpr();
    return d;
}

Cx ScaledExpr::eval(const Binding &b) const {
    Cx v = core.eval(b);
    if (half_powers != 0) {
        Cx two_sigma = Cx(2) * b.sigma;
        Cx root = sqrt(two_sigma);
        v *= pow_int(root, half_powers);
    }
    return v;
}

CoefExpr compose_b1_value(int m, int j, bool plus) {
    if (j < 1) throw std::invalid_argument("compose_b1_value: j >= 1");
    if (plus) {
        RatFun ratio = laguerre_ratio(m, PoleKind::SigmaMinus); // (s+ix)^m (s-ix)^{-m-1}
        RatFun kap = RatFun::fraction(PoleKind::KappaPlus, j, CoefExpr::integer(1));
        return integrate_product(ratio, kap);
    }
    RatFun ratio = laguerre_ratio(m, PoleKind::SigmaPlus); // (s-ix)^m (s+ix)^{-m-1}
    RatFun kap = RatFun::fraction(PoleKind::KappaMinus, j, CoefExpr::integer(1));
    return integrate_product(ratio, kap);
}

namespace {

SpanFit extract_on_basis(const CoefExpr &value,
                         const std::vector<std::function<Cx(const Binding &)>> &basis,
                         const std::vector<int> &indices, Rng &rng) {
    int n = int(basis.size());
    int rows = 2 * n + 6;
    CMatrix A(rows, n);
    CVector rhs(rows);
    std::vector<Binding> binds;
    for (int r = 0; r < rows; ++r) {
        Binding b = random_binding(rng);
        binds.push_back(b);
        for (int c = 0; c < n; ++c) A(r, c) = basis[c](b);
        rhs[r] = value.eval(b);
    }
    CVector x = lsq_solve(A, rhs);
    SpanFit fit;
    fit.indices = indices;
    fit.coef.assign(x.begin(), x.end());
    // residual at fresh bindings
    Real res(0);
    for (int t = 0; t < 6; ++t) {
        Binding b = random_binding(rng);
        Cx acc(0);
        for (int c = 0; c < n; ++c) acc += x[c] * basis[c](b);
        Cx v = value.eval(b);
        res = std::max(res, abs(acc - v) / (abs(v) + 1));
    }
    fit.residual = res;
    return fit;
}

} // namespace

SpanFit compose_b1_extract(int m, int j, bool plus, Rng &rng) {
    CoefExpr value = compose_b1_value(m, j, plus);
    Atom kat = plus ? Atom::KappaPlus : Atom::KappaMinus;
    std::vector<std::function<Cx(const Binding &)>> basis;
    std::vector<int> indices;
    for (int mp = std::max(0, m - j + 1); mp <= m + j - 1; ++mp) {
        indices.push_back(mp);
        basis.push_back([mp, j, kat](const Binding &b) {
            Cx kap = b.get(kat);
            Cx s = b.sigma;
            return pow_int(kap, 1 - j) * pow_int(s - kap, mp) * pow_int(s + kap, -(long long)mp - 1);
        });
    }
    return extract_on_basis(value, basis, indices, rng);
}

CoefExpr compose_b2_value(int m, int j, int jprime) {
    if (j < 1 || jprime < 1) throw std::invalid_argument("compose_b2_value: j, j' >= 1");
    RatFun ratio = laguerre_ratio(m, PoleKind::SigmaPlus);
    RatFun left = ratio * RatFun::fraction(PoleKind::KappaPlus, j, CoefExpr::integer(1));
    return integrate_product(left, RatFun::fraction(PoleKind::KappaMinus, jprime, CoefExpr::integer(1)));
}

SpanFit compose_b2_extract(int m, int j, int jprime, Rng &rng) {
    CoefExpr value = compose_b2_value(m, j, jprime);
    bool plus_side = m < 0; // mirrored case carries kappa+
    Atom kat = plus_side ? Atom::KappaPlus : Atom::KappaMinus;
    int jpp_range = plus_side ? j : jprime;
    int mm = std::abs(m);
    std::vector<std::function<Cx(const Binding &)>> basis;
    std::vector<int> indices;
    for (int jpp = 0; jpp < jpp_range; ++jpp)
        for (int mp = std::max(0, mm - jpp); mp <= mm + jpp; ++mp) {
            indices.push_back(jpp * 1000 + mp);
            int tot = -j - jprime + 1 + jpp;
            basis.push_back([mp, jpp, tot, kat](const Binding &b) {
                Cx kap = b.get(kat);
                Cx s = b.sigma;
                Cx ksum = b.kappa_plus + b.kappa_minus;
                return pow_int(kap, -(long long)jpp) * pow_int(s - kap, mp) *
                       pow_int(s + kap, -(long long)mp - 1) * pow_int(ksum, tot);
            });
        }
    return extract_on_basis(value, basis, indices, rng);
}

CoefExpr compose_b4_value(int l, int m, int j, bool plus) {
    if (j < 1) throw std::invalid_argument("compose_b4_value: j >= 1");
    RatFun a = laguerre_fn(l);
    RatFun kap = plus ? RatFun::fraction(PoleKind::KappaPlus, j, CoefExpr::integer(1))
                      : RatFun::fraction(PoleKind::KappaMinus, j, CoefExpr::integer(1));
    RatFun left = a * kap;
    return integrate_product(left, laguerre_fn_conj(m));
}

Real plus_removal_check(int k, int l, const RatFun &qtilde, Rng &rng, int trials) {
    RatFun fl = laguerre_fn(l);
    RatFun fkc = laguerre_fn_conj(k);
    CoefExpr two_sigma = CoefExpr::integer(2) * CoefExpr::atom(Atom::Sigma);

    RatFun ql = qtilde * fl;
    auto [ql_up, ql_lo] = h_split(ql);
    CoefExpr i1 = two_sigma * integrate_product(fkc, ql_up);
    CoefExpr i2 = two_sigma * integrate_product(fkc, ql);
    RatFun kq = fkc * qtilde;
    auto [kq_up, kq_lo] = h_split(kq);
    CoefExpr i3 = two_sigma * integrate_product(kq_lo, fl);

    Real worst(0);
    for (int t = 0; t < trials; ++t) {
        Binding b = random_binding(rng);
        Cx v1 = i1.eval(b), v2 = i2.eval(b), v3 = i3.eval(b);
        Real scale = abs(v1) + abs(v2) + abs(v3) + 1;
        worst = std::max(worst, std::max(abs(v1 - v2), abs(v2 - v3)) / scale);
    }
    return worst;
}

void SgoSymbol::add(int j, int jp, const CoefExpr &c) {
    if (c.is_zero_const()) return;
    auto key = std::make_pair(j, jp);
    auto it = terms.find(key);
    if (it == terms.end())
        terms.emplace(key, c);
    else
        it->second = it->second + c;
}

SgoSymbol SgoSymbol::scaled(const CoefExpr &c) const {
    SgoSymbol out;
    out.pair = pair;
    for (const auto &[k, v] : terms) out.terms.emplace(k, v * c);
    return out;
}

SgoSymbol operator+(const SgoSymbol &a, const SgoSymbol &b) {
    if (a.pair != b.pair) throw std::invalid_argument("SgoSymbol: mixed pole pairs");
    SgoSymbol out = a;
    for (const auto &[k, v] : b.terms) out.add(k.first, k.second, v);
    return out;
}

CoefExpr atom_for_xi_side(SgoPolePair p) {
    return p == SgoPolePair::MinusMinus ? CoefExpr::atom(Atom::KappaMinus)
                                        : CoefExpr::atom(Atom::KappaPlus);
}
CoefExpr atom_for_eta_side(SgoPolePair p) {
    return p == SgoPolePair::PlusPlus ? CoefExpr::atom(Atom::KappaPlus)
                                      : CoefExpr::atom(Atom::KappaMinus);
}

Cx SgoSymbol::eval(const Cx &xi, const Cx &eta, const Binding &bind) const {
    Cx kx = atom_for_xi_side(pair).eval(bind);
    Cx ke = atom_for_eta_side(pair).eval(bind);
    Cx i = cx_i();
    Cx acc(0);
    for (const auto &[k, c] : terms)
        acc += c.eval(bind) * pow_int(kx + i * xi, -(long long)k.first) *
               pow_int(ke - i * eta, -(long long)k.second);
    return acc;
}

int SgoSymbol::max_order() const {
    int m = 0;
    for (const auto &[k, c] : terms) m = std::max(m, std::max(k.first, k.second));
    return m;
}

CoefExpr tr_n(const SgoSymbol &g) {
    CoefExpr bx = atom_for_xi_side(g.pair), be = atom_for_eta_side(g.pair);
    CoefExpr acc;
    for (const auto &[k, c] : g.terms) acc = acc + c * cross_pair_expr(bx, k.first, be, k.second);
    return acc;
}

CoefExpr LaguerreMatrix::diagonal_sum() const {
    CoefExpr acc;
    for (int j = 0; j <= J_max; ++j) acc = acc + d[j][j];
    return acc;
}

Real LaguerreMatrix::decay_rate(const Binding &b) const {
    // least-squares slope of log|d_jk| against log(1+j+k) over nonzero entries
    Real sx(0), sy(0), sxx(0), sxy(0);
    int n = 0;
    for (int j = 0; j <= J_max; ++j)
        for (int k = 0; k <= J_max; ++k) {
            Real a = abs(d[j][k].eval(b));
            if (a <= Real("1e-40")) continue;
            Real x = log(Real(1 + j + k)), y = log(a);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++n;
        }
    if (n < 2) return Real(0);
    return (Real(n) * sxy - sx * sy) / (Real(n) * sxx - sx * sx);
}

LaguerreMatrix sgo_to_laguerre(const SgoSymbol &g, int J_max) {
    LaguerreMatrix m;
    m.J_max = J_max;
    m.d.assign(J_max + 1, std::vector<CoefExpr>(J_max + 1));
    CoefExpr bx = atom_for_xi_side(g.pair), be = atom_for_eta_side(g.pair);
    CoefExpr two_sigma = CoefExpr::integer(2) * CoefExpr::atom(Atom::Sigma);
    // pairing caches: A[j][jp], B[k][lp]
    int JO = g.max_order();
    std::vector<std::vector<CoefExpr>> A(J_max + 1, std::vector<CoefExpr>(JO + 1)),
        B(J_max + 1, std::vector<CoefExpr>(JO + 1));
    for (int j = 0; j <= J_max; ++j) {
        RatFun cj = laguerre_fn_conj(j);
        RatFun fj = laguerre_fn(j);
        for (int o = 1; o <= JO; ++o) {
            A[j][o] = pair_with_fraction(bx, true, o, cj);
            B[j][o] = pair_with_fraction(be, false, o, fj);
        }
    }
    for (const auto &[key, c] : g.terms) {
        auto [jp, lp] = key;
        for (int j = 0; j <= J_max; ++j)
            for (int k = 0; k <= J_max; ++k)
                m.d[j][k] = m.d[j][k] + c * two_sigma * A[j][jp] * B[k][lp];
    }
    return m;
}

Cx laguerre_series_eval(const LaguerreMatrix &m, const Cx &xi, const Cx &eta, const Binding &b) {
    Cx two_sigma = Cx(2) * b.sigma;
    Cx acc(0);
    for (int j = 0; j <= m.J_max; ++j) {
        Cx fj = laguerre_fn(j).eval(xi, b);
        for (int k = 0; k <= m.J_max; ++k) {
            Cx fkc = laguerre_fn_conj(k).eval(eta, b);
            acc += m.d[j][k].eval(b) * two_sigma * fj * fkc;
        }
    }
    return acc;
}

CoefExpr trn_qn_laguerre(const EllipticModel &model, int N, int l, int m) {
    // (p + mass2 + mu^2)^{-N} = a^{-N} Kp^{-N} Km^{-N} via the root atoms
    Rational aN(1);
    for (int t = 0; t < N; ++t) aN *= model.a;
    RatFun q = partial_fractions(Poly{CoefExpr::constant(Rational(1) / aN)},
                                 {{PoleKind::KappaPlus, N}, {PoleKind::KappaMinus, N}});
    RatFun left = laguerre_fn(l) * q;
    CoefExpr two_sigma = CoefExpr::integer(2) * CoefExpr::atom(Atom::Sigma);
    return two_sigma * integrate_product(left, laguerre_fn_conj(m));
}

std::vector<ScaledExpr> poisson_to_laguerre(const RatFun &poisson_symbol, int J_max) {
    std::vector<ScaledExpr> out;
    out.reserve(J_max + 1);
    for (int j = 0; j <= J_max; ++j) {
        ScaledExpr s;
        s.core = integrate_product(poisson_symbol, laguerre_fn_conj(j));
        s.half_powers = 1;
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace bdm
