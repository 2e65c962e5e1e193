#include "bdm/elliptic_model.hpp"
#include <map>
#include <stdexcept>

namespace bdm {

Poly EllipticModel::char_poly() const {
    Poly p(3);
    p[0] = c + CoefExpr::constant(mass2) + CoefExpr::atom(Atom::Mu).pow(2);
    p[1] = b;
    p[2] = CoefExpr::constant(a);
    poly_trim(p);
    return p;
}

RatLambdaRules EllipticModel::lambda_rules() const {
    RatLambdaRules r;
    CoefExpr two_a = CoefExpr::constant(2 * a);
    CoefExpr i = CoefExpr::imaginary_unit();
    CoefExpr kp = CoefExpr::atom(Atom::KappaPlus), km = CoefExpr::atom(Atom::KappaMinus);
    r.coef.dsigma = CoefExpr();
    r.coef.dkappa_plus = -(two_a * kp - i * b).recip();
    r.coef.dkappa_minus = -(two_a * km + i * b).recip();
    r.coef.dmu = -(CoefExpr::integer(2) * CoefExpr::atom(Atom::Mu)).recip();
    r.dbase_sigma = CoefExpr();
    r.dbase_kappa_plus = r.coef.dkappa_plus;
    r.dbase_kappa_minus = r.coef.dkappa_minus;
    return r;
}

bool EllipticModel::mu_in_sector(const Cx &mu) const {
    if (mu.re == 0 && mu.im == 0) return false;
    Real arg = atan2(mu.im, mu.re);
    Real lim = real_pi() / 4 + Real(sector_eps) / 2;
    return abs(arg) <= lim;
}

std::pair<Cx, Cx> KappaPair::eval(const Cx &sigma, const Cx &mu) const {
    const EllipticModel &m = *model;
    Binding pre;
    pre.sigma = sigma;
    pre.mu = mu;
    // kappa slots unused by a, b, c
    Cx av = Cx(to_real(m.a));
    Cx bv = m.b.eval(pre);
    Cx cv = m.c.eval(pre) + Cx(to_real(m.mass2)) + mu * mu;
    // roots of a rho^2 + b rho + cv = 0
    Cx disc = sqrt(bv * bv - Cx(4) * av * cv); // principal branch
    Cx r1 = (-bv + disc) / (Cx(2) * av);
    Cx r2 = (-bv - disc) / (Cx(2) * av);
    if (r1.im < r2.im) std::swap(r1, r2); // r1 upper half-plane
    if (r1.im <= 0 || r2.im >= 0)
        throw std::domain_error("kappa_roots: root on or across the real axis");
    // rho1 = i kappa+, rho2 = -i kappa-
    Cx kp = -cx_i() * r1;
    Cx km = cx_i() * r2;
    return {kp, km};
}

Binding KappaPair::binding(const Cx &sigma, const Cx &mu) const {
    auto [kp, km] = eval(sigma, mu);
    Binding b;
    b.sigma = sigma;
    b.mu = mu;
    b.kappa_plus = kp;
    b.kappa_minus = km;
    return b;
}

KappaPair kappa_roots(const EllipticModel &model) {
    return KappaPair{&model, model.sector_eps};
}

Real smoothing_eta(const Real &t) {
    auto f = [](const Real &s) { return s > 0 ? exp(-1 / s) : Real(0); };
    Real f1 = f(1 - t), f2 = f(t - Real(0.5));
    return f1 / (f1 + f2);
}

Real smoothed_norm(const Real &t) {
    Real a = abs(t);
    if (a >= 1) return a;
    Real e = smoothing_eta(a);
    return e + (1 - e) * a;
}

namespace {

// exact bivariate polynomials in (p, w = mu^2) for the Lemma-A.1 solve
using BiPoly = std::map<std::pair<int, int>, Rational>; // (deg_p, deg_w) -> coef

void bp_add(BiPoly &a, const BiPoly &b, const Rational &scale) {
    for (const auto &[k, v] : b) {
        Rational &slot = a[k];
        slot += v * scale;
        if (slot.numerator() == 0) a.erase(k);
    }
}

BiPoly bp_mul(const BiPoly &a, const BiPoly &b) {
    BiPoly out;
    for (const auto &[ka, va] : a)
        for (const auto &[kb, vb] : b) {
            auto key = std::make_pair(ka.first + kb.first, ka.second + kb.second);
            Rational &slot = out[key];
            slot += va * vb;
            if (slot.numerator() == 0) out.erase(key);
        }
    return out;
}

BiPoly bp_pow(const BiPoly &a, int e) {
    BiPoly out{{{0, 0}, Rational(1)}};
    for (int t = 0; t < e; ++t) out = bp_mul(out, a);
    return out;
}

} // namespace

GeometricExpansion geometric_expansion(int m, int L) {
    if (m < 1 || L < 1) throw std::invalid_argument("geometric_expansion: need m,L >= 1");
    GeometricExpansion g;
    g.m = m;
    g.L = L;
    g.c.resize(L);
    for (int j = 0; j < L; ++j) {
        // (1-b)^{-m} = sum binom(m-1+j, j) b^j with b = -p/mu^2
        Rational sign = (j % 2 == 0) ? Rational(1) : Rational(-1);
        g.c[j] = binom_rational(m - 1 + j, j) * sign;
    }
    // Solve for e_k in
    //   mu^{2m+2L} - sum_{j<L} c_j mu^{2L-2j} p^j (p+w)^m = sum_k e_k p^{L+k}(p+w)^{m-k},
    // as an exact polynomial identity in (p, w).
    BiPoly lhs{{{0, m + L}, Rational(1)}}; // w^{m+L} = mu^{2m+2L}
    BiPoly pw{{{1, 0}, Rational(1)}, {{0, 1}, Rational(1)}};
    for (int j = 0; j < L; ++j) {
        BiPoly term = bp_pow(pw, m);
        term = bp_mul(term, BiPoly{{{j, L - j}, Rational(1)}}); // p^j w^{L-j}
        bp_add(lhs, term, -g.c[j]);
    }
    // basis_k = p^{L+k} (p+w)^{m-k}, k = 0..m: triangular in the w-degree.
    // Eliminate top-down: basis_k is the only one containing p^{L+k} w^{m-k}.
    g.e.assign(m + 1, Rational(0));
    BiPoly rem = lhs;
    for (int k = 0; k <= m; ++k) {
        auto key = std::make_pair(L + k, m - k);
        auto it = rem.find(key);
        Rational coef = (it == rem.end()) ? Rational(0) : it->second;
        g.e[k] = coef;
        if (coef.numerator() != 0) {
            BiPoly basis = bp_mul(BiPoly{{{L + k, 0}, Rational(1)}}, bp_pow(pw, m - k));
            bp_add(rem, basis, -coef);
        }
    }
    if (!rem.empty()) throw std::runtime_error("geometric_expansion: identity solve failed");
    return g;
}

Cx GeometricExpansion::remainder(const Cx &p, const Cx &mu) const {
    Cx w = mu * mu;
    Cx acc(0);
    for (int k = 0; k <= m; ++k) {
        if (e[k].numerator() == 0) continue;
        acc += Cx(to_real(e[k])) * pow_int(p, L + k) * pow_int(p + w, -(long long)k);
    }
    return acc;
}

Real GeometricExpansion::residual(const Cx &p, const Cx &mu) const {
    Cx w = mu * mu;
    Cx lhs = pow_int(p + w, -(long long)m);
    Cx rhs(0);
    for (int j = 0; j < L; ++j)
        rhs += Cx(to_real(c[j])) * pow_int(w, -(long long)(m + j)) * pow_int(p, j);
    rhs += pow_int(w, -(long long)(m + L)) * remainder(p, mu);
    return abs(lhs - rhs) / (abs(lhs) + Real("1e-45"));
}

} // namespace bdm
