#include "bdm/resolvent_symbols.hpp"
#include <stdexcept>

namespace bdm {

Cx ResolventSymbolN::exact_value(const Cx &p_core, const Cx &mu, const Rational &mass2) const {
    return pow_int(p_core + Cx(to_real(mass2)) + mu * mu, -(long long)N);
}

Cx ResolventSymbolN::series_value(const Cx &p_core, const Cx &mu) const {
    Cx acc(0);
    Cx base = p_core + mu * mu;
    for (const auto &t : terms) acc += Cx(to_real(t.coef)) * pow_int(base, -(long long)t.power);
    return acc;
}

ResolventSymbolN resolvent_symbol(const EllipticModel &model, int N, int J_max) {
    if (J_max < 0) throw std::invalid_argument("resolvent_symbol: J_max >= 0");
    ResolventSymbolN q;
    q.N = N;
    // (p + m2 + mu^2)^{-N} = sum_{J'} binom(N-1+J', J') (-m2)^{J'} (p+mu^2)^{-N-J'}
    for (int Jp = 0; 2 * Jp <= J_max; ++Jp) {
        Rational c = binom_rational(N - 1 + Jp, Jp);
        Rational mpow(1);
        for (int t = 0; t < Jp; ++t) mpow *= -model.mass2;
        c *= mpow;
        if (c.numerator() == 0 && Jp > 0) break; // mass2 == 0: single term
        q.terms.push_back({2 * Jp, N + Jp, c});
    }
    return q;
}

RatFun boundary_term_ratfun(const EllipticModel &model, int power, const Rational &coef) {
    // coef (p+mu^2)^{-power} = coef a^{-power} Kp^{-power} Km^{-power}
    // with the mass shift absorbed into the roots
    Rational apow(1);
    for (int t = 0; t < power; ++t) apow *= model.a;
    return partial_fractions(Poly{CoefExpr::constant(coef / apow)},
                             {{PoleKind::KappaPlus, power}, {PoleKind::KappaMinus, power}});
}

std::pair<RatFun, RatFun> boundary_decompose(const EllipticModel &model,
                                             const ResolventSymbolN &q) {
    RatFun total;
    for (const auto &t : q.terms) total = total + boundary_term_ratfun(model, t.power, t.coef);
    return h_split(total);
}

namespace {

// per-order map of a proper one-sided RatFun, used to tensor symbols
std::map<int, CoefExpr> orders_of(const RatFun &f, PoleKind expect) {
    std::map<int, CoefExpr> out;
    for (const auto &[k, c] : f.fractions()) {
        if (k.first != expect)
            throw std::logic_error("orders_of: unexpected pole kind in one-sided symbol");
        out[k.second] = c;
    }
    return out;
}

} // namespace

SgoSymbol dirichlet_sgo_symbol(const EllipticModel &model, int N) {
    // N = 1: G = -K gamma0 Q_+ at symbol level.
    //   Poisson symbol: k(xi_n) = (kappa+ + i xi_n)^{-1}  (boundary value 1)
    //   trace symbol:   t(eta_n) = h^- q(eta_n)
    RatFun q1 = boundary_term_ratfun(model, 1, Rational(1));
    auto [qp, qm] = h_split(q1);
    auto tmap = orders_of(qm, PoleKind::KappaMinus);
    SgoSymbol g;
    g.pair = SgoPolePair::PlusMinus;
    for (const auto &[jp, c] : tmap) g.add(1, jp, -c);
    for (int t = 1; t < N; ++t) {
        g = sgo_lambda_derivative(g, model);
        g = g.scaled(CoefExpr::constant(Rational(1, t))); // divide by t: builds 1/(N-1)!
    }
    return g;
}

SgoSymbol leftover_sgo_symbol(const EllipticModel &model, int N, bool plus) {
    if (!model.symmetric())
        throw std::invalid_argument(
            "leftover_sgo_symbol: closed form requires b = 0 (asymmetric case not implemented)");
    // N = 1, kernel K_Q(+-(x+y)): symbol a^{-1}(k+ + k-)^{-1} on pole pair
    // (k+,k+) for G^+, (k-,k-) for G^-
    SgoSymbol g;
    g.pair = plus ? SgoPolePair::PlusPlus : SgoPolePair::MinusMinus;
    CoefExpr ks = CoefExpr::atom(Atom::KappaPlus) + CoefExpr::atom(Atom::KappaMinus);
    CoefExpr a_inv = CoefExpr::constant(Rational(1) / model.a);
    g.add(1, 1, a_inv * ks.recip());
    for (int t = 1; t < N; ++t) {
        g = sgo_lambda_derivative(g, model);
        g = g.scaled(CoefExpr::constant(Rational(1, t)));
    }
    return g;
}

SgoSymbol sgo_lambda_derivative(const SgoSymbol &g, const EllipticModel &model) {
    RatLambdaRules rules = model.lambda_rules();
    CoefExpr dkx, dke;
    switch (g.pair) {
    case SgoPolePair::PlusMinus:
        dkx = rules.dbase_kappa_plus;
        dke = rules.dbase_kappa_minus;
        break;
    case SgoPolePair::PlusPlus:
        dkx = rules.dbase_kappa_plus;
        dke = rules.dbase_kappa_plus;
        break;
    default:
        dkx = rules.dbase_kappa_minus;
        dke = rules.dbase_kappa_minus;
        break;
    }
    SgoSymbol out;
    out.pair = g.pair;
    for (const auto &[key, c] : g.terms) {
        auto [j, jp] = key;
        out.add(j, jp, c.lambda_derivative(rules.coef));
        out.add(j + 1, jp, CoefExpr::integer(-j) * c * dkx);
        out.add(j, jp + 1, CoefExpr::integer(-jp) * c * dke);
    }
    return out;
}

CoefExpr substitute_xi(const RatFun &f, const CoefExpr &xi_value) {
    if (!f.proper()) throw std::invalid_argument("substitute_xi: polynomial part present");
    CoefExpr i = CoefExpr::imaginary_unit();
    CoefExpr acc;
    for (const auto &[k, c] : f.fractions()) {
        CoefExpr lin = atom_base(k.first) +
                       (pole_sign(k.first) > 0 ? i * xi_value : -(i * xi_value));
        acc = acc + c * lin.pow(-(long long)k.second);
    }
    return acc;
}

CoefExpr alpha_expr(const EllipticModel &model, int N) {
    RatFun q1 = boundary_term_ratfun(model, 1, Rational(1));
    auto [qp, qm] = h_split(q1);
    CoefExpr sig = CoefExpr::atom(Atom::Sigma);
    CoefExpr i = CoefExpr::imaginary_unit();
    CoefExpr alpha = substitute_xi(qp, -(i * sig)) + substitute_xi(qm, i * sig);
    LambdaRules rules = model.lambda_rules().coef;
    for (int t = 1; t < N; ++t)
        alpha = alpha.lambda_derivative(rules) * CoefExpr::constant(Rational(1, t));
    return alpha;
}

} // namespace bdm
