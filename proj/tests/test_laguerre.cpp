#include <doctest.h>
#include "bdm/laguerre.hpp"
#include "bdm/quadrature.hpp"

using namespace bdm;

namespace {
Binding real_binding(double sigma, double kp, double km, double mu = 1.0) {
    Binding b;
    b.sigma = Cx(Real(sigma));
    b.kappa_plus = Cx(Real(kp));
    b.kappa_minus = Cx(Real(km));
    b.mu = Cx(Real(mu));
    return b;
}
} // namespace

TEST_CASE("laguerre_fn canonical form and pole side") {
    RatFun f0 = laguerre_fn(0);
    REQUIRE(f0.fractions().size() == 1);
    CHECK(f0.fractions().begin()->first == PoleKey{PoleKind::SigmaPlus, 1});
    // single upper pole: h_split leaves it unchanged
    auto [up, lo] = h_split(laguerre_fn(4));
    CHECK(lo.zero());
    CHECK(up.fractions().size() == laguerre_fn(4).fractions().size());
}

TEST_CASE("orthonormality via residues") {
    Rng rng(21);
    CHECK(approx_equal(inner_product(0, 0), CoefExpr::integer(1), Real("1e-30"), rng));
    CHECK(approx_equal(inner_product(0, 1), CoefExpr(), Real("1e-30"), rng));
    for (int j = 0; j <= 8; ++j)
        for (int k = 0; k <= 8; ++k) {
            CoefExpr v = inner_product(j, k);
            Binding b = real_binding(1.7, 2.0, 2.0);
            Cx val = v.eval(b);
            Real expect = (j == k) ? Real(1) : Real(0);
            CHECK(abs(val - Cx(expect)) < Real("1e-35"));
        }
}

TEST_CASE("differentiation rules against finite differences") {
    // normal direction: d/dxi of lag'_k at fixed sigma
    for (int k : {0, 1, 3, 7}) {
        RatFun fk = laguerre_fn(k);
        LaguerreDeriv d = laguerre_deriv(k, true);
        Binding b = real_binding(1.3, 1, 1);
        Real h("1e-12");
        Cx xi(Real(0.6));
        Cx fd = (fk.eval(xi + Cx(h), b) - fk.eval(xi - Cx(h), b)) / Cx(2 * h);
        Cx rhs(0);
        if (k > 0) rhs += d.c_km1.eval(b) * laguerre_fn(k - 1).eval(xi, b);
        rhs += d.c_k.eval(b) * fk.eval(xi, b);
        rhs += d.c_kp1.eval(b) * laguerre_fn(k + 1).eval(xi, b);
        CHECK(abs(fd - rhs) < Real("1e-8"));
    }
    // tangential: d/dsigma of lag'_k (dsigma factor = 1)
    for (int k : {0, 2, 5}) {
        RatFun fk = laguerre_fn(k);
        LaguerreDeriv d = laguerre_deriv(k, false, CoefExpr::integer(1));
        Real h("1e-12");
        Cx xi(Real(0.9));
        Binding b = real_binding(1.3, 1, 1);
        Binding bp = b, bm = b;
        bp.sigma = Cx(b.sigma.re + h);
        bm.sigma = Cx(b.sigma.re - h);
        Cx fd = (fk.eval(xi, bp) - fk.eval(xi, bm)) / Cx(2 * h);
        Cx rhs(0);
        if (k > 0) rhs += d.c_km1.eval(b) * laguerre_fn(k - 1).eval(xi, b);
        rhs += d.c_k.eval(b) * fk.eval(xi, b);
        rhs += d.c_kp1.eval(b) * laguerre_fn(k + 1).eval(xi, b);
        CHECK(abs(fd - rhs) < Real("1e-8"));
    }
}

TEST_CASE("differentiated orthonormality gives the antisymmetry sum rule") {
    // d/dxi_n <lag_j, lag_k> = 0, i.e. <d lag_j, lag_k> + <lag_j, d lag_k> = 0
    // holds trivially here because the inner product is xi-integrated; instead
    // check the sigma-derivative version: sum rule on the tangential triple.
    Rng rng(23);
    for (int j = 0; j <= 10; ++j)
        for (int k = std::max(0, j - 1); k <= std::min(10, j + 1); ++k) {
            // d/dsigma delta_jk = 0 = <d_s lag'_j *2s-normalized...> — verify by
            // finite differences on the full normalized inner product value 2σ I.
            CoefExpr ip = inner_product(j, k);
            Binding bp = real_binding(1.9, 1, 1), bm = bp;
            bp.sigma = Cx(bp.sigma.re + Real("1e-12"));
            bm.sigma = Cx(bm.sigma.re - Real("1e-12"));
            Cx fd = (ip.eval(bp) - ip.eval(bm)) / Cx(Real("2e-12"));
            CHECK(abs(fd) < Real("1e-6")); // constant in sigma
        }
}

TEST_CASE("lemma B.1 closed forms") {
    Rng rng(24);
    SUBCASE("j=1 reduces to the single m'=m term with unit constant") {
        for (int m : {0, 1, 2, 5}) {
            for (bool plus : {true, false}) {
                SpanFit fit = compose_b1_extract(m, 1, plus, rng);
                REQUIRE(fit.indices.size() == 1);
                CHECK(fit.indices[0] == m);
                CHECK(abs(fit.coef[0] - Cx(1)) < Real("1e-25"));
                CHECK(fit.residual < Real("1e-25"));
            }
        }
    }
    SUBCASE("span bound |m'-m| < j") {
        SpanFit fit = compose_b1_extract(3, 2, true, rng);
        // indices 2,3,4 allowed; fit residual tiny
        CHECK(fit.residual < Real("1e-22"));
        for (size_t t = 0; t < fit.indices.size(); ++t) CHECK(std::abs(fit.indices[t] - 3) < 2);
    }
    SUBCASE("value against direct quadrature") {
        CoefExpr v = compose_b1_value(2, 2, true);
        RatFun prod = laguerre_ratio(2, PoleKind::SigmaMinus) *
                      RatFun::fraction(PoleKind::KappaPlus, 2, CoefExpr::integer(1));
        Binding b = real_binding(1.1, 1.8, 1.5);
        Cx quad = integrate_line_quadrature(prod, b, Real("1e-22"));
        CHECK(abs(v.eval(b) - quad) < Real("1e-12"));
    }
    SUBCASE("growth O(m^j) for fixed j") {
        int j = 3;
        Real worst(0);
        for (int m = 1; m <= 50; ++m) {
            SpanFit fit = compose_b1_extract(m, j, true, rng);
            Real mx(0);
            for (const auto &c : fit.coef) mx = std::max(mx, abs(c));
            worst = std::max(worst, mx / pow_int(Real(m), j));
        }
        CHECK(worst < Real(50)); // bounded constant
    }
}

TEST_CASE("lemma B.2 closed forms") {
    Rng rng(25);
    SUBCASE("m=0, j=j'=1 value vs quadrature") {
        CoefExpr v = compose_b2_value(0, 1, 1);
        RatFun prod = laguerre_ratio(0, PoleKind::SigmaPlus) *
                      RatFun::fraction(PoleKind::KappaPlus, 1, CoefExpr::integer(1)) *
                      RatFun::fraction(PoleKind::KappaMinus, 1, CoefExpr::integer(1));
        Binding b = real_binding(1.2, 2.1, 1.6);
        Cx quad = integrate_line_quadrature(prod, b, Real("1e-22"));
        CHECK(abs(v.eval(b) - quad) < Real("1e-12"));
    }
    SUBCASE("structure matches the basis for m >= 0") {
        for (int m : {0, 1, 3})
            for (int j : {1, 2})
                for (int jp : {1, 2, 3}) {
                    SpanFit fit = compose_b2_extract(m, j, jp, rng);
                    CHECK(fit.residual < Real("1e-20"));
                }
    }
    SUBCASE("mirror symmetry under xi -> -xi: m <-> -m-1, kappa+ <-> kappa-, j <-> j'") {
        // substituting xi -> -xi in the defining integral maps the ratio index
        // m to -m-1 while swapping the kappa roles and (j, j')
        for (int m : {0, 1, 2})
            for (int j : {1, 2})
                for (int jp : {1, 2}) {
                    CoefExpr a = compose_b2_value(m, j, jp);
                    CoefExpr bexp = compose_b2_value(-m - 1, jp, j);
                    // swap kappa values in the binding
                    Binding b1 = real_binding(1.4, 2.2, 1.7);
                    Binding b2 = real_binding(1.4, 1.7, 2.2);
                    CHECK(abs(a.eval(b1) - bexp.eval(b2)) < Real("1e-30"));
                }
    }
}

TEST_CASE("lemma B.4 trichotomy") {
    Rng rng(26);
    Binding b = real_binding(1.25, 2.4, 1.9);
    for (int j = 1; j <= 5; ++j)
        for (int l = 0; l <= 10; ++l)
            for (int m = 0; m <= 10; ++m) {
                CoefExpr sp = compose_b4_value(l, m, j, true);
                CoefExpr sm = compose_b4_value(l, m, j, false);
                if (m < l) {
                    CHECK(abs(sp.eval(b)) < Real("1e-30"));
                } else if (m > l) {
                    CHECK(abs(sm.eval(b)) < Real("1e-30"));
                } else {
                    Cx expp = Cx(1) / (pow_int(b.sigma + b.kappa_plus, j) * Cx(2) * b.sigma);
                    Cx expm = Cx(1) / (pow_int(b.sigma + b.kappa_minus, j) * Cx(2) * b.sigma);
                    CHECK(abs(sp.eval(b) - expp) < Real("1e-30"));
                    CHECK(abs(sm.eval(b) - expm) < Real("1e-30"));
                }
            }
}

TEST_CASE("plus-removal rule (B.5)") {
    Rng rng(27);
    SUBCASE("q with a single upper pole") {
        RatFun q = RatFun::fraction(PoleKind::KappaPlus, 1, CoefExpr::integer(1));
        CHECK(plus_removal_check(0, 0, q, rng) < Real("1e-28"));
    }
    SUBCASE("random instances") {
        for (int t = 0; t < 5; ++t) {
            int j = rng.uniform_int(1, 3);
            PoleKind k = rng.uniform_int(0, 1) ? PoleKind::KappaPlus : PoleKind::KappaMinus;
            CoefExpr c = CoefExpr::constant(Rational(rng.uniform_int(1, 5), 3));
            RatFun q = RatFun::fraction(k, j, c);
            CHECK(plus_removal_check(rng.uniform_int(0, 3), rng.uniform_int(0, 3), q, rng) <
                  Real("1e-26"));
        }
    }
}

TEST_CASE("sgo Laguerre expansion and normal trace") {
    Rng rng(28);
    // rank-one g = lag-hat_1 (x) conj lag-hat_1: matrix with a single unit entry
    // realized through an SgoSymbol with sigma-type poles is not expressible;
    // instead check the Dirichlet-type symbol pipeline.
    SgoSymbol g;
    g.pair = SgoPolePair::PlusMinus;
    CoefExpr ks = CoefExpr::atom(Atom::KappaPlus) + CoefExpr::atom(Atom::KappaMinus);
    g.add(1, 1, -ks.recip());
    // tr_n g = -(kappa+ + kappa-)^{-2}
    CoefExpr tn = tr_n(g);
    CHECK(approx_equal(tn, -(ks.pow(2)).recip(), Real("1e-30"), rng));

    // Laguerre matrix: diagonal sum approaches tr_n g
    Binding b = real_binding(1.0, 1.5, 1.5);
    LaguerreMatrix M = sgo_to_laguerre(g, 40);
    Cx diag_sum = M.diagonal_sum().eval(b);
    Cx tn_v = tn.eval(b);
    CHECK(abs(diag_sum - tn_v) < Real("1e-10"));

    // round-trip at sample points
    for (int t = 0; t < 4; ++t) {
        Cx xi(Real(rng.uniform(-1.5, 1.5))), eta(Real(rng.uniform(-1.5, 1.5)));
        Cx direct = g.eval(xi, eta, b);
        Cx series = laguerre_series_eval(M, xi, eta, b);
        CHECK(abs(direct - series) < Real("1e-10"));
    }
}

TEST_CASE("B.9: diagonal rank-one composition values equal alpha-like forms") {
    EllipticModel model = EllipticModel::symmetric_default();
    Rng rng(29);
    // diagonal value is independent of l
    CoefExpr d0 = trn_qn_laguerre(model, 1, 0, 0);
    CoefExpr d3 = trn_qn_laguerre(model, 1, 3, 3);
    CHECK(approx_equal(d0, d3, Real("1e-28"), rng));
    // symmetric binding: equals 1/(kappa (kappa + sigma))
    Binding b = real_binding(1.2, 1.9, 1.9);
    Cx expect = Cx(1) / (b.kappa_plus * (b.kappa_plus + b.sigma));
    CHECK(abs(d0.eval(b) - expect) < Real("1e-35"));
    // off-diagonal decays one mu-order faster: check the (0,1) value scales
    // like mu^{-3} under the model binding at large mu
    KappaPair roots = kappa_roots(model);
    CoefExpr off = trn_qn_laguerre(model, 1, 0, 1);
    Real r1, r2;
    {
        Binding bb = roots.binding(Cx(Real(1.5)), Cx(Real(100)));
        r1 = abs(off.eval(bb));
        Binding bb2 = roots.binding(Cx(Real(1.5)), Cx(Real(1000)));
        r2 = abs(off.eval(bb2));
    }
    Real slope = log(r2 / r1) / log(Real(10));
    CHECK(abs(slope + 3) < Real(0.1));
}

TEST_CASE("poisson_to_laguerre geometric coefficients") {
    // K = (kappa+ + i xi)^{-1}: C_j = (2 sigma)^{1/2} (sigma-kappa)^j (sigma+kappa)^{-j-1}
    RatFun K = RatFun::fraction(PoleKind::KappaPlus, 1, CoefExpr::integer(1));
    auto C = poisson_to_laguerre(K, 12);
    Binding b = real_binding(1.5, 2.5, 2.5);
    Cx ratio = (b.sigma - b.kappa_plus) / (b.sigma + b.kappa_plus);
    for (int j = 0; j <= 12; ++j) {
        Cx expect = sqrt(Cx(2) * b.sigma) * pow_int(ratio, j) / (b.sigma + b.kappa_plus);
        CHECK(abs(C[j].eval(b) - expect) < Real("1e-35"));
    }
    // K = lag-hat_3: unit coefficient at j=3
    auto C2 = poisson_to_laguerre(laguerre_fn(3), 6);
    for (int j = 0; j <= 6; ++j) {
        Cx v = C2[j].eval(b);
        // lag_3 = (2sigma)^{1/2} lag'_3: pairing gives delta_{j3} (2sigma)^{-1/2} * tag
        Cx expect = (j == 3) ? Cx(1) / sqrt(Cx(2) * b.sigma) : Cx(0);
        CHECK(abs(v - expect * Cx(1)) < Real("1e-30"));
    }
}
