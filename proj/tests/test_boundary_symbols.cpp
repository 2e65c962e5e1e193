#include <doctest.h>
#include "bdm/boundary_symbol.hpp"
#include "bdm/expansion.hpp"

using namespace bdm;

TEST_CASE("integrable case: (1+xi^2)^{-1} on R has finite part 1/2") {
    ClassicalSymbol f = make_bessel_power(1, Real(-2), Real(1), 2);
    FinitePartResult fp = finite_part(f);
    CHECK(abs(fp.value - Real(0.5)) < Real("1e-22"));
    CHECK(abs(fp.log_coef) < Real("1e-25"));
}

TEST_CASE("integrable case in two variables") {
    // (1 + |xi|^2)^{-3/2} on R^2: plain integral = 1/(2 pi)
    ClassicalSymbol f = make_bessel_power(2, Real(-3), Real(1), 2);
    FinitePartResult fp = finite_part(f);
    Real expect = 1 / (2 * real_pi());
    CHECK(abs(fp.value - expect) < Real("1e-20") );
}

TEST_CASE("odd homogeneous term contributes nothing") {
    ClassicalSymbol f = make_homogeneous(1, Real(-1), [](const UnitVec &w) { return w[0]; });
    FinitePartResult fp = finite_part(f);
    CHECK(abs(fp.value) < Real("1e-30"));
    CHECK(abs(fp.log_coef) < Real("1e-30"));
}

TEST_CASE("log-branch symbol: |xi|^{-1} extended by 1 inside the ball") {
    ClassicalSymbol f;
    f.dim = 1;
    f.nu = Real(-1);
    f.terms.push_back({Real(-1), [](const UnitVec &) { return Real(1); }});
    f.finite_sum = false;
    f.full = [](const UnitVec &, const Real &r) { return r >= 1 ? 1 / r : Real(1); };
    f.tail = [](int, const UnitVec &, const Real &) { return Real(0); }; // exact beyond term
    f.tail_r0 = Real(1);
    FinitePartResult fp = finite_part(f);
    Real pi = real_pi();
    CHECK(abs(fp.value - 1 / pi) < Real("1e-25"));      // ball integral of 1
    CHECK(abs(fp.log_coef - 1 / pi) < Real("1e-30"));   // sphere integral of f_{-1}

    // cross-check: cutoff integral fits c + (1/pi) log mu
    std::vector<Real> grid = geometric_grid(Real(10), Real(1000), 16);
    TraceSamples s;
    s.mu = grid;
    for (const auto &mu : grid) s.value.push_back(Cx(cutoff_integral(f, mu)));
    ExpansionModel m = ExpansionModel::power_lattice({Real(0)}, true);
    FitReport rep = fit_expansion(s, m);
    CHECK(abs(rep.find(Real(0), true)->estimate - Cx(1 / pi)) < Real("1e-10"));
    CHECK(abs(rep.find(Real(0), false)->estimate - Cx(fp.value)) < Real("1e-10"));
}

TEST_CASE("homogeneous degree -1 slope from cutoff fit (n'=1)") {
    ClassicalSymbol f = make_homogeneous(1, Real(-1), [](const UnitVec &) { return Real(1); });
    // slope of the log term equals the sphere integral 2/(2 pi) = 1/pi
    Real mu1(100), mu2(10000);
    Real slope = (cutoff_integral(f, mu2) - cutoff_integral(f, mu1)) / (log(mu2) - log(mu1));
    CHECK(abs(slope - 1 / real_pi()) < Real("1e-6"));
}

TEST_CASE("zero symbol and convergence of cutoff to finite part") {
    ClassicalSymbol z = make_homogeneous(1, Real(-2.5), [](const UnitVec &) { return Real(0); });
    CHECK(abs(cutoff_integral(z, Real(50))) < Real("1e-40"));
    ClassicalSymbol f = make_homogeneous(1, Real("-2.5"), [](const UnitVec &) { return Real(1); });
    FinitePartResult fp = finite_part(f);
    Real c1 = cutoff_integral(f, Real(1000));
    Real c2 = cutoff_integral(f, Real(100000));
    CHECK(abs(c2 - fp.value) < abs(c1 - fp.value));
    CHECK(abs(c2 - fp.value) < Real("1e-7"));
}

TEST_CASE("finite part is linear") {
    auto a1 = [](const UnitVec &w) { return Real(2) + w[0]; };
    auto a2 = [](const UnitVec &w) { return Real(1) - 3 * w[0]; };
    ClassicalSymbol f1 = make_finite_sum(1, Real("-1.5"), {a1});
    ClassicalSymbol f2 = make_finite_sum(1, Real("-1.5"), {a2});
    ClassicalSymbol sum = make_finite_sum(1, Real("-1.5"), {[&a1, &a2](const UnitVec &w) {
        return a1(w) + a2(w);
    }});
    Real lhs = finite_part(sum).value;
    Real rhs = finite_part(f1).value + finite_part(f2).value;
    CHECK(abs(lhs - rhs) < Real("1e-30"));
}

TEST_CASE("rotation invariance on the circle (n'=2)") {
    auto ang = [](const UnitVec &w) { return 1 + w[0] * w[0] - w[1]; };
    ClassicalSymbol f = make_homogeneous(2, Real("-2.5"), ang);
    Real th0(0.73);
    auto rot = [ang, th0](const UnitVec &w) {
        UnitVec v{w[0] * cos(th0) - w[1] * sin(th0), w[0] * sin(th0) + w[1] * cos(th0)};
        return ang(v);
    };
    ClassicalSymbol g = make_homogeneous(2, Real("-2.5"), rot);
    CHECK(abs(finite_part(f).value - finite_part(g).value) < Real("1e-25"));
}

TEST_CASE("residue density") {
    ClassicalSymbol f = make_finite_sum(1, Real(0), {
        [](const UnitVec &) { return Real(3); },    // degree 0
        [](const UnitVec &) { return Real(7); }});  // degree -1 = -n'
    CHECK(abs(residue_density(f) - Real(7) / real_pi()) < Real("1e-30"));
    ClassicalSymbol g = make_homogeneous(1, Real(-1), [](const UnitVec &w) { return w[0]; });
    CHECK(abs(residue_density(g)) < Real("1e-35"));
    ClassicalSymbol h = make_homogeneous(1, Real(-2), [](const UnitVec &) { return Real(1); });
    CHECK(abs(residue_density(h)) < Real("1e-35"));
}

TEST_CASE("parity classification") {
    // [xi]-power family: degree nu - j with sphere factor sign(w)^{nu-j}
    // even-even of order -2 (single even term)
    ClassicalSymbol f = make_homogeneous(1, Real(-2), [](const UnitVec &) { return Real(1); });
    CHECK(parity_classify(f).cls == ParityClass::EvenEven);
    // single term of degree -1, even under the flip: (-1)^{nu-1} = (-1)^{-2} -> even-odd
    ClassicalSymbol g = make_homogeneous(1, Real(-1), [](const UnitVec &) { return Real(1); });
    CHECK(parity_classify(g).cls == ParityClass::EvenOdd);
    // mixed parity terms
    ClassicalSymbol m = make_finite_sum(1, Real(-1), {
        [](const UnitVec &) { return Real(1); },
        [](const UnitVec &) { return Real(1); }});
    CHECK(parity_classify(m).cls == ParityClass::None);
    // non-integer order flagged
    ClassicalSymbol n = make_homogeneous(1, Real("-1.5"), [](const UnitVec &) { return Real(1); });
    ParityReport rep = parity_classify(n);
    CHECK(!rep.integer_order);
    CHECK(rep.cls == ParityClass::None);
}

TEST_CASE("class tags compose and weaken") {
    SymbolClassTag a{Real(1), -2, -3}, b{Real(0), 0, -1};
    SymbolClassTag c = a + b;
    CHECK(c.d == -2);
    CHECK(c.s == -4);
    CHECK(abs(c.weaken_into_m().m - Real(-3)) < Real("1e-30"));
    CHECK(c.weaken_into_d().d == -6);
}
