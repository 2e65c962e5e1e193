#include <doctest.h>
#include "bdm/coefexpr.hpp"

using namespace bdm;

namespace {
const Real kTight = Real("1e-40");
}

TEST_CASE("evaluation is deterministic and structural equality implies value equality") {
    Rng rng(11);
    CoefExpr s = CoefExpr::atom(Atom::Sigma);
    CoefExpr kp = CoefExpr::atom(Atom::KappaPlus);
    CoefExpr e = (s + kp).pow(3) * (s - kp).recip() + CoefExpr::constant(Rational(2, 7));
    CoefExpr e2 = (s + kp).pow(3) * (s - kp).recip() + CoefExpr::constant(Rational(2, 7));
    Binding b = random_binding(rng);
    CHECK(abs(e.eval(b) - e.eval(b)) == 0);
    CHECK(abs(e.eval(b) - e2.eval(b)) == 0);
}

TEST_CASE("rational constant arithmetic is exact") {
    CoefExpr a = CoefExpr::constant(Rational(1, 3));
    CoefExpr b = CoefExpr::constant(Rational(1, 6));
    CoefExpr c = a + b; // 1/2
    CHECK(c.is_const());
    Rng rng(1);
    Binding bd = random_binding(rng);
    CHECK(abs(c.eval(bd) - Cx(Real(0.5))) < kTight);
    CoefExpr i = CoefExpr::imaginary_unit();
    CHECK(abs((i * i).eval(bd) + Cx(1)) < kTight);
}

TEST_CASE("probabilistic equality separates distinct expressions") {
    Rng rng(7);
    CoefExpr s = CoefExpr::atom(Atom::Sigma);
    CHECK(approx_equal(s * s, s.pow(2), Real("1e-30"), rng));
    CHECK_FALSE(approx_equal(s * s, s.pow(3), Real("1e-30"), rng));
}

TEST_CASE("lambda derivative follows the chain rule through mu") {
    Rng rng(3);
    // d/dlambda of mu^2 must be -1
    CoefExpr mu2 = CoefExpr::atom(Atom::Mu).pow(2);
    CoefExpr d = mu2.lambda_derivative(mu_only_rules());
    CHECK(approx_equal(d, CoefExpr::integer(-1), Real("1e-30"), rng));
    // Leibniz on a product
    CoefExpr s = CoefExpr::atom(Atom::Sigma), mu = CoefExpr::atom(Atom::Mu);
    CoefExpr p = (s * mu.pow(4));
    CoefExpr dp = p.lambda_derivative(mu_only_rules());
    CoefExpr expected = s * CoefExpr::integer(-2) * mu.pow(2);
    CHECK(approx_equal(dp, expected, Real("1e-30"), rng));
}

TEST_CASE("conjugation of constants") {
    Rng rng(5);
    CoefExpr i = CoefExpr::imaginary_unit();
    CoefExpr s = CoefExpr::atom(Atom::Sigma);
    CoefExpr e = i * s;
    Binding b = random_binding(rng);
    b.sigma = Cx(Real(2)); // real atom
    CHECK(abs(e.conj_consts().eval(b) - conj(e.eval(b))) < kTight);
}
