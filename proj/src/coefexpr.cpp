#include "bdm/coefexpr.hpp"
#include <sstream>

namespace bdm {

enum class Kind { Const, AtomRef, Add, Mul, Neg, IntPow, Recip };

struct CoefExpr::Node {
    Kind kind;
    Rational cre{0}, cim{0}; // Const
    Atom atom{Atom::Sigma};  // AtomRef
    long long expo{0};       // IntPow
    NodePtr a, b;            // children
};

namespace {

using Node = CoefExpr::Node;
using NodePtr = CoefExpr::NodePtr;

NodePtr make_const(Rational re, Rational im) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->cre = std::move(re);
    n->cim = std::move(im);
    return n;
}

const NodePtr &zero_node() {
    static NodePtr z = make_const(Rational(0), Rational(0));
    return z;
}
const NodePtr &one_node() {
    static NodePtr o = make_const(Rational(1), Rational(0));
    return o;
}

bool is_const(const NodePtr &n) { return n->kind == Kind::Const; }
bool rat_zero(const Rational &q) { return q.numerator() == 0; }
bool rat_one(const Rational &q) { return q.numerator() == 1 && q.denominator() == 1; }

bool is_zero(const NodePtr &n) { return is_const(n) && rat_zero(n->cre) && rat_zero(n->cim); }
bool is_one(const NodePtr &n) { return is_const(n) && rat_one(n->cre) && rat_zero(n->cim); }

} // namespace

CoefExpr::CoefExpr() : n_(zero_node()) {}

CoefExpr CoefExpr::constant(Rational re, Rational im) {
    return CoefExpr(make_const(std::move(re), std::move(im)));
}
CoefExpr CoefExpr::integer(long long n) { return constant(Rational(BigInt(n))); }
CoefExpr CoefExpr::imaginary_unit() { return constant(Rational(0), Rational(1)); }

CoefExpr CoefExpr::atom(Atom a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::AtomRef;
    n->atom = a;
    return CoefExpr(std::move(n));
}

bool CoefExpr::is_const() const { return bdm::is_const(n_); }
bool CoefExpr::is_zero_const() const { return is_zero(n_); }
bool CoefExpr::is_one_const() const { return is_one(n_); }

CoefExpr CoefExpr::operator-() const {
    if (is_zero(n_)) return *this;
    if (bdm::is_const(n_)) return constant(-n_->cre, -n_->cim);
    if (n_->kind == Kind::Neg) return CoefExpr(n_->a);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Neg;
    n->a = n_;
    return CoefExpr(std::move(n));
}

CoefExpr operator+(const CoefExpr &a, const CoefExpr &b) {
    if (a.is_zero_const()) return b;
    if (b.is_zero_const()) return a;
    const auto &na = a.node();
    const auto &nb = b.node();
    if (na.kind == Kind::Const && nb.kind == Kind::Const)
        return CoefExpr::constant(na.cre + nb.cre, na.cim + nb.cim);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Add;
    n->a = a.n_;
    n->b = b.n_;
    return CoefExpr(std::move(n));
}

CoefExpr operator-(const CoefExpr &a, const CoefExpr &b) { return a + (-b); }

CoefExpr operator*(const CoefExpr &a, const CoefExpr &b) {
    if (a.is_zero_const() || b.is_zero_const()) return CoefExpr();
    if (a.is_one_const()) return b;
    if (b.is_one_const()) return a;
    const auto &na = a.node();
    const auto &nb = b.node();
    if (na.kind == Kind::Const && nb.kind == Kind::Const)
        return CoefExpr::constant(na.cre * nb.cre - na.cim * nb.cim,
                                  na.cre * nb.cim + na.cim * nb.cre);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Mul;
    n->a = a.n_;
    n->b = b.n_;
    return CoefExpr(std::move(n));
}

CoefExpr CoefExpr::pow(long long e) const {
    if (e == 0) return CoefExpr(one_node());
    if (e == 1) return *this;
    if (bdm::is_const(n_) && e > 0 && e <= 64) {
        // exact rational power by squaring
        CoefExpr acc = CoefExpr(one_node());
        CoefExpr base = *this;
        long long k = e;
        while (k > 0) {
            if (k & 1) acc = acc * base;
            base = base * base;
            k >>= 1;
        }
        return acc;
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::IntPow;
    n->expo = e;
    n->a = n_;
    return CoefExpr(std::move(n));
}

CoefExpr CoefExpr::recip() const {
    if (bdm::is_const(n_)) {
        Rational d = n_->cre * n_->cre + n_->cim * n_->cim;
        return constant(n_->cre / d, -n_->cim / d);
    }
    if (n_->kind == Kind::Recip) return CoefExpr(n_->a);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Recip;
    n->a = n_;
    return CoefExpr(std::move(n));
}

Cx CoefExpr::eval(const Binding &b) const {
    const Node &n = *n_;
    switch (n.kind) {
    case Kind::Const: return {to_real(n.cre), to_real(n.cim)};
    case Kind::AtomRef: return b.get(n.atom);
    case Kind::Add: return CoefExpr(n.a).eval(b) + CoefExpr(n.b).eval(b);
    case Kind::Mul: return CoefExpr(n.a).eval(b) * CoefExpr(n.b).eval(b);
    case Kind::Neg: return -CoefExpr(n.a).eval(b);
    case Kind::IntPow: return pow_int(CoefExpr(n.a).eval(b), n.expo);
    case Kind::Recip: return Cx(1) / CoefExpr(n.a).eval(b);
    }
    return {};
}

CoefExpr CoefExpr::conj_consts() const {
    const Node &n = *n_;
    switch (n.kind) {
    case Kind::Const: return constant(n.cre, -n.cim);
    case Kind::AtomRef: return *this;
    case Kind::Add: return CoefExpr(n.a).conj_consts() + CoefExpr(n.b).conj_consts();
    case Kind::Mul: return CoefExpr(n.a).conj_consts() * CoefExpr(n.b).conj_consts();
    case Kind::Neg: return -CoefExpr(n.a).conj_consts();
    case Kind::IntPow: return CoefExpr(n.a).conj_consts().pow(n.expo);
    case Kind::Recip: return CoefExpr(n.a).conj_consts().recip();
    }
    return {};
}

CoefExpr CoefExpr::lambda_derivative(const struct LambdaRules &r) const {
    const Node &n = *n_;
    switch (n.kind) {
    case Kind::Const: return CoefExpr();
    case Kind::AtomRef:
        switch (n.atom) {
        case Atom::Sigma: return r.dsigma;
        case Atom::KappaPlus: return r.dkappa_plus;
        case Atom::KappaMinus: return r.dkappa_minus;
        default: return r.dmu;
        }
    case Kind::Add:
        return CoefExpr(n.a).lambda_derivative(r) + CoefExpr(n.b).lambda_derivative(r);
    case Kind::Mul:
        return CoefExpr(n.a).lambda_derivative(r) * CoefExpr(n.b) +
               CoefExpr(n.a) * CoefExpr(n.b).lambda_derivative(r);
    case Kind::Neg: return -CoefExpr(n.a).lambda_derivative(r);
    case Kind::IntPow:
        return integer(n.expo) * CoefExpr(n.a).pow(n.expo - 1) *
               CoefExpr(n.a).lambda_derivative(r);
    case Kind::Recip:
        return -CoefExpr(n.a).lambda_derivative(r) * CoefExpr(n.a).pow(-2);
    }
    return {};
}

namespace {
std::string rat_str(const Rational &q) {
    std::ostringstream os;
    os << q.numerator();
    if (q.denominator() != 1) os << "/" << q.denominator();
    return os.str();
}
} // namespace

std::string CoefExpr::to_string() const {
    const Node &n = *n_;
    switch (n.kind) {
    case Kind::Const:
        if (n.cim.numerator() == 0) return rat_str(n.cre);
        return "(" + rat_str(n.cre) + "+" + rat_str(n.cim) + "i)";
    case Kind::AtomRef:
        switch (n.atom) {
        case Atom::Sigma: return "sigma";
        case Atom::KappaPlus: return "kappa+";
        case Atom::KappaMinus: return "kappa-";
        default: return "mu";
        }
    case Kind::Add:
        return "(" + CoefExpr(n.a).to_string() + " + " + CoefExpr(n.b).to_string() + ")";
    case Kind::Mul:
        return "(" + CoefExpr(n.a).to_string() + "*" + CoefExpr(n.b).to_string() + ")";
    case Kind::Neg: return "-" + CoefExpr(n.a).to_string();
    case Kind::IntPow:
        return CoefExpr(n.a).to_string() + "^" + std::to_string(n.expo);
    case Kind::Recip: return CoefExpr(n.a).to_string() + "^-1";
    }
    return "?";
}

size_t CoefExpr::node_count() const {
    const Node &n = *n_;
    size_t c = 1;
    if (n.a) c += CoefExpr(n.a).node_count();
    if (n.b) c += CoefExpr(n.b).node_count();
    return c;
}

Binding random_binding(Rng &rng) {
    auto rc = [&rng]() {
        // modulus in [0.5, 2.5], generic argument
        double m = rng.uniform(0.5, 2.5);
        double th = rng.uniform(-1.2, 1.2);
        return Cx(Real(m * std::cos(th)), Real(m * std::sin(th)));
    };
    Binding b;
    b.sigma = rc();
    b.kappa_plus = rc();
    b.kappa_minus = rc();
    b.mu = rc();
    return b;
}

bool approx_equal(const CoefExpr &a, const CoefExpr &b, const Real &tol, Rng &rng, int trials) {
    for (int t = 0; t < trials; ++t) {
        Binding bind = random_binding(rng);
        Cx va = a.eval(bind), vb = b.eval(bind);
        Real scale = abs(va) + abs(vb) + 1;
        if (abs(va - vb) > tol * scale) return false;
    }
    return true;
}

LambdaRules mu_only_rules() {
    LambdaRules r;
    CoefExpr mu = CoefExpr::atom(Atom::Mu);
    r.dsigma = CoefExpr();
    r.dkappa_plus = CoefExpr();
    r.dkappa_minus = CoefExpr();
    r.dmu = -(CoefExpr::integer(2) * mu).recip();
    return r;
}

} // namespace bdm
