#ifndef BDM_COEFEXPR_HPP
#define BDM_COEFEXPR_HPP

// Symbolic coefficient field: expression trees over the atoms
// sigma, kappa+, kappa-, mu with Gaussian-rational constants.
// Node kinds: constant, atom, add, mul, neg, integer power, reciprocal.
// Values are immutable and shared; evaluation at a numeric binding of the
// atoms is the only way the engine ever "reads" an expression, so equality
// of expressions is decided probabilistically at random bindings.

#include "bdm/real.hpp"
#include <memory>
#include <string>
#include <vector>

namespace bdm {

enum class Atom { Sigma, KappaPlus, KappaMinus, Mu };

struct Binding {
    Cx sigma, kappa_plus, kappa_minus, mu;
    const Cx &get(Atom a) const {
        switch (a) {
        case Atom::Sigma: return sigma;
        case Atom::KappaPlus: return kappa_plus;
        case Atom::KappaMinus: return kappa_minus;
        default: return mu;
        }
    }
};

struct LambdaRules;

class CoefExpr {
  public:
    CoefExpr(); // zero

    static CoefExpr constant(Rational re, Rational im = Rational(0));
    static CoefExpr integer(long long n);
    static CoefExpr imaginary_unit();
    static CoefExpr atom(Atom a);

    bool is_const() const;
    bool is_zero_const() const;  // structurally the constant 0
    bool is_one_const() const;

    CoefExpr operator-() const;
    friend CoefExpr operator+(const CoefExpr &a, const CoefExpr &b);
    friend CoefExpr operator-(const CoefExpr &a, const CoefExpr &b);
    friend CoefExpr operator*(const CoefExpr &a, const CoefExpr &b);
    CoefExpr pow(long long e) const;
    CoefExpr recip() const;
    friend CoefExpr operator/(const CoefExpr &a, const CoefExpr &b) { return a * b.recip(); }

    Cx eval(const Binding &b) const;

    // conjugate constants, leave atoms fixed (exact for real atom values)
    CoefExpr conj_consts() const;

    // d/dlambda given the derivatives of the atoms (LambdaRules below)
    CoefExpr lambda_derivative(const struct LambdaRules &rules) const;

    std::string to_string() const;

    size_t node_count() const;

    struct Node;
    using NodePtr = std::shared_ptr<const Node>;
    explicit CoefExpr(NodePtr n) : n_(std::move(n)) {}
    const Node &node() const { return *n_; }

  private:
    NodePtr n_;
};

// d/dlambda rules for the four atoms
struct LambdaRules {
    CoefExpr dsigma, dkappa_plus, dkappa_minus, dmu;
};

// Random complex binding for probabilistic identity tests; values kept away
// from 0 and from each other so reciprocal chains stay well-conditioned.
Binding random_binding(Rng &rng);

// Model-free probabilistic equality: agree at `trials` independent random
// bindings to relative tolerance tol.
bool approx_equal(const CoefExpr &a, const CoefExpr &b, const Real &tol, Rng &rng,
                  int trials = 5);

// Derivative rules with all atoms treated as lambda-constant except mu
// (d mu/d lambda = -1/(2 mu)); the resolvent module supplies the kappa rules.
LambdaRules mu_only_rules();

} // namespace bdm

#endif
