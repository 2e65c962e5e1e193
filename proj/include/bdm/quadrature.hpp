#ifndef BDM_QUADRATURE_HPP
#define BDM_QUADRATURE_HPP

// Gauss-Legendre quadrature at full working precision, with panel and
// adaptive drivers.  Node tables are computed once per order by Newton
// iteration on the Legendre recurrence and cached.

#include "bdm/real.hpp"
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace bdm {

struct GaussRule {
    std::vector<Real> node;   // on (-1,1)
    std::vector<Real> weight;
};

const GaussRule &gauss_rule(int npts);

// integral of f over [a,b] with a single rule application
template <class F> auto gauss_panel(F &&f, const Real &a, const Real &b, int npts = 40) {
    const GaussRule &g = gauss_rule(npts);
    Real half = (b - a) / 2, mid = (a + b) / 2;
    auto acc = f(mid + half * g.node[0]) * (half * g.weight[0]);
    for (size_t i = 1; i < g.node.size(); ++i)
        acc += f(mid + half * g.node[i]) * (half * g.weight[i]);
    return acc;
}

// Adaptive bisection on [a,b]: a panel is accepted when the 25- and 40-point
// results agree to tol (absolute).  Depth-limited; throws on failure.
Real integrate_adaptive(const std::function<Real(const Real &)> &f, Real a, Real b,
                        const Real &tol, int max_depth = 48);

Cx integrate_adaptive_cx(const std::function<Cx(const Real &)> &f, Real a, Real b,
                         const Real &tol, int max_depth = 48);

// integral over [a, infinity) of a function with |f| <= C r^{decay} at large r
// (decay < -1): geometric panels [a, 2a, 4a, ...] until the last panel is
// below tol, plus a power-law tail estimate from the final panel.
Real integrate_to_infinity(const std::function<Real(const Real &)> &f, Real a,
                           double decay, const Real &tol);

} // namespace bdm

#endif
