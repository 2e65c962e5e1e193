#include "bdm/quadrature.hpp"

namespace bdm {

namespace {

GaussRule make_rule(int n) {
    GaussRule g;
    g.node.resize(n);
    g.weight.resize(n);
    const Real pi = real_pi();
    const Real eps = Real("1e-48");
    for (int i = 0; i < n; ++i) {
        // Chebyshev-angle initial guess, then Newton on P_n
        Real x = cos(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
        Real dp(0);
        for (int it = 0; it < 200; ++it) {
            Real p0(1), p1 = x;
            for (int k = 2; k <= n; ++k) {
                Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            Real dx = p1 / dp;
            x -= dx;
            if (abs(dx) < eps) break;
        }
        g.node[i] = x;
        g.weight[i] = 2 / ((1 - x * x) * dp * dp);
    }
    return g;
}

std::map<int, GaussRule> g_rules;
std::mutex g_rules_mtx;

} // namespace

const GaussRule &gauss_rule(int npts) {
    std::lock_guard<std::mutex> lk(g_rules_mtx);
    auto it = g_rules.find(npts);
    if (it == g_rules.end()) it = g_rules.emplace(npts, make_rule(npts)).first;
    return it->second;
}

namespace {

template <class T, class Abs>
T adaptive_impl(const std::function<T(const Real &)> &f, const Real &a, const Real &b,
                const Real &tol, int depth, Abs absval) {
    T coarse = gauss_panel(f, a, b, 25);
    T fine = gauss_panel(f, a, b, 40);
    if (absval(fine - coarse) <= tol || depth <= 0) {
        if (depth <= 0 && absval(fine - coarse) > tol * 16)
            throw std::runtime_error("integrate_adaptive: refinement limit hit");
        return fine;
    }
    Real mid = (a + b) / 2;
    Real half_tol = tol / 2;
    return adaptive_impl(f, a, mid, half_tol, depth - 1, absval) +
           adaptive_impl(f, mid, b, half_tol, depth - 1, absval);
}

} // namespace

Real integrate_adaptive(const std::function<Real(const Real &)> &f, Real a, Real b,
                        const Real &tol, int max_depth) {
    return adaptive_impl<Real>(f, a, b, tol, max_depth, [](const Real &x) { return abs(x); });
}

Cx integrate_adaptive_cx(const std::function<Cx(const Real &)> &f, Real a, Real b,
                         const Real &tol, int max_depth) {
    return adaptive_impl<Cx>(f, a, b, tol, max_depth, [](const Cx &z) { return abs(z); });
}

Real integrate_to_infinity(const std::function<Real(const Real &)> &f, Real a,
                           double decay, const Real &tol) {
    if (decay >= -1.0) throw std::invalid_argument("integrate_to_infinity: decay must be < -1");
    Real total(0), lo = a;
    Real panel_tol = tol / 4;
    for (int p = 0; p < 2048; ++p) {
        Real hi = lo * 2;
        Real piece = integrate_adaptive(f, lo, hi, panel_tol);
        total += piece;
        // each further doubling panel shrinks by ~2^{decay+1}
        Real q = Real(pow(2.0, decay + 1.0));
        Real tail_bound = abs(piece) * q / (1 - q);
        if (tail_bound < tol / 2) return total;
        lo = hi;
        panel_tol /= 2;
    }
    throw std::runtime_error("integrate_to_infinity: did not converge");
}

} // namespace bdm
